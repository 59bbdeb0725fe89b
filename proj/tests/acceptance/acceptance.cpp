// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "specshift/specshift.hpp"
#include "specshift_cli/runners.hpp"
#include "test_support.hpp"

using namespace specshift;
using specshift::testing::matrix_polynomial;
using specshift::testing::matrix_sin_series;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Check {
public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_++ < 3) detail_ += (detail_.empty() ? "" : "; ") + what;
  }
  void note(const std::string& what) { notes_ += (notes_.empty() ? "" : ", ") + what; }
  Verdict verdict() const {
    if (failures_ == 0) return {true, notes_};
    return {false, std::to_string(failures_) + " failed: " + detail_};
  }

private:
  int failures_ = 0;
  std::string detail_;
  std::string notes_;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

double op_norm(const ComplexMatrix& m) {
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

// Spectral data straight from Eigen, bypassing the library's decomposition.
struct Eig {
  RealVector values;
  ComplexMatrix vectors;
};

Eig eig_of(const ComplexMatrix& m) {
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  return {es.eigenvalues(), es.eigenvectors()};
}

double quotient(double (*f)(double), double (*df)(double), double x, double y) {
  return std::abs(x - y) > 1e-9 * (1 + std::abs(x) + std::abs(y)) ? (f(x) - f(y)) / (x - y) : df(0.5 * (x + y));
}

double square(double x) { return x * x; }
double twice(double x) { return 2 * x; }
double sine(double x) { return std::sin(x); }
double cosine(double x) { return std::cos(x); }

Rational rational_above(double x) { return exact_rational(std::nextafter(x, 2 * x + 1)); }

Verdict criterion_1() {
  Check c;
  Rng rng(101);
  const std::vector<std::vector<double>> polys = {{0, 0, 1}, {0, 0, 0, 1}, {1, -2, 0, 3}};
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int d = 2 + i % 7;
    const HermitianOperator a = random_hermitian(rng, d, -1, 1);
    const double s = 1 + op_norm(a.matrix());
    for (const auto& p : polys) {
      const double err = op_norm(apply_function(get_function("poly", p), a).matrix() - matrix_polynomial(p, a.matrix()));
      worst = std::max(worst, err / (s * s * s));
      c.expect(err <= 1e-9 * s * s * s, "matrix " + std::to_string(i) + " error " + num(err));
    }
  }
  c.note("worst normalized error " + num(worst));
  return c.verdict();
}

Verdict criterion_2() {
  Check c;
  Rng rng(202);
  double worst_lib = 0.0, worst_oracle = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 8;
    const HermitianOperator a = random_hermitian(rng, d, -1, 1), b = random_hermitian(rng, d, -1, 1);
    const double scale = operator_scale(a, b);
    for (int which = 0; which < 2; ++which) {
      const ScalarFunction f = which == 0 ? get_function("poly", {0, 0, 1}) : get_function("sin");
      const double lib = perturbation_identity_residual(f, a, b);
      // Oracle: Eigen eigenvectors, closed-form divided differences, series or product for f(A), f(B).
      const Eig ea = eig_of(a.matrix()), eb = eig_of(b.matrix());
      const ComplexMatrix fa = which == 0 ? ComplexMatrix(a.matrix() * a.matrix()) : matrix_sin_series(a.matrix());
      const ComplexMatrix fb = which == 0 ? ComplexMatrix(b.matrix() * b.matrix()) : matrix_sin_series(b.matrix());
      const ComplexMatrix x = ea.vectors.adjoint() * (fa - fb) * eb.vectors;
      const ComplexMatrix y = ea.vectors.adjoint() * (a.matrix() - b.matrix()) * eb.vectors;
      double oracle = 0.0;
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          const double l = which == 0 ? quotient(square, twice, ea.values(j), eb.values(k))
                                      : quotient(sine, cosine, ea.values(j), eb.values(k));
          oracle = std::max(oracle, std::abs(x(j, k) - l * y(j, k)));
        }
      }
      worst_lib = std::max(worst_lib, lib / scale);
      worst_oracle = std::max(worst_oracle, oracle / scale);
      c.expect(lib <= 1e-8 * scale, "pair " + std::to_string(i) + " residual " + num(lib));
      c.expect(oracle <= 1e-8 * scale, "pair " + std::to_string(i) + " oracle residual " + num(oracle));
    }
  }
  c.note("worst residual/scale " + num(worst_lib) + " (oracle " + num(worst_oracle) + ")");
  return c.verdict();
}

Verdict criterion_3() {
  Check c;
  const ScalarFunction f = get_function("smoothed_abs", {0.05});
  Rng rng(303);
  int accepted = 0;
  long max_n = 1;
  while (accepted < 50) {
    const int d = 2 + static_cast<int>(uniform_index(rng, 5));
    const HermitianOperator a = random_hermitian(rng, d, -2, 2), b = random_hermitian(rng, d, -2, 2);
    const RatioWitness in = increment_ratio(f, a, b);
    if (in.increment_s1 < 1.0) continue;
    ++accepted;
    const SegmentRefinement r = segment_refine(f, a, b);
    max_n = std::max(max_n, r.subdivisions);
    c.expect(r.witness.increment_s1 < 1.0, "pair " + std::to_string(accepted) + " increment " + num(r.witness.increment_s1));
    c.expect(r.witness.ratio_s1 >= in.ratio_s1 - 1e-12,
             "pair " + std::to_string(accepted) + " ratio " + num(r.witness.ratio_s1) + " < " + num(in.ratio_s1));
  }
  c.note("50 pairs, largest subdivision " + std::to_string(max_n));
  return c.verdict();
}

Verdict criterion_4() {
  Check c;
  const ScalarFunction f = get_function("sin");
  Rng rng(404);
  int done = 0;
  double worst = 0.0;
  while (done < 1000) {
    const int d = 1 + static_cast<int>(uniform_index(rng, 4));
    const double s = std::pow(10.0, uniform_real(rng, -6, 0));
    const HermitianOperator a = s * random_hermitian(rng, d, -1, 1), b = s * random_hermitian(rng, d, -1, 1);
    const RatioWitness w = increment_ratio(f, a, b);
    if (!(w.increment_s1 > 0 && w.increment_s1 < 1)) continue;
    ++done;
    const DirectSumPair pair = amplify_to_unit(w);
    const Multiplicity n = pair.blocks()[0].multiplicity;
    const Rational agg = Rational(n) * exact_rational(w.increment_s1);
    c.expect(agg >= Rational(1, 2) && agg <= Rational(1), "aggregate outside [1/2, 1] at " + num(w.increment_s1));
    const double dev = std::abs(aggregate_ratio_s1(pair, f) - w.ratio_s1) / std::max(1.0, w.ratio_s1);
    worst = std::max(worst, dev);
    c.expect(dev <= 1e-12, "ratio deviates by " + num(dev));
  }
  c.note("1000 increments, worst relative ratio deviation " + num(worst));
  return c.verdict();
}

Verdict criterion_5() {
  Check c;
  const ScalarFunction sq = get_function("sqrt_abs");
  const int k = 10;
  const DivergentFamily fam = build_divergent_family(sq, geometric_schedule(1.0, k), k, 400, 7);
  c.expect(!fam.failure, "family failed at n = " + std::to_string(fam.failure ? fam.failure->n : 0));
  c.expect(fam.blocks.size() == static_cast<std::size_t>(k), "only " + std::to_string(fam.blocks.size()) + " blocks");
  Rational majorant = 0;
  for (int n = 1; n <= k; ++n) {
    majorant += rational_above(std::pow(5.0, -n / 2.0)) + Rational(1, boost::multiprecision::pow(Multiplicity(5), n));
  }
  Rational pert = 0;
  for (const FamilyBlock& b : fam.blocks) {
    const ComplexMatrix diff = b.witness.b.matrix() - b.witness.a.matrix();
    double s1 = 0.0;
    for (double v : eig_of(diff).values) s1 += std::abs(v);
    pert += Rational(b.multiplicity) * exact_rational(s1);
    for (const HermitianOperator* m : {&b.witness.a, &b.witness.b}) {
      c.expect(eig_of(m->matrix()).values.cwiseAbs().maxCoeff() < b.delta, "block spectrum outside delta");
    }
  }
  if (fam.blocks.size() == static_cast<std::size_t>(k)) {
    const PartialSums s = partial_sums(fam, k);
    c.expect(s.increment_sum >= 5.0, "increment_sum " + num(s.increment_sum));
    c.expect(s.perturbation_sum <= 1.1, "perturbation_sum " + num(s.perturbation_sum));
    c.expect(majorant < Rational(11, 10), "majorant not below 1.1");
    c.expect(pert <= majorant, "perturbation sum above the majorant");
    c.expect(std::abs(to_double(pert) - s.perturbation_sum) <= 1e-9, "oracle sum disagrees");
    c.note("increment_sum " + num(s.increment_sum) + ", perturbation_sum " + num(s.perturbation_sum) + ", majorant " +
           num(to_double(majorant)));
  }
  return c.verdict();
}

Verdict criterion_6() {
  Check c;
  for (const ScalarFunction& f : {get_function("identity"), get_function("poly", {0, 0, 1})}) {
    const DivergentFamily fam = build_divergent_family(f, geometric_schedule(1.0, 5), 5, 400, 6);
    c.expect(fam.blocks.empty() && fam.failure && fam.failure->n == 1, f.id() + " did not stop at n = 1");
    if (fam.failure) c.note(f.id() + " best ratio " + num(fam.failure->best_ratio));
  }
  Rng rng(606);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 7;
    const HermitianOperator a = random_hermitian(rng, d, -1, 1), b = random_hermitian(rng, d, -1, 1);
    const ScalarFunction f = i % 2 ? get_function("smoothed_abs", {0.05}) : get_function("sin");
    const TraceTransferReport r = trace_transfer_check(f, uniform_real(rng, 0.05, 0.9), a, b);
    worst = std::max(worst, r.residual_s1 / r.scale);
    c.expect(r.residual_s1 <= 1e-9 * r.scale, "trace transfer residual " + num(r.residual_s1));
  }
  c.note("worst reassembly residual/scale " + num(worst));
  return c.verdict();
}

Verdict criterion_7() {
  Check c;
  const ScalarFunction sq = get_function("sqrt_abs");
  const int k = 30;
  std::vector<double> t, s;
  for (int i = 1; i <= k; ++i) {
    t.push_back(std::pow(5.0, -i));
    s.push_back(0.0);
  }
  const SequenceWitness w = multiplicity_sequence(sq, make_sequence_witness(sq, t, s));
  const DivergenceReport rep = divergence_check(sq, w, k);
  Rational pert = 0, inc = 0;
  for (int i = 0; i < k; ++i) {
    const Multiplicity n = floor_reciprocal(std::sqrt(t[i])) + 1;
    c.expect(w.n[i] == n, "n_" + std::to_string(i + 1) + " differs from the oracle");
    const Rational wp = Rational(n) * exact_rational(t[i]);
    c.expect(wp < Rational(1, boost::multiprecision::pow(Multiplicity(2), i)), "per-level bound fails at k = " + std::to_string(i + 1));
    c.expect(rep.rows[i].ok, "row " + std::to_string(i + 1) + " not ok");
    pert += wp;
    inc += Rational(n) * exact_rational(std::sqrt(t[i]));
  }
  c.expect(pert < 2 && rep.perturbation_sum < 2.0, "weighted perturbation sum " + num(rep.perturbation_sum));
  c.expect(inc >= k && rep.increment_sum >= k, "weighted increment sum " + num(rep.increment_sum));
  const PartialSums emb = partial_sums(diagonal_embedding(w, k), sq, k);
  c.expect(std::abs(emb.perturbation_sum - rep.perturbation_sum) <= 1e-12, "embedding perturbation sum differs");
  c.expect(std::abs(emb.increment_sum - rep.increment_sum) <= 1e-12 * rep.increment_sum, "embedding increment sum differs");
  c.note("perturbation " + num(rep.perturbation_sum) + ", increment " + num(rep.increment_sum));
  return c.verdict();
}

Verdict criterion_8() {
  Check c;
  const ScalarFunction id = get_function("identity"), ab = get_function("abs");
  const std::vector<FiniteSpectrumSet> sets = {
      FiniteSpectrumSet(std::vector<double>{-1, 1}), FiniteSpectrumSet(std::vector<double>{0, 1e-6}),
      restrict_to_grid({-1, 1}, 9), restrict_to_grid({-3, 7}, 33),
      FiniteSpectrumSet(std::vector<double>{-2.5, -0.1, 0.3, 4})};
  for (const FiniteSpectrumSet& f0 : sets) {
    for (int d : {1, 2, 4}) {
      for (NormKind k : {NormKind::operator_norm, NormKind::schatten1}) {
        const double v = seminorm_lower_bound(id, f0, d, k, 150, 8).value;
        c.expect(v == 1.0, "identity gave " + num(v));
      }
    }
  }
  for (NormKind k : {NormKind::operator_norm, NormKind::schatten1}) {
    const double v = seminorm_lower_bound(ab, FiniteSpectrumSet(std::vector<double>{-1, 1}), 3, k, 300, 8).value;
    c.expect(v == 0.0, "abs on {-1, 1} gave " + num(v));
  }
  const FiniteSpectrumSet grid9 = restrict_to_grid({-1, 1}, 9);
  const double v8 = seminorm_lower_bound(ab, grid9, 8, NormKind::schatten1, 2000, 8).value;
  c.expect(v8 >= 1.0, "abs dim 8 gave " + num(v8));
  double prev = -1.0;
  for (int level = 1; level <= 20; ++level) {
    const double v = seminorm_lower_bound(ab, grid9, 3, NormKind::schatten1, 60L * level, 8).value;
    c.expect(v >= prev, "value dropped at budget " + std::to_string(60 * level));
    prev = v;
  }
  c.note("abs dim 8 bound " + num(v8) + ", dim 3 bound at top budget " + num(prev));
  return c.verdict();
}

Verdict criterion_9() {
  Check c;
  const cli::ExperimentConfig cfg = cli::parse_config(cli::Command::divergence, R"({
    "function": {"id": "sqrt_abs"}, "K": 10, "delta0": 1, "budget": 400, "seed": 7})");
  const std::string first = cli::to_csv(cli::run_divergence(cfg, "", 1).report);
  const std::string second = cli::to_csv(cli::run_divergence(cfg, "", 1).report);
  const std::string threaded = cli::to_csv(cli::run_divergence(cfg, "", 4).report);
  c.expect(first == second, "repeated run differs");
  c.expect(first == threaded, "threaded run differs");
  c.expect(first.find('\r') == std::string::npos, "carriage return in output");
  c.note(std::to_string(first.size()) + " bytes");
  return c.verdict();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_s;  // 0 means no runtime bound
    Verdict (*run)();
  };
  const Criterion criteria[] = {
      {1, "functional calculus matches direct polynomials", 5, criterion_1},
      {2, "Loewner perturbation identity", 10, criterion_2},
      {3, "segment refinement contract", 0, criterion_3},
      {4, "amplification to unit increment", 0, criterion_4},
      {5, "sqrt_abs divergent family", 30, criterion_5},
      {6, "operator Lipschitz functions stop at block 1; trace transfer", 0, criterion_6},
      {7, "commuting sequence machinery at K = 30", 0, criterion_7},
      {8, "seminorm search sanity", 0, criterion_8},
      {9, "byte-identical divergence reports", 0, criterion_9},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = cr.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.limit_s > 0 && secs >= cr.limit_s) {
      v.pass = false;
      v.detail += (v.detail.empty() ? "" : "; ") + std::string("runtime above ") + num(cr.limit_s) + " s";
    }
    failed += v.pass ? 0 : 1;
    std::printf("criterion %d: %s  %s (%.2f s)%s%s\n", cr.id, v.pass ? "PASS" : "FAIL", cr.title, secs,
                v.detail.empty() ? "" : "  ", v.detail.c_str());
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
