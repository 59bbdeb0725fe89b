#include "specshift/loewner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

#include "specshift/error.hpp"
#include "specshift/random.hpp"

namespace specshift {

DividedDifference divided_difference(const ScalarFunction& f, double x, double y, double tie_eps) {
  if (!(tie_eps > 0.0)) throw Error(ErrorKind::BadParams, "tie_eps must be positive");
  if (std::abs(x - y) > tie_eps * (1.0 + std::abs(x) + std::abs(y))) {
    return {(f(x) - f(y)) / (x - y), TieBranch::quotient};
  }
  if (auto d = f.derivative(x)) return {*d, TieBranch::derivative};
  const double h = tie_eps;
  return {(f(x + h) - f(x - h)) / (2.0 * h), TieBranch::central_difference};
}

LoewnerMatrix loewner_matrix(const ScalarFunction& f, std::span<const double> lambda,
                             std::span<const double> mu, double tie_eps) {
  LoewnerMatrix out;
  out.values.resize(static_cast<Eigen::Index>(lambda.size()), static_cast<Eigen::Index>(mu.size()));
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    for (std::size_t k = 0; k < mu.size(); ++k) {
      const DividedDifference dd = divided_difference(f, lambda[j], mu[k], tie_eps);
      out.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = dd.value;
      out.used_central_difference |= dd.branch == TieBranch::central_difference;
    }
  }
  return out;
}

double perturbation_identity_residual(const ScalarFunction& f, const HermitianOperator& a,
                                      const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "operators differ in dimension");
  const SpectralDecomposition ea = decompose(a);
  const SpectralDecomposition eb = decompose(b);
  const HermitianOperator fa = apply_function(f, ea);
  const HermitianOperator fb = apply_function(f, eb);

  const ComplexMatrix& u = ea.eigenvectors;
  const ComplexMatrix& v = eb.eigenvectors;
  const ComplexMatrix x = u.adjoint() * (fa.matrix() - fb.matrix()) * v;
  const ComplexMatrix y = u.adjoint() * (a.matrix() - b.matrix()) * v;

  const std::span<const double> lambda(ea.eigenvalues.data(), static_cast<std::size_t>(ea.eigenvalues.size()));
  const std::span<const double> mu(eb.eigenvalues.data(), static_cast<std::size_t>(eb.eigenvalues.size()));
  const LoewnerMatrix l = loewner_matrix(f, lambda, mu);

  const ComplexMatrix predicted = l.values.cast<std::complex<double>>().cwiseProduct(y);
  return (x - predicted).cwiseAbs().maxCoeff();
}

FiniteSpectrumSet::FiniteSpectrumSet(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorKind::BadParams, "spectrum set must not be empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) throw Error(ErrorKind::NonFinite, "spectrum set point is not finite");
    if (i > 0 && !(points_[i - 1] < points_[i])) {
      throw Error(ErrorKind::BadParams, "spectrum set must be strictly increasing");
    }
  }
}

FiniteSpectrumSet restrict_to_grid(Interval interval, int n) {
  return FiniteSpectrumSet(equispaced_points(interval, n));
}

std::string to_string(NormKind kind) {
  return kind == NormKind::operator_norm ? "operator" : "schatten1";
}

NormKind parse_norm_kind(std::string_view text) {
  if (text == "operator") return NormKind::operator_norm;
  if (text == "schatten1") return NormKind::schatten1;
  throw Error(ErrorKind::BadParams, "unknown norm kind '" + std::string(text) + "'");
}

namespace {

constexpr double kImprovementTol = 1e-12;

bool improves(double candidate, double incumbent) {
  return candidate > incumbent + kImprovementTol * std::max(1.0, incumbent);
}

struct Record {
  double ratio;
  RatioWitness witness;
};

struct RestartPlan {
  const ScalarFunction& f;
  const FiniteSpectrumSet& f0;
  int dim;
  NormKind kind;
  std::uint64_t seed;
  long sweep_count;
  std::vector<long> sweep_order;  // seeded permutation of the spectra assignments
  long length;
  SearchOptions options;
};

struct RestartResult {
  std::vector<Record> records;
  long evaluations = 0;
};

/// One restart. Keeps only the strict running maxima in evaluation order; nothing else can
/// displace the global incumbent.
RestartResult run_restart(const RestartPlan& plan, long index, long evals) {
  const int d = plan.dim;
  const std::size_t m = plan.f0.size();
  Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(index)));

  std::vector<double> a(d), b(d);
  if (index < plan.sweep_count) {
    long code = plan.sweep_order[static_cast<std::size_t>(index)];
    for (int i = 0; i < d; ++i, code /= static_cast<long>(m)) a[i] = plan.f0[code % m];
    for (int i = 0; i < d; ++i, code /= static_cast<long>(m)) b[i] = plan.f0[code % m];
  } else {
    for (int i = 0; i < d; ++i) a[i] = plan.f0[uniform_index(rng, m)];
    for (int i = 0; i < d; ++i) b[i] = plan.f0[uniform_index(rng, m)];
  }
  ComplexMatrix q = d == 1 ? ComplexMatrix::Identity(1, 1) : haar_unitary(rng, d);

  const HermitianOperator a_op = HermitianOperator::diagonal(a);
  const Eigen::VectorXcd b_diag = Eigen::Map<const RealVector>(b.data(), d).cast<std::complex<double>>();
  const Schatten p = plan.kind == NormKind::schatten1 ? Schatten::one : Schatten::infinity;

  std::vector<Record> records;
  double local_best = -std::numeric_limits<double>::infinity();
  long used = 0;

  auto evaluate = [&](const ComplexMatrix& rot) -> double {
    ++used;
    try {
      const HermitianOperator b_op(ComplexMatrix(rot * b_diag.asDiagonal() * rot.adjoint()));
      RatioWitness w = increment_ratio(plan.f, a_op, b_op);
      const double r = w.ratio(p);
      if (r > local_best) {
        local_best = r;
        records.push_back({r, std::move(w)});
      }
      return r;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegeneratePair) throw;
      return -std::numeric_limits<double>::infinity();
    }
  };

  auto rotated = [&](int i, int j, double theta) {
    ComplexMatrix r = q;
    const double c = std::cos(theta), s = std::sin(theta);
    r.col(i) = c * q.col(i) - s * q.col(j);
    r.col(j) = s * q.col(i) + c * q.col(j);
    return r;
  };

  double current = evaluate(q);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const int g = std::max(2, plan.options.line_search_evals);

  for (int pass = 0; pass < plan.options.passes; ++pass) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        if (used + g > evals) return {std::move(records), used};
        double lo = -std::numbers::pi / 2, hi = std::numbers::pi / 2;
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = evaluate(rotated(i, j, x1)), f2 = evaluate(rotated(i, j, x2));
        double best_theta = f1 >= f2 ? x1 : x2;
        double best_val = std::max(f1, f2);
        for (int it = 2; it < g; ++it) {
          if (f1 >= f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = evaluate(rotated(i, j, x1));
            if (f1 > best_val) { best_val = f1; best_theta = x1; }
          } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = evaluate(rotated(i, j, x2));
            if (f2 > best_val) { best_val = f2; best_theta = x2; }
          }
        }
        if (best_val > current) {
          q = rotated(i, j, best_theta);
          current = best_val;
        }
      }
    }
  }
  return {std::move(records), used};
}

long sweep_size(std::size_t m, int dim) {
  long total = 1;
  for (int i = 0; i < 2 * dim; ++i) {
    if (total > 10000 / static_cast<long>(m)) return 0;
    total *= static_cast<long>(m);
  }
  return total <= 10000 ? total : 0;
}

}  // namespace

SeminormLowerBound seminorm_lower_bound(const ScalarFunction& f, const FiniteSpectrumSet& f0,
                                        int dim, NormKind kind, long budget, std::uint64_t seed,
                                        const SearchOptions& options) {
  if (dim < 1) throw Error(ErrorKind::BadParams, "dim must be positive");
  if (budget < 1) throw Error(ErrorKind::BadParams, "budget must be positive");

  SeminormLowerBound out;
  out.norm_kind = kind;
  out.budget = budget;
  out.seed = seed;
  out.dim = dim;
  if (f0.size() < 2) {
    out.degenerate = true;
    return out;
  }

  const Schatten p = kind == NormKind::schatten1 ? Schatten::one : Schatten::infinity;

  // Scalar witnesses: the best difference quotient on F0, embedded as diagonal pairs.
  const std::span<const double> pts = f0.points();
  std::vector<double> fx(pts.size());
  std::transform(pts.begin(), pts.end(), fx.begin(), [&](double x) { return f(x); });
  std::size_t bi = 0, bj = 1;
  double best_q = -1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double qv = std::abs(fx[j] - fx[i]) / (pts[j] - pts[i]);
      if (qv > best_q) { best_q = qv; bi = i; bj = j; }
    }
  }
  std::vector<double> a(dim, pts[bi]), b(dim, pts[bi]);
  b[0] = pts[bj];
  RatioWitness incumbent = increment_ratio(f, HermitianOperator::diagonal(a), HermitianOperator::diagonal(b));
  double value = incumbent.ratio(p);

  const int pairs = dim * (dim - 1) / 2;
  const long sweep = sweep_size(f0.size(), dim);
  std::vector<long> order(static_cast<std::size_t>(sweep));
  std::iota(order.begin(), order.end(), 0L);
  Rng shuffle_rng(derive_seed(seed, ~0ULL));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_index(shuffle_rng, i)]);
  const RestartPlan plan{f, f0, dim, kind, seed, sweep, std::move(order),
                         1 + static_cast<long>(options.passes) * pairs * std::max(2, options.line_search_evals),
                         options};
  const long remaining = budget - 1;
  const long restarts = (remaining + plan.length - 1) / plan.length;

  std::vector<RestartResult> results(static_cast<std::size_t>(restarts));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(restarts));
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long r = next++; r < restarts; r = next++) {
      const long evals = std::min(plan.length, remaining - r * plan.length);
      try {
        results[r] = run_restart(plan, r, evals);
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const int threads = static_cast<int>(std::clamp<long>(options.threads, 1, std::max<long>(1, restarts)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  long used = 1;
  for (long r = 0; r < restarts; ++r) {
    if (errors[r]) std::rethrow_exception(errors[r]);
    used += results[r].evaluations;
    for (Record& rec : results[r].records) {
      if (improves(rec.ratio, value)) {
        value = rec.ratio;
        incumbent = std::move(rec.witness);
      }
    }
  }

  out.value = value;
  out.witness = std::move(incumbent);
  out.budget_used = used;
  return out;
}

}  // namespace specshift
