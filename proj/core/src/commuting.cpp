#include "specshift/commuting.hpp"

#include <algorithm>
#include <cmath>

#include "specshift/error.hpp"
#include "specshift/random.hpp"

namespace specshift {

namespace {

void check_level(const ScalarFunction& f, int k, double t, double s, double c) {
  const double r = std::ldexp(1.0, -k);
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::InvariantViolation, "level k = " + std::to_string(k) + ": " + what);
  };
  if (!(std::abs(t) <= c * r && std::abs(s) <= c * r)) fail("|t_k|, |s_k| exceed c 2^-k");
  const double gap = std::abs(t - s);
  if (!(gap > 0.0 && gap < r)) fail("need 0 < |t_k - s_k| < 2^-k");
  if (!(std::abs(f(t) - f(s)) / gap > std::ldexp(1.0, k))) fail("difference quotient does not exceed 2^k");
}

}  // namespace

SequenceWitness make_sequence_witness(const ScalarFunction& f, std::vector<double> t,
                                      std::vector<double> s, double decay_constant) {
  if (t.size() != s.size()) throw Error(ErrorKind::DimensionMismatch, "t and s differ in length");
  if (!(decay_constant > 0.0)) throw Error(ErrorKind::BadParams, "decay constant must be positive");
  for (std::size_t i = 0; i < t.size(); ++i) check_level(f, static_cast<int>(i) + 1, t[i], s[i], decay_constant);
  return {f.id(), decay_constant, std::move(t), std::move(s), {}};
}

ScalarWitnessSearch scalar_ratio_witnesses(const ScalarFunction& f, int count, int search_grid,
                                           std::uint64_t seed) {
  if (count < 1) throw Error(ErrorKind::BadParams, "level count must be positive");
  if (search_grid < 2) throw Error(ErrorKind::BadParams, "search grid needs at least 2 points");

  ScalarWitnessSearch out;
  for (int k = 1; k <= count; ++k) {
    const double r = std::ldexp(1.0, -k);
    const double threshold = std::ldexp(1.0, k);

    std::vector<double> x = equispaced_points({-r, r}, search_grid);
    for (int j = 0; j < search_grid; ++j) {
      const double v = r * std::exp2(-52.0 * j / (search_grid - 1));
      x.push_back(v);
      x.push_back(-v);
    }
    x.push_back(0.0);
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    std::vector<double> fx(x.size());
    std::transform(x.begin(), x.end(), fx.begin(), [&](double v) { return f(v); });

    LevelSearch level{k, false, 0.0, 0.0, 0.0};
    auto consider = [&](double t, double s, double ft, double fs) {
      const double gap = std::abs(t - s);
      if (!(gap > 0.0 && gap < r)) return;
      const double q = std::abs(ft - fs) / gap;
      if (q > level.quotient) {
        level.quotient = q;
        level.t = t;
        level.s = s;
      }
    };
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = i + 1; j < x.size() && x[j] - x[i] < r; ++j) consider(x[j], x[i], fx[j], fx[i]);
    }
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
    for (int i = 0; i < 4 * search_grid; ++i) {
      const double t = uniform_real(rng, -r, r);
      const double s = std::clamp(t + uniform_real(rng, -r, r), -r, r);
      consider(t, s, f(t), f(s));
    }

    level.found = level.quotient > threshold;
    out.levels.push_back(level);
  }

  std::vector<double> t, s;
  for (const LevelSearch& level : out.levels) {
    if (!level.found) break;
    t.push_back(level.t);
    s.push_back(level.s);
  }
  if (!t.empty()) out.witness = make_sequence_witness(f, std::move(t), std::move(s));
  return out;
}

Multiplicity increment_multiplicity(double increment) {
  if (!(increment > 0.0) || !std::isfinite(increment)) {
    throw Error(ErrorKind::DegenerateIncrement, "increment must be positive and finite");
  }
  return floor_reciprocal(increment) + 1;
}

SequenceWitness multiplicity_sequence(const ScalarFunction& f, SequenceWitness w) {
  w.n.clear();
  w.n.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double inc = std::abs(f(w.t[i]) - f(w.s[i]));
    if (inc == 0.0) {
      throw Error(ErrorKind::DegenerateIncrement, "f(t_k) == f(s_k) at k = " + std::to_string(i + 1));
    }
    w.n.push_back(increment_multiplicity(inc));
  }
  return w;
}

DivergenceReport divergence_check(const ScalarFunction& f, const SequenceWitness& w, int count) {
  if (count < 0 || static_cast<std::size_t>(count) > w.size()) {
    throw Error(ErrorKind::IndexError, "K = " + std::to_string(count) + " exceeds witness length " +
                                           std::to_string(w.size()));
  }
  if (w.n.size() < static_cast<std::size_t>(count)) {
    throw Error(ErrorKind::PreconditionViolated, "multiplicities not filled in");
  }

  DivergenceReport rep;
  rep.increment_floor = count;
  for (int k = 1; k <= count; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    DivergenceRow row;
    row.k = k;
    row.t = w.t[i];
    row.s = w.s[i];
    row.n = w.n[i];
    const double n = to_double(row.n);
    row.weighted_perturbation = n * std::abs(w.t[i] - w.s[i]);
    row.weighted_increment = n * std::abs(f(w.t[i]) - f(w.s[i]));
    row.bound = std::ldexp(1.0, 1 - k);
    row.ok = row.weighted_perturbation < row.bound && row.weighted_increment >= 1.0;
    rep.perturbation_sum += row.weighted_perturbation;
    rep.increment_sum += row.weighted_increment;
    rep.perturbation_majorant += row.bound;
    rep.rows.push_back(std::move(row));
  }
  for (const DivergenceRow& row : rep.rows) {
    if (!row.ok) {
      throw Error(ErrorKind::InvariantViolation,
                  "level k = " + std::to_string(row.k) + ": n_k |t_k - s_k| = " +
                      std::to_string(row.weighted_perturbation) + ", n_k |f(t_k) - f(s_k)| = " +
                      std::to_string(row.weighted_increment));
    }
  }
  return rep;
}

DirectSumPair diagonal_embedding(const SequenceWitness& w, int count) {
  if (count < 0 || static_cast<std::size_t>(count) > w.size()) {
    throw Error(ErrorKind::IndexError, "K exceeds witness length");
  }
  if (w.n.size() < static_cast<std::size_t>(count)) {
    throw Error(ErrorKind::PreconditionViolated, "multiplicities not filled in");
  }
  DirectSumPair out;
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    const double t = w.t[i], s = w.s[i];
    out.add_block(HermitianOperator::diagonal({&t, 1}), HermitianOperator::diagonal({&s, 1}), w.n[i]);
  }
  return out;
}

}  // namespace specshift
