#include "specshift/construct.hpp"

#include <cmath>
#include <utility>

#include "specshift/error.hpp"
#include "specshift/random.hpp"

namespace specshift {

void DirectSumPair::add_block(HermitianOperator a, HermitianOperator b, Multiplicity multiplicity) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "block operators differ in dimension");
  if (a == b) throw Error(ErrorKind::DegeneratePair, "block has A == B");
  if (multiplicity < 1) throw Error(ErrorKind::BadParams, "multiplicity must be a positive integer");
  blocks_.push_back({std::move(a), std::move(b), std::move(multiplicity)});
}

PartialSums partial_sums(const DirectSumPair& pair, const ScalarFunction& f, std::size_t upto) {
  if (upto > pair.size()) {
    throw Error(ErrorKind::IndexError, "partial sum up to " + std::to_string(upto) + " of " +
                                           std::to_string(pair.size()) + " blocks");
  }
  PartialSums s;
  for (std::size_t i = 0; i < upto; ++i) {
    const DirectSumBlock& blk = pair.blocks()[i];
    const double n = to_double(blk.multiplicity);
    s.perturbation_sum += n * schatten_norm(blk.b - blk.a, Schatten::one);
    s.increment_sum += n * schatten_norm(apply_function(f, blk.b) - apply_function(f, blk.a), Schatten::one);
  }
  return s;
}

double aggregate_ratio_s1(const DirectSumPair& pair, const ScalarFunction& f) {
  const PartialSums s = partial_sums(pair, f, pair.size());
  return s.increment_sum / s.perturbation_sum;
}

SegmentRefinement segment_refine(const ScalarFunction& f, const HermitianOperator& a,
                                 const HermitianOperator& b, long max_subdivisions) {
  RatioWitness input = increment_ratio(f, a, b);
  if (input.increment_s1 < 1.0) return {std::move(input), 1, 0};

  const ComplexMatrix step = b.matrix() - a.matrix();
  auto point = [&](long k, long n) {
    if (k == 0) return a;
    if (k == n) return b;
    const double t = static_cast<double>(k) / static_cast<double>(n);
    return HermitianOperator(ComplexMatrix(a.matrix() + t * step));
  };

  for (long n = 2; n <= max_subdivisions; n *= 2) {
    std::vector<HermitianOperator> values;
    values.reserve(static_cast<std::size_t>(n) + 1);
    for (long k = 0; k <= n; ++k) values.push_back(apply_function(f, point(k, n)));

    long best_k = 0;
    double best_inc = -1.0;
    bool all_below = true;
    for (long k = 0; k < n && all_below; ++k) {
      const double inc = schatten_norm(values[k + 1] - values[k], Schatten::one);
      if (inc >= 1.0) all_below = false;
      if (inc > best_inc) {
        best_inc = inc;
        best_k = k;
      }
    }
    if (all_below) return {increment_ratio(f, point(best_k, n), point(best_k + 1, n)), n, best_k};
  }
  throw Error(ErrorKind::RefinementOverflow,
              "no subdivision up to " + std::to_string(max_subdivisions) +
                  " brings every piece below unit increment");
}

Multiplicity unit_multiplicity(double increment_s1) {
  if (!(increment_s1 > 0.0 && increment_s1 < 1.0)) {
    throw Error(ErrorKind::PreconditionViolated,
                "amplification needs an increment in (0, 1), got " + std::to_string(increment_s1));
  }
  return floor_reciprocal(increment_s1);
}

DirectSumPair amplify_to_unit(const RatioWitness& witness) {
  DirectSumPair out;
  out.add_block(witness.a, witness.b, unit_multiplicity(witness.increment_s1));
  return out;
}

DirectSumPair amplify_to_unit(const ScalarFunction& f, const HermitianOperator& a,
                              const HermitianOperator& b) {
  return amplify_to_unit(increment_ratio(f, a, b));
}

DirectSumPair DivergentFamily::as_direct_sum() const {
  DirectSumPair out;
  for (const FamilyBlock& blk : blocks) out.add_block(blk.witness.a, blk.witness.b, blk.multiplicity);
  return out;
}

std::vector<double> geometric_schedule(double delta0, int count) {
  if (!(delta0 > 0.0) || !std::isfinite(delta0)) throw Error(ErrorKind::BadParams, "delta0 must be positive");
  if (count < 0) throw Error(ErrorKind::BadParams, "negative schedule length");
  std::vector<double> d(static_cast<std::size_t>(count));
  for (int n = 1; n <= count; ++n) d[n - 1] = std::ldexp(delta0, -n);
  return d;
}

namespace {

struct BlockOutcome {
  std::optional<FamilyBlock> block;
  FailedBlock failure;
};

BlockOutcome build_block(const ScalarFunction& f, int n, double delta, long budget,
                         std::uint64_t seed, const FamilyOptions& options) {
  const double target = std::ldexp(1.0, n);
  FailedBlock failure{n, delta, target, 0.0, 0, std::nullopt};

  int grid = options.initial_grid_points;
  while (true) {
    const FiniteSpectrumSet f0 = restrict_to_grid({-delta / 2, delta / 2}, grid);
    SeminormLowerBound lb = seminorm_lower_bound(f, f0, options.block_dim, NormKind::schatten1,
                                                 budget, derive_seed(seed, static_cast<std::uint64_t>(n)),
                                                 options.search);
    failure.grid_points = grid;
    if (lb.witness && (!failure.best_witness || lb.value > failure.best_ratio)) {
      failure.best_ratio = lb.value;
      failure.best_witness = lb.witness;
    }
    if (lb.witness && lb.value > target) {
      SegmentRefinement refined = segment_refine(f, lb.witness->a, lb.witness->b);
      const RatioWitness& w = refined.witness;
      if (w.ratio_s1 > target && w.increment_s1 > 0.0) {
        Multiplicity mult = unit_multiplicity(w.increment_s1);
        const double aggregate = to_double(mult) * w.increment_s1;
        FamilyBlock blk{.n = n,
                        .delta = delta,
                        .target_ratio = target,
                        .achieved_ratio = w.ratio_s1,
                        .multiplicity = std::move(mult),
                        .block_increment_s1 = w.increment_s1,
                        .block_perturbation_s1 = w.perturbation_s1,
                        .increment_s1 = aggregate,
                        .grid_points = grid,
                        .witness = w};
        return {std::move(blk), failure};
      }
    }
    if (grid >= options.max_grid_points) return {std::nullopt, failure};
    grid = 2 * grid - 1;
  }
}

}  // namespace

DivergentFamily build_divergent_family(const ScalarFunction& f, std::span<const double> deltas,
                                       int count, long per_block_budget, std::uint64_t seed,
                                       const FamilyOptions& options) {
  if (count < 1) throw Error(ErrorKind::BadParams, "block count must be positive");
  if (deltas.size() < static_cast<std::size_t>(count)) {
    throw Error(ErrorKind::BadParams, "delta schedule shorter than block count");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    if (!(deltas[i] > 0.0) || (i > 0 && !(deltas[i] < deltas[i - 1]))) {
      throw Error(ErrorKind::BadParams, "delta schedule must be positive and strictly decreasing");
    }
  }
  if (options.block_dim < 1 || options.initial_grid_points < 2 ||
      options.max_grid_points < options.initial_grid_points) {
    throw Error(ErrorKind::BadParams, "bad family options");
  }

  DivergentFamily family{f, {}, std::nullopt};
  for (int n = 1; n <= count; ++n) {
    BlockOutcome outcome = build_block(f, n, deltas[n - 1], per_block_budget, seed, options);
    if (!outcome.block) {
      family.failure = std::move(outcome.failure);
      break;
    }
    family.blocks.push_back(std::move(*outcome.block));
  }
  return family;
}

PartialSums partial_sums(const DivergentFamily& family, std::size_t upto) {
  if (upto > family.blocks.size()) {
    throw Error(ErrorKind::IndexError, "partial sum up to " + std::to_string(upto) + " of " +
                                           std::to_string(family.blocks.size()) + " blocks");
  }
  PartialSums s;
  for (std::size_t i = 0; i < upto; ++i) {
    const FamilyBlock& blk = family.blocks[i];
    const double n = to_double(blk.multiplicity);
    s.perturbation_sum += n * blk.block_perturbation_s1;
    s.increment_sum += n * blk.block_increment_s1;
  }
  return s;
}

}  // namespace specshift
