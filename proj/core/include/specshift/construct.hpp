#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "specshift/loewner.hpp"
#include "specshift/multiplicity.hpp"
#include "specshift/opcalc.hpp"

namespace specshift {

struct DirectSumBlock {
  HermitianOperator a;
  HermitianOperator b;
  Multiplicity multiplicity;
};

/// Blocks (A_i, B_i, N_i) standing for the direct sums of N_i copies. Aggregate
/// Schatten-1 quantities are sums of N_i times block quantities; nothing is materialized.
class DirectSumPair {
public:
  /// Throws DimensionMismatch, DegeneratePair (A == B) or BadParams (N < 1).
  void add_block(HermitianOperator a, HermitianOperator b, Multiplicity multiplicity);

  std::span<const DirectSumBlock> blocks() const noexcept { return blocks_; }
  std::size_t size() const noexcept { return blocks_.size(); }

private:
  std::vector<DirectSumBlock> blocks_;
};

struct PartialSums {
  double perturbation_sum = 0.0;  // sum N_i ||B_i - A_i||_1
  double increment_sum = 0.0;     // sum N_i ||f(B_i) - f(A_i)||_1
};

/// Sums over the first `upto` blocks; IndexError past the end.
PartialSums partial_sums(const DirectSumPair& pair, const ScalarFunction& f, std::size_t upto);

/// Ratio of the aggregate increment to the aggregate perturbation.
double aggregate_ratio_s1(const DirectSumPair& pair, const ScalarFunction& f);

struct SegmentRefinement {
  RatioWitness witness;   // the returned pair and its ratios
  long subdivisions = 1;  // n; 1 when the input was returned unchanged
  long segment = 0;       // k: the pair is (phi(k/n), phi((k+1)/n))
};

inline constexpr long kMaxSubdivisions = 1L << 20;

/// Splits the segment t -> (1 - t) A + t B into n = 2, 4, 8, ... equal pieces until every
/// piece has ||f(.) - f(.)||_1 < 1, then returns the piece with the largest increment
/// (smallest k on ties). Inputs with increment < 1 come back unchanged.
/// Throws RefinementOverflow once n would exceed `max_subdivisions`.
SegmentRefinement segment_refine(const ScalarFunction& f, const HermitianOperator& a,
                                 const HermitianOperator& b,
                                 long max_subdivisions = kMaxSubdivisions);

/// floor(1 / increment) for an increment in (0, 1); PreconditionViolated otherwise.
Multiplicity unit_multiplicity(double increment_s1);

/// Single block (A, B) with multiplicity floor(1 / ||f(B) - f(A)||_1), which puts the
/// aggregate increment in [1/2, 1].
DirectSumPair amplify_to_unit(const ScalarFunction& f, const HermitianOperator& a,
                              const HermitianOperator& b);
DirectSumPair amplify_to_unit(const RatioWitness& witness);

struct FamilyBlock {
  int n = 0;
  double delta = 0.0;
  double target_ratio = 0.0;
  double achieved_ratio = 0.0;
  Multiplicity multiplicity;
  double block_increment_s1 = 0.0;     // ||f(B_n) - f(A_n)||_1
  double block_perturbation_s1 = 0.0;  // ||B_n - A_n||_1
  double increment_s1 = 0.0;           // N_n ||f(B_n) - f(A_n)||_1, in [1/2, 1]
  int grid_points = 0;
  RatioWitness witness;
};

struct FailedBlock {
  int n = 0;
  double delta = 0.0;
  double target_ratio = 0.0;
  double best_ratio = 0.0;
  int grid_points = 0;
  std::optional<RatioWitness> best_witness;
};

struct DivergentFamily {
  ScalarFunction f;
  std::vector<FamilyBlock> blocks;     // successful blocks n = 1, 2, ... in order
  std::optional<FailedBlock> failure;  // first block that missed its target, if any

  DirectSumPair as_direct_sum() const;
};

struct FamilyOptions {
  int block_dim = 2;
  /// Initial block grid on [-delta/2, delta/2]; refined (2m - 1 points) while the
  /// target is missed, up to max_grid_points.
  int initial_grid_points = 65;
  int max_grid_points = 4097;
  SearchOptions search;
};

/// delta_n = 2^-n delta0.
std::vector<double> geometric_schedule(double delta0, int count);

/// Blocks n = 1..K with spectra inside (-delta_n, delta_n), Schatten-1 ratio > 2^n and
/// aggregate increment in [1/2, 1]. Stops at the first block whose target is not reached
/// and records it in `failure`; for functions that are operator Lipschitz near 0 that is
/// the expected outcome.
DivergentFamily build_divergent_family(const ScalarFunction& f, std::span<const double> deltas,
                                       int count, long per_block_budget, std::uint64_t seed,
                                       const FamilyOptions& options = {});

PartialSums partial_sums(const DivergentFamily& family, std::size_t upto);

}  // namespace specshift
