#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specshift/construct.hpp"
#include "specshift/funlib.hpp"
#include "specshift/multiplicity.hpp"

namespace specshift {

/// Finite prefixes t_1..t_K, s_1..s_K of scalar sequences tending to zero, with the
/// multiplicities n_k once filled in. Level k is stored at index k - 1.
///
/// Invariants (checked by make_sequence_witness):
///   |t_k|, |s_k| <= c 2^-k,   0 < |t_k - s_k| < 2^-k,   |f(t_k) - f(s_k)| > 2^k |t_k - s_k|.
struct SequenceWitness {
  std::string function_id;
  double decay_constant = 1.0;
  std::vector<double> t;
  std::vector<double> s;
  std::vector<Multiplicity> n;  // empty until multiplicity_sequence

  std::size_t size() const noexcept { return t.size(); }
};

/// Throws InvariantViolation naming the first failing level.
SequenceWitness make_sequence_witness(const ScalarFunction& f, std::vector<double> t,
                                      std::vector<double> s, double decay_constant = 1.0);

struct LevelSearch {
  int k = 0;
  bool found = false;
  double t = 0.0;
  double s = 0.0;
  double quotient = 0.0;  // best |f(t) - f(s)| / |t - s| seen at this level
};

struct ScalarWitnessSearch {
  std::vector<LevelSearch> levels;
  /// Levels 1..j where j is the first level without a witness, minus one. Empty when
  /// level 1 already fails.
  std::optional<SequenceWitness> witness;

  bool complete() const noexcept { return witness && witness->size() == levels.size(); }
};

/// Level k searches |t|, |s| <= 2^-k with 0 < |t - s| < 2^-k for a difference quotient
/// above 2^k. Candidates: all admissible pairs of a grid made of `search_grid` equispaced
/// points, `search_grid` geometric points per sign accumulating at 0, and 0 itself; then
/// 4 search_grid seeded random pairs.
ScalarWitnessSearch scalar_ratio_witnesses(const ScalarFunction& f, int count, int search_grid,
                                           std::uint64_t seed);

/// n_k = floor(1 / |f(t_k) - f(s_k)|) + 1, exact on the double value of the increment.
Multiplicity increment_multiplicity(double increment);

/// Fills n; DegenerateIncrement when f(t_k) == f(s_k).
SequenceWitness multiplicity_sequence(const ScalarFunction& f, SequenceWitness w);

struct DivergenceRow {
  int k = 0;
  double t = 0.0;
  double s = 0.0;
  Multiplicity n;
  double weighted_perturbation = 0.0;  // n_k |t_k - s_k|
  double weighted_increment = 0.0;     // n_k |f(t_k) - f(s_k)|
  double bound = 0.0;                  // 2^(1-k)
  bool ok = false;
};

struct DivergenceReport {
  std::vector<DivergenceRow> rows;
  double perturbation_sum = 0.0;
  double perturbation_majorant = 0.0;  // sum of 2^(1-k), below 2
  double increment_sum = 0.0;
  double increment_floor = 0.0;        // K
};

/// Per-level bounds n_k |t_k - s_k| < 2^(1-k) and n_k |f(t_k) - f(s_k)| >= 1, and both
/// partial sums up to K. Throws InvariantViolation naming the failing level,
/// PreconditionViolated when n is missing, IndexError when K exceeds the witness.
DivergenceReport divergence_check(const ScalarFunction& f, const SequenceWitness& w, int count);

/// Jointly diagonal realization: 1x1 blocks (t_k) and (s_k) with multiplicity n_k.
DirectSumPair diagonal_embedding(const SequenceWitness& w, int count);

}  // namespace specshift
