#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specshift/funlib.hpp"
#include "specshift/opcalc.hpp"

namespace specshift {

inline constexpr double kDefaultTieEps = 1e-9;

enum class TieBranch { quotient, derivative, central_difference };

struct DividedDifference {
  double value = 0.0;
  TieBranch branch = TieBranch::quotient;
};

/// (f(x) - f(y)) / (x - y) when |x - y| > tie_eps (1 + |x| + |y|); otherwise f'(x) if
/// available, else a central difference with step tie_eps.
DividedDifference divided_difference(const ScalarFunction& f, double x, double y,
                                     double tie_eps = kDefaultTieEps);

struct LoewnerMatrix {
  RealMatrix values;  // rows: lambda grid, columns: mu grid
  bool used_central_difference = false;
};

LoewnerMatrix loewner_matrix(const ScalarFunction& f, std::span<const double> lambda,
                             std::span<const double> mu, double tie_eps = kDefaultTieEps);

/// With A = U diag(l) U* and B = V diag(m) V*, the matrices X = U*(f(A) - f(B))V and
/// Y = U*(A - B)V satisfy X = L o Y for the Loewner matrix L of f on (l, m). Returns
/// max |X - L o Y| entrywise.
double perturbation_identity_residual(const ScalarFunction& f, const HermitianOperator& a,
                                      const HermitianOperator& b);

/// Strictly increasing, non-empty, finite set of reals.
class FiniteSpectrumSet {
public:
  explicit FiniteSpectrumSet(std::vector<double> points);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  Interval hull() const noexcept { return {points_.front(), points_.back()}; }

private:
  std::vector<double> points_;
};

/// n equispaced points of [a, b], endpoints included.
FiniteSpectrumSet restrict_to_grid(Interval interval, int n);

enum class NormKind { operator_norm, schatten1 };

std::string to_string(NormKind kind);
/// Accepts "operator" or "schatten1"; throws BadParams.
NormKind parse_norm_kind(std::string_view text);

struct SearchOptions {
  int threads = 1;
  /// Golden-section evaluations per Givens angle.
  int line_search_evals = 10;
  /// Sweeps over all Givens angles in each restart.
  int passes = 2;
};

struct SeminormLowerBound {
  double value = 0.0;
  std::optional<RatioWitness> witness;  // empty only for a degenerate search
  NormKind norm_kind = NormKind::schatten1;
  long budget_used = 0;
  long budget = 0;
  std::uint64_t seed = 0;
  int dim = 1;
  bool degenerate = false;
};

/// Best ratio found over pairs A = diag(a), B = Q diag(b) Q* with a, b drawn from F0.
///
/// Evaluation order is fixed: the best scalar (difference quotient) witness first, then
/// one restart per spectra assignment when |F0|^(2 dim) <= 10^4, then seeded random
/// restarts. Each restart does Givens-angle coordinate ascent with golden-section line
/// search. `budget` caps the number of candidate evaluations, so a larger budget only
/// appends evaluations and the value is nondecreasing in it. Restarts may run on
/// several threads; the incumbent is reduced in restart order and only replaced when a
/// candidate beats it by more than 1e-12 max(1, value).
SeminormLowerBound seminorm_lower_bound(const ScalarFunction& f, const FiniteSpectrumSet& f0,
                                        int dim, NormKind kind, long budget, std::uint64_t seed,
                                        const SearchOptions& options = {});

}  // namespace specshift
