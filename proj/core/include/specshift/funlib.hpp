#pragma once

#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace specshift {

/// Closed bounded interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Theory facts attached to a catalog entry. Advisory only: numerical kernels never read it.
struct FunctionMetadata {
  /// Lipschitz constant on [-1, 1], when known in closed form.
  std::optional<double> known_lipschitz_on_unit_interval;
  /// Whether the restriction to some [-d, d] is operator Lipschitz.
  std::optional<bool> known_operator_lipschitz_near_zero;
  std::string citation_note;
};

/// Real-valued function descriptor: evaluation, optional analytic derivative, declared kinks.
///
/// Descriptors are immutable and the stored callables are re-entrant, so a single
/// instance can be shared between threads.
class ScalarFunction {
public:
  using Callable = std::function<double(double)>;

  ScalarFunction(std::string id, std::vector<double> params, Callable eval,
                 Callable derivative, std::vector<double> kinks, FunctionMetadata metadata);

  const std::string& id() const noexcept { return id_; }
  std::span<const double> params() const noexcept { return params_; }
  std::span<const double> kinks() const noexcept { return kinks_; }
  const FunctionMetadata& metadata() const noexcept { return metadata_; }

  /// Evaluates f(x); throws DomainError when x or the result is not finite.
  double operator()(double x) const;

  bool has_derivative() const noexcept { return static_cast<bool>(derivative_); }

  /// f'(x), or nullopt when no analytic derivative exists or x is a declared kink.
  std::optional<double> derivative(double x) const;

  /// Returns x -> f(x) - c, keeping the derivative and kinks.
  ScalarFunction shifted(double c) const;

private:
  std::string id_;
  std::vector<double> params_;
  Callable eval_;
  Callable derivative_;
  std::vector<double> kinks_;
  FunctionMetadata metadata_;
};

/// Catalog lookup. Known ids: identity, constant, poly, abs, signed_square, sqrt_abs,
/// xsin_inv, xsq_sin_inv, sin, exp, smoothed_abs.
///
/// `poly` takes ascending coefficients (c0 + c1 x + ...), `constant` an optional value,
/// `smoothed_abs` the width eps > 0. Throws UnknownFunction or BadParams.
ScalarFunction get_function(std::string_view id, std::span<const double> params = {});
inline ScalarFunction get_function(std::string_view id, std::initializer_list<double> params) {
  return get_function(id, std::span<const double>(params.begin(), params.size()));
}

std::vector<std::string_view> catalog_ids();

/// n equispaced points of `interval`, endpoints included exactly.
/// Throws BadInterval unless lo < hi (both finite), BadParams unless n >= 2.
std::vector<double> equispaced_points(Interval interval, int n);

/// Largest difference quotient over grid_n equispaced points of `interval`.
/// All pairs for grid_n <= 2000, adjacent pairs above.
double lipschitz_seminorm_estimate(const ScalarFunction& f, Interval interval, int grid_n);

}  // namespace specshift
