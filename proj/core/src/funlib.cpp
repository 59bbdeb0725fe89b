#include "specshift/funlib.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "specshift/error.hpp"

namespace specshift {

ScalarFunction::ScalarFunction(std::string id, std::vector<double> params, Callable eval,
                               Callable derivative, std::vector<double> kinks,
                               FunctionMetadata metadata)
    : id_(std::move(id)),
      params_(std::move(params)),
      eval_(std::move(eval)),
      derivative_(std::move(derivative)),
      kinks_(std::move(kinks)),
      metadata_(std::move(metadata)) {
  if (!eval_) throw Error(ErrorKind::BadParams, "function '" + id_ + "' has no evaluator");
}

double ScalarFunction::operator()(double x) const {
  if (!std::isfinite(x)) {
    throw Error(ErrorKind::DomainError, id_ + " evaluated at a non-finite argument");
  }
  const double y = eval_(x);
  if (!std::isfinite(y)) {
    throw Error(ErrorKind::DomainError, id_ + " is undefined at x = " + std::to_string(x));
  }
  return y;
}

std::optional<double> ScalarFunction::derivative(double x) const {
  if (!derivative_ || !std::isfinite(x)) return std::nullopt;
  if (std::find(kinks_.begin(), kinks_.end(), x) != kinks_.end()) return std::nullopt;
  const double d = derivative_(x);
  if (!std::isfinite(d)) return std::nullopt;
  return d;
}

ScalarFunction ScalarFunction::shifted(double c) const {
  Callable eval = [inner = eval_, c](double x) { return inner(x) - c; };
  return ScalarFunction(id_, params_, std::move(eval), derivative_, kinks_, metadata_);
}

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void expect_param_count(std::string_view id, std::span<const double> params, std::size_t lo,
                        std::size_t hi) {
  if (params.size() < lo || params.size() > hi) {
    throw Error(ErrorKind::BadParams, std::string(id) + " takes between " + std::to_string(lo) +
                                          " and " + std::to_string(hi) + " parameters, got " +
                                          std::to_string(params.size()));
  }
  for (double p : params) {
    if (!std::isfinite(p)) throw Error(ErrorKind::BadParams, std::string(id) + ": non-finite parameter");
  }
}

std::vector<double> to_vector(std::span<const double> params) {
  return {params.begin(), params.end()};
}

}  // namespace

ScalarFunction get_function(std::string_view id, std::span<const double> params) {
  const std::string name(id);

  if (id == "identity") {
    expect_param_count(id, params, 0, 0);
    return {name, {}, [](double x) { return x; }, [](double) { return 1.0; }, {},
            {1.0, true, "linear functions are operator Lipschitz with constant 1"}};
  }
  if (id == "constant") {
    expect_param_count(id, params, 0, 1);
    const double c = params.empty() ? 0.0 : params[0];
    return {name, to_vector(params), [c](double) { return c; }, [](double) { return 0.0; }, {},
            {0.0, true, "constant"}};
  }
  if (id == "poly") {
    expect_param_count(id, params, 1, 64);
    std::vector<double> c = to_vector(params);
    auto horner = [c](double x) {
      double acc = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
      return acc;
    };
    auto dhorner = [c](double x) {
      double acc = 0.0;
      for (std::size_t k = c.size(); k-- > 1;) acc = acc * x + static_cast<double>(k) * c[k];
      return acc;
    };
    return {name, std::move(c), horner, dhorner, {},
            {std::nullopt, true, "polynomials are smooth, hence locally operator Lipschitz"}};
  }
  if (id == "abs") {
    expect_param_count(id, params, 0, 0);
    return {name, {}, [](double x) { return std::abs(x); }, [](double x) { return sign(x); }, {0.0},
            {1.0, false,
             "Lipschitz but not operator Lipschitz near 0; trace class perturbations of compact "
             "operators can give non trace class increments of |A|"}};
  }
  if (id == "signed_square") {
    expect_param_count(id, params, 0, 0);
    return {name, {}, [](double x) { return x * std::abs(x); },
            [](double x) { return 2.0 * std::abs(x); }, {},
            {2.0, true, "C^1 with Lipschitz derivative"}};
  }
  if (id == "sqrt_abs") {
    expect_param_count(id, params, 0, 0);
    return {name, {}, [](double x) { return std::sqrt(std::abs(x)); },
            [](double x) { return sign(x) / (2.0 * std::sqrt(std::abs(x))); }, {0.0},
            {std::nullopt, false, "not Lipschitz at 0"}};
  }
  if (id == "xsin_inv") {
    expect_param_count(id, params, 0, 0);
    return {name, {},
            [](double x) { return x == 0.0 ? 0.0 : x * std::sin(1.0 / x); },
            [](double x) { return std::sin(1.0 / x) - std::cos(1.0 / x) / x; }, {0.0},
            {std::nullopt, false, "continuous at 0 but not Lipschitz on any neighbourhood of 0"}};
  }
  if (id == "xsq_sin_inv") {
    expect_param_count(id, params, 0, 0);
    return {name, {},
            [](double x) { return x == 0.0 ? 0.0 : x * x * std::sin(1.0 / x); },
            [](double x) { return 2.0 * x * std::sin(1.0 / x) - std::cos(1.0 / x); }, {0.0},
            {std::nullopt, std::nullopt,
             "Lipschitz near 0 (|f'| <= 1 + 2|x|) with a discontinuous derivative at 0"}};
  }
  if (id == "sin") {
    expect_param_count(id, params, 0, 0);
    return {name, {}, [](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
            {}, {1.0, true, "entire"}};
  }
  if (id == "exp") {
    expect_param_count(id, params, 0, 0);
    return {name, {}, [](double x) { return std::exp(x); }, [](double x) { return std::exp(x); },
            {}, {std::numbers::e, true, "entire"}};
  }
  if (id == "smoothed_abs") {
    expect_param_count(id, params, 1, 1);
    const double eps = params[0];
    if (!(eps > 0.0)) throw Error(ErrorKind::BadParams, "smoothed_abs needs eps > 0");
    return {name, {eps}, [eps](double x) { return std::hypot(x, eps); },
            [eps](double x) { return x / std::hypot(x, eps); }, {},
            {1.0 / std::sqrt(1.0 + eps * eps), true,
             "smooth; operator Lipschitz by smoothness, Besov membership not computed"}};
  }
  throw Error(ErrorKind::UnknownFunction, "no catalog entry '" + name + "'");
}

std::vector<std::string_view> catalog_ids() {
  return {"identity", "constant", "poly", "abs", "signed_square", "sqrt_abs",
          "xsin_inv", "xsq_sin_inv", "sin", "exp", "smoothed_abs"};
}

std::vector<double> equispaced_points(Interval interval, int n) {
  const auto [a, b] = interval;
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw Error(ErrorKind::BadInterval, "need finite a < b");
  }
  if (n < 2) throw Error(ErrorKind::BadParams, "need at least 2 grid points");
  std::vector<double> pts(static_cast<std::size_t>(n));
  const double denom = static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) pts[i] = a + (b - a) * (static_cast<double>(i) / denom);
  pts.back() = b;
  return pts;
}

double lipschitz_seminorm_estimate(const ScalarFunction& f, Interval interval, int grid_n) {
  const std::vector<double> x = equispaced_points(interval, grid_n);
  std::vector<double> fx(x.size());
  std::transform(x.begin(), x.end(), fx.begin(), [&](double v) { return f(v); });

  double best = 0.0;
  if (grid_n <= 2000) {
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = i + 1; j < x.size(); ++j)
        best = std::max(best, std::abs(fx[j] - fx[i]) / (x[j] - x[i]));
  } else {
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      best = std::max(best, std::abs(fx[i + 1] - fx[i]) / (x[i + 1] - x[i]));
  }
  return best;
}

}  // namespace specshift
