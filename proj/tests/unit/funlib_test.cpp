#include <cmath>
#include <limits>

#include "doctest.h"
#include "specshift/error.hpp"
#include "specshift/funlib.hpp"
#include "specshift/random.hpp"

using namespace specshift;

TEST_CASE("catalog examples") {
  const ScalarFunction id = get_function("identity");
  CHECK(id(2.0) == 2.0);
  CHECK(id.derivative(2.0) == 1.0);
  CHECK(id.metadata().known_operator_lipschitz_near_zero == true);

  const ScalarFunction abs = get_function("abs");
  CHECK(abs(-3.0) == 3.0);
  CHECK(abs.metadata().known_operator_lipschitz_near_zero == false);
  CHECK(abs.metadata().known_lipschitz_on_unit_interval == 1.0);

  const double eps[] = {0.1};
  const ScalarFunction sm = get_function("smoothed_abs", eps);
  CHECK(sm(0.0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(sm.derivative(0.0) == 0.0);
}

TEST_CASE("kinks are declared and have no derivative") {
  for (const char* id : {"abs", "sqrt_abs", "xsin_inv"}) {
    const ScalarFunction f = get_function(id);
    REQUIRE(f.kinks().size() == 1);
    CHECK(f.kinks()[0] == 0.0);
    CHECK_FALSE(f.derivative(0.0).has_value());
  }
  CHECK(get_function("xsin_inv")(0.0) == 0.0);
  CHECK(get_function("xsq_sin_inv")(0.0) == 0.0);
}

TEST_CASE("unknown ids and bad parameters") {
  CHECK_THROWS_AS(get_function("gamma"), Error);
  try {
    get_function("gamma");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownFunction);
  }
  const double neg[] = {-0.5};
  static constexpr double two[] = {1.0, 2.0};
  for (auto call : {+[] { (void)get_function("poly"); },
                    +[] { (void)get_function("smoothed_abs"); },
                    +[] { (void)get_function("abs", std::span<const double>(two)); }}) {
    try {
      call();
      FAIL("expected BadParams");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadParams);
    }
  }
  CHECK_THROWS_AS(get_function("smoothed_abs", neg), Error);
}

TEST_CASE("evaluation outside the domain is a DomainError") {
  const ScalarFunction f = get_function("sin");
  try {
    (void)f(std::numeric_limits<double>::quiet_NaN());
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DomainError);
  }
}

TEST_CASE("poly uses ascending coefficients and matches Horner exactly") {
  const double c[] = {1.0, -2.0, 0.0, 3.0};
  const ScalarFunction p = get_function("poly", c);
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double x = uniform_real(rng, -3.0, 3.0);
    const double horner = ((3.0 * x + 0.0) * x - 2.0) * x + 1.0;
    CHECK(p(x) == horner);
    CHECK(*p.derivative(x) == doctest::Approx((9.0 * x) * x - 2.0).epsilon(1e-14));
  }
}

TEST_CASE("analytic derivatives agree with central differences away from kinks") {
  const double eps[] = {0.3};
  const double c[] = {0.5, -1.0, 2.0, 0.25};
  const std::vector<ScalarFunction> fs = {
      get_function("identity"), get_function("abs"),         get_function("signed_square"),
      get_function("sqrt_abs"), get_function("xsin_inv"),    get_function("xsq_sin_inv"),
      get_function("sin"),      get_function("exp"),         get_function("smoothed_abs", eps),
      get_function("poly", c),  get_function("constant")};
  for (const ScalarFunction& f : fs) {
    CAPTURE(f.id());
    Rng rng(derive_seed(11, std::hash<std::string>{}(f.id())));
    int checked = 0;
    while (checked < 100) {
      const double x = uniform_real(rng, -1.0, 1.0);
      bool near_kink = false;
      for (double k : f.kinks()) near_kink |= std::abs(x - k) < 0.1;
      if (near_kink) continue;
      const double h = 1e-6 * std::max(1.0, std::abs(x));
      const double central = (f(x + h) - f(x - h)) / (2 * h);
      const double analytic = *f.derivative(x);
      CHECK(std::abs(analytic - central) <= 1e-6 * std::max(1.0, std::abs(analytic)));
      ++checked;
    }
  }
}

TEST_CASE("smoothed_abs stays within eps of abs") {
  Rng rng(3);
  for (double eps : {1e-3, 0.05, 0.1, 1.0}) {
    const double p[] = {eps};
    const ScalarFunction f = get_function("smoothed_abs", p);
    for (int i = 0; i < 200; ++i) {
      const double x = uniform_real(rng, -5.0, 5.0);
      const double gap = f(x) - std::abs(x);
      CHECK(gap >= 0.0);
      CHECK(gap <= eps * (1 + 1e-15));
    }
  }
}

TEST_CASE("lipschitz estimate examples") {
  CHECK(lipschitz_seminorm_estimate(get_function("identity"), {-1, 1}, 101) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lipschitz_seminorm_estimate(get_function("abs"), {-1, 1}, 101) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // Adjacent pair (0, h) gives sqrt(h) / h = h^{-1/2}, h = 1e-3.
  const double h = 1.0 / 1000.0;
  const double oracle = 1.0 / std::sqrt(h);
  const double est = lipschitz_seminorm_estimate(get_function("sqrt_abs"), {0, 1}, 1001);
  CHECK(est == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(est == doctest::Approx(31.6227766).epsilon(1e-8));
  CHECK(lipschitz_seminorm_estimate(get_function("sqrt_abs"), {0, 1}, 4001) > est);
}

TEST_CASE("lipschitz estimate is nondecreasing on nested grids") {
  const double eps[] = {0.05};
  for (const ScalarFunction& f : {get_function("sin"), get_function("sqrt_abs"),
                                  get_function("xsin_inv"), get_function("smoothed_abs", eps)}) {
    CAPTURE(f.id());
    double prev = 0.0;
    for (int n = 3; n <= 4097; n = 2 * n - 1) {
      const double est = lipschitz_seminorm_estimate(f, {-1, 1}, n);
      CHECK(est >= prev);
      prev = est;
    }
  }
}

TEST_CASE("equispaced grid hits endpoints exactly") {
  const auto g = equispaced_points({0, 1}, 5);
  CHECK(g == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK_THROWS_AS(equispaced_points({1, 1}, 5), Error);
  CHECK_THROWS_AS(equispaced_points({0, 1}, 1), Error);
}
