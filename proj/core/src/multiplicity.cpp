#include "specshift/multiplicity.hpp"

#include <cmath>
#include <cstdint>

#include "specshift/error.hpp"

namespace specshift {

Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "cannot convert a non-finite double");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double frac = std::frexp(std::abs(x), &exp);
  const auto mantissa = static_cast<std::uint64_t>(std::ldexp(frac, 53));
  exp -= 53;
  Multiplicity num(mantissa);
  Multiplicity den(1);
  if (exp >= 0) {
    num <<= exp;
  } else {
    den <<= -exp;
  }
  Rational q(num, den);
  return x < 0.0 ? Rational(-q) : q;
}

Multiplicity floor_reciprocal(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw Error(ErrorKind::PreconditionViolated, "floor(1/x) needs a positive finite x");
  }
  const Rational inv = Rational(1) / exact_rational(x);
  return boost::multiprecision::numerator(inv) / boost::multiprecision::denominator(inv);
}

double to_double(const Multiplicity& n) { return n.convert_to<double>(); }
double to_double(const Rational& q) { return q.convert_to<double>(); }

std::string to_decimal(const Multiplicity& n) { return n.str(); }

Multiplicity multiplicity_from_decimal(std::string_view text) {
  if (text.empty()) throw Error(ErrorKind::BadParams, "empty multiplicity");
  for (char c : text) {
    if (c < '0' || c > '9') throw Error(ErrorKind::BadParams, "malformed multiplicity '" + std::string(text) + "'");
  }
  return Multiplicity(std::string(text));
}

}  // namespace specshift
