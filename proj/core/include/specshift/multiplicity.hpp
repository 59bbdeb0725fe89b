#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace specshift {

/// Block multiplicity in a direct sum. Arbitrary precision: these grow like the
/// reciprocal of a block increment and are never materialized as matrices.
using Multiplicity = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// The exact rational value of a finite double.
Rational exact_rational(double x);

/// floor(1 / x) computed exactly on the binary value of x (x > 0, finite).
Multiplicity floor_reciprocal(double x);

/// Nearest double.
double to_double(const Multiplicity& n);
double to_double(const Rational& q);

std::string to_decimal(const Multiplicity& n);

/// Parses a non-negative decimal integer; throws BadParams on malformed input.
Multiplicity multiplicity_from_decimal(std::string_view text);

}  // namespace specshift
