#pragma once

/// \file rational.hpp
/// Exact integer/rational arithmetic and unit-circle evaluation.
///
/// Every combinatorial quantity in the library (box endpoints, cell
/// measures, shift vectors) is an exact rational.  Floating point enters
/// only when a phase is turned into a point on the unit circle, and even
/// then the phase is first reduced modulo 1 exactly.

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace tilebasis
{

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Integer point of Z^d.  Coordinates are kept in 64 bits; producers that
/// could exceed that range check and throw before constructing one.
using LatticePoint = std::vector<std::int64_t>;

/// Parses "p", "p/q", "-p/q" or a plain decimal such as "1.5" / "-0.25"
/// into an exact rational.  Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Canonical text: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& value);
std::string to_string(const Integer& value);
std::string to_string(const RationalVector& values, char sep = ' ');
std::string to_string(const LatticePoint& point);

/// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double value);

Integer floor_of(const Rational& value);
Integer ceil_of(const Rational& value);

/// value - floor(value), always in [0, 1).
Rational fractional_part(const Rational& value);

/// Distance from value to the nearest integer, in [0, 1/2].
Rational distance_to_integer(const Rational& value);

/// e(theta) = exp(2 pi i theta).  Quarter turns are returned exactly.
std::complex<double> unit_exp(const Rational& theta);
std::complex<double> unit_exp(double theta);

/// |1 - e(theta)| = 2 |sin(pi theta)|.  Exactly 0 iff theta is an integer.
double unit_gap(const Rational& theta);
double unit_gap(double theta);

/// Dot product of an integer point with a rational vector.
Rational dot(const LatticePoint& lambda, const RationalVector& x);

std::int64_t to_int64(const Integer& value);
bool fits_int64(const Integer& value);

Integer to_integer(std::int64_t value);

/// Canonical p/q; q must be nonzero.
Rational ratio(std::int64_t p, std::int64_t q);

}  // namespace tilebasis
