#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <string>

namespace cachegap {

// Every curve comparison in this library is exact: memory/rate values are
// arbitrary-precision rationals, never doubles. Doubles appear only in
// display formatting and in the two transcendental inequalities of the
// decentralized-gap certificate, which use BigFloat instead.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

double to_double(const Rational& q);
BigFloat to_bigfloat(const Rational& q);

// q^e for integer e >= 0 (numerator and denominator powered separately).
Rational pow_rational(const Rational& q, unsigned long e);

// Accepts "7", "-3/4", or decimal text like "1.25" (parsed exactly).
Rational parse_rational(const std::string& text);

std::string to_string_exact(const Rational& q);    // "num/den", or "num" when den==1
std::string to_string_decimal(const Rational& q);  // shortest round-trip double form

}  // namespace cachegap
