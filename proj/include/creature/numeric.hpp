#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace creature {

namespace mp = boost::multiprecision;

using BigInt = mp::cpp_int;
using Rational = mp::cpp_rational;
// 256-bit binary mantissa; expression templates off so `auto` is safe.
using Real = mp::number<mp::cpp_bin_float<256, mp::digit_base_2>, mp::et_off>;

Real to_real(const Rational& q);
Real log2(const Real& x);

BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);

/// Parses "7", "-3/4" or a finite decimal such as "2.5" into an exact rational.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
std::string to_string(const Real& x, int digits = 20);

}  // namespace creature
