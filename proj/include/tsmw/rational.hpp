#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace tsmw {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "p/q" in lowest terms; integers render without a denominator.
std::string to_string(const Rational& value);

// Accepts "p/q", "p", or a finite decimal literal ("0.125", "-3e-2").
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

// Lets scalar-generic code treat Rational and double uniformly.
inline double to_double(double value) { return value; }

template <class T>
T from_int(std::int64_t value) {
    return T(value);
}

}  // namespace tsmw
