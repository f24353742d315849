#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cmath>
#include <string>

namespace mnlmix {

// Expression templates are off so that `auto` and generic code behave like double.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <class T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

// Accepts "p/q", integers and plain decimals ("0.125" is read exactly as 1/8).
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

// Best rational approximation with denominator at most max_den (continued fractions).
Rational rational_approximation(double x, long long max_den);

template <class T>
struct NumericTraits;

template <>
struct NumericTraits<double> {
  static constexpr bool exact = false;
};

template <>
struct NumericTraits<Rational> {
  static constexpr bool exact = true;
};

}  // namespace mnlmix
