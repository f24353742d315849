#include "mnlmix/numeric.hpp"

#include <cctype>

#include "mnlmix/errors.hpp"

namespace mnlmix {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ParameterError("empty rational");
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      Rational num(s.substr(0, slash));
      Rational den(s.substr(slash + 1));
      if (den == 0) throw ParameterError("zero denominator in " + text);
      return num / den;
    }
    std::size_t exp_pos = s.find_first_of("eE");
    long exponent = 0;
    std::string mant = s;
    if (exp_pos != std::string::npos) {
      exponent = std::stol(s.substr(exp_pos + 1));
      mant = s.substr(0, exp_pos);
    }
    const auto dot = mant.find('.');
    if (dot != std::string::npos) {
      exponent -= static_cast<long>(mant.size() - dot - 1);
      mant.erase(dot, 1);
    }
    Rational r(mant);
    Rational ten(10);
    for (long e = 0; e < std::labs(exponent); ++e) r = exponent > 0 ? r * ten : r / ten;
    return r;
  } catch (const std::runtime_error&) {
    throw ParameterError("cannot parse rational: " + text);
  }
}

std::string format_rational(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rational rational_approximation(double x, long long max_den) {
  // Convergents of the exact binary value of x.
  Rational v(x);
  using Int = boost::multiprecision::mpz_int;
  Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Rational best(0);
  for (int it = 0; it < 64; ++it) {
    Int num = boost::multiprecision::numerator(v);
    Int den = boost::multiprecision::denominator(v);
    Int a = num / den;
    if (num < 0 && a * den != num) a -= 1;  // floor
    Int p2 = a * p1 + p0;
    Int q2 = a * q1 + q0;
    if (q2 > max_den) break;
    best = Rational(p2) / Rational(q2);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Rational frac = v - Rational(a);
    if (frac == 0) break;
    v = 1 / frac;
  }
  return best;
}

}  // namespace mnlmix
