#include "greenop/exponents.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "greenop/error.hpp"

namespace greenop {

Rational::Rational(std::int64_t n, std::int64_t d) {
  require(d != 0, ErrorKind::invalid_argument, "zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
  num = g ? n / g : 0;
  den = g ? d / g : 1;
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }
bool operator<(Rational a, Rational b) { return a.num * b.den < b.num * a.den; }

Exponent::Exponent(std::int64_t v) : recip_(1, v) {
  require(v >= 1, ErrorKind::invalid_argument, "exponent must be >= 1");
}

Exponent Exponent::ratio(std::int64_t num, std::int64_t den) {
  return from_reciprocal(Rational(den, num));
}

Exponent Exponent::infinity() { return from_reciprocal(Rational(0)); }

Exponent Exponent::from_reciprocal(Rational r) {
  require(Rational(0) <= r && r <= Rational(1), ErrorKind::invalid_argument,
          "exponent must lie in [1, inf]");
  Exponent e;
  e.recip_ = r;
  return e;
}

Exponent Exponent::from_double(double v) {
  if (std::isinf(v) && v > 0) return infinity();
  require(std::isfinite(v) && v >= 1.0, ErrorKind::invalid_argument,
          "exponent must lie in [1, inf]");
  // Continued-fraction recovery of the reciprocal with denominator <= 10^6.
  const double x = 1.0 / v;
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double f = x;
  for (int it = 0; it < 40; ++it) {
    const double a = std::floor(f);
    const std::int64_t ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > 1000000) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / k1 - x) < 1e-12) break;
    const double frac = f - a;
    if (frac < 1e-15) break;
    f = 1.0 / frac;
  }
  return from_reciprocal(Rational(h1, k1));
}

Exponent Exponent::parse(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "Infinity") return infinity();
  const auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      return ratio(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    return from_double(std::stod(s));
  } catch (const std::logic_error&) {
    fail(ErrorKind::invalid_argument, "cannot parse exponent '" + s + "'");
  }
}

double Exponent::value() const {
  if (is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(recip_.den) / static_cast<double>(recip_.num);
}

std::string Exponent::str() const {
  if (is_infinite()) return "inf";
  if (recip_.num == 1) return std::to_string(recip_.den);
  return std::to_string(recip_.den) + "/" + std::to_string(recip_.num);
}

bool is_admissible(const ExponentPair& p, int n) {
  const Rational a = p.r.reciprocal(), b = p.q.reciprocal();
  const Rational half(1, 2);
  // 2 <= r, q < inf  <=>  0 < 1/r, 1/q <= 1/2.
  if (!(Rational(0) < a && a <= half && Rational(0) < b && b <= half)) return false;
  return a + Rational(n, 2) * b == Rational(n, 4);
}

bool is_compatible(const ExponentPair& p, int n) {
  const Rational a = p.r.reciprocal(), b = p.q.reciprocal();
  // 1 < r, q <= inf  <=>  0 <= 1/r, 1/q < 1.
  if (!(a < Rational(1) && b < Rational(1))) return false;
  return a + Rational(n, 2) * b == Rational(1);
}

ExponentPair conjugate_pair(const ExponentPair& p) {
  // 1/(2 r') = (1 - 1/r) / 2.
  const Rational half(1, 2);
  return {Exponent::from_reciprocal((Rational(1) - p.r.reciprocal()) * half),
          Exponent::from_reciprocal((Rational(1) - p.q.reciprocal()) * half)};
}

}  // namespace greenop
