#pragma once

#include <cstdint>
#include <string>

namespace greenop {

// Exact rational with positive denominator in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Rational a, Rational b);
  friend bool operator<=(Rational a, Rational b) { return a < b || a == b; }
};

// An exponent in [1, inf], stored through its reciprocal (inf has reciprocal 0).
class Exponent {
 public:
  Exponent() : recip_(1) {}
  Exponent(std::int64_t v);  // NOLINT: integers read naturally as exponents
  static Exponent ratio(std::int64_t num, std::int64_t den);
  static Exponent infinity();
  static Exponent from_reciprocal(Rational r);
  // Accepts "inf", "3/2", "4", or a decimal with a small-denominator rational value.
  static Exponent parse(const std::string& s);
  static Exponent from_double(double v);

  Rational reciprocal() const { return recip_; }
  bool is_infinite() const { return recip_.num == 0; }
  double value() const;  // +inf for the infinite exponent
  std::string str() const;
  friend bool operator==(const Exponent& a, const Exponent& b) { return a.recip_ == b.recip_; }

 private:
  Rational recip_;
};

struct ExponentPair {
  Exponent r;  // time
  Exponent q;  // space
};

struct LorentzIndex {
  double p = 2.0;  // primary, in [1, inf)
  double s = 2.0;  // secondary, in [1, inf]; +inf for weak spaces
};

// 1/r + n/(2q) = n/4 with 2 <= r, q < inf.
bool is_admissible(const ExponentPair& p, int n);
// 1/r + n/(2q) = 1 with 1 < r, q <= inf.
bool is_compatible(const ExponentPair& p, int n);
// (2 r', 2 q') with r' the Hoelder conjugate.
ExponentPair conjugate_pair(const ExponentPair& p);

}  // namespace greenop
