#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace qcgaps {

using i128 = __int128;

// Exact rational number with 128-bit numerator and denominator.
// Always normalized: gcd(num, den) == 1 and den > 0. Every operation that
// would overflow 128 bits throws OverflowError.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(i128 num);  // NOLINT(google-explicit-constructor)
  Rational(i128 num, i128 den);

  i128 num() const { return num_; }
  i128 den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  double to_double() const;
  long double to_long_double() const;
  std::string str() const;

  Rational operator-() const;
  friend Rational operator+(const Rational& x, const Rational& y);
  friend Rational operator-(const Rational& x, const Rational& y);
  friend Rational operator*(const Rational& x, const Rational& y);
  friend Rational operator/(const Rational& x, const Rational& y);
  Rational& operator+=(const Rational& y) { return *this = *this + y; }
  Rational& operator-=(const Rational& y) { return *this = *this - y; }
  Rational& operator*=(const Rational& y) { return *this = *this * y; }

  friend bool operator==(const Rational& x, const Rational& y) = default;
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y);

 private:
  i128 num_ = 0;
  i128 den_ = 1;
};

// Checked 128-bit helpers shared with the field code.
i128 checked_mul(i128 x, i128 y);
i128 checked_add(i128 x, i128 y);
i128 gcd128(i128 x, i128 y);
std::string to_string(i128 v);

}  // namespace qcgaps
