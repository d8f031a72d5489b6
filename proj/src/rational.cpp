#include "qcgaps/rational.hpp"

#include <algorithm>

#include "qcgaps/error.hpp"

namespace qcgaps {

i128 checked_mul(i128 x, i128 y) {
  i128 r;
  if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("128-bit overflow in exact multiplication");
  return r;
}

i128 checked_add(i128 x, i128 y) {
  i128 r;
  if (__builtin_add_overflow(x, y, &r)) throw OverflowError("128-bit overflow in exact addition");
  return r;
}

i128 gcd128(i128 x, i128 y) {
  if (x < 0) x = -x;
  if (y < 0) y = -y;
  while (y != 0) {
    i128 t = x % y;
    x = y;
    y = t;
  }
  return x;
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // magnitude via unsigned to survive the minimum value
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

Rational::Rational(i128 num) : num_(num), den_(1) {}

Rational::Rational(i128 num, i128 den) {
  if (den == 0) throw ValidationError("rational with zero denominator");
  if (den < 0) {
    num = checked_mul(num, -1);
    den = checked_mul(den, -1);
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

double Rational::to_double() const { return static_cast<double>(to_long_double()); }

long double Rational::to_long_double() const {
  return static_cast<long double>(num_) / static_cast<long double>(den_);
}

std::string Rational::str() const {
  if (den_ == 1) return to_string(num_);
  return to_string(num_) + "/" + to_string(den_);
}

Rational Rational::operator-() const { return Rational(checked_mul(num_, -1), den_); }

Rational operator+(const Rational& x, const Rational& y) {
  if (x.den_ == 1 && y.den_ == 1) return Rational(checked_add(x.num_, y.num_));
  i128 g = gcd128(x.den_, y.den_);
  i128 xd = x.den_ / g;
  i128 yd = y.den_ / g;
  i128 n = checked_add(checked_mul(x.num_, yd), checked_mul(y.num_, xd));
  return Rational(n, checked_mul(x.den_, yd));
}

Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }

Rational operator*(const Rational& x, const Rational& y) {
  if (x.num_ == 0 || y.num_ == 0) return Rational();
  // cross-reduce first to keep intermediates small
  i128 g1 = gcd128(x.num_, y.den_);
  i128 g2 = gcd128(y.num_, x.den_);
  i128 n = checked_mul(x.num_ / g1, y.num_ / g2);
  i128 d = checked_mul(x.den_ / g2, y.den_ / g1);
  return Rational(n, d);
}

Rational operator/(const Rational& x, const Rational& y) {
  if (y.num_ == 0) throw ValidationError("rational division by zero");
  return x * Rational(y.den_, y.num_);
}

std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
  i128 lhs = checked_mul(x.num_, y.den_);
  i128 rhs = checked_mul(y.num_, x.den_);
  return lhs <=> rhs;
}

}  // namespace qcgaps
