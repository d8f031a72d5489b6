#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qcgaps/error.hpp"
#include "qcgaps/quadfield.hpp"

using namespace qcgaps;

namespace {

const double kPi4 = std::pow(std::numbers::pi, 4);

// Smallest unit above 1 by direct search over a + b·τ with small b.
double brute_force_unit(const RealQuadraticField& f) {
  double best = INFINITY;
  for (std::int64_t b = 1; b < 4000; ++b) {
    const double t = f.tau_real(), tc = f.tau_conj();
    // a + b t > 1 and |a + b tc| < 1 force a ≈ −b tc
    const auto a0 = static_cast<std::int64_t>(std::llround(-b * tc));
    for (std::int64_t a = a0 - 2; a <= a0 + 2; ++a) {
      const FieldElement x{Rational(a), Rational(b)};
      const Rational n = f.norm(x);
      if ((n == Rational(1) || n == Rational(-1)) && a + b * t > 1) best = std::min(best, a + b * t);
    }
    if (best < INFINITY) return best;
  }
  return best;
}

std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1;
  b %= m;
  if (b < 0) b += m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// ζ(2)·L(2, χ) summed directly
double zeta2_series(const RealQuadraticField& f) {
  long double L = 0;
  for (std::int64_t n = 1; n <= 4000000; ++n) {
    const int c = f.chi(n);
    if (c != 0) L += static_cast<long double>(c) / (static_cast<long double>(n) * n);
  }
  return static_cast<double>(L * std::numbers::pi * std::numbers::pi / 6);
}

}  // namespace

TEST_CASE("rational arithmetic normalizes and detects overflow") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(2, 3) * Rational(3, 4)) == Rational(1, 2));
  CHECK((Rational(1, 2) / Rational(1, 4)) == Rational(2));
  CHECK(Rational(-7, 3) < Rational(-2));
  CHECK_THROWS_AS(Rational(1, 0), ValidationError);
  const i128 big = static_cast<i128>(1) << 100;
  CHECK_THROWS_AS(Rational(big) * Rational(big), OverflowError);
}

TEST_CASE("field validation and class-number table") {
  CHECK_THROWS_AS(RealQuadraticField(4), ValidationError);
  CHECK_THROWS_AS(RealQuadraticField(12), ValidationError);
  CHECK_THROWS_AS(RealQuadraticField(1), ValidationError);
  for (std::int64_t d : {2, 3, 5, 6, 7, 11, 13, 14, 17, 19}) CHECK(has_class_number_one(d));
  for (std::int64_t d : {10, 15, 26, 30, 34}) CHECK_FALSE(has_class_number_one(d));
}

TEST_CASE("discriminant and generator") {
  RealQuadraticField f2(2), f5(5), f13(13);
  CHECK(f2.discriminant() == 8);
  CHECK(f2.tau_kind() == TauKind::root);
  CHECK(f5.discriminant() == 5);
  CHECK(f5.tau_kind() == TauKind::half);
  CHECK(f13.discriminant() == 13);
  CHECK(f5.tau_real() == doctest::Approx((1 + std::sqrt(5.0)) / 2).epsilon(1e-15));
}

TEST_CASE("fundamental unit equals the brute-force minimum") {
  for (std::int64_t d : {2, 3, 5, 6, 7, 11, 13, 14, 17, 19, 21, 22, 23, 29}) {
    CAPTURE(d);
    RealQuadraticField f(d);
    CHECK(f.to_double(f.fundamental_unit()) == doctest::Approx(brute_force_unit(f)).epsilon(1e-12));
    const Rational n = f.norm(f.fundamental_unit());
    CHECK(n == Rational(f.unit_norm()));
  }
  RealQuadraticField f7(7);
  CHECK(f7.format(f7.fundamental_unit()) == "8+3√7");
  RealQuadraticField f19(19);
  CHECK(f19.format(f19.fundamental_unit()) == "170+39√19");
}

TEST_CASE("scaling unit has positive conjugate") {
  for (std::int64_t d : {2, 3, 5, 13}) {
    RealQuadraticField f(d);
    CHECK(f.conj_double(f.scaling_unit()) > 0);
  }
  RealQuadraticField f2(2);
  CHECK(f2.scaling_unit() == f2.pow(f2.fundamental_unit(), 2));
  RealQuadraticField f3(3);
  CHECK(f3.scaling_unit() == f3.fundamental_unit());
}

TEST_CASE("Kronecker character agrees with Euler's criterion at odd primes") {
  const int primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73};
  for (std::int64_t d : {2, 3, 5, 7, 13}) {
    RealQuadraticField f(d);
    const std::int64_t D = f.discriminant();
    for (int p : primes) {
      if (D % p == 0) {
        CHECK(f.chi(p) == 0);
        continue;
      }
      const std::int64_t e = pow_mod(D, (p - 1) / 2, p);
      CHECK(f.chi(p) == (e == 1 ? 1 : -1));
    }
  }
}

TEST_CASE("zeta_K(2) closed forms and series") {
  CHECK(RealQuadraticField(2).zeta2() == doctest::Approx(kPi4 / (48 * std::sqrt(2.0))).epsilon(1e-13));
  CHECK(RealQuadraticField(3).zeta2() == doctest::Approx(kPi4 / (36 * std::sqrt(3.0))).epsilon(1e-13));
  CHECK(RealQuadraticField(5).zeta2() == doctest::Approx(2 * kPi4 / (75 * std::sqrt(5.0))).epsilon(1e-13));
  for (std::int64_t d : {7, 13}) {
    RealQuadraticField f(d);
    CHECK(f.zeta2() == doctest::Approx(zeta2_series(f)).epsilon(1e-6));
  }
}

TEST_CASE("exact sign of p + q√d") {
  CHECK(sign_sqrt_form(0, 0, 2) == 0);
  CHECK(sign_sqrt_form(-3, 2, 2) == -1);  // 2√2 < 3
  CHECK(sign_sqrt_form(-2, 2, 2) == 1);
  CHECK(sign_sqrt_form(7, -5, 2) == -1);  // 5√2 ≈ 7.07
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> u(-1000000, 1000000);
  for (int i = 0; i < 2000; ++i) {
    const std::int64_t p = u(rng), q = u(rng);
    const long double v = p + q * std::sqrt(static_cast<long double>(3));
    if (std::abs(v) > 1e-3) CHECK(sign_sqrt_form(p, q, 3) == (v > 0 ? 1 : -1));
  }
}

TEST_CASE("field arithmetic identities") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> u(-30, 30);
  for (std::int64_t d : {2, 3, 5, 13}) {
    RealQuadraticField f(d);
    for (int i = 0; i < 200; ++i) {
      FieldElement x{Rational(u(rng), 1 + std::abs(u(rng))), Rational(u(rng))};
      FieldElement y{Rational(u(rng)), Rational(u(rng), 1 + std::abs(u(rng)))};
      CHECK(f.to_double(f.mul(x, y)) == doctest::Approx(f.to_double(x) * f.to_double(y)).epsilon(1e-9));
      CHECK(f.conj_double(f.mul(x, y)) == doctest::Approx(f.conj_double(x) * f.conj_double(y)).epsilon(1e-9));
      if (!x.is_zero()) {
        CHECK(f.mul(x, f.inv(x)) == f.one());
        CHECK(f.mul(x, f.conj(x)) == FieldElement(f.norm(x)));
      }
      const auto [p, q] = f.sqrt_form(x);
      CHECK(f.from_sqrt_form(p, q) == x);
      CHECK(f.sign(x - y) == (f.to_double(x) > f.to_double(y) ? 1 : (x == y ? 0 : -1)));
    }
  }
}

TEST_CASE("radical formatting") {
  RealQuadraticField f2(2), f5(5);
  CHECK(f2.format(f2.from_sqrt_form(Rational(7, 2), Rational(4))) == "7/2+4√2");
  CHECK(f5.format(f5.tau()) == "(1+√5)/2");
  CHECK(f2.format(FieldElement()) == "0");
}

TEST_CASE("ideals") {
  RealQuadraticField f(2);
  const Ideal I = unit_ideal(f);
  CHECK(I.absolute_norm == Rational(1));
  const Ideal J = scale_ideal(f, I, f.from_sqrt_form(Rational(1), Rational(1)));
  CHECK(J.absolute_norm == Rational(1));
  const Ideal K = make_ideal(f, FieldElement(Rational(2)), f.from_sqrt_form(Rational(0), Rational(1)));
  CHECK(K.absolute_norm == Rational(2));
  // Z + 2√2 Z is not closed under multiplication by √2
  CHECK_THROWS_AS(make_ideal(f, FieldElement(Rational(1)), f.from_sqrt_form(Rational(0), Rational(2))),
                  ValidationError);
  CHECK_THROWS_AS(make_ideal(f, FieldElement(Rational(1)), FieldElement(Rational(2))), ValidationError);
}
