#include "qcgaps/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcgaps/error.hpp"

namespace qcgaps {

namespace {

std::int64_t isqrt64(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

int kronecker_two(std::int64_t a) {
  if (a % 2 == 0) return 0;
  std::int64_t m = ((a % 8) + 8) % 8;
  return (m == 1 || m == 7) ? 1 : -1;
}

// Jacobi symbol (a/n), n odd positive.
int jacobi(std::int64_t a, std::int64_t n) {
  a = ((a % n) + n) % n;
  int result = 1;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::string signed_term(const Rational& q, const std::string& radical) {
  if (q == Rational(1)) return radical;
  if (q == Rational(-1)) return "-" + radical;
  if (q.is_integer()) return q.str() + radical;
  return "(" + q.str() + ")" + radical;
}

}  // namespace

bool is_squarefree(std::int64_t n) {
  if (n < 1) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

bool has_class_number_one(std::int64_t d) {
  // OEIS A003172 restricted to d < 100.
  static constexpr std::int64_t kList[] = {2,  3,  5,  6,  7,  11, 13, 14, 17, 19, 21, 22, 23,
                                           29, 31, 33, 37, 38, 41, 43, 46, 47, 53, 57, 59, 61,
                                           62, 67, 69, 71, 73, 77, 83, 86, 89, 93, 94, 97};
  return std::find(std::begin(kList), std::end(kList), d) != std::end(kList);
}

int sign_sqrt_form(i128 p, i128 q, std::int64_t d) {
  int sp = p > 0 ? 1 : (p < 0 ? -1 : 0);
  int sq = q > 0 ? 1 : (q < 0 ? -1 : 0);
  if (sp >= 0 && sq >= 0) return (sp | sq) ? 1 : 0;
  if (sp <= 0 && sq <= 0) return -1;
  i128 p2 = checked_mul(p, p);
  i128 q2d = checked_mul(checked_mul(q, q), d);
  int cmp = p2 > q2d ? 1 : (p2 < q2d ? -1 : 0);
  return sp > 0 ? cmp : -cmp;
}

RealQuadraticField::RealQuadraticField(std::int64_t d) : d_(d) {
  if (d < 2 || !is_squarefree(d)) {
    throw ValidationError("d must be a squarefree integer >= 2, got " + std::to_string(d));
  }
  if (d % 4 == 1) {
    kind_ = TauKind::half;
    disc_ = d;
    tau_trace_ = 1;
    tau_sq_const_ = (d - 1) / 4;
    tau_real_ = (1.0 + std::sqrt(static_cast<double>(d))) / 2.0;
    tau_conj_ = (1.0 - std::sqrt(static_cast<double>(d))) / 2.0;
  } else {
    kind_ = TauKind::root;
    disc_ = 4 * d;
    tau_trace_ = 0;
    tau_sq_const_ = d;
    tau_real_ = std::sqrt(static_cast<double>(d));
    tau_conj_ = -tau_real_;
  }
  find_fundamental_unit();
}

// Continued fraction of tau = (P + sqrt D)/Q; every unit p - q*tau with
// |N| = 1 comes from a convergent p/q, the first one is the fundamental unit.
void RealQuadraticField::find_fundamental_unit() {
  const std::int64_t D = d_;
  const std::int64_t root = isqrt64(D);
  i128 P = kind_ == TauKind::half ? 1 : 0;
  i128 Q = kind_ == TauKind::half ? 2 : 1;
  i128 p_prev = 1, p_prev2 = 0;
  i128 q_prev = 0, q_prev2 = 1;
  for (int step = 0; step < 100000; ++step) {
    i128 a = (P + root) / Q;
    i128 p = checked_add(checked_mul(a, p_prev), p_prev2);
    i128 q = checked_add(checked_mul(a, q_prev), q_prev2);
    FieldElement x{Rational(p), Rational(-q)};
    Rational n = norm(x);
    if (n == Rational(1) || n == Rational(-1)) {
      unit_ = conj(x);
      if (unit_norm_ = n.sign(); sign(unit_) < 0) unit_ = -unit_;
      unit_conj_sign_ = conj_sign(unit_);
      scaling_ = unit_conj_sign_ > 0 ? unit_ : mul(unit_, unit_);
      return;
    }
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  throw OverflowError("fundamental unit search did not terminate");
}

FieldElement RealQuadraticField::from_sqrt_form(const Rational& p, const Rational& q) const {
  if (kind_ == TauKind::root) return {p, q};
  // sqrt d = 2 tau - 1
  return {p - q, Rational(2) * q};
}

std::pair<Rational, Rational> RealQuadraticField::sqrt_form(const FieldElement& x) const {
  if (kind_ == TauKind::root) return {x.a, x.b};
  Rational half_b = x.b * Rational(1, 2);
  return {x.a + half_b, half_b};
}

FieldElement RealQuadraticField::mul(const FieldElement& x, const FieldElement& y) const {
  Rational bb = x.b * y.b;
  Rational a = x.a * y.a + bb * Rational(tau_sq_const_);
  Rational b = x.a * y.b + x.b * y.a + bb * Rational(tau_trace_);
  return {a, b};
}

FieldElement RealQuadraticField::conj(const FieldElement& x) const {
  return {x.a + x.b * Rational(tau_trace_), -x.b};
}

Rational RealQuadraticField::norm(const FieldElement& x) const {
  return x.a * x.a + x.a * x.b * Rational(tau_trace_) - x.b * x.b * Rational(tau_sq_const_);
}

Rational RealQuadraticField::trace(const FieldElement& x) const {
  return Rational(2) * x.a + x.b * Rational(tau_trace_);
}

FieldElement RealQuadraticField::inv(const FieldElement& x) const {
  Rational n = norm(x);
  if (n.sign() == 0) throw ValidationError("inverse of zero field element");
  FieldElement c = conj(x);
  return {c.a / n, c.b / n};
}

FieldElement RealQuadraticField::pow(const FieldElement& x, int n) const {
  FieldElement base = n < 0 ? inv(x) : x;
  unsigned e = static_cast<unsigned>(n < 0 ? -n : n);
  FieldElement result = one();
  while (e > 0) {
    if (e & 1U) result = mul(result, base);
    e >>= 1U;
    if (e > 0) base = mul(base, base);
  }
  return result;
}

int RealQuadraticField::sign(const FieldElement& x) const {
  auto [p, q] = sqrt_form(x);
  // common denominator; the sign is unaffected by the positive scale
  i128 den = checked_mul(p.den() / gcd128(p.den(), q.den()), q.den());
  i128 pi = checked_mul(p.num(), den / p.den());
  i128 qi = checked_mul(q.num(), den / q.den());
  return sign_sqrt_form(pi, qi, d_);
}

long double RealQuadraticField::to_long_double(const FieldElement& x) const {
  auto [p, q] = sqrt_form(x);
  long double pl = p.to_long_double();
  long double ql = q.to_long_double() * std::sqrt(static_cast<long double>(d_));
  if ((pl > 0 && ql < 0) || (pl < 0 && ql > 0)) {
    // cancellation: x = N / (p - q sqrt d) with N = p^2 - d q^2 exact
    Rational n = p * p - q * q * Rational(d_);
    return n.to_long_double() / (pl - ql);
  }
  return pl + ql;
}

double RealQuadraticField::to_double(const FieldElement& x) const {
  return static_cast<double>(to_long_double(x));
}

int RealQuadraticField::chi(std::int64_t n) const {
  if (n < 1) throw ValidationError("chi: n must be positive");
  int result = 1;
  while (n % 2 == 0) {
    n /= 2;
    result *= kronecker_two(disc_);
    if (result == 0) return 0;
  }
  if (n == 1) return result;
  return result * jacobi(disc_, n);
}

Rational RealQuadraticField::bernoulli_character_sum() const {
  Rational sum;
  const Rational sixth(1, 6);
  for (std::int64_t a = 1; a <= disc_; ++a) {
    int c = chi(a);
    if (c == 0) continue;
    Rational x(a, disc_);
    Rational b2 = x * x - x + sixth;
    sum += c > 0 ? b2 : -b2;
  }
  return sum;
}

double RealQuadraticField::zeta2() const {
  const double pi4 = std::pow(std::numbers::pi, 4);
  return pi4 / (6.0 * std::sqrt(static_cast<double>(disc_))) * bernoulli_character_sum().to_double();
}

std::string RealQuadraticField::format(const FieldElement& x) const {
  auto [p, q] = sqrt_form(x);
  const std::string radical = "√" + std::to_string(d_);
  if (q.sign() == 0) return p.str();
  if (p.sign() == 0) {
    if (q.is_integer()) return signed_term(q, radical);
    return signed_term(Rational(q.num()), radical) + "/" + to_string(q.den());
  }
  if (p.den() == q.den() && p.den() > 1) {
    std::string qs = signed_term(Rational(q.num()), radical);
    if (qs[0] != '-') qs = "+" + qs;
    return "(" + to_string(p.num()) + qs + ")/" + to_string(p.den());
  }
  std::string qs = signed_term(q, radical);
  if (qs[0] != '-') qs = "+" + qs;
  return p.str() + qs;
}

RealQuadraticField make_field(std::int64_t d) { return RealQuadraticField(d); }

std::pair<double, double> embed(const RealQuadraticField& field, const FieldElement& x) { return field.embed(x); }

Rational norm(const RealQuadraticField& field, const FieldElement& x) { return field.norm(x); }

int chi(const RealQuadraticField& field, std::int64_t n) { return field.chi(n); }

double zeta_K_2(const RealQuadraticField& field) { return field.zeta2(); }

namespace {

// Solves x = m*w1 + n*w2 over Q; returns false if x is not in the Q-span (never
// happens for independent w1, w2).
bool coordinates(const FieldElement& w1, const FieldElement& w2, const FieldElement& x, Rational& m, Rational& n) {
  Rational det = w1.a * w2.b - w2.a * w1.b;
  if (det.sign() == 0) return false;
  m = (x.a * w2.b - w2.a * x.b) / det;
  n = (w1.a * x.b - x.a * w1.b) / det;
  return true;
}

}  // namespace

Ideal make_ideal(const RealQuadraticField& field, const FieldElement& w1, const FieldElement& w2) {
  // covol(iota(I)) = |w1 sigma(w2) - w2 sigma(w1)| = |q| sqrt d
  FieldElement z = field.mul(w1, field.conj(w2)) - field.mul(w2, field.conj(w1));
  auto [p, q] = field.sqrt_form(z);
  if (q.sign() == 0) throw ValidationError("ideal basis is linearly dependent");
  for (const FieldElement& w : {w1, w2}) {
    Rational m, n;
    coordinates(w1, w2, field.mul(field.tau(), w), m, n);
    if (!m.is_integer() || !n.is_integer()) throw ValidationError("basis does not span an O_K-module");
  }
  Rational covol_over_sqrt_d = q.sign() < 0 ? -q : q;
  // Nr = covol / sqrt(disc); disc = d or 4d
  Rational nr = field.tau_kind() == TauKind::half ? covol_over_sqrt_d : covol_over_sqrt_d * Rational(1, 2);
  return Ideal{w1, w2, nr};
}

Ideal unit_ideal(const RealQuadraticField& field) { return make_ideal(field, field.one(), field.tau()); }

Ideal scale_ideal(const RealQuadraticField& field, const Ideal& ideal, const FieldElement& beta) {
  return make_ideal(field, field.mul(beta, ideal.omega1), field.mul(beta, ideal.omega2));
}

}  // namespace qcgaps
