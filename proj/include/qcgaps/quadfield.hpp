#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcgaps/rational.hpp"

namespace qcgaps {

// Element a + b*tau of a real quadratic field, tau the standard generator of
// the ring of integers. Arithmetic that needs tau^2 lives on the field.
struct FieldElement {
  Rational a;
  Rational b;

  FieldElement() = default;
  FieldElement(Rational a_, Rational b_ = Rational()) : a(a_), b(b_) {}  // NOLINT

  bool is_zero() const { return a.sign() == 0 && b.sign() == 0; }
  bool is_integral() const { return a.is_integer() && b.is_integer(); }

  friend FieldElement operator+(const FieldElement& x, const FieldElement& y) { return {x.a + y.a, x.b + y.b}; }
  friend FieldElement operator-(const FieldElement& x, const FieldElement& y) { return {x.a - y.a, x.b - y.b}; }
  friend FieldElement operator*(const Rational& s, const FieldElement& x) { return {s * x.a, s * x.b}; }
  FieldElement operator-() const { return {-a, -b}; }
  friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

enum class TauKind { half, root };  // half: (1+sqrt d)/2, root: sqrt d

class RealQuadraticField {
 public:
  // Throws ValidationError unless d >= 2 is squarefree.
  explicit RealQuadraticField(std::int64_t d);

  std::int64_t d() const { return d_; }
  std::int64_t discriminant() const { return disc_; }
  TauKind tau_kind() const { return kind_; }

  // tau^2 = trace_tau * tau + norm_const
  std::int64_t tau_trace() const { return tau_trace_; }
  std::int64_t tau_sq_const() const { return tau_sq_const_; }
  double tau_real() const { return tau_real_; }
  double tau_conj() const { return tau_conj_; }

  const FieldElement& fundamental_unit() const { return unit_; }
  int unit_norm() const { return unit_norm_; }
  int unit_conjugate_sign() const { return unit_conj_sign_; }
  // S(y) = lambda*y if sigma(lambda) > 0, lambda^2*y otherwise
  const FieldElement& scaling_unit() const { return scaling_; }

  FieldElement tau() const { return {Rational(0), Rational(1)}; }
  FieldElement one() const { return {Rational(1), Rational(0)}; }
  FieldElement from_sqrt_form(const Rational& p, const Rational& q) const;  // p + q*sqrt(d)
  std::pair<Rational, Rational> sqrt_form(const FieldElement& x) const;

  FieldElement mul(const FieldElement& x, const FieldElement& y) const;
  FieldElement conj(const FieldElement& x) const;
  FieldElement inv(const FieldElement& x) const;
  FieldElement div(const FieldElement& x, const FieldElement& y) const { return mul(x, inv(y)); }
  FieldElement pow(const FieldElement& x, int n) const;
  Rational norm(const FieldElement& x) const;
  Rational trace(const FieldElement& x) const;

  // Exact sign of the identity embedding.
  int sign(const FieldElement& x) const;
  int conj_sign(const FieldElement& x) const { return sign(conj(x)); }
  int compare(const FieldElement& x, const FieldElement& y) const { return sign(x - y); }
  bool less(const FieldElement& x, const FieldElement& y) const { return compare(x, y) < 0; }
  FieldElement abs(const FieldElement& x) const { return sign(x) < 0 ? -x : x; }

  double to_double(const FieldElement& x) const;
  long double to_long_double(const FieldElement& x) const;
  double conj_double(const FieldElement& x) const { return to_double(conj(x)); }
  std::pair<double, double> embed(const FieldElement& x) const { return {to_double(x), conj_double(x)}; }

  // Kronecker character (discriminant / n).
  int chi(std::int64_t n) const;
  // sum_{a=1}^{disc} chi(a) B_2(a/disc), exact
  Rational bernoulli_character_sum() const;
  double zeta2() const;

  // Radical string such as "7/2+4√2" or "(1+√5)/2".
  std::string format(const FieldElement& x) const;

 private:
  void find_fundamental_unit();

  std::int64_t d_;
  std::int64_t disc_;
  TauKind kind_;
  std::int64_t tau_trace_;
  std::int64_t tau_sq_const_;
  double tau_real_;
  double tau_conj_;
  FieldElement unit_;
  int unit_norm_ = 0;
  int unit_conj_sign_ = 0;
  FieldElement scaling_;
};

RealQuadraticField make_field(std::int64_t d);
std::pair<double, double> embed(const RealQuadraticField& field, const FieldElement& x);
Rational norm(const RealQuadraticField& field, const FieldElement& x);
int chi(const RealQuadraticField& field, std::int64_t n);
double zeta_K_2(const RealQuadraticField& field);

bool is_squarefree(std::int64_t n);
// Real quadratic fields of class number one (squarefree d < 100).
bool has_class_number_one(std::int64_t d);

// Sign of p + q*sqrt(d) for integers p, q, decided by integer comparison.
int sign_sqrt_form(i128 p, i128 q, std::int64_t d);

// Fractional ideal given by an explicit Z-basis.
struct Ideal {
  FieldElement omega1;
  FieldElement omega2;
  Rational absolute_norm;
};

// Validates linear independence and closure under multiplication by tau.
Ideal make_ideal(const RealQuadraticField& field, const FieldElement& w1, const FieldElement& w2);
Ideal unit_ideal(const RealQuadraticField& field);
// beta * I
Ideal scale_ideal(const RealQuadraticField& field, const Ideal& ideal, const FieldElement& beta);

}  // namespace qcgaps
