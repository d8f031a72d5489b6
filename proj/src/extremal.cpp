#include "qcgaps/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qcgaps/error.hpp"

namespace qcgaps {

namespace {

constexpr double kBoxPointLimit = 5e7;

long double value_of(const RealQuadraticField& f, const FieldElement& x) { return f.to_long_double(x); }
long double conj_value(const RealQuadraticField& f, const FieldElement& x) { return f.to_long_double(f.conj(x)); }

// Rational numbers just below / above a double, on a dyadic grid.
Rational rational_below(double x) {
  constexpr double scale = 1 << 20;
  return Rational(static_cast<i128>(std::floor(x * scale)) - 1, static_cast<i128>(scale));
}
Rational rational_above(double x) {
  constexpr double scale = 1 << 20;
  return Rational(static_cast<i128>(std::ceil(x * scale)) + 1, static_cast<i128>(scale));
}

FieldElement lambda_squared(const RealQuadraticField& f) { return f.pow(f.fundamental_unit(), 2); }

// Finds β ∈ I with 0 < β < 1 and σ(β) of the requested sign; returns σ(β).
FieldElement quadrant_bound(const RealQuadraticField& f, const Ideal& ideal, int sign) {
  Rational Y(1);
  for (int iter = 0; iter < 200; ++iter) {
    FieldElement lo = sign > 0 ? FieldElement(Rational(0)) : FieldElement(-Y);
    FieldElement hi = sign > 0 ? FieldElement(Y) : FieldElement(Rational(0));
    auto pts = lattice_points_in_box(f, ideal, FieldElement(Rational(0)), f.one(), lo, hi);
    for (const auto& p : pts) {
      if (f.conj_sign(p) == sign) return f.conj(p);
    }
    Y *= Rational(2);
  }
  throw std::runtime_error("no lattice point found in the unit strip");
}

bool sigma_less(const RealQuadraticField& f, const FieldElement& x, const FieldElement& y) {
  return f.sign(f.conj(y) - f.conj(x)) > 0;
}

// Staircase records: points sorted by α whose |σ| is a strict running minimum.
std::vector<FieldElement> staircase(const RealQuadraticField& f, const std::vector<FieldElement>& pts, int sign) {
  std::vector<FieldElement> out;
  std::optional<FieldElement> best;
  for (const auto& p : pts) {
    if (f.conj_sign(p) != sign) continue;
    const FieldElement mag = sign > 0 ? p : -p;
    if (!best || sigma_less(f, mag, *best)) {
      best = mag;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<FieldElement> staircase_reps(const RealQuadraticField& f, const Ideal& ideal, int sign) {
  const FieldElement period = lambda_squared(f);
  const FieldElement top = f.mul(period, period);
  const FieldElement Y = quadrant_bound(f, ideal, sign);
  const double estimate = static_cast<double>(value_of(f, top)) * std::abs(static_cast<double>(value_of(f, Y))) /
                          std::sqrt(static_cast<double>(f.discriminant()));
  if (estimate > kBoxPointLimit) throw OverflowError("fundamental unit too large for staircase enumeration");
  const FieldElement zero(Rational(0));
  auto pts = sign > 0 ? lattice_points_in_box(f, ideal, zero, top, zero, Y)
                      : lattice_points_in_box(f, ideal, zero, top, Y, zero);
  auto steps = staircase(f, pts, sign);
  std::vector<FieldElement> reps, upper;
  for (const auto& s : steps) {
    if (f.compare(s, f.one()) < 0) continue;
    if (f.compare(s, period) < 0) {
      reps.push_back(s);
    } else {
      upper.push_back(s);
    }
  }
  // The staircase is invariant under multiplication by λ².
  if (upper.size() != reps.size()) throw std::logic_error("staircase is not periodic under the unit");
  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (!(f.mul(reps[i], period) == upper[i])) throw std::logic_error("staircase is not periodic under the unit");
  }
  return reps;
}

// Writes α = r·λ^{2k} with r ∈ [1, λ²).
std::pair<FieldElement, int> reduce(const RealQuadraticField& f, const FieldElement& alpha) {
  if (f.sign(alpha) <= 0) throw ValidationError("extremal elements are positive");
  const FieldElement period = lambda_squared(f);
  const FieldElement inv = f.inv(period);
  FieldElement r = alpha;
  int k = 0;
  while (f.compare(r, f.one()) < 0) {
    r = f.mul(r, period);
    --k;
  }
  while (f.compare(r, period) >= 0) {
    r = f.mul(r, inv);
    ++k;
  }
  return {r, k};
}

bool contains_element(const std::vector<FieldElement>& v, const FieldElement& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

FieldElement scale_by_period(const RealQuadraticField& f, const FieldElement& x, int k) {
  if (k == 0) return x;
  return f.mul(x, f.pow(lambda_squared(f), k));
}

bool inside_interval(long double y, long double sigma, long double nu) {
  return sigma > 0 ? y * sigma < 1 : y * (-sigma) < nu;
}

std::vector<FieldElement> chain_for(const RealQuadraticField& f, const NuInterval& iv) {
  std::vector<FieldElement> chain = iv.plus_reps;
  chain.insert(chain.end(), iv.minus_reps.begin(), iv.minus_reps.end());
  std::sort(chain.begin(), chain.end(), [&](const auto& x, const auto& y) { return f.less(x, y); });
  return chain;
}

std::string decimal(double x) {
  std::ostringstream os;
  os << std::setprecision(9) << x;
  return os.str();
}

}  // namespace

bool NuInterval::contains(double nu) const {
  const bool above = lower_closed ? nu >= lower_value : nu > lower_value;
  if (!above) return false;
  if (!upper) return true;
  return upper_closed ? nu <= upper_value : nu < upper_value;
}

std::size_t NuPartition::index_of(double nu) const {
  if (!(nu > 0)) throw ValidationError("nu must be positive");
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].contains(nu)) return i;
  }
  throw std::logic_error("partition does not cover nu");
}

std::vector<FieldElement> lattice_points_in_box(const RealQuadraticField& f, const Ideal& ideal,
                                                const FieldElement& lo, const FieldElement& hi,
                                                const FieldElement& slo, const FieldElement& shi) {
  const double x1 = f.to_double(ideal.omega1), s1 = f.conj_double(ideal.omega1);
  const double x2 = f.to_double(ideal.omega2), s2 = f.conj_double(ideal.omega2);
  const double xlo = f.to_double(lo), xhi = f.to_double(hi);
  const double ylo = f.to_double(slo), yhi = f.to_double(shi);
  const double det = x1 * s2 - x2 * s1;
  double mlo = std::numeric_limits<double>::infinity(), mhi = -mlo;
  for (double x : {xlo, xhi}) {
    for (double y : {ylo, yhi}) {
      const double m = (x * s2 - y * x2) / det;
      mlo = std::min(mlo, m);
      mhi = std::max(mhi, m);
    }
  }
  const double tol = 1e-9 * (1 + std::max({std::abs(xlo), std::abs(xhi), std::abs(ylo), std::abs(yhi)}));
  std::vector<FieldElement> out;
  for (auto m = static_cast<std::int64_t>(std::floor(mlo)) - 1; m <= static_cast<std::int64_t>(std::ceil(mhi)) + 1;
       ++m) {
    const double md = static_cast<double>(m);
    double nlo = -std::numeric_limits<double>::infinity(), nhi = -nlo;
    auto restrict = [&](double coef, double base, double a, double b) {
      if (coef == 0) return;
      double u = (a - base) / coef, v = (b - base) / coef;
      if (u > v) std::swap(u, v);
      nlo = std::max(nlo, u);
      nhi = std::min(nhi, v);
    };
    restrict(x2, md * x1, xlo, xhi);
    restrict(s2, md * s1, ylo, yhi);
    if (!(nlo <= nhi + 2)) continue;
    for (auto n = static_cast<std::int64_t>(std::floor(nlo)) - 1; n <= static_cast<std::int64_t>(std::ceil(nhi)) + 1;
         ++n) {
      const double nd = static_cast<double>(n);
      const double x = md * x1 + nd * x2, y = md * s1 + nd * s2;
      if (x <= xlo - tol || x >= xhi + tol || y < ylo - tol || y > yhi + tol) continue;
      const FieldElement e = Rational(m) * ideal.omega1 + Rational(n) * ideal.omega2;
      if (f.compare(e, lo) <= 0 || f.compare(e, hi) >= 0) continue;
      const FieldElement se = f.conj(e);
      if (f.compare(se, slo) < 0 || f.compare(se, shi) > 0) continue;
      out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return f.less(a, b); });
  return out;
}

ExtremalSet extremal_points(const RealQuadraticField& field, const Ideal& ideal) {
  ExtremalSet set;
  set.plus_reps = staircase_reps(field, ideal, +1);
  set.minus_reps = staircase_reps(field, ideal, -1);
  set.period = lambda_squared(field);
  set.scaling = field.scaling_unit();
  return set;
}

std::vector<FieldElement> expand_orbit(const RealQuadraticField& f, const std::vector<FieldElement>& reps,
                                       const FieldElement& lo, const FieldElement& hi) {
  std::vector<FieldElement> out;
  if (f.compare(lo, hi) >= 0) return out;
  const FieldElement period = lambda_squared(f);
  for (const auto& r : reps) {
    auto [x, k] = reduce(f, lo);
    (void)x;
    // start one period below the reduced position of lo
    FieldElement e = scale_by_period(f, r, k - 1);
    while (f.compare(e, hi) < 0) {
      if (f.compare(e, lo) >= 0) out.push_back(e);
      e = f.mul(e, period);
    }
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return f.less(a, b); });
  return out;
}

CriticalValue critical_nu(const RealQuadraticField& f, const ExtremalSet& set, const FieldElement& alpha) {
  auto [r, k] = reduce(f, alpha);
  const bool positive = contains_element(set.plus_reps, r);
  if (!positive && !contains_element(set.minus_reps, r)) throw ValidationError("element is not extremal");
  const auto& opposite = positive ? set.minus_reps : set.plus_reps;
  // largest opposite-sign staircase element below r
  auto below = expand_orbit(f, opposite, f.div(r, set.period), r);
  if (below.empty()) throw std::logic_error("empty staircase period");
  const FieldElement beta = below.back();
  CriticalValue cv;
  cv.alpha = alpha;
  cv.positive = positive;
  cv.witness_beta = scale_by_period(f, beta, k);
  cv.nu = positive ? f.conj(f.div(-beta, r)) : f.conj(f.div(-r, beta));
  cv.nu_alpha = f.to_double(cv.nu);
  return cv;
}

CriticalValue critical_nu(const RealQuadraticField& f, const Ideal& ideal, const FieldElement& alpha) {
  return critical_nu(f, extremal_points(f, ideal), alpha);
}

CriticalValue critical_nu_oracle(const RealQuadraticField& f, const Ideal& ideal, const FieldElement& alpha) {
  const int s = f.conj_sign(alpha);
  if (f.sign(alpha) <= 0 || s == 0) throw ValidationError("element is not extremal");
  const FieldElement zero(Rational(0));
  const FieldElement sa = f.conj(alpha);
  auto blockers = s > 0 ? lattice_points_in_box(f, ideal, zero, alpha, zero, sa)
                        : lattice_points_in_box(f, ideal, zero, alpha, sa, zero);
  if (!blockers.empty()) throw ValidationError("element is not extremal");
  Rational T(1);
  for (int iter = 0; iter < 200; ++iter) {
    auto pts = s > 0 ? lattice_points_in_box(f, ideal, zero, alpha, FieldElement(-T), zero)
                     : lattice_points_in_box(f, ideal, zero, alpha, zero, FieldElement(T));
    std::optional<FieldElement> best;
    for (const auto& p : pts) {
      if (f.conj_sign(p) != -s) continue;
      const FieldElement mag = s > 0 ? -p : p;
      if (!best || sigma_less(f, mag, s > 0 ? -*best : *best)) best = p;
    }
    if (best) {
      CriticalValue cv;
      cv.alpha = alpha;
      cv.positive = s > 0;
      cv.witness_beta = *best;
      cv.nu = s > 0 ? f.conj(f.div(-*best, alpha)) : f.conj(f.div(-alpha, *best));
      cv.nu_alpha = f.to_double(cv.nu);
      return cv;
    }
    T *= Rational(2);
  }
  throw std::runtime_error("critical value search did not terminate");
}

NuPartition nu_partition(const RealQuadraticField& f, const Ideal& ideal) {
  const ExtremalSet set = extremal_points(f, ideal);
  std::vector<CriticalValue> crit;
  for (const auto& a : set.plus_reps) crit.push_back(critical_nu(f, set, a));
  for (const auto& a : set.minus_reps) crit.push_back(critical_nu(f, set, a));

  NuPartition part;
  for (const auto& c : crit) {
    const BreakpointSide side = c.positive ? BreakpointSide::plus : BreakpointSide::minus;
    auto it = std::find_if(part.breakpoints.begin(), part.breakpoints.end(),
                           [&](const Breakpoint& b) { return b.value == c.nu; });
    if (it == part.breakpoints.end()) {
      part.breakpoints.push_back({c.nu, c.nu_alpha, side});
    } else if (it->side != side) {
      it->side = BreakpointSide::both;
    }
  }
  std::sort(part.breakpoints.begin(), part.breakpoints.end(),
            [&](const Breakpoint& x, const Breakpoint& y) { return f.less(x.value, y.value); });

  // Closure rule: E⁺ breakpoints open the interval above, E⁻ breakpoints
  // close the interval below, shared ones form a singleton.
  struct Edge {
    std::optional<FieldElement> value;
    bool closed;
  };
  Edge lower{std::nullopt, false};
  auto emit = [&](Edge lo, Edge hi) {
    NuInterval iv;
    iv.lower = lo.value;
    iv.lower_closed = lo.closed;
    iv.upper = hi.value;
    iv.upper_closed = hi.closed;
    part.intervals.push_back(iv);
  };
  for (const auto& b : part.breakpoints) {
    switch (b.side) {
      case BreakpointSide::plus:
        emit(lower, {b.value, false});
        lower = {b.value, true};
        break;
      case BreakpointSide::minus:
        emit(lower, {b.value, true});
        lower = {b.value, false};
        break;
      case BreakpointSide::both:
        emit(lower, {b.value, false});
        emit({b.value, true}, {b.value, true});
        lower = {b.value, false};
        break;
    }
  }
  emit(lower, {std::nullopt, false});

  const FieldElement period = set.period;
  for (auto& iv : part.intervals) {
    // exact sample point of the interval
    FieldElement nu;
    if (iv.lower && iv.upper) {
      nu = Rational(1, 2) * (*iv.lower + *iv.upper);
    } else if (iv.upper) {
      nu = Rational(1, 2) * *iv.upper;
    } else if (iv.lower) {
      nu = *iv.lower + f.one();
    } else {
      nu = f.one();
    }
    for (const auto& c : crit) {
      const int cmp = f.compare(nu, c.nu);
      if (c.positive && cmp < 0) iv.plus_reps.push_back(c.alpha);
      if (!c.positive && cmp > 0) iv.minus_reps.push_back(c.alpha);
    }
    auto chain = chain_for(f, iv);
    FieldElement A(Rational(0)), B(Rational(0));
    for (std::size_t j = 0; j < chain.size(); ++j) {
      const FieldElement& a = chain[j];
      const FieldElement next = j + 1 < chain.size() ? chain[j + 1] : f.mul(chain[0], period);
      const FieldElement sa = f.conj(a);
      const FieldElement term =
          Rational(1, 2) * f.mul(f.mul(sa, sa), f.mul(next, next) - f.mul(a, a));
      if (f.sign(sa) > 0) {
        A = A + term;
      } else {
        B = B + term;
      }
    }
    iv.A = A;
    iv.B = B;
    iv.A_value = f.to_double(A);
    iv.B_value = f.to_double(B);
    iv.lower_value = iv.lower ? f.to_double(*iv.lower) : 0.0;
    iv.upper_value = iv.upper ? f.to_double(*iv.upper) : std::numeric_limits<double>::infinity();
  }
  return part;
}

std::vector<FieldElement> nu_extremal_reps(const RealQuadraticField& f, const ExtremalSet& set,
                                           const std::vector<CriticalValue>& critical, double nu) {
  (void)set;
  std::vector<FieldElement> out;
  for (const auto& c : critical) {
    if (c.positive ? nu < c.nu_alpha : nu > c.nu_alpha) out.push_back(c.alpha);
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) { return f.less(a, b); });
  return out;
}

std::vector<FieldElement> nu_extremal_bruteforce(const RealQuadraticField& f, const Ideal& ideal, double nu) {
  if (!(nu > 0)) throw ValidationError("nu must be positive");
  const FieldElement period = lambda_squared(f);
  const double yp = static_cast<double>(value_of(f, quadrant_bound(f, ideal, +1)));
  const double ym = -static_cast<double>(value_of(f, quadrant_bound(f, ideal, -1)));
  const double h = std::max(yp, ym) * std::max({1.0, nu, 1.0 / nu});
  const FieldElement zero(Rational(0));
  auto pts = lattice_points_in_box(f, ideal, zero, period, FieldElement(rational_below(-h)),
                                   FieldElement(rational_above(h)));
  std::vector<long double> sig(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) sig[i] = conj_value(f, pts[i]);
  const long double nul = nu;
  std::vector<FieldElement> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (f.compare(pts[i], f.one()) < 0) continue;
    const long double s = sig[i];
    const long double lo = s > 0 ? -nul * s : s;
    const long double hi = s > 0 ? s : -s / nul;
    bool empty = true;
    // pts is sorted by α, so candidates below pts[i] come first
    for (std::size_t j = 0; j < i && empty; ++j) {
      if (sig[j] >= lo && sig[j] <= hi) empty = false;
    }
    if (empty) out.push_back(pts[i]);
  }
  return out;
}

FieldElement alpha_min(const RealQuadraticField& f, const NuPartition& partition, double nu, double y) {
  if (!(nu > 0) || !(y > 0)) throw ValidationError("nu and y must be positive");
  const auto chain = chain_for(f, partition.at(nu));
  const FieldElement period = lambda_squared(f);
  const long double nul = nu, yl = y;
  auto inside = [&](const FieldElement& a) { return inside_interval(yl, conj_value(f, a), nul); };
  const FieldElement& c0 = chain.front();
  // threshold of c0 is 1/|b|; thresholds grow by λ² per period
  const long double s0 = conj_value(f, c0);
  const long double t0 = s0 > 0 ? 1 / s0 : nul / -s0;
  int k = static_cast<int>(std::floor(std::log(yl / t0) / std::log(value_of(f, period))));
  while (inside(scale_by_period(f, c0, k))) --k;
  while (!inside(scale_by_period(f, c0, k + 1))) ++k;
  for (std::size_t j = 1; j <= chain.size(); ++j) {
    const FieldElement e = j < chain.size() ? scale_by_period(f, chain[j], k) : scale_by_period(f, c0, k + 1);
    if (inside(e)) return e;
  }
  throw std::logic_error("threshold ladder lookup failed");
}

FieldElement alpha_min(const RealQuadraticField& f, const Ideal& ideal, double nu, double y) {
  return alpha_min(f, nu_partition(f, ideal), nu, y);
}

FieldElement alpha_min_oracle(const RealQuadraticField& f, const Ideal& ideal, double nu, double y) {
  if (!(nu > 0) || !(y > 0)) throw ValidationError("nu and y must be positive");
  const long double nul = nu, yl = y;
  const FieldElement zero(Rational(0));
  const FieldElement slo(rational_below(-nu / y)), shi(rational_above(1 / y));
  Rational X(1);
  for (int iter = 0; iter < 400; ++iter) {
    auto pts = lattice_points_in_box(f, ideal, zero, FieldElement(X), slo, shi);
    for (const auto& p : pts) {
      if (inside_interval(yl, conj_value(f, p), nul)) return p;
    }
    X *= Rational(2);
  }
  throw std::runtime_error("alpha_min search did not terminate");
}

double alpha_square_integral(const RealQuadraticField& f, const Ideal& ideal, double nu) {
  const long double top = value_of(f, lambda_squared(f));
  long double y = 1;
  long double total = 0;
  FieldElement a = alpha_min_oracle(f, ideal, nu, 1.0);
  while (y < top) {
    const long double s = conj_value(f, a);
    const long double jump = s > 0 ? 1 / s : static_cast<long double>(nu) / -s;
    const long double end = std::min(jump, top);
    const long double av = value_of(f, a);
    total += av * av * (1 / (y * y) - 1 / (end * end)) / 2;
    y = end;
    if (y >= top) break;
    a = alpha_min_oracle(f, ideal, nu, static_cast<double>(y * (1 + 1e-13L)));
  }
  return static_cast<double>(total);
}

std::string format_interval(const RealQuadraticField& f, const NuInterval& iv) {
  std::ostringstream os;
  os << (iv.lower_closed ? '[' : '(') << (iv.lower ? f.format(*iv.lower) : "0") << ", "
     << (iv.upper ? f.format(*iv.upper) : "∞") << (iv.upper_closed ? ']' : ')');
  return os.str();
}

std::string format_partition(const RealQuadraticField& f, const ExtremalSet& set,
                             const std::vector<CriticalValue>& critical, const NuPartition& partition) {
  std::ostringstream os;
  auto list = [&](const std::vector<FieldElement>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + f.format(v[i]);
    return s;
  };
  os << "field Q(√" << f.d() << "), discriminant " << f.discriminant() << ", λ = " << f.format(f.fundamental_unit())
     << ", λ² = " << f.format(set.period) << "\n";
  os << "E+ representatives mod λ²: {" << list(set.plus_reps) << "}\n";
  os << "E- representatives mod λ²: {" << list(set.minus_reps) << "}\n";
  os << "critical values:\n";
  for (const auto& c : critical) {
    os << "  ν[" << f.format(c.alpha) << "] = " << f.format(c.nu) << " ≈ " << decimal(c.nu_alpha) << "  ("
       << (c.positive ? "E+" : "E-") << ", witness " << f.format(c.witness_beta) << ")\n";
  }
  os << "partition:\n";
  for (std::size_t j = 0; j < partition.intervals.size(); ++j) {
    const auto& iv = partition.intervals[j];
    os << "  S" << j + 1 << " = " << format_interval(f, iv) << "  ≈ (" << decimal(iv.lower_value) << ", "
       << decimal(iv.upper_value) << ")\n";
    os << "     E = {" << list(chain_for(f, iv)) << "}\n";
    os << "     A = " << f.format(iv.A) << " ≈ " << decimal(iv.A_value) << ",  B = " << f.format(iv.B)
       << " ≈ " << decimal(iv.B_value) << "\n";
  }
  return os.str();
}

}  // namespace qcgaps
