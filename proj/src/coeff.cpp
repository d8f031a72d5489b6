#include "qcgaps/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qcgaps/error.hpp"

namespace qcgaps {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

Vec2 direction(double theta) { return {std::cos(theta), -std::sin(theta)}; }

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

struct CellIntegral {
  double r2 = 0;
  double r2_nu2 = 0;
};

struct Integrals {
  std::vector<CellIntegral> cells;
  double error = 0;
};

// Index of the cell containing ν. Values within 1e-10 (relative) of a
// breakpoint are treated as the breakpoint itself; used only where ν is
// constant on a set of positive measure.
std::size_t locate_snapped(const std::vector<NuInterval>& cells, const std::vector<double>& breakpoints, double nu) {
  for (double b : breakpoints) {
    if (std::abs(nu - b) <= 1e-10 * b) {
      nu = b;
      break;
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].contains(nu)) return i;
  }
  throw std::logic_error("cells do not cover nu");
}

std::size_t locate(const std::vector<NuInterval>& cells, double nu) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].contains(nu)) return i;
  }
  throw std::logic_error("cells do not cover nu");
}

std::vector<double> cell_breakpoints(const std::vector<NuInterval>& cells) {
  std::vector<double> out;
  for (const auto& c : cells) {
    if (c.lower) out.push_back(c.lower_value);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Splits [lo, hi] at the given interior points (sorted, deduplicated).
std::vector<double> split_points(double lo, double hi, std::vector<double> roots) {
  std::vector<double> pts{lo};
  std::sort(roots.begin(), roots.end());
  for (double t : roots) {
    if (t > pts.back() && t < hi) pts.push_back(t);
  }
  pts.push_back(hi);
  return pts;
}

Integrals integrate_polygon(const Window& window, const std::vector<NuInterval>& cells) {
  const std::vector<double> bps = cell_breakpoints(cells);
  Integrals out;
  out.cells.resize(cells.size());
  for (const SupportPiece& piece : support_pieces(window)) {
    const Vec2 v = piece.v, w = piece.w;
    const double phi_v = std::atan2(v.y, v.x), phi_w = std::atan2(w.y, w.x);
    const double vv = dot(v, v), ww = dot(w, w);
    auto nu_at = [&](double t) { return -dot(w, direction(t)) / dot(v, direction(t)); };
    auto Fr = [&](double t) { return std::tan(t + phi_v) / vv; };
    auto Fr_opp = [&](double t) { return std::tan(t + phi_w) / ww; };

    const bool constant = std::abs(cross(w, v)) <= 1e-12 * std::sqrt(vv * ww);
    std::vector<double> roots;
    if (!constant) {
      for (double b : bps) {
        const Vec2 q = w + b * v;
        const double base = kPi / 2 - std::atan2(q.y, q.x);
        for (int k = -4; k <= 4; ++k) {
          const double t = base + k * kPi;
          if (t > piece.theta_lo && t < piece.theta_hi) roots.push_back(t);
        }
      }
    }
    const auto pts = split_points(piece.theta_lo, piece.theta_hi, roots);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double a = pts[i], b = pts[i + 1];
      if (!(b > a)) continue;
      const double mid = 0.5 * (a + b);
      const std::size_t cell = constant ? locate_snapped(cells, bps, std::sqrt(ww / vv)) : locate(cells, nu_at(mid));
      const double i1 = Fr(b) - Fr(a);
      const double i2 = Fr_opp(b) - Fr_opp(a);
      out.cells[cell].r2 += i1;
      out.cells[cell].r2_nu2 += i2;
      // quadrature cross-check of the closed forms
      const double q1 = Kronrod::integrate(
          [&](double t) {
            const double r = dot(v, direction(t));
            return 1 / (r * r);
          },
          a, b, 15, 1e-12);
      const double q2 = Kronrod::integrate(
          [&](double t) {
            const double r = -dot(w, direction(t));
            return 1 / (r * r);
          },
          a, b, 15, 1e-12);
      out.error += std::abs(q1 - i1) + std::abs(q2 - i2);
    }
  }
  return out;
}

Integrals integrate_disc(const Window& window, const std::vector<NuInterval>& cells) {
  const Disc& disc = window.as_disc();
  const double rho = disc.radius;
  const double c = std::hypot(disc.center.x, disc.center.y);
  Integrals out;
  out.cells.resize(cells.size());
  if (c == 0) {
    const std::size_t cell = locate_snapped(cells, cell_breakpoints(cells), 1.0);
    out.cells[cell].r2 = kTwoPi / (rho * rho);
    out.cells[cell].r2_nu2 = kTwoPi / (rho * rho);
    return out;
  }
  const double phi_c = std::atan2(disc.center.y, disc.center.x);
  auto p_at = [&](double t) { return c * std::cos(t + phi_c); };
  std::vector<double> roots;
  for (double b : cell_breakpoints(cells)) {
    const double p = rho * (1 - b) / (1 + b);
    if (std::abs(p) >= c) continue;
    const double a = std::acos(p / c);
    for (double t : {a - phi_c, -a - phi_c}) roots.push_back(wrap_angle(t));
  }
  const auto pts = split_points(0, kTwoPi, roots);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    if (!(b > a)) continue;
    const double pm = p_at(0.5 * (a + b));
    const std::size_t cell = locate(cells, (rho - pm) / (rho + pm));
    double e1 = 0, e2 = 0;
    const double i1 = Kronrod::integrate(
        [&](double t) {
          const double r = rho + p_at(t);
          return 1 / (r * r);
        },
        a, b, 15, 1e-13, &e1);
    const double i2 = Kronrod::integrate(
        [&](double t) {
          const double r = rho - p_at(t);
          return 1 / (r * r);
        },
        a, b, 15, 1e-13, &e2);
    out.cells[cell].r2 += i1;
    out.cells[cell].r2_nu2 += i2;
    out.error += e1 + e2;
  }
  return out;
}

Integrals integrate_cells(const Window& window, const std::vector<NuInterval>& cells) {
  return window.is_polygon() ? integrate_polygon(window, cells) : integrate_disc(window, cells);
}

double prefactor(const RealQuadraticField& f, const Window& window) {
  const double disc = static_cast<double>(f.discriminant());
  return window.area() / (4 * disc * disc * f.zeta2());
}

// Exact lookup of ν ∈ K, ν > 0.
const NuInterval& interval_exact(const RealQuadraticField& f, const NuPartition& partition, const FieldElement& nu) {
  for (const auto& iv : partition.intervals) {
    if (iv.lower) {
      const int s = f.compare(nu, *iv.lower);
      if (s < 0 || (s == 0 && !iv.lower_closed)) continue;
    }
    if (iv.upper) {
      const int s = f.compare(nu, *iv.upper);
      if (s > 0 || (s == 0 && !iv.upper_closed)) continue;
    }
    return iv;
  }
  throw std::logic_error("partition does not cover nu");
}

// Range [min, max] of ν(θ) over the circle, and the constant values taken on
// sets of positive measure.
struct NuRange {
  double lo = INFINITY;
  double hi = 0;
  std::vector<double> constants;
};

NuRange nu_range(const Window& window) {
  NuRange range;
  if (window.is_polygon()) {
    for (const SupportPiece& piece : support_pieces(window)) {
      const double vv = dot(piece.v, piece.v), ww = dot(piece.w, piece.w);
      if (std::abs(cross(piece.w, piece.v)) <= 1e-12 * std::sqrt(vv * ww)) {
        range.constants.push_back(std::sqrt(ww / vv));
        continue;
      }
      for (double t : {piece.theta_lo, piece.theta_hi}) {
        const double nu = window.support(t).nu;
        range.lo = std::min(range.lo, nu);
        range.hi = std::max(range.hi, nu);
      }
    }
    return range;
  }
  const Disc& disc = window.as_disc();
  const double c = std::hypot(disc.center.x, disc.center.y);
  if (c == 0) {
    range.constants.push_back(1.0);
  } else {
    range.lo = (disc.radius - c) / (disc.radius + c);
    range.hi = (disc.radius + c) / (disc.radius - c);
  }
  return range;
}

CoefficientReport base_report(const RealQuadraticField& f, const Window& window, CoefficientMethod m) {
  CoefficientReport rep;
  rep.method = m;
  rep.d = f.d();
  rep.window_area = window.area();
  rep.prefactor = prefactor(f, window);
  return rep;
}

}  // namespace

std::vector<SupportPiece> support_pieces(const Window& window) {
  if (!window.is_polygon()) throw ValidationError("support pieces are defined for polygons only");
  const auto& verts = window.as_polygon().vertices;
  std::vector<double> cuts{0.0, kTwoPi};
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Vec2 e = verts[(i + 1) % verts.size()] - verts[i];
    const double t = -std::atan2(-e.x, e.y);
    cuts.push_back(wrap_angle(t));
    cuts.push_back(wrap_angle(t + kPi));
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<SupportPiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b - a > 1e-15)) continue;
    const Vec2 u = direction(0.5 * (a + b));
    Vec2 vmax = verts[0], vmin = verts[0];
    for (const Vec2& p : verts) {
      if (dot(p, u) > dot(vmax, u)) vmax = p;
      if (dot(p, u) < dot(vmin, u)) vmin = p;
    }
    pieces.push_back({a, b, vmax, vmin});
  }
  return pieces;
}

double integral_r_inverse_squared(const Window& window) {
  NuInterval all;
  all.lower_value = 0;
  all.upper_value = INFINITY;
  const Integrals in = integrate_cells(window, {all});
  return in.cells[0].r2;
}

void require_class_number_one(const RealQuadraticField& field) {
  if (!has_class_number_one(field.d())) {
    throw InapplicableError("Q(√" + std::to_string(field.d()) +
                            ") is not known to have class number one; the coefficient formula needs it");
  }
}

CoefficientReport leading_coefficient(const RealQuadraticField& field, const Window& window) {
  require_class_number_one(field);
  return leading_coefficient(field, nu_partition(field, unit_ideal(field)), window);
}

CoefficientReport leading_coefficient(const RealQuadraticField& field, const NuPartition& partition,
                                      const Window& window) {
  CoefficientReport rep = base_report(field, window, CoefficientMethod::partition);
  const Integrals in = integrate_cells(window, partition.intervals);
  double sum = 0;
  for (std::size_t j = 0; j < partition.intervals.size(); ++j) {
    const NuInterval& iv = partition.intervals[j];
    const CellIntegral& c = in.cells[j];
    const double contrib = rep.prefactor * (iv.A_value * c.r2 + iv.B_value * c.r2_nu2);
    if (c.r2 == 0 && c.r2_nu2 == 0) continue;
    rep.per_interval.push_back({j, format_interval(field, iv), iv.A_value, iv.B_value, c.r2, c.r2_nu2, contrib});
    sum += contrib;
  }
  rep.a_P = sum;
  double scale = 0;
  for (const auto& iv : partition.intervals) scale = std::max({scale, iv.A_value, iv.B_value});
  rep.quadrature_error_estimate = rep.prefactor * in.error * scale;
  return rep;
}

bool mahler_applicable(const NuPartition& partition, const Window& window) {
  const NuInterval& home = partition.at(1.0);
  const NuRange range = nu_range(window);
  const std::vector<double> bps = cell_breakpoints(partition.intervals);
  for (double c : range.constants) {
    if (&partition.intervals[locate_snapped(partition.intervals, bps, c)] != &home) return false;
  }
  if (range.hi > 0) {
    const double tol = 1e-12;
    if (range.lo < home.lower_value * (1 - tol)) return false;
    if (home.upper && range.hi > home.upper_value * (1 + tol)) return false;
  }
  return true;
}

CoefficientReport leading_coefficient_mahler(const RealQuadraticField& field, const Window& window) {
  require_class_number_one(field);
  return leading_coefficient_mahler(field, nu_partition(field, unit_ideal(field)), window);
}

CoefficientReport leading_coefficient_mahler(const RealQuadraticField& field, const NuPartition& partition,
                                             const Window& window) {
  if (!mahler_applicable(partition, window)) {
    throw InapplicableError("mahler form inapplicable: ν(θ) leaves the interval containing 1");
  }
  CoefficientReport rep = base_report(field, window, CoefficientMethod::mahler);
  const NuInterval& home = partition.at(1.0);
  const double disc = static_cast<double>(field.discriminant());
  const double polar = polar_area(window);
  rep.a_P = window.area() * polar * (home.A_value + home.B_value) / (2 * disc * disc * field.zeta2());
  const double integral = 2 * polar;
  rep.per_interval.push_back({partition.index_of(1.0), format_interval(field, home), home.A_value, home.B_value,
                              integral, integral, rep.a_P});
  return rep;
}

std::vector<FoldedInterval> folded_form(const RealQuadraticField& f, const NuPartition& partition) {
  std::vector<FieldElement> points;
  for (const Breakpoint& b : partition.breakpoints) {
    points.push_back(b.value);
    points.push_back(f.inv(b.value));
  }
  std::sort(points.begin(), points.end(), [&](const auto& x, const auto& y) { return f.less(x, y); });
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto coefficient_at = [&](const FieldElement& nu) {
    return interval_exact(f, partition, nu).A + interval_exact(f, partition, f.inv(nu)).B;
  };

  // Elementary cells in order: (0,p0), {p0}, (p0,p1), {p1}, ..., (pn,∞).
  struct Cell {
    std::optional<FieldElement> lo, hi;
    bool lo_closed, hi_closed;
    FieldElement coef;
  };
  std::vector<Cell> cells;
  const Rational half(1, 2);
  for (std::size_t i = 0; i <= points.size(); ++i) {
    std::optional<FieldElement> lo, hi;
    FieldElement sample;
    if (i > 0) lo = points[i - 1];
    if (i < points.size()) hi = points[i];
    if (lo && hi) {
      sample = half * (*lo + *hi);
    } else if (hi) {
      sample = half * *hi;
    } else if (lo) {
      sample = *lo + f.one();
    } else {
      sample = f.one();
    }
    cells.push_back({lo, hi, false, false, coefficient_at(sample)});
    if (hi) cells.push_back({hi, hi, true, true, coefficient_at(*hi)});
  }

  std::vector<Cell> merged;
  for (const Cell& c : cells) {
    if (!merged.empty() && merged.back().coef == c.coef) {
      merged.back().hi = c.hi;
      merged.back().hi_closed = c.hi_closed;
    } else {
      merged.push_back(c);
    }
  }

  std::vector<FoldedInterval> out;
  for (const Cell& c : merged) {
    FoldedInterval fi;
    NuInterval& iv = fi.interval;
    iv.lower = c.lo;
    iv.upper = c.hi;
    iv.lower_closed = c.lo.has_value() && c.lo_closed;
    iv.upper_closed = c.hi.has_value() && c.hi_closed;
    iv.lower_value = c.lo ? f.to_double(*c.lo) : 0.0;
    iv.upper_value = c.hi ? f.to_double(*c.hi) : INFINITY;
    iv.A = c.coef;
    iv.A_value = f.to_double(c.coef);
    fi.coefficient = c.coef;
    fi.coefficient_value = iv.A_value;
    out.push_back(std::move(fi));
  }
  return out;
}

CoefficientReport leading_coefficient_folded(const RealQuadraticField& field, const NuPartition& partition,
                                             const Window& window) {
  CoefficientReport rep = base_report(field, window, CoefficientMethod::folded);
  const auto folded = folded_form(field, partition);
  std::vector<NuInterval> cells;
  for (const auto& fi : folded) cells.push_back(fi.interval);
  const Integrals in = integrate_cells(window, cells);
  double scale = 0;
  for (std::size_t j = 0; j < folded.size(); ++j) {
    const CellIntegral& c = in.cells[j];
    scale = std::max(scale, folded[j].coefficient_value);
    if (c.r2 == 0) continue;
    const double contrib = rep.prefactor * folded[j].coefficient_value * c.r2;
    rep.per_interval.push_back(
        {j, format_interval(field, cells[j]), folded[j].coefficient_value, 0.0, c.r2, 0.0, contrib});
    rep.a_P += contrib;
  }
  rep.quadrature_error_estimate = rep.prefactor * in.error * scale;
  return rep;
}

double visible_density_symmetric_ab(const RealQuadraticField& field) {
  if (field.d() != 2) throw InapplicableError("the visible-point density formula is stated for Q(√2) only");
  const double sigma_lambda = field.conj_double(field.fundamental_unit());
  return 2 * std::abs(sigma_lambda) / field.zeta2();
}

std::string method_name(CoefficientMethod m) {
  switch (m) {
    case CoefficientMethod::partition:
      return "partition";
    case CoefficientMethod::mahler:
      return "mahler";
    case CoefficientMethod::folded:
      return "folded";
  }
  return "unknown";
}

}  // namespace qcgaps
