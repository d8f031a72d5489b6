#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "qcgaps/quadfield.hpp"
#include "qcgaps/window.hpp"

namespace qcgaps {

// Cut-and-project set P(W, L_K)·g₂ with L_K the Minkowski embedding of O_K².
struct CutProjectSpec {
  RealQuadraticField field;
  Window internal_window;
  Mat2 physical_matrix;
  double effective_density;  // area(W) / (disc · |det g₂|)
};

// α = a + bτ, β = c + dτ; position = (α, β)·g₂.
struct QuasicrystalPoint {
  std::int64_t a = 0, b = 0, c = 0, d = 0;
  Vec2 position;

  bool is_origin() const { return a == 0 && b == 0 && c == 0 && d == 0; }
};

CutProjectSpec build_spec(const RealQuadraticField& field, const Window& window, const Mat2& g2);
// Presets fix the field (√2, √3, √5) and g₂.
CutProjectSpec build_spec(Preset preset, Vec2 w);
Mat2 preset_physical_matrix(Preset preset);
std::int64_t preset_field_d(Preset preset);

double expected_count(const CutProjectSpec& spec, double R);

// Membership test shared by the enumerator and the brute-force oracle: the
// internal point (σα, σβ) is strictly inside W and ‖position‖ ≤ R.
class PointPredicate {
 public:
  PointPredicate(const CutProjectSpec& spec, double R);
  bool accept(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d, QuasicrystalPoint* out) const {
    const double alpha = std::fma(static_cast<double>(b), tau_, static_cast<double>(a));
    const double salpha = std::fma(static_cast<double>(b), tau_conj_, static_cast<double>(a));
    const double beta = std::fma(static_cast<double>(d), tau_, static_cast<double>(c));
    const double sbeta = std::fma(static_cast<double>(d), tau_conj_, static_cast<double>(c));
    if (!spec_->internal_window.contains({salpha, sbeta})) return false;
    const Vec2 pos = Vec2{alpha, beta} * spec_->physical_matrix;
    if (!(pos.x * pos.x + pos.y * pos.y <= r2_)) return false;
    if (out != nullptr) *out = QuasicrystalPoint{a, b, c, d, pos};
    return true;
  }

 private:
  const CutProjectSpec* spec_;
  double r2_;
  double tau_, tau_conj_;
};

// Angular sector [theta_lo, theta_hi] in physical space, spanning less than
// a half turn. Used only to prune the search; callers still filter by angle.
struct Wedge {
  double theta_lo = 0;
  double theta_hi = 0;
};

// Streams all points of the set in the closed disc of radius R, the origin
// included. The outer loop runs over rows (the τ-coefficient of β); disjoint
// row ranges can be processed independently and concatenated.
class PointEnumerator {
 public:
  // Throws OverflowError if coordinates could leave the 32-bit range that
  // direction records store.
  PointEnumerator(const CutProjectSpec& spec, double R);

  std::int64_t row_begin() const { return row_lo_; }
  std::int64_t row_end() const { return row_hi_ + 1; }
  // Upper bound on |a|, |b|, |c|, |d| of any yielded point.
  std::int64_t coordinate_bound() const { return coord_bound_; }

  void for_each_in_rows(std::int64_t row_first, std::int64_t row_last,
                        const std::function<void(const QuasicrystalPoint&)>& sink) const;
  void for_each(const std::function<void(const QuasicrystalPoint&)>& sink) const {
    for_each_in_rows(row_begin(), row_end(), sink);
  }

  // Templated variant for hot loops.
  template <class Sink>
  void visit_rows(std::int64_t row_first, std::int64_t row_last, Sink&& sink, const Wedge* wedge = nullptr) const;

 private:
  const CutProjectSpec* spec_;
  double R_;
  PointPredicate predicate_;
  double tau_, tau_conj_, tau_gap_;
  double u2_, uv_, v2_;  // |u|², u·v, |v|² for the rows u, v of g₂
  double beta_max_;
  double ylo_, yhi_;
  std::int64_t row_lo_, row_hi_;
  std::int64_t coord_bound_;
};

std::vector<QuasicrystalPoint> enumerate_points(const CutProjectSpec& spec, double R);
std::uint64_t count_points(const CutProjectSpec& spec, double R, int threads = 0);

// CSV a,b,c,d,x,y
void write_points_csv(std::ostream& out, const CutProjectSpec& spec, double R);

template <class Sink>
void PointEnumerator::visit_rows(std::int64_t row_first, std::int64_t row_last, Sink&& sink,
                                 const Wedge* wedge) const {
  const Window& window = spec_->internal_window;
  const Mat2& g = spec_->physical_matrix;
  QuasicrystalPoint point;
  // cross(e, αu + βv) = α·cu + β·cv for the two bounding rays
  double cu1 = 0, cv1 = 0, cu2 = 0, cv2 = 0;
  const double slack = 1e-9 * (R_ + 1);
  if (wedge != nullptr) {
    const double c1 = std::cos(wedge->theta_lo), s1 = std::sin(wedge->theta_lo);
    const double c2 = std::cos(wedge->theta_hi), s2 = std::sin(wedge->theta_hi);
    cu1 = c1 * g.a01 - s1 * g.a00;
    cv1 = c1 * g.a11 - s1 * g.a10;
    cu2 = -(c2 * g.a01 - s2 * g.a00);
    cv2 = -(c2 * g.a11 - s2 * g.a10);
  }
  // Restricts [lo, hi] to {α : α·cu + β·cv ≥ −slack}.
  auto clip = [slack](double cu, double cv, double beta, double& lo, double& hi) {
    const double rhs = -slack - beta * cv;
    if (cu > 0) {
      lo = std::max(lo, rhs / cu);
    } else if (cu < 0) {
      hi = std::min(hi, rhs / cu);
    } else if (rhs > 0) {
      hi = lo - 1;
    }
  };
  for (std::int64_t d = std::max(row_first, row_lo_); d < std::min(row_last, row_hi_ + 1); ++d) {
    const double dd = static_cast<double>(d);
    // β = c + dτ in [−β_max, β_max], σβ = c + dτ' in (ylo, yhi)
    double c_lo = std::max(-beta_max_ - dd * tau_, ylo_ - dd * tau_conj_);
    double c_hi = std::min(beta_max_ - dd * tau_, yhi_ - dd * tau_conj_);
    const auto c_first = static_cast<std::int64_t>(std::floor(c_lo)) - 1;
    const auto c_last = static_cast<std::int64_t>(std::ceil(c_hi)) + 1;
    for (std::int64_t c = c_first; c <= c_last; ++c) {
      const double beta = std::fma(dd, tau_, static_cast<double>(c));
      const double sbeta = std::fma(dd, tau_conj_, static_cast<double>(c));
      auto [s_lo, s_hi] = window.horizontal_slice(sbeta);
      if (!(s_lo < s_hi)) continue;
      // |αu + βv|² ≤ R²
      double disc = beta * beta * uv_ * uv_ - u2_ * (beta * beta * v2_ - R_ * R_);
      if (disc < 0) {
        if (disc < -1e-9 * R_ * R_ * u2_) continue;
        disc = 0;
      }
      const double root = std::sqrt(disc);
      double a_lo_real = (-beta * uv_ - root) / u2_;
      double a_hi_real = (-beta * uv_ + root) / u2_;
      if (wedge != nullptr) {
        clip(cu1, cv1, beta, a_lo_real, a_hi_real);
        clip(cu2, cv2, beta, a_lo_real, a_hi_real);
        if (a_lo_real > a_hi_real) continue;
      }
      const auto b_first = static_cast<std::int64_t>(std::floor((a_lo_real - s_hi) / tau_gap_)) - 1;
      const auto b_last = static_cast<std::int64_t>(std::ceil((a_hi_real - s_lo) / tau_gap_)) + 1;
      for (std::int64_t b = b_first; b <= b_last; ++b) {
        const double bb = static_cast<double>(b);
        double lo = std::max(a_lo_real - bb * tau_, s_lo - bb * tau_conj_);
        double hi = std::min(a_hi_real - bb * tau_, s_hi - bb * tau_conj_);
        if (lo > hi + 2) continue;
        const auto a_first = static_cast<std::int64_t>(std::floor(lo)) - 1;
        const auto a_last = static_cast<std::int64_t>(std::ceil(hi)) + 1;
        for (std::int64_t a = a_first; a <= a_last; ++a) {
          if (predicate_.accept(a, b, c, d, &point)) sink(point);
        }
      }
    }
  }
}

}  // namespace qcgaps
