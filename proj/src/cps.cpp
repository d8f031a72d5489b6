#include "qcgaps/cps.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <tuple>
#include <ostream>

#include <omp.h>

#include "qcgaps/error.hpp"

namespace qcgaps {

namespace {

// Coordinates are stored in 32-bit fields by the direction kernels.
constexpr double kCoordinateLimit = 2147483647.0 / 2;

}  // namespace

Mat2 preset_physical_matrix(Preset preset) {
  switch (preset) {
    case Preset::ammann_beenker:
      return {1, 0, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0)};
    case Preset::gahler_shield:
      return {1, 0, std::sqrt(3.0) / 2, 0.5};
    case Preset::tubingen_triangle: {
      const double tau = (1 + std::sqrt(5.0)) / 2;
      return {1, 0, (tau - 1) / 2, std::sqrt(2 + tau) / 2};
    }
  }
  throw ValidationError("unknown preset");
}

std::int64_t preset_field_d(Preset preset) {
  switch (preset) {
    case Preset::ammann_beenker:
      return 2;
    case Preset::gahler_shield:
      return 3;
    case Preset::tubingen_triangle:
      return 5;
  }
  throw ValidationError("unknown preset");
}

CutProjectSpec build_spec(const RealQuadraticField& field, const Window& window, const Mat2& g2) {
  const double det = g2.det();
  if (!(std::abs(det) > 0) || !std::isfinite(det)) throw ValidationError("physical matrix is singular");
  double density = window.area() / (static_cast<double>(field.discriminant()) * std::abs(det));
  return CutProjectSpec{field, window, g2, density};
}

CutProjectSpec build_spec(Preset preset, Vec2 w) {
  return build_spec(RealQuadraticField(preset_field_d(preset)), preset_window(preset, w),
                    preset_physical_matrix(preset));
}

double expected_count(const CutProjectSpec& spec, double R) {
  return spec.effective_density * std::numbers::pi * R * R;
}

PointPredicate::PointPredicate(const CutProjectSpec& spec, double R)
    : spec_(&spec), r2_(R * R), tau_(spec.field.tau_real()), tau_conj_(spec.field.tau_conj()) {}

PointEnumerator::PointEnumerator(const CutProjectSpec& spec, double R)
    : spec_(&spec), R_(R), predicate_(spec, R) {
  if (!(R > 0) || !std::isfinite(R)) throw ValidationError("radius must be positive");
  tau_ = spec.field.tau_real();
  tau_conj_ = spec.field.tau_conj();
  tau_gap_ = tau_ - tau_conj_;
  const Mat2& g = spec.physical_matrix;
  u2_ = g.a00 * g.a00 + g.a01 * g.a01;
  v2_ = g.a10 * g.a10 + g.a11 * g.a11;
  uv_ = g.a00 * g.a10 + g.a01 * g.a11;
  const double det = std::abs(g.det());
  // |αu + βv| ≤ R forces |β| ≤ |u| R / |det| and |α| ≤ |v| R / |det|
  beta_max_ = std::sqrt(u2_) * R / det;
  const double alpha_max = std::sqrt(v2_) * R / det;
  std::tie(ylo_, yhi_) = spec.internal_window.vertical_extent();
  auto [xlo, xhi] = spec.internal_window.horizontal_extent();
  const double ymag = std::max(std::abs(ylo_), std::abs(yhi_));
  const double xmag = std::max(std::abs(xlo), std::abs(xhi));
  const double d_bound = (beta_max_ + ymag) / tau_gap_ + 2;
  const double c_bound = beta_max_ + d_bound * std::abs(tau_) + 2;
  const double b_bound = (alpha_max + xmag) / tau_gap_ + 2;
  const double a_bound = alpha_max + b_bound * std::abs(tau_) + 2;
  const double bound = std::max({d_bound, c_bound, b_bound, a_bound});
  if (!(bound < kCoordinateLimit)) {
    throw OverflowError("radius too large: integer coordinates would exceed the exact 32-bit range");
  }
  coord_bound_ = static_cast<std::int64_t>(std::ceil(bound));
  row_lo_ = static_cast<std::int64_t>(std::floor((-beta_max_ - yhi_) / tau_gap_)) - 1;
  row_hi_ = static_cast<std::int64_t>(std::ceil((beta_max_ - ylo_) / tau_gap_)) + 1;
}

void PointEnumerator::for_each_in_rows(std::int64_t row_first, std::int64_t row_last,
                                       const std::function<void(const QuasicrystalPoint&)>& sink) const {
  visit_rows(row_first, row_last, sink);
}

std::vector<QuasicrystalPoint> enumerate_points(const CutProjectSpec& spec, double R) {
  std::vector<QuasicrystalPoint> out;
  PointEnumerator(spec, R).visit_rows(std::numeric_limits<std::int64_t>::min(),
                                      std::numeric_limits<std::int64_t>::max(),
                                      [&](const QuasicrystalPoint& p) { out.push_back(p); });
  return out;
}

std::uint64_t count_points(const CutProjectSpec& spec, double R, int threads) {
  PointEnumerator en(spec, R);
  const std::int64_t first = en.row_begin();
  const std::int64_t last = en.row_end();
  std::uint64_t total = 0;
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : total) num_threads(threads)
  for (std::int64_t row = first; row < last; ++row) {
    std::uint64_t local = 0;
    en.visit_rows(row, row + 1, [&](const QuasicrystalPoint&) { ++local; });
    total += local;
  }
  return total;
}

void write_points_csv(std::ostream& out, const CutProjectSpec& spec, double R) {
  out << "a,b,c,d,x,y\n";
  out << std::setprecision(9);
  PointEnumerator(spec, R).for_each([&](const QuasicrystalPoint& p) {
    out << p.a << ',' << p.b << ',' << p.c << ',' << p.d << ',' << p.position.x << ',' << p.position.y << '\n';
  });
}

}  // namespace qcgaps
