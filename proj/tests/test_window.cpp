#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qcgaps/coeff.hpp"
#include "qcgaps/error.hpp"
#include "qcgaps/window.hpp"

using namespace qcgaps;

namespace {

constexpr double kPi = std::numbers::pi;

double regular_polygon_area(int n, double circumradius) {
  return 0.5 * n * circumradius * circumradius * std::sin(2 * kPi / n);
}

// sup of w·u(θ) over a dense sample of the boundary
double sampled_support(const Window& W, double theta) {
  const Vec2 u{std::cos(theta), -std::sin(theta)};
  double best = -INFINITY;
  if (W.is_polygon()) {
    const auto& v = W.as_polygon().vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 a = v[i], b = v[(i + 1) % v.size()];
      for (int k = 0; k <= 200; ++k) best = std::max(best, dot(a + (k / 200.0) * (b - a), u));
    }
  } else {
    const Disc& d = W.as_disc();
    for (int k = 0; k < 20000; ++k) {
      const double t = 2 * kPi * k / 20000;
      best = std::max(best, dot(d.center + d.radius * Vec2{std::cos(t), std::sin(t)}, u));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("preset window areas") {
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0), tau = (1 + std::sqrt(5.0)) / 2;
  const double ab = regular_polygon_area(8, std::sqrt(1 + std::sqrt(0.5))) * s2;
  const double gh = regular_polygon_area(12, std::sqrt(2 + s3)) * 2;
  const double tt_r = s2 / 20 * std::pow(5 + std::sqrt(5.0), 1.5);
  const double tt = regular_polygon_area(10, tt_r) * 2 * std::sqrt((2 + tau) / 5);
  CHECK(preset_window(Preset::ammann_beenker, {0, 0}).area() == doctest::Approx(ab).epsilon(1e-13));
  CHECK(preset_window(Preset::gahler_shield, {1.7, 0.6}).area() == doctest::Approx(gh).epsilon(1e-13));
  CHECK(preset_window(Preset::tubingen_triangle, {0.5, 0.4}).area() == doctest::Approx(tt).epsilon(1e-13));
}

TEST_CASE("window validation") {
  CHECK_THROWS_AS(Window::polygon({{1, 1}, {2, 1}, {2, 2}}), ValidationError);            // origin outside
  CHECK_THROWS_AS(Window::polygon({{-1, -1}, {1, -1}, {0, -0.5}, {1, 1}, {-1, 1}}), ValidationError);  // not convex
  CHECK_THROWS_AS(Window::polygon({{-1, 0}, {1, 0}}), ValidationError);
  CHECK_THROWS_AS(Window::disc({2, 0}, 1), ValidationError);
  CHECK_THROWS_AS(Window::disc({0, 0}, -1), ValidationError);
  CHECK_THROWS_AS(preset_window(Preset::ammann_beenker, {5, 5}), ValidationError);
  // clockwise input is accepted and reoriented
  const Window cw = Window::polygon({{-1, -1}, {-1, 1}, {1, 1}, {1, -1}});
  CHECK(cw.area() == doctest::Approx(4));
}

TEST_CASE("windows are open") {
  const Window sq = Window::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(sq.contains({0, 0}));
  CHECK(sq.contains({0.999999, -0.999999}));
  CHECK_FALSE(sq.contains({1, 0}));
  CHECK_FALSE(sq.contains({-1, -1}));
  const Window d = Window::disc({0.5, 0}, 1);
  CHECK_FALSE(d.contains({1.5, 0}));
  CHECK(d.contains({1.4999, 0}));
}

TEST_CASE("support radius against boundary sampling, and ν(θ+π) = 1/ν(θ)") {
  std::vector<Window> ws = {preset_window(Preset::ammann_beenker, {0.8, 0.1}),
                            preset_window(Preset::gahler_shield, {1.5, -0.3}),
                            preset_window(Preset::tubingen_triangle, {1.3, 0.4}), Window::disc({0.3, -0.4}, 1.2)};
  for (const Window& W : ws) {
    for (int k = 0; k < 37; ++k) {
      const double t = 0.17 * k;
      CHECK(W.support_radius(t) == doctest::Approx(sampled_support(W, t)).epsilon(2e-4));
      const SupportInterval a = W.support(t), b = W.support(t + kPi);
      CHECK(a.r > 0);
      CHECK(a.nu * b.nu == doctest::Approx(1).epsilon(1e-12));
    }
  }
}

TEST_CASE("horizontal slices agree with membership") {
  const Window W = preset_window(Preset::gahler_shield, {0.3, 1.2});
  std::mt19937_64 rng(7);
  const auto [ylo, yhi] = W.vertical_extent();
  std::uniform_real_distribution<double> uy(ylo - 0.5, yhi + 0.5), ux(-10, 10);
  for (int i = 0; i < 2000; ++i) {
    const double y = uy(rng), x = ux(rng);
    const auto [lo, hi] = W.horizontal_slice(y);
    const bool inside_slice = lo < hi && x > lo && x < hi;
    // points within 1e-9 of the boundary are not informative
    if (std::abs(x - lo) > 1e-9 && std::abs(x - hi) > 1e-9) CHECK(inside_slice == W.contains({x, y}));
  }
}

TEST_CASE("polar set is an involution and matches the polar area") {
  for (const Window& W : {preset_window(Preset::ammann_beenker, {0.9, 0.3}),
                          preset_window(Preset::tubingen_triangle, {0.15, 0.3})}) {
    const Window back = polar_set(polar_set(W));
    const auto& v = W.as_polygon().vertices;
    const auto& b = back.as_polygon().vertices;
    REQUIRE(v.size() == b.size());
    // same vertex set up to a cyclic shift
    std::size_t shift = 0;
    for (; shift < b.size(); ++shift) {
      if (std::hypot(b[shift].x - v[0].x, b[shift].y - v[0].y) < 1e-12) break;
    }
    REQUIRE(shift < b.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Vec2 p = b[(i + shift) % b.size()];
      CHECK(std::hypot(p.x - v[i].x, p.y - v[i].y) < 1e-12);
    }
    CHECK(polar_area(W) == doctest::Approx(polar_set(W).area()).epsilon(1e-14));
  }
  // square [-1,1]² has polar the diamond |x|+|y| ≤ 1
  const Window sq = Window::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  CHECK(polar_set(sq).area() == doctest::Approx(2));
  CHECK(polar_area(Window::disc({0, 0}, 2)) == doctest::Approx(kPi / 4));
  CHECK_THROWS_AS(polar_set(Window::disc({0.1, 0}, 1)), ValidationError);
}

TEST_CASE("polar identity 2 Area(W*) = ∫ r^-2") {
  for (const Window& W : {preset_window(Preset::ammann_beenker, {0, 0}), preset_window(Preset::gahler_shield, {0, 0}),
                          preset_window(Preset::tubingen_triangle, {0, 0}), Window::disc({0.2, 0.5}, 0.9)}) {
    CHECK(2 * polar_area(W) == doctest::Approx(integral_r_inverse_squared(W)).epsilon(1e-11));
  }
}

TEST_CASE("linear images") {
  const Window W = preset_window(Preset::ammann_beenker, {0.8, 0.1});
  const Mat2 g{2, 1, 0.5, 1.5};
  const Window Wg = apply_linear(W, g);
  CHECK(Wg.area() == doctest::Approx(W.area() * std::abs(g.det())).epsilon(1e-13));
  CHECK_THROWS_AS(apply_linear(W, Mat2{1, 2, 2, 4}), ValidationError);
  const Window D = Window::disc({0.1, 0.2}, 1);
  CHECK(apply_linear(D, Mat2{0, 2, -2, 0}).as_disc().radius == doctest::Approx(2));
  CHECK_THROWS_AS(apply_linear(D, g), ValidationError);
}

TEST_CASE("preset names") {
  CHECK(parse_preset("ab") == Preset::ammann_beenker);
  CHECK(parse_preset("gh") == Preset::gahler_shield);
  CHECK(parse_preset("tt") == Preset::tubingen_triangle);
  CHECK_FALSE(parse_preset("penrose").has_value());
  CHECK(preset_name(Preset::tubingen_triangle) == "tt");
}
