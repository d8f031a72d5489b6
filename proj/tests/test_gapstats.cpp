#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "qcgaps/error.hpp"
#include "qcgaps/gapstats.hpp"

using namespace qcgaps;

namespace {

QuasicrystalPoint make_point(const CutProjectSpec& spec, std::int64_t a, std::int64_t b, std::int64_t c,
                             std::int64_t d) {
  const double t = spec.field.tau_real();
  return {a, b, c, d, Vec2{a + b * t, c + d * t} * spec.physical_matrix};
}

// Number of distinct rays through the origin, decided by exact ratios in K.
std::size_t distinct_rays(const CutProjectSpec& spec, const std::vector<QuasicrystalPoint>& pts) {
  const RealQuadraticField& f = spec.field;
  using Key = std::tuple<int, int, i128, i128, i128, i128>;
  std::set<Key> rays;
  for (const auto& p : pts) {
    if (p.is_origin()) continue;
    const FieldElement alpha{Rational(p.a), Rational(p.b)}, beta{Rational(p.c), Rational(p.d)};
    if (alpha.is_zero()) {
      rays.insert({0, f.sign(beta), 0, 1, 0, 1});
    } else {
      const FieldElement r = f.div(beta, alpha);
      rays.insert({1, f.sign(alpha), r.a.num(), r.a.den(), r.b.num(), r.b.den()});
    }
  }
  return rays.size();
}

std::vector<std::int64_t> sorted_keys(const DirectionList& d) {
  auto k = d.keys();
  for (auto& x : k) {
    while (x > kHalfTurn) x -= kTurn;
    while (x <= -kHalfTurn) x += kTurn;
  }
  std::sort(k.begin(), k.end());
  return k;
}

}  // namespace

TEST_CASE("angle keys follow the half-open convention") {
  CHECK(angle_key({1, 0}) == 0);
  CHECK(angle_key({-1, 0}) == kHalfTurn);
  CHECK(key_to_angle(angle_key({-1, 0})) == 0.5);
  CHECK(key_to_angle(angle_key({-1, -1e-300})) == 0.5);
  CHECK(key_to_angle(angle_key({0, 1})) == 0.25);
  CHECK(key_to_angle(angle_key({0, -1})) == -0.25);
  CHECK(key_to_angle(angle_key({1, 1})) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("proportional points share a direction") {
  const auto spec = build_spec(Preset::ammann_beenker, {0, 0});
  std::vector<QuasicrystalPoint> pts = {make_point(spec, 1, 1, 0, 0), make_point(spec, 2, 2, 0, 0),
                                        make_point(spec, 0, 0, 1, 0), make_point(spec, 3, 3, 0, 0),
                                        make_point(spec, -1, 0, 1, 1), make_point(spec, 0, 0, 0, 0)};
  const DirectionList d = directions(spec, pts);
  CHECK(d.size() == 5);
  const GapStatistics st = gap_statistics(d);
  // three collinear points on one ray give two zero gaps
  CHECK(st.zero_gap_count() == 2);
  CHECK(st.visible_fraction() == doctest::Approx(3.0 / 5));
}

TEST_CASE("k collinear points on one ray give k-1 zero gaps") {
  const auto spec = build_spec(Preset::gahler_shield, {0, 0});
  for (int k : {1, 2, 5, 9}) {
    std::vector<QuasicrystalPoint> pts;
    for (int i = 1; i <= k; ++i) pts.push_back(make_point(spec, 2 * i, i, -i, 3 * i));
    pts.push_back(make_point(spec, 1, 0, 0, 0));
    pts.push_back(make_point(spec, 0, 0, -1, 0));
    const GapStatistics st = gap_statistics(directions(spec, pts));
    CHECK(st.zero_gap_count() == static_cast<std::size_t>(k - 1));
  }
}

TEST_CASE("near-tied directions are resolved exactly") {
  // α = λ^20 ≈ 4.5e7 and β = σ(λ^20) ≈ 2.2e-8: the directions (α, ±β) and
  // (α, 0) differ by about 1e-16 radians, far below the floating key spacing.
  const auto spec = build_spec(Preset::ammann_beenker, {0, 0});
  const RealQuadraticField& f = spec.field;
  const FieldElement lam = f.pow(f.fundamental_unit(), 20);
  const auto a = static_cast<std::int64_t>(lam.a.num()), b = static_cast<std::int64_t>(lam.b.num());
  std::vector<QuasicrystalPoint> pts = {make_point(spec, a, b, a, -b), make_point(spec, a, b, 0, 0),
                                        make_point(spec, a, b, -a, b), make_point(spec, 2 * a, 2 * b, 2 * a, -2 * b)};
  const DirectionList d = directions(spec, pts);
  const GapStatistics st = gap_statistics(d);
  CHECK(st.zero_gap_count() == 1);  // only (α,β) and (2α,2β) coincide
  CHECK(compare_directions_exact(f, 1, make_record(pts[2]), make_record(pts[1])) < 0);
  CHECK(compare_directions_exact(f, 1, make_record(pts[1]), make_record(pts[0])) < 0);
  CHECK(compare_directions_exact(f, 1, make_record(pts[0]), make_record(pts[3])) == 0);
  CHECK(same_ray_exact(f, make_record(pts[0]), make_record(pts[3])));
  CHECK_FALSE(same_ray_exact(f, make_record(pts[0]), make_record(pts[1])));
}

TEST_CASE("gap statistics elementary cases") {
  SUBCASE("single direction") {
    const GapStatistics st({kTurn}, 1, kTurn);
    CHECK(st.gap_count() == 1);
    CHECK(st.normalized_gap(0) == 1.0);
    CHECK(st.F(1) == 1.0);
    CHECK(st.F(1.0001) == 0.0);
    CHECK(st.G(0) == 1.0);
    const auto bins = histogram(st, 0.02);
    std::uint64_t total = 0;
    for (const auto& bin : bins) {
      total += bin.count;
      if (bin.count != 0) CHECK(bin.density == doctest::Approx(50.0));
    }
    CHECK(total == 1);
  }
  SUBCASE("equally spaced directions") {
    const int k = 64;
    std::vector<std::int64_t> gaps(k, kTurn / k);
    const GapStatistics st(gaps, k, kTurn);
    for (std::size_t i = 0; i < st.gap_count(); ++i) CHECK(st.normalized_gap(i) == 1.0);
    CHECK(st.G(0) == 1.0);
    CHECK(st.G(0.25) == doctest::Approx(0.75));
    CHECK(st.G(2) == 0.0);
  }
  CHECK_THROWS_AS(GapStatistics({}, 1, kTurn), ValidationError);
  CHECK_THROWS_AS(gap_statistics(DirectionList()), ValidationError);
}

TEST_CASE("serial reference and parallel kernel agree") {
  for (auto [p, w] : {std::pair{Preset::ammann_beenker, Vec2{0, 0}}, std::pair{Preset::gahler_shield, Vec2{1.7, 0.6}},
                      std::pair{Preset::tubingen_triangle, Vec2{0.4, 0}}}) {
    const auto spec = build_spec(p, w);
    const double R = 150;
    const DirectionList ref = directions(spec, enumerate_points(spec, R));
    const auto ref_keys = sorted_keys(ref);
    const auto ref_gaps = gap_statistics(ref).raw_gaps();
    for (int sectors : {1, 3, 16}) {
      for (int threads : {1, 2}) {
        DirectionOptions opt;
        opt.sectors = sectors;
        opt.threads = threads;
        const DirectionList fast = directions(spec, R, opt);
        CHECK(sorted_keys(fast) == ref_keys);
        CHECK(gap_statistics(fast).raw_gaps() == ref_gaps);
        // keys are nondecreasing along the circle
        CHECK(std::is_sorted(fast.keys().begin(), fast.keys().end()));
        CHECK(fast.keys().back() - fast.keys().front() < kTurn);
      }
    }
  }
}

TEST_CASE("zero gaps match exact collinearity classes") {
  for (auto [p, w] : {std::pair{Preset::ammann_beenker, Vec2{0, 0}}, std::pair{Preset::gahler_shield, Vec2{0.1, 0}},
                      std::pair{Preset::tubingen_triangle, Vec2{1.3, 0.4}}}) {
    const auto spec = build_spec(p, w);
    const auto pts = enumerate_points(spec, 120);
    const GapStatistics st = gap_statistics(directions(spec, 120));
    CHECK(st.N() == pts.size() - 1);
    CHECK(st.N() - st.zero_gap_count() == distinct_rays(spec, pts));
  }
}

TEST_CASE("F and G structure") {
  const auto spec = build_spec(Preset::ammann_beenker, {0.8, 0.1});
  const GapStatistics st = gap_statistics(directions(spec, 300));
  CHECK(st.F(0) == 1.0);
  CHECK(st.G(0) == 1.0);
  CHECK(std::abs(st.G(st.max_gap())) < 1e-12);
  CHECK(st.G(st.max_gap() + 1) == 0.0);
  CHECK(st.F_positive(0) == st.visible_fraction());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, st.max_gap());
  double prevF = 2;
  for (int i = 0; i < 1000; ++i) {
    const double s = st.max_gap() * i / 999.0;
    CHECK(st.F(s) <= prevF);
    prevF = st.F(s);
  }
  for (int i = 0; i < 100; ++i) {
    const double s = u(rng), eps = 1e-7;
    // right derivative of G is minus the fraction of gaps > s
    const double slope = (st.G(s) - st.G(s + eps)) / eps;
    CHECK(slope == doctest::Approx(st.F(s + eps / 2)).epsilon(1e-3));
    // convexity on a random triple
    const double a = u(rng), b = u(rng);
    CHECK(st.G(0.5 * (a + b)) <= 0.5 * (st.G(a) + st.G(b)) + 1e-12);
  }
}

TEST_CASE("histogram area equals the visible fraction") {
  const auto spec = build_spec(Preset::tubingen_triangle, {0.5, 0.4});
  const GapStatistics st = gap_statistics(directions(spec, 400));
  for (double h : {0.02, 0.1, 0.5}) {
    double area = 0;
    std::uint64_t counted = 0;
    for (const auto& b : histogram(st, h)) {
      area += h * b.density;
      counted += b.count;
    }
    CHECK(counted == st.gap_count() - st.zero_gap_count());
    CHECK(area == doctest::Approx(st.visible_fraction()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(histogram(st, 0), ValidationError);
}

TEST_CASE("streaming gap counts match the materialized statistics") {
  const auto spec = build_spec(Preset::gahler_shield, {1.5, -0.3});
  const std::vector<double> s = {0, 0.5, 1, 2, 5, 10};
  const GapStatistics st = gap_statistics(directions(spec, 250));
  DirectionOptions opt;
  opt.sectors = 5;
  const GapCountSummary sum = count_gaps(spec, 250, s, opt);
  CHECK(sum.directions == st.N());
  CHECK(sum.zero_gaps == st.zero_gap_count());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(static_cast<double>(sum.at_least[i]) == doctest::Approx(st.F(s[i]) * st.gap_count()).epsilon(1e-12));
  }
}

TEST_CASE("CSV output is deterministic across thread and sector counts") {
  const auto spec = build_spec(Preset::ammann_beenker, {0.9, 0.3});
  const std::vector<double> grid = {0, 0.1, 1, 3, 10};
  std::string first;
  for (auto [threads, sectors] : {std::pair{1, 1}, std::pair{2, 4}, std::pair{3, 9}}) {
    DirectionOptions opt;
    opt.threads = threads;
    opt.sectors = sectors;
    const GapStatistics st = gap_statistics(directions(spec, 200, opt));
    std::ostringstream os;
    write_fg_csv(os, st, grid);
    write_histogram_csv(os, histogram(st, 0.02));
    if (first.empty()) {
      first = os.str();
      CHECK(first.rfind("s,F,G\n0,1,1\n", 0) == 0);
      CHECK(first.find("bin_left,density\n") != std::string::npos);
    } else {
      CHECK(os.str() == first);
    }
  }
}

TEST_CASE("restricting to an arc leaves F unchanged (R = 3000)") {
  const auto spec = build_spec(Preset::ammann_beenker, {0, 0});
  DirectionOptions opt;
  opt.sectors = 8;
  const DirectionList dirs = directions(spec, 3000, opt);
  const GapStatistics full = gap_statistics(dirs);
  const GapStatistics arc = gap_statistics_arc(dirs, 0, 0.25);
  CHECK(arc.N() > full.N() / 5);
  double sup = 0;
  for (int i = 0; i <= 500; ++i) {
    const double s = 5.0 * i / 500;
    sup = std::max(sup, std::abs(arc.F(s) - full.F(s)));
  }
  CHECK(sup < 0.01);
  CHECK_THROWS_AS(gap_statistics_arc(dirs, 0.3, 0.1), ValidationError);
}
