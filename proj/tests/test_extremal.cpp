#include <doctest.h>

#include <cmath>
#include <random>

#include "qcgaps/error.hpp"
#include "qcgaps/extremal.hpp"
#include "qcgaps/verify.hpp"

using namespace qcgaps;

namespace {

std::vector<CriticalValue> all_critical(const RealQuadraticField& f, const ExtremalSet& set) {
  std::vector<CriticalValue> out;
  for (const auto& a : set.plus_reps) out.push_back(critical_nu(f, set, a));
  for (const auto& a : set.minus_reps) out.push_back(critical_nu(f, set, a));
  return out;
}

}  // namespace

TEST_CASE("hand-written fixtures for Q(√2), Q(√3), Q(√5)") {
  for (std::int64_t d : {2, 3, 5}) {
    CAPTURE(d);
    const RealQuadraticField f(d);
    CHECK(compare_with_fixture(f, extremal_fixture(d)) == "");
  }
}

TEST_CASE("interval labels in radical notation") {
  const RealQuadraticField f(2);
  const NuPartition p = nu_partition(f, unit_ideal(f));
  REQUIRE(p.intervals.size() == 5);
  CHECK(format_interval(f, p.intervals[0]) == "(0, -1+√2]");
  CHECK(format_interval(f, p.intervals[2]) == "[√2/2, √2]");
  CHECK(format_interval(f, p.intervals[4]) == "[1+√2, ∞)");
  CHECK(f.format(p.intervals[0].A) == "7/2+4√2");
}

TEST_CASE("lattice points in a box against a direct scan") {
  const RealQuadraticField f(3);
  const Ideal I = unit_ideal(f);
  const FieldElement lo(Rational(-5, 2)), hi(Rational(7)), slo(Rational(-3)), shi(Rational(2));
  const auto pts = lattice_points_in_box(f, I, lo, hi, slo, shi);
  std::vector<FieldElement> scan;
  for (int b = -40; b <= 40; ++b) {
    for (int a = -80; a <= 80; ++a) {
      const FieldElement x{Rational(a), Rational(b)};
      if (f.less(lo, x) && f.less(x, hi) && f.compare(f.conj(x), slo) >= 0 && f.compare(f.conj(x), shi) <= 0) {
        scan.push_back(x);
      }
    }
  }
  std::sort(scan.begin(), scan.end(), [&](const auto& x, const auto& y) { return f.less(x, y); });
  CHECK(pts == scan);
}

TEST_CASE("critical values agree with the direct scan") {
  for (std::int64_t d : {2, 3, 5, 6, 7, 11, 13}) {
    CAPTURE(d);
    const RealQuadraticField f(d);
    const Ideal I = unit_ideal(f);
    const ExtremalSet set = extremal_points(f, I);
    CHECK(!set.plus_reps.empty());
    CHECK(!set.minus_reps.empty());
    for (const auto& c : all_critical(f, set)) {
      const CriticalValue o = critical_nu_oracle(f, I, c.alpha);
      CHECK(o.nu == c.nu);
      CHECK(c.nu_alpha == doctest::Approx(f.to_double(c.nu)).epsilon(1e-14));
    }
  }
}

TEST_CASE("non-extremal elements are rejected") {
  const RealQuadraticField f(2);
  const Ideal I = unit_ideal(f);
  CHECK_THROWS_AS(critical_nu(f, I, FieldElement(Rational(2))), ValidationError);
  CHECK_THROWS_AS(critical_nu(f, I, FieldElement(Rational(-1))), ValidationError);
}

TEST_CASE("extremal sets are invariant under λ²") {
  const RealQuadraticField f(7);
  const ExtremalSet set = extremal_points(f, unit_ideal(f));
  const FieldElement l2 = set.period;
  const auto lo = FieldElement(Rational(1)), hi = f.pow(l2, 3);
  const auto orbit = expand_orbit(f, set.plus_reps, lo, hi);
  CHECK(orbit.size() == 3 * set.plus_reps.size());
  for (std::size_t i = 0; i < set.plus_reps.size(); ++i) {
    CHECK(orbit[i + set.plus_reps.size()] == f.mul(orbit[i], l2));
  }
}

TEST_CASE("partition covers (0, ∞) without gaps or overlaps") {
  for (std::int64_t d : {2, 3, 5, 7, 13}) {
    const RealQuadraticField f(d);
    const NuPartition p = nu_partition(f, unit_ideal(f));
    REQUIRE(!p.intervals.empty());
    CHECK(!p.intervals.front().lower.has_value());
    CHECK(!p.intervals.back().upper.has_value());
    for (std::size_t j = 0; j + 1 < p.intervals.size(); ++j) {
      const auto& a = p.intervals[j];
      const auto& b = p.intervals[j + 1];
      CHECK(a.upper == b.lower);
      CHECK(a.upper_closed != b.lower_closed);
    }
    for (const auto& b : p.breakpoints) {
      int holders = 0;
      for (const auto& iv : p.intervals) holders += iv.contains(b.approx);
      CHECK(holders == 1);
    }
  }
}

TEST_CASE("ν-extremal sets: partition lookup equals rectangle-emptiness search") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (std::int64_t d : {2, 3, 5, 7}) {
    const RealQuadraticField f(d);
    const Ideal I = unit_ideal(f);
    const ExtremalSet set = extremal_points(f, I);
    const auto crit = all_critical(f, set);
    for (int i = 0; i < 100; ++i) {
      const double nu = std::exp(u(rng));
      CAPTURE(nu);
      CHECK(nu_extremal_reps(f, set, crit, nu) == nu_extremal_bruteforce(f, I, nu));
    }
  }
}

TEST_CASE("alpha_min: threshold ladder equals the search oracle") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-4, 4);
  for (std::int64_t d : {2, 3, 5, 7, 13}) {
    const RealQuadraticField f(d);
    const Ideal I = unit_ideal(f);
    const NuPartition p = nu_partition(f, I);
    for (int i = 0; i < 40; ++i) {
      const double nu = std::exp(u(rng)), y = std::exp(u(rng));
      CHECK(alpha_min(f, p, nu, y) == alpha_min_oracle(f, I, nu, y));
    }
  }
  const RealQuadraticField f(2);
  CHECK_THROWS_AS(alpha_min(f, unit_ideal(f), -1.0, 1.0), ValidationError);
}

TEST_CASE("∫ α² dy/y³ over a period equals A + B/ν²") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-2, 2);
  for (std::int64_t d : {2, 3, 5, 7}) {
    const RealQuadraticField f(d);
    const Ideal I = unit_ideal(f);
    const NuPartition p = nu_partition(f, I);
    for (int i = 0; i < 12; ++i) {
      const double nu = std::exp(u(rng));
      const NuInterval& iv = p.at(nu);
      CHECK(alpha_square_integral(f, I, nu) == doctest::Approx(iv.A_value + iv.B_value / (nu * nu)).epsilon(1e-9));
    }
  }
}

TEST_CASE("partition printout") {
  const RealQuadraticField f(5);
  const ExtremalSet set = extremal_points(f, unit_ideal(f));
  const std::string s = format_partition(f, set, all_critical(f, set), nu_partition(f, unit_ideal(f)));
  CHECK(s.find("S3") != std::string::npos);
  CHECK(s.find("S4") == std::string::npos);
  CHECK(s.find("(5+3√5)/4") != std::string::npos);
}
