#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcgaps/cps.hpp"
#include "qcgaps/extremal.hpp"

namespace qcgaps {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyOptions {
  double R = 3000;          // radius for the empirical regression
  bool quick = false;       // exact pipelines only
  bool full_scale = false;  // also run the R = 25000 reproduction
  double full_scale_R = 25000;
  int threads = 0;
  std::uint64_t seed = 20240611;
  std::ostream* progress = nullptr;
};

// Tolerance for an empirical table value at normalized gap s with N points.
double table_tolerance(double pinned, double s, double N);

// Brute-force scan over a coordinate box derived independently of the
// enumerator; every candidate goes through the membership predicate.
std::vector<QuasicrystalPoint> brute_force_points(const CutProjectSpec& spec, double R);

// Exact extremal data for Q(√2), Q(√3), Q(√5), written out by hand.
struct ExtremalFixture {
  std::int64_t d;
  std::vector<FieldElement> plus_reps;
  std::vector<FieldElement> minus_reps;
  std::vector<FieldElement> nu_plus;   // ν for each plus rep
  std::vector<FieldElement> nu_minus;  // ν for each minus rep
  struct Interval {
    std::optional<FieldElement> lower, upper;
    bool lower_closed, upper_closed;
    FieldElement A, B;
  };
  std::vector<Interval> intervals;
};
ExtremalFixture extremal_fixture(std::int64_t d);
// Empty string on a match, otherwise a description of the first difference.
std::string compare_with_fixture(const RealQuadraticField& field, const ExtremalFixture& fx);

CriterionResult check_zeta_values();
CriterionResult check_extremal_fixtures();
CriterionResult check_coefficient_table();
CriterionResult check_folded_form();
CriterionResult check_gl2_invariance(std::uint64_t seed);
CriterionResult check_polar_identity(std::uint64_t seed);
CriterionResult check_oracles(std::uint64_t seed);
CriterionResult check_empirical_regression(double R, int threads);
CriterionResult check_gap_structure(double R, int threads);
CriterionResult check_full_scale(double R, int threads);

std::vector<CriterionResult> run_verification(const VerifyOptions& options);
void print_result(std::ostream& out, const CriterionResult& r);

}  // namespace qcgaps
