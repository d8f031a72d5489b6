#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcgaps/quadfield.hpp"

namespace qcgaps {

// Positively and negatively extremal staircase points of ι(I), reduced to
// representatives in [1, λ²). Both sets are invariant under multiplication
// by λ², so the full sets are reps·λ^{2Z}.
struct ExtremalSet {
  std::vector<FieldElement> plus_reps;   // σ(α) > 0, sorted
  std::vector<FieldElement> minus_reps;  // σ(α) < 0, sorted
  FieldElement period;                   // λ²
  FieldElement scaling;                  // λ if σ(λ) > 0, else λ²
};

struct CriticalValue {
  FieldElement alpha;
  FieldElement nu;  // exact value in K
  double nu_alpha;
  FieldElement witness_beta;
  bool positive;  // α ∈ E⁺
};

enum class BreakpointSide { plus, minus, both };

struct Breakpoint {
  FieldElement value;
  double approx;
  BreakpointSide side;
};

struct NuInterval {
  std::optional<FieldElement> lower;  // nullopt: 0
  std::optional<FieldElement> upper;  // nullopt: +∞
  bool lower_closed = false;
  bool upper_closed = false;
  double lower_value = 0;
  double upper_value = 0;  // +∞ when unbounded
  std::vector<FieldElement> plus_reps;
  std::vector<FieldElement> minus_reps;
  FieldElement A;
  FieldElement B;
  double A_value = 0;
  double B_value = 0;

  bool degenerate() const { return lower_closed && upper_closed && lower_value == upper_value; }
  bool contains(double nu) const;
};

struct NuPartition {
  std::vector<Breakpoint> breakpoints;
  std::vector<NuInterval> intervals;

  // Index of the interval holding ν (ν > 0).
  std::size_t index_of(double nu) const;
  const NuInterval& at(double nu) const { return intervals[index_of(nu)]; }
};

// Lattice points of ι(I) with lo < α < hi and slo ≤ σ(α) ≤ shi (all exact),
// sorted by α.
std::vector<FieldElement> lattice_points_in_box(const RealQuadraticField& field, const Ideal& ideal,
                                                const FieldElement& lo, const FieldElement& hi,
                                                const FieldElement& slo, const FieldElement& shi);

ExtremalSet extremal_points(const RealQuadraticField& field, const Ideal& ideal);

// Elements of reps·λ^{2k} lying in [lo, hi), sorted.
std::vector<FieldElement> expand_orbit(const RealQuadraticField& field, const std::vector<FieldElement>& reps,
                                       const FieldElement& lo, const FieldElement& hi);

// Throws ValidationError if α is not extremal.
CriticalValue critical_nu(const RealQuadraticField& field, const Ideal& ideal, const FieldElement& alpha);
CriticalValue critical_nu(const RealQuadraticField& field, const ExtremalSet& set, const FieldElement& alpha);
// Direct scan of ι(I) for the extreme ratio, independent of the staircase.
CriticalValue critical_nu_oracle(const RealQuadraticField& field, const Ideal& ideal, const FieldElement& alpha);

NuPartition nu_partition(const RealQuadraticField& field, const Ideal& ideal);

// Representatives in [1, λ²) of E_{I,ν}, sorted.
std::vector<FieldElement> nu_extremal_reps(const RealQuadraticField& field, const ExtremalSet& set,
                                           const std::vector<CriticalValue>& critical, double nu);
// Same set from the rectangle-emptiness definition by exhaustive search.
std::vector<FieldElement> nu_extremal_bruteforce(const RealQuadraticField& field, const Ideal& ideal, double nu);

// min{α ∈ I, α > 0 : y·σ(α) ∈ (−ν, 1)} via the threshold ladder.
FieldElement alpha_min(const RealQuadraticField& field, const NuPartition& partition, double nu, double y);
FieldElement alpha_min(const RealQuadraticField& field, const Ideal& ideal, double nu, double y);
FieldElement alpha_min_oracle(const RealQuadraticField& field, const Ideal& ideal, double nu, double y);

// ∫₁^{λ²} α_{I,J_ν}(y)² dy/y³ by integrating the oracle step function.
double alpha_square_integral(const RealQuadraticField& field, const Ideal& ideal, double nu);

// Human-readable table: extremal reps, critical values and intervals.
std::string format_partition(const RealQuadraticField& field, const ExtremalSet& set,
                             const std::vector<CriticalValue>& critical, const NuPartition& partition);
std::string format_interval(const RealQuadraticField& field, const NuInterval& interval);

}  // namespace qcgaps
