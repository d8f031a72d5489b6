#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcgaps/extremal.hpp"
#include "qcgaps/window.hpp"

namespace qcgaps {

enum class CoefficientMethod { partition, mahler, folded };

struct IntervalContribution {
  std::size_t index;
  std::string label;  // interval in radical notation
  double A;
  double B;
  double integral_r2;      // ∫ r^{-2} over {θ : ν(θ) ∈ S_j}
  double integral_r2_nu2;  // ∫ r^{-2} ν^{-2} over the same set
  double contribution;
};

struct CoefficientReport {
  double a_P = 0;
  CoefficientMethod method = CoefficientMethod::partition;
  std::vector<IntervalContribution> per_interval;
  double quadrature_error_estimate = 0;
  std::int64_t d = 0;
  double window_area = 0;
  double prefactor = 0;  // Area(W) / (4 Δ² ζ_K(2))
};

// Interval of ν values with the coefficient multiplying ∫ r^{-2} once the
// ν^{-2} terms are moved to the inverted interval.
struct FoldedInterval {
  NuInterval interval;  // bounds and closure; A holds the coefficient
  FieldElement coefficient;
  double coefficient_value;
};

// Rejects fields without class number one.
void require_class_number_one(const RealQuadraticField& field);

CoefficientReport leading_coefficient(const RealQuadraticField& field, const Window& window);
CoefficientReport leading_coefficient(const RealQuadraticField& field, const NuPartition& partition,
                                      const Window& window);

// Throws InapplicableError unless ν(θ) stays in the interval containing 1.
CoefficientReport leading_coefficient_mahler(const RealQuadraticField& field, const Window& window);
CoefficientReport leading_coefficient_mahler(const RealQuadraticField& field, const NuPartition& partition,
                                             const Window& window);
bool mahler_applicable(const NuPartition& partition, const Window& window);

// Coefficients A(ν) + B(1/ν) on the partition refined by inverted
// breakpoints, adjacent intervals with equal coefficients merged.
std::vector<FoldedInterval> folded_form(const RealQuadraticField& field, const NuPartition& partition);
CoefficientReport leading_coefficient_folded(const RealQuadraticField& field, const NuPartition& partition,
                                             const Window& window);

// κ = 2|σ(λ)|/ζ_K(2), only for Q(√2).
double visible_density_symmetric_ab(const RealQuadraticField& field);

// Smooth pieces of r and ν: on [theta_lo, theta_hi] the support is attained at
// a fixed vertex (or the disc boundary) for both θ and θ+π.
struct SupportPiece {
  double theta_lo;
  double theta_hi;
  Vec2 v;  // r(θ) = v·u(θ)
  Vec2 w;  // r(θ+π) = −w·u(θ)
};
std::vector<SupportPiece> support_pieces(const Window& window);

// ∫₀^{2π} r(θ)^{-2} dθ
double integral_r_inverse_squared(const Window& window);

std::string method_name(CoefficientMethod m);

}  // namespace qcgaps
