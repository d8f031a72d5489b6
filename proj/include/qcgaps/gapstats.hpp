#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "qcgaps/cps.hpp"

namespace qcgaps {

// Angles are handled as signed fixed-point keys: one full turn is 2^62 units.
inline constexpr std::int64_t kTurn = std::int64_t{1} << 62;
inline constexpr std::int64_t kHalfTurn = kTurn / 2;
// Floating keys closer than 1e-12 turns are ordered by the exact comparator.
inline constexpr std::int64_t kNearTie = 4611686;

struct DirectionRecord {
  std::int64_t key;
  std::int32_t a, b, c, d;
};

// Fixed-point key of arg(position)/2π, taken in (−1/2, 1/2].
std::int64_t angle_key(Vec2 position);
double key_to_angle(std::int64_t key);
DirectionRecord make_record(const QuasicrystalPoint& p);

// Exact angular order of two directions (α₁, β₁), (α₂, β₂) lying within a
// small arc: negative if the first precedes the second, 0 if they lie on the
// same ray. Orientation follows the sign of det g₂.
int compare_directions_exact(const RealQuadraticField& field, int orientation, const DirectionRecord& x,
                             const DirectionRecord& y);
bool same_ray_exact(const RealQuadraticField& field, const DirectionRecord& x, const DirectionRecord& y);

// Sorted multiset of direction keys. Keys increase weakly along the circle
// from some start key k0 up to k0 + 2^62 (exclusive); equal keys mark
// directions that coincide exactly.
class DirectionList {
 public:
  DirectionList() = default;
  explicit DirectionList(std::vector<std::int64_t> keys) : keys_(std::move(keys)) {}

  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  const std::vector<std::int64_t>& keys() const { return keys_; }
  // Normalized angle in (−1/2, 1/2]
  double angle(std::size_t i) const { return key_to_angle(keys_[i]); }
  // All angles sorted as real numbers in (−1/2, 1/2].
  std::vector<double> sorted_angles() const;

 private:
  std::vector<std::int64_t> keys_;
};

struct DirectionOptions {
  int threads = 0;  // 0: OpenMP default
  // Number of angular sectors processed one after another; bounds memory at
  // roughly 24·N/sectors bytes.
  int sectors = 1;
};

// Serial reference: sorts the directions of the given points (origin
// excluded) with std::sort and resolves near-ties exactly.
DirectionList directions(const CutProjectSpec& spec, const std::vector<QuasicrystalPoint>& points);

// Parallel kernel: enumerates the set in the disc of radius R, builds and
// sorts direction records sector by sector.
DirectionList directions(const CutProjectSpec& spec, double R, const DirectionOptions& options = {});

// Streams resolved keys in circular order, in batches. Memory stays bounded by
// one sector of records.
void stream_direction_keys(const CutProjectSpec& spec, double R, const DirectionOptions& options,
                           const std::function<void(std::span<const std::int64_t>)>& sink);

class GapStatistics {
 public:
  // `raw_gaps` in key units; `normalizer` is the number that multiplies the
  // gap measured in turns, and `span` the total key length of the range.
  GapStatistics(std::vector<std::int64_t> raw_gaps, std::size_t normalizer, std::int64_t span);

  std::size_t N() const { return normalizer_; }
  std::size_t gap_count() const { return raw_.size(); }
  std::size_t zero_gap_count() const { return zero_count_; }
  // Sorted ascending, in key units.
  const std::vector<std::int64_t>& raw_gaps() const { return raw_; }
  double normalized_gap(std::size_t i) const;
  std::vector<double> normalized_gaps() const;
  double max_gap() const { return raw_.empty() ? 0.0 : normalized_gap(raw_.size() - 1); }

  // Fraction of gaps ≥ s.
  double F(double s) const;
  // (1/#gaps)·Σ (g − s)⁺
  double G(double s) const;
  // Fraction of positive gaps ≥ s, the right limit F(0+) at s = 0.
  double F_positive(double s) const;
  // (N − zero gaps)/N
  double visible_fraction() const;

 private:
  std::size_t first_at_least(double s) const;

  std::vector<std::int64_t> raw_;
  std::vector<std::uint64_t> suffix_;  // suffix_[i] = Σ_{j ≥ i} raw_[j]
  std::size_t normalizer_;
  std::int64_t span_;
  std::size_t zero_count_ = 0;
};

GapStatistics gap_statistics(const DirectionList& dirs);
// Directions with normalized angle in (lo, hi], gaps between consecutive ones,
// scaled by (number in arc)/(hi − lo).
GapStatistics gap_statistics_arc(const DirectionList& dirs, double lo, double hi);

double empirical_F(const GapStatistics& stats, double s);
double empirical_G(const GapStatistics& stats, double s);
double visible_fraction(const GapStatistics& stats);

struct HistogramBin {
  double left;
  double density;
  std::uint64_t count;
};
// Bins of width h over the positive gaps up to the largest one.
std::vector<HistogramBin> histogram(const GapStatistics& stats, double h = 0.02);

// Memory-light summary for very large runs.
struct GapCountSummary {
  std::uint64_t directions = 0;
  std::uint64_t zero_gaps = 0;
  // counts of normalized gaps ≥ s for each requested s
  std::vector<std::uint64_t> at_least;
};
GapCountSummary count_gaps(const CutProjectSpec& spec, double R, const std::vector<double>& s_values,
                           const DirectionOptions& options);

void write_fg_csv(std::ostream& out, const GapStatistics& stats, const std::vector<double>& s_grid);
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);

}  // namespace qcgaps
