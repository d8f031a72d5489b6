#include "qcgaps/gapstats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <parallel/algorithm>
#include <stdexcept>

#include <omp.h>

#include "qcgaps/error.hpp"

namespace qcgaps {

namespace {

struct ZTau {
  i128 p;
  i128 q;  // p + qτ
};

ZTau mul(const RealQuadraticField& f, i128 p1, i128 q1, i128 p2, i128 q2) {
  const i128 qq = q1 * q2;
  return {p1 * p2 + qq * f.tau_sq_const(), p1 * q2 + q1 * p2 + qq * f.tau_trace()};
}

int sign_ztau(const RealQuadraticField& f, i128 p, i128 q) {
  if (f.tau_kind() == TauKind::half) return sign_sqrt_form(2 * p + q, q, f.d());
  return sign_sqrt_form(p, q, f.d());
}

int cross_sign(const RealQuadraticField& f, const DirectionRecord& x, const DirectionRecord& y) {
  const ZTau l = mul(f, x.a, x.b, y.c, y.d);
  const ZTau r = mul(f, y.a, y.b, x.c, x.d);
  return sign_ztau(f, l.p - r.p, l.q - r.q);
}

int orientation_of(const CutProjectSpec& spec) { return spec.physical_matrix.det() > 0 ? 1 : -1; }

// Orders one near-tie run exactly and rewrites its keys: exactly equal
// directions share a key, distinct ones get strictly increasing keys.
void resolve_run(const RealQuadraticField& field, int orientation, DirectionRecord* first, DirectionRecord* last) {
  if (last - first < 2) return;
  std::sort(first, last, [&](const DirectionRecord& x, const DirectionRecord& y) {
    return compare_directions_exact(field, orientation, x, y) < 0;
  });
  std::int64_t previous = std::numeric_limits<std::int64_t>::min();
  for (DirectionRecord* cls = first; cls != last;) {
    DirectionRecord* end = cls + 1;
    std::int64_t class_min = cls->key;
    while (end != last && same_ray_exact(field, *cls, *end)) {
      class_min = std::min(class_min, end->key);
      ++end;
    }
    const std::int64_t assigned =
        previous == std::numeric_limits<std::int64_t>::min() ? class_min : std::max(class_min, previous + 1);
    for (DirectionRecord* r = cls; r != end; ++r) r->key = assigned;
    previous = assigned;
    cls = end;
  }
}

// Records must be sorted by key and contain no run that continues past
// either end.
void resolve_all(const RealQuadraticField& field, int orientation, std::vector<DirectionRecord>& recs) {
  std::size_t i = 0;
  while (i < recs.size()) {
    std::size_t j = i + 1;
    while (j < recs.size() && recs[j].key - recs[j - 1].key < kNearTie) ++j;
    resolve_run(field, orientation, recs.data() + i, recs.data() + j);
    i = j;
  }
}

void sort_by_key(std::vector<DirectionRecord>& recs, int threads) {
  auto by_key = [](const DirectionRecord& x, const DirectionRecord& y) { return x.key < y.key; };
  if (threads > 1) {
    __gnu_parallel::sort(recs.begin(), recs.end(), by_key);
  } else {
    std::sort(recs.begin(), recs.end(), by_key);
  }
}

std::int64_t unwrap(std::int64_t key, std::int64_t base) { return key < base ? key + kTurn : key; }

// Collects the directions whose unwrapped key lies in [lo, hi).
std::vector<DirectionRecord> gather(const PointEnumerator& en, std::int64_t lo,
                                    std::int64_t hi, std::int64_t base, int threads) {
  Wedge wedge;
  const Wedge* wedge_ptr = nullptr;
  if (hi - lo <= kTurn / 4) {
    const double to_rad = 2 * std::numbers::pi / static_cast<double>(kTurn);
    wedge.theta_lo = static_cast<double>(lo) * to_rad - 1e-7;
    wedge.theta_hi = static_cast<double>(hi) * to_rad + 1e-7;
    wedge_ptr = &wedge;
  }
  std::vector<std::vector<DirectionRecord>> parts(static_cast<std::size_t>(threads));
  const std::int64_t first = en.row_begin();
  const std::int64_t last = en.row_end();
#pragma omp parallel num_threads(threads)
  {
    auto& mine = parts[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t row = first; row < last; ++row) {
      en.visit_rows(
          row, row + 1,
          [&](const QuasicrystalPoint& p) {
            if (p.is_origin()) return;
            DirectionRecord rec = make_record(p);
            const std::int64_t k = unwrap(rec.key, base);
            if (k < lo || k >= hi) return;
            rec.key = k;
            mine.push_back(rec);
          },
          wedge_ptr);
    }
  }
  if (parts.size() == 1) return std::move(parts[0]);
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<DirectionRecord> out;
  out.reserve(total);
  for (auto& p : parts) {
    out.insert(out.end(), p.begin(), p.end());
    std::vector<DirectionRecord>().swap(p);
  }
  return out;
}

// First index i ≥ 1 with key ≥ at and a gap of at least kNearTie before it.
std::optional<std::size_t> find_cut(const std::vector<DirectionRecord>& recs, std::int64_t at) {
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].key >= at && recs[i].key - recs[i - 1].key >= kNearTie) return i;
  }
  return std::nullopt;
}

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

}  // namespace

std::int64_t angle_key(Vec2 position) {
  const double xi = std::atan2(position.y, position.x) / (2 * std::numbers::pi);
  std::int64_t key = std::llround(xi * static_cast<double>(kTurn));
  if (key <= -kHalfTurn) key += kTurn;
  return key;
}

double key_to_angle(std::int64_t key) {
  while (key > kHalfTurn) key -= kTurn;
  while (key <= -kHalfTurn) key += kTurn;
  return static_cast<double>(key) / static_cast<double>(kTurn);
}

DirectionRecord make_record(const QuasicrystalPoint& p) {
  return {angle_key(p.position), static_cast<std::int32_t>(p.a), static_cast<std::int32_t>(p.b),
          static_cast<std::int32_t>(p.c), static_cast<std::int32_t>(p.d)};
}

int compare_directions_exact(const RealQuadraticField& field, int orientation, const DirectionRecord& x,
                             const DirectionRecord& y) {
  // y counterclockwise of x means x comes first
  return -orientation * cross_sign(field, x, y);
}

bool same_ray_exact(const RealQuadraticField& field, const DirectionRecord& x, const DirectionRecord& y) {
  return cross_sign(field, x, y) == 0 && sign_ztau(field, x.a, x.b) == sign_ztau(field, y.a, y.b) &&
         sign_ztau(field, x.c, x.d) == sign_ztau(field, y.c, y.d);
}

std::vector<double> DirectionList::sorted_angles() const {
  std::vector<double> out(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) out[i] = angle(i);
  std::sort(out.begin(), out.end());
  return out;
}

DirectionList directions(const CutProjectSpec& spec, const std::vector<QuasicrystalPoint>& points) {
  std::vector<DirectionRecord> recs;
  recs.reserve(points.size());
  for (const auto& p : points) {
    if (!p.is_origin()) recs.push_back(make_record(p));
  }
  if (recs.empty()) return DirectionList();
  std::sort(recs.begin(), recs.end(), [](const auto& x, const auto& y) { return x.key < y.key; });
  // Start the circle right after a separating gap so no run wraps around.
  const std::size_t n = recs.size();
  std::size_t start = n;
  if (recs[0].key + kTurn - recs[n - 1].key >= kNearTie) start = 0;
  for (std::size_t i = 1; i < n && start == n; ++i) {
    if (recs[i].key - recs[i - 1].key >= kNearTie) start = i;
  }
  if (start == n) start = 0;  // every direction in one run
  for (std::size_t i = 0; i < start; ++i) recs[i].key += kTurn;
  std::rotate(recs.begin(), recs.begin() + static_cast<std::ptrdiff_t>(start), recs.end());
  resolve_all(spec.field, orientation_of(spec), recs);
  std::vector<std::int64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = recs[i].key;
  return DirectionList(std::move(keys));
}

void stream_direction_keys(const CutProjectSpec& spec, double R, const DirectionOptions& options,
                           const std::function<void(std::span<const std::int64_t>)>& sink) {
  if (options.sectors < 1) throw ValidationError("sector count must be positive");
  const int threads = resolve_threads(options.threads);
  const int orientation = orientation_of(spec);
  PointEnumerator en(spec, R);

  constexpr std::int64_t margin = std::int64_t{1} << 44;
  const std::int64_t probe = -kHalfTurn + (std::int64_t{1} << 50);

  // Locate a separating gap to serve as the start of the circle.
  std::int64_t start = probe;
  {
    auto recs = gather(en, probe - margin, probe + margin, -kHalfTurn + 1, threads);
    sort_by_key(recs, threads);
    if (auto cut = find_cut(recs, probe)) {
      start = recs[*cut].key;
    } else {
      // Sparse near the probe: look around the whole circle instead.
      recs = gather(en, -kHalfTurn + 1, kHalfTurn + 1, -kHalfTurn + 1, threads);
      sort_by_key(recs, threads);
      for (std::size_t i = 0; i < recs.size(); ++i) {
        const std::int64_t prev = i == 0 ? recs.back().key - kTurn : recs[i - 1].key;
        if (recs[i].key - prev >= kNearTie) {
          start = recs[i].key;
          break;
        }
      }
    }
  }

  const std::int64_t end = start + kTurn;
  const std::int64_t width = kTurn / options.sectors;
  std::int64_t lo = start;
  std::vector<std::int64_t> batch;
  for (int j = 0; j < options.sectors && lo < end; ++j) {
    const std::int64_t nominal = std::max(start + width * (j + 1), lo);
    std::vector<DirectionRecord> recs;
    std::int64_t extra = margin;
    while (true) {
      const std::int64_t hi = j + 1 == options.sectors || nominal >= end - extra ? end : nominal + extra;
      recs = gather(en, lo, hi, start, threads);
      sort_by_key(recs, threads);
      if (hi == end) {
        lo = end;
        break;
      }
      if (auto cut = find_cut(recs, nominal)) {
        lo = recs[*cut].key;
        recs.resize(*cut);
        break;
      }
      extra *= 64;
    }
    resolve_all(spec.field, orientation, recs);
    batch.resize(recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) batch[i] = recs[i].key;
    std::vector<DirectionRecord>().swap(recs);
    sink(std::span<const std::int64_t>(batch));
  }
}

DirectionList directions(const CutProjectSpec& spec, double R, const DirectionOptions& options) {
  std::vector<std::int64_t> keys;
  stream_direction_keys(spec, R, options,
                        [&](std::span<const std::int64_t> b) { keys.insert(keys.end(), b.begin(), b.end()); });
  return DirectionList(std::move(keys));
}

GapStatistics::GapStatistics(std::vector<std::int64_t> raw_gaps, std::size_t normalizer, std::int64_t span)
    : raw_(std::move(raw_gaps)), normalizer_(normalizer), span_(span) {
  if (raw_.empty()) throw ValidationError("gap statistics need at least one gap");
  if (span_ <= 0) throw ValidationError("angular span must be positive");
  std::sort(raw_.begin(), raw_.end());
  if (raw_.front() < 0) throw std::logic_error("negative gap");
  suffix_.assign(raw_.size() + 1, 0);
  for (std::size_t i = raw_.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + static_cast<std::uint64_t>(raw_[i]);
  zero_count_ = static_cast<std::size_t>(std::upper_bound(raw_.begin(), raw_.end(), 0) - raw_.begin());
}

double GapStatistics::normalized_gap(std::size_t i) const {
  return static_cast<double>(static_cast<long double>(raw_[i]) * normalizer_ / span_);
}

std::vector<double> GapStatistics::normalized_gaps() const {
  std::vector<double> out(raw_.size());
  for (std::size_t i = 0; i < raw_.size(); ++i) out[i] = normalized_gap(i);
  return out;
}

std::size_t GapStatistics::first_at_least(double s) const {
  const long double scale = static_cast<long double>(normalizer_) / span_;
  auto it = std::partition_point(raw_.begin(), raw_.end(),
                                 [&](std::int64_t g) { return static_cast<long double>(g) * scale < s; });
  return static_cast<std::size_t>(it - raw_.begin());
}

double GapStatistics::F(double s) const {
  const std::size_t m = raw_.size();
  return static_cast<double>(m - first_at_least(s)) / static_cast<double>(m);
}

double GapStatistics::F_positive(double s) const {
  const std::size_t m = raw_.size();
  const std::size_t idx = std::max(first_at_least(s), zero_count_);
  return static_cast<double>(m - idx) / static_cast<double>(m);
}

double GapStatistics::G(double s) const {
  const std::size_t m = raw_.size();
  const std::size_t idx = first_at_least(s);
  const long double sum = static_cast<long double>(suffix_[idx]) / span_ * normalizer_;
  const long double value = (sum - static_cast<long double>(s) * (m - idx)) / m;
  return static_cast<double>(value);
}

double GapStatistics::visible_fraction() const {
  const std::size_t m = raw_.size();
  return static_cast<double>(m - zero_count_) / static_cast<double>(m);
}

GapStatistics gap_statistics(const DirectionList& dirs) {
  if (dirs.empty()) throw ValidationError("no directions");
  const auto& k = dirs.keys();
  std::vector<std::int64_t> gaps(k.size());
  gaps[0] = k.front() + kTurn - k.back();
  for (std::size_t i = 1; i < k.size(); ++i) gaps[i] = k[i] - k[i - 1];
  return GapStatistics(std::move(gaps), k.size(), kTurn);
}

GapStatistics gap_statistics_arc(const DirectionList& dirs, double lo, double hi) {
  if (!(lo < hi) || lo < -0.5 || hi > 0.5) throw ValidationError("arc must satisfy -1/2 <= lo < hi <= 1/2");
  const long double klo = static_cast<long double>(lo) * kTurn;
  const long double khi = static_cast<long double>(hi) * kTurn;
  std::vector<std::int64_t> in_arc;
  for (std::int64_t key : dirs.keys()) {
    while (key > kHalfTurn) key -= kTurn;
    if (key > klo && key <= khi) in_arc.push_back(key);
  }
  if (in_arc.size() < 2) throw ValidationError("fewer than two directions in the arc");
  std::sort(in_arc.begin(), in_arc.end());
  std::vector<std::int64_t> gaps(in_arc.size() - 1);
  for (std::size_t i = 1; i < in_arc.size(); ++i) gaps[i - 1] = in_arc[i] - in_arc[i - 1];
  const auto span = static_cast<std::int64_t>(std::llround(khi - klo));
  return GapStatistics(std::move(gaps), in_arc.size(), span);
}

double empirical_F(const GapStatistics& stats, double s) { return stats.F(s); }
double empirical_G(const GapStatistics& stats, double s) { return stats.G(s); }
double visible_fraction(const GapStatistics& stats) { return stats.visible_fraction(); }

std::vector<HistogramBin> histogram(const GapStatistics& stats, double h) {
  if (!(h > 0)) throw ValidationError("bin width must be positive");
  const std::size_t m = stats.gap_count();
  std::vector<std::uint64_t> counts;
  for (std::size_t i = stats.zero_gap_count(); i < m; ++i) {
    const double g = stats.normalized_gap(i);
    auto k = static_cast<std::size_t>(std::floor(g / h));
    while (static_cast<double>(k + 1) * h <= g) ++k;
    while (k > 0 && static_cast<double>(k) * h > g) --k;
    if (counts.size() <= k) counts.resize(k + 1, 0);
    ++counts[k];
  }
  std::vector<HistogramBin> bins(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    bins[k] = {static_cast<double>(k) * h, static_cast<double>(counts[k]) / (static_cast<double>(m) * h), counts[k]};
  }
  return bins;
}

GapCountSummary count_gaps(const CutProjectSpec& spec, double R, const std::vector<double>& s_values,
                           const DirectionOptions& options) {
  const std::uint64_t n = count_points(spec, R, options.threads) - 1;
  GapCountSummary out;
  out.at_least.assign(s_values.size(), 0);
  if (n == 0) return out;
  std::vector<long double> thresholds(s_values.size());
  for (std::size_t i = 0; i < s_values.size(); ++i) thresholds[i] = static_cast<long double>(s_values[i]) * kTurn / n;
  bool have_first = false;
  std::int64_t first = 0, prev = 0;
  auto record_gap = [&](std::int64_t g) {
    if (g == 0) ++out.zero_gaps;
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (static_cast<long double>(g) >= thresholds[i]) ++out.at_least[i];
    }
  };
  stream_direction_keys(spec, R, options, [&](std::span<const std::int64_t> keys) {
    for (std::int64_t k : keys) {
      if (!have_first) {
        first = k;
        have_first = true;
      } else {
        record_gap(k - prev);
      }
      prev = k;
      ++out.directions;
    }
  });
  if (have_first) record_gap(first + kTurn - prev);
  if (out.directions != n) throw std::logic_error("direction count does not match point count");
  return out;
}

void write_fg_csv(std::ostream& out, const GapStatistics& stats, const std::vector<double>& s_grid) {
  out << "s,F,G\n" << std::setprecision(9);
  for (double s : s_grid) out << s << ',' << stats.F(s) << ',' << stats.G(s) << '\n';
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  out << "bin_left,density\n" << std::setprecision(9);
  for (const auto& b : bins) out << b.left << ',' << b.density << '\n';
}

}  // namespace qcgaps
