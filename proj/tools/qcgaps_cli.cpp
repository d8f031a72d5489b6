#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcgaps/coeff.hpp"
#include "qcgaps/cps.hpp"
#include "qcgaps/error.hpp"
#include "qcgaps/extremal.hpp"
#include "qcgaps/gapstats.hpp"
#include "qcgaps/io.hpp"
#include "qcgaps/verify.hpp"

namespace fs = std::filesystem;
using namespace qcgaps;

namespace {

struct RunConfig {
  std::string preset;
  std::string window_json;
  std::string w = "0,0";
  std::string g2;  // a00,a01,a10,a11 for custom windows
  std::int64_t d = 0;
  double R = 0;
  std::string s_grid;
  double h = 0.02;
  std::string out;
  int threads = 0;
  int sectors = 0;
  std::uint64_t seed = 20240611;
  std::string method = "partition";
  std::string arc;
  bool quick = false;
  bool full_scale = false;
};

void add_window_flags(CLI::App* cmd, RunConfig& cfg) {
  auto* p = cmd->add_option("--preset", cfg.preset, "tiling preset")->check(CLI::IsMember({"ab", "gh", "tt"}));
  auto* w = cmd->add_option("--window", cfg.window_json, "window JSON");
  p->excludes(w);
  cmd->add_option("--w", cfg.w, "window translation x,y (presets)");
  cmd->add_option("--d", cfg.d, "field Q(sqrt d) for custom windows");
}

struct Setup {
  RealQuadraticField field;
  Window window;
  std::optional<Preset> preset;
  Vec2 w;
};

Setup resolve_window(const RunConfig& cfg) {
  if (cfg.preset.empty() && cfg.window_json.empty()) throw ValidationError("give --preset or --window");
  WindowConfig wc = !cfg.preset.empty()
                        ? WindowConfig{preset_window(*parse_preset(cfg.preset), parse_pair(cfg.w)),
                                       parse_preset(cfg.preset), parse_pair(cfg.w)}
                        : parse_window_json(cfg.window_json);
  std::int64_t d = cfg.d;
  if (wc.preset) {
    const std::int64_t pd = preset_field_d(*wc.preset);
    if (d != 0 && d != pd) throw ValidationError("preset " + preset_name(*wc.preset) + " lives in Q(√" +
                                                 std::to_string(pd) + "), not d=" + std::to_string(d));
    d = pd;
  }
  if (d == 0) throw ValidationError("a custom window needs --d");
  return {RealQuadraticField(d), std::move(wc.window), wc.preset, wc.w};
}

CutProjectSpec resolve_spec(const RunConfig& cfg) {
  Setup s = resolve_window(cfg);
  Mat2 g2 = s.preset ? preset_physical_matrix(*s.preset) : Mat2{};
  if (!cfg.g2.empty()) {
    const auto v = parse_list(cfg.g2);
    if (v.size() != 4) throw ValidationError("--g2 needs four numbers a00,a01,a10,a11");
    g2 = {v[0], v[1], v[2], v[3]};
  }
  return build_spec(s.field, s.window, g2);
}

int cmd_coeff(const RunConfig& cfg) {
  const Setup s = resolve_window(cfg);
  require_class_number_one(s.field);
  const NuPartition part = nu_partition(s.field, unit_ideal(s.field));
  CoefficientReport rep;
  if (cfg.method == "mahler") {
    rep = leading_coefficient_mahler(s.field, part, s.window);
  } else if (cfg.method == "folded") {
    rep = leading_coefficient_folded(s.field, part, s.window);
  } else if (cfg.method == "auto") {
    rep = mahler_applicable(part, s.window) ? leading_coefficient_mahler(s.field, part, s.window)
                                            : leading_coefficient(s.field, part, s.window);
  } else {
    rep = leading_coefficient(s.field, part, s.window);
  }
  nlohmann::json j = to_json(rep);
  j["window"] = to_json(s.window);
  if (s.field.d() == 2 && s.preset && s.w.x == 0 && s.w.y == 0) {
    j["visible_density"] = visible_density_symmetric_ab(s.field);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_gaps(const RunConfig& cfg) {
  if (!(cfg.R > 0)) throw ValidationError("--R must be positive");
  if (!(cfg.h > 0)) throw ValidationError("--h must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const CutProjectSpec spec = resolve_spec(cfg);
  const std::vector<double> grid = parse_list(cfg.s_grid);
  for (double s : grid) {
    if (!(s >= 0)) throw ValidationError("grid values must be nonnegative");
  }
  DirectionOptions opt;
  opt.threads = cfg.threads;
  opt.sectors = cfg.sectors > 0 ? cfg.sectors : std::max(1, static_cast<int>(expected_count(spec, cfg.R) / 4e6));
  const DirectionList dirs = directions(spec, cfg.R, opt);
  if (dirs.empty()) throw ValidationError("no points other than the origin within radius R");
  std::optional<GapStatistics> arc_stats;
  if (!cfg.arc.empty()) {
    const Vec2 a = parse_pair(cfg.arc);
    arc_stats.emplace(gap_statistics_arc(dirs, a.x, a.y));
  }
  const GapStatistics stats = arc_stats ? *arc_stats : gap_statistics(dirs);
  const auto bins = histogram(stats, cfg.h);

  if (!cfg.out.empty()) {
    fs::create_directories(cfg.out);
    std::ofstream fg(fs::path(cfg.out) / "fg.csv", std::ios::binary);
    write_fg_csv(fg, stats, grid);
    std::ofstream hist(fs::path(cfg.out) / "histogram.csv", std::ios::binary);
    write_histogram_csv(hist, bins);
    if (!fg || !hist) throw std::runtime_error("could not write to " + cfg.out);
  } else if (!grid.empty()) {
    write_fg_csv(std::cout, stats, grid);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostream& summary = cfg.out.empty() ? std::cerr : std::cout;
  summary << "N=" << stats.N() << " expected_N=" << format_sig9(expected_count(spec, cfg.R) - 1)
          << " visible_fraction=" << format_sig9(stats.visible_fraction()) << " wall_time_s=" << format_sig9(secs)
          << '\n';
  for (double s : grid) {
    summary << "s=" << format_sig9(s) << " s^2F=" << format_sig9(s * s * stats.F(s))
            << " sG=" << format_sig9(s * stats.G(s)) << '\n';
  }
  return 0;
}

int cmd_extremal(const RunConfig& cfg) {
  if (cfg.d == 0) throw ValidationError("extremal needs --d");
  const RealQuadraticField f(cfg.d);
  require_class_number_one(f);
  const Ideal I = unit_ideal(f);
  const ExtremalSet set = extremal_points(f, I);
  std::vector<CriticalValue> crit;
  for (const auto& a : set.plus_reps) crit.push_back(critical_nu(f, set, a));
  for (const auto& a : set.minus_reps) crit.push_back(critical_nu(f, set, a));
  const NuPartition part = nu_partition(f, I);
  std::cout << format_partition(f, set, crit, part);
  std::cout << "folded coefficients (A(ν) + B(1/ν)):\n";
  for (const auto& fi : folded_form(f, part)) {
    std::cout << "  " << format_interval(f, fi.interval) << " : " << f.format(fi.coefficient) << " ≈ "
              << format_sig9(fi.coefficient_value) << '\n';
  }
  std::cout << "ζ_K(2) = " << format_sig9(f.zeta2()) << '\n';
  return 0;
}

int cmd_points(const RunConfig& cfg) {
  if (!(cfg.R > 0)) throw ValidationError("--R must be positive");
  const CutProjectSpec spec = resolve_spec(cfg);
  if (cfg.out.empty()) {
    write_points_csv(std::cout, spec, cfg.R);
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    write_points_csv(f, spec, cfg.R);
    if (!f) throw std::runtime_error("could not write " + cfg.out);
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  VerifyOptions o;
  if (cfg.R > 0) {
    o.R = cfg.R;
    if (cfg.full_scale) o.full_scale_R = cfg.R;
  }
  o.quick = cfg.quick;
  o.full_scale = cfg.full_scale;
  o.threads = cfg.threads;
  o.seed = cfg.seed;
  o.progress = &std::cout;
  if (o.full_scale && cfg.R > 0) o.R = std::min(cfg.R, 3000.0);
  const auto results = run_verification(o);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  std::cout << (ok ? "all criteria passed" : "some criteria failed") << '\n';
  return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gap statistics of directions in planar cut-and-project sets"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* coeff = app.add_subcommand("coeff", "tail coefficient a_P of the gap distribution (JSON)");
  add_window_flags(coeff, cfg);
  coeff->add_option("--method", cfg.method, "partition | mahler | folded | auto")
      ->check(CLI::IsMember({"partition", "mahler", "folded", "auto"}));

  auto* gaps = app.add_subcommand("gaps", "empirical gap statistics of directions within radius R");
  gaps->set_help_flag("--help", "Print this help message and exit");
  add_window_flags(gaps, cfg);
  gaps->add_option("--g2", cfg.g2, "physical matrix a00,a01,a10,a11 (custom windows, default identity)");
  gaps->add_option("--R", cfg.R, "radius")->required();
  gaps->add_option("--s", cfg.s_grid, "comma-separated grid of s values");
  gaps->add_option("--h", cfg.h, "histogram bin width");
  gaps->add_option("--out", cfg.out, "output directory for fg.csv and histogram.csv");
  gaps->add_option("--threads", cfg.threads, "worker threads (0: OpenMP default)");
  gaps->add_option("--sectors", cfg.sectors, "angular sectors processed in turn (memory bound)");
  gaps->add_option("--arc", cfg.arc, "restrict to normalized angles in (lo,hi]");

  auto* extremal = app.add_subcommand("extremal", "extremal sets, critical values and ν-partition");
  extremal->add_option("--d", cfg.d, "field Q(sqrt d)")->required();

  auto* points = app.add_subcommand("points", "dump the point set within radius R as CSV");
  add_window_flags(points, cfg);
  points->add_option("--g2", cfg.g2, "physical matrix a00,a01,a10,a11 (custom windows, default identity)");
  points->add_option("--R", cfg.R, "radius")->required();
  points->add_option("--out", cfg.out, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_option("--R", cfg.R, "radius for the empirical regression (default 3000)");
  verify->add_flag("--quick", cfg.quick, "exact pipelines only");
  verify->add_flag("--full-scale", cfg.full_scale, "also reproduce the R=25000 counts");
  verify->add_option("--threads", cfg.threads, "worker threads");
  verify->add_option("--seed", cfg.seed, "seed for randomized checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*coeff) return cmd_coeff(cfg);
    if (*gaps) return cmd_gaps(cfg);
    if (*extremal) return cmd_extremal(cfg);
    if (*points) return cmd_points(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InapplicableError& e) {
    std::cerr << "inapplicable: " << e.what() << '\n';
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "overflow guard: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 5;
  }
  return 0;
}
