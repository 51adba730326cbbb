#pragma once

// Command-line driver. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 tolerance exceeded in --assert mode.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lfjohn/lfjohn.hpp"

namespace lfjohn::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

/// Ordered key=value echo of a run's resolved configuration.
class ConfigEcho {
 public:
  template <class T>
  void add(const std::string& key, const T& value) {
    std::ostringstream os;
    os << value;
    entries_.emplace_back(key, os.str());
  }
  void add(const std::string& key, double value) { entries_.emplace_back(key, format_double(value)); }
  void add(const std::string& key, bool value) { entries_.emplace_back(key, value ? "true" : "false"); }

  std::vector<std::string> lines() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) out.push_back(k + "=" + v);
    return out;
  }
  void print(std::ostream& os) const {
    for (const auto& l : lines()) os << "# " << l << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct SynthOptions {
  std::string scene, geometry, out;
  int maxval = 65535;
  double scale = 0.0;  // 0 = normalize by the peak
};

struct JohnOptions {
  std::string scene, out;
  double h = 0.05;
  int points = 1000;
  double box = 2.0;
  std::string which = "both";
  bool assert_mode = false;
  double rms_tol = 1e-4;
  double ratio_lo = 3.0;
  double ratio_hi = 5.0;
};

struct AsgeirssonOptions {
  std::string mode = "continuous";
  std::string scene, archive, out;
  int configs = 20;
  int n1 = 512;
  int n2 = 256;
  double rmax = 2.0;
  double center_box = 1.0;
  int r1max = 4, r2max = 4;
  double rho = 1.0;
  int oversample = 1;
  bool include_partial = false;
  bool assert_mode = false;
  double tol = -1.0;  // mode default when negative
};

struct PolarOptions {
  std::string raster, geometry, out_archive, out_layout;
  int r1max = 4, r2max = 4;
  double rho = 1.0;
  std::optional<double> shift;
  int shift_sign = 1;
  int oversample = 1;
  bool separators = false;
};

struct ColormapOptions {
  std::string geometry, out_colormap, out_map;
  int r1max = 7, r2max = 7;
  double rho = 1.0;
  std::optional<double> shift;
  int shift_sign = 1;
  int oversample = 1;
  bool separators = false;
};

struct RoundtripOptions {
  long count = 1'000'000;
  double range = 100.0;
  bool assert_mode = false;
};

/// Thrown when an --assert check fails.
class ToleranceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Scene load_scene_or_fixture(const std::string& path) {
  return path.empty() ? fixture_scene() : read_scene(path);
}

inline ShiftSign to_shift_sign(int s) { return s < 0 ? ShiftSign::negative : ShiftSign::positive; }

inline void emit_csv(CsvTable table, const std::vector<std::string>& extra_comments, const ConfigEcho& echo,
                     const std::string& out, std::ostream& os) {
  table.comments = echo.lines();
  table.comments.insert(table.comments.end(), extra_comments.begin(), extra_comments.end());
  if (out.empty())
    os << format_csv(table);
  else
    write_csv_report(table, out);
}

// ---------------------------------------------------------------------------

inline int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& os) {
  const Scene scene = load_scene_or_fixture(o.scene);
  const LightfieldGeometry geom = read_geometry(o.geometry);
  DiscreteLightfield lf = sample_plenoptic_raster(scene, geom, g.threads);
  double peak = 0.0;
  for (double v : lf.raster.data()) peak = std::max(peak, v);
  const double scale = o.scale > 0.0 ? o.scale : 1.0 / peak;
  for (double& v : lf.raster.data()) v *= scale;
  const auto bytes = encode_pnm(lf.raster, o.maxval);
  write_file_atomic(o.out, bytes);

  ConfigEcho echo;
  echo.add("command", "synth");
  echo.add("scene", o.scene.empty() ? std::string("<fixture>") : o.scene);
  echo.add("geometry", o.geometry);
  echo.add("out", o.out);
  echo.add("maxval", o.maxval);
  echo.add("scale", scale);
  echo.add("seed", g.seed);
  echo.add("threads", g.threads);
  echo.print(os);
  os << "wrote " << o.out << " (" << lf.raster.width() << "x" << lf.raster.height()
     << ") fnv1a64=" << hex64(fnv1a64(bytes)) << "\n";
  return kOk;
}

inline std::vector<RayTP> random_rays(std::uint64_t seed, int count, double box) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-box, box);
  std::vector<RayTP> pts(static_cast<std::size_t>(count));
  for (auto& p : pts) {
    p.x = dist(rng);
    p.y = dist(rng);
    p.u = dist(rng);
    p.v = dist(rng);
  }
  return pts;
}

inline int cmd_check_john(const GlobalOptions& g, const JohnOptions& o, std::ostream& os) {
  if (o.points < 1) throw std::invalid_argument("--points must be >= 1");
  const SceneField field{load_scene_or_fixture(o.scene)};
  const auto pts = random_rays(g.seed, o.points, o.box);
  double field_max = 0.0;
  for (const auto& p : pts) field_max = std::max(field_max, field(p));

  std::vector<ResidualOperator> ops;
  if (o.which == "john" || o.which == "both") ops.push_back(ResidualOperator::john);
  if (o.which == "ultrahyperbolic" || o.which == "both") ops.push_back(ResidualOperator::ultrahyperbolic);

  std::vector<ResidualReport> reports;
  std::vector<std::string> notes{"field_max=" + format_double(field_max)};
  bool ok = true;
  for (auto op : ops) {
    const auto coarse = residual_sweep(field, pts, StencilSpec(o.h), op, g.threads);
    const auto fine = residual_sweep(field, pts, StencilSpec(o.h / 2), op, g.threads);
    reports.push_back(coarse);
    reports.push_back(fine);
    const double ratio = fine.rms > 0.0 ? coarse.rms / fine.rms : 0.0;
    notes.push_back("convergence_ratio " + std::string(to_string(op)) + "=" + format_double(ratio));
    if (o.assert_mode) {
      const bool conv = ratio >= o.ratio_lo && ratio <= o.ratio_hi;
      const bool small = fine.rms <= o.rms_tol * field_max;
      if (!conv || !small) ok = false;
    }
  }

  ConfigEcho echo;
  echo.add("command", "check-john");
  echo.add("scene", o.scene.empty() ? std::string("<fixture>") : o.scene);
  echo.add("h", o.h);
  echo.add("points", o.points);
  echo.add("box", o.box);
  echo.add("which", o.which);
  echo.add("assert", o.assert_mode);
  echo.add("rms_tol", o.rms_tol);
  echo.add("seed", g.seed);
  echo.add("threads", g.threads);
  emit_csv(residual_table(reports), notes, echo, o.out, os);
  if (!o.out.empty()) {
    echo.print(os);
    for (const auto& n : notes) os << "# " << n << "\n";
  }
  if (!ok) throw ToleranceFailure("residual convergence or magnitude check failed");
  return kOk;
}

inline int cmd_check_asgeirsson(const GlobalOptions& g, const AsgeirssonOptions& o, std::ostream& os) {
  ConfigEcho echo;
  echo.add("command", "check-asgeirsson");
  echo.add("mode", o.mode);
  echo.add("seed", g.seed);
  echo.add("threads", g.threads);
  echo.add("assert", o.assert_mode);

  if (o.mode == "continuous") {
    if (o.configs < 1) throw std::invalid_argument("--configs must be >= 1");
    if (!(o.rmax > 0.0)) throw std::invalid_argument("--rmax must be > 0");
    const double tol = o.tol < 0.0 ? 1e-8 : o.tol;
    const auto field = in_xi(SceneField{load_scene_or_fixture(o.scene)});
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> cdist(-o.center_box, o.center_box);
    std::uniform_real_distribution<double> rdist(0.0, o.rmax);
    auto radius = [&] {
      double r = 0.0;
      while (r == 0.0) r = rdist(rng);
      return r;
    };
    std::vector<std::pair<int, TheoremReport>> reports;
    for (int i = 0; i < o.configs; ++i) {
      const XiPoint c{cdist(rng), cdist(rng), cdist(rng), cdist(rng)};
      reports.emplace_back(1, theorem1_check(field, c, radius(), o.n1));
    }
    for (int i = 0; i < o.configs; ++i) {
      const XiPoint c{cdist(rng), cdist(rng), cdist(rng), cdist(rng)};
      const double ra = radius();
      double rb = radius();
      while (rb == ra) rb = radius();
      reports.emplace_back(2, theorem2_check(field, c, ra, rb, o.n2));
    }
    double worst = 0.0;
    for (const auto& [t, r] : reports) worst = std::max(worst, r.rel_diff);
    echo.add("scene", o.scene.empty() ? std::string("<fixture>") : o.scene);
    echo.add("configs", o.configs);
    echo.add("n1", o.n1);
    echo.add("n2", o.n2);
    echo.add("rmax", o.rmax);
    echo.add("center_box", o.center_box);
    echo.add("tol", tol);
    const std::vector<std::string> notes{"worst_rel_diff=" + format_double(worst)};
    emit_csv(theorem_table(reports), notes, echo, o.out, os);
    if (!o.out.empty()) echo.print(os), os << "# " << notes[0] << "\n";
    if (o.assert_mode && !(worst <= tol)) throw ToleranceFailure("theorem rel_diff exceeds tolerance");
    return kOk;
  }
  if (o.mode == "discrete") {
    const double tol = o.tol < 0.0 ? 5e-2 : o.tol;
    PolarLightfield pl;
    if (!o.archive.empty()) {
      pl = read_polar_archive(o.archive);
      echo.add("archive", o.archive);
    } else {
      PolarSampling opt;
      opt.rho = o.rho;
      opt.oversample = o.oversample;
      opt.threads = g.threads;
      pl = to_polar_grid_analytic(SceneField{load_scene_or_fixture(o.scene)}, o.r1max, o.r2max, opt);
      echo.add("scene", o.scene.empty() ? std::string("<fixture>") : o.scene);
      echo.add("r1max", o.r1max);
      echo.add("r2max", o.r2max);
      echo.add("rho", o.rho);
      echo.add("oversample", o.oversample);
    }
    echo.add("include_partial", o.include_partial);
    echo.add("tol", tol);
    const auto rows = discrete_asgeirsson_report(pl);
    const double worst = worst_rel_diff(rows, o.include_partial);
    const std::vector<std::string> notes{"worst_rel_diff=" + format_double(worst)};
    emit_csv(asgeirsson_table(rows), notes, echo, o.out, os);
    if (!o.out.empty()) echo.print(os), os << "# " << notes[0] << "\n";
    if (o.assert_mode && !(worst <= tol)) throw ToleranceFailure("discrete rel_diff exceeds tolerance");
    return kOk;
  }
  throw CLI::ValidationError("--mode", "must be continuous or discrete");
}

inline int cmd_to_polar(const GlobalOptions& g, const PolarOptions& o, std::ostream& os) {
  LightfieldGeometry geom = read_geometry(o.geometry);
  if (o.shift) geom.shift = *o.shift;
  const DiscreteLightfield lf(geom, read_raster(o.raster));
  PolarSampling opt;
  opt.rho = o.rho;
  opt.sign = to_shift_sign(o.shift_sign);
  opt.oversample = o.oversample;
  opt.threads = g.threads;
  const PolarLightfield pl = to_polar_grid(lf, o.r1max, o.r2max, opt);
  const auto archive = encode_polar_archive(pl);
  write_file_atomic(o.out_archive, archive);
  const Image<double> layout = render_polar_layout(pl, o.separators);
  std::vector<std::uint8_t> layout_bytes;
  if (!o.out_layout.empty()) {
    layout_bytes = encode_pnm(layout, 255);
    write_file_atomic(o.out_layout, layout_bytes);
  }
  std::size_t invalid = 0;
  for (const auto& b : pl.blocks())
    for (auto m : b.mask) invalid += m == 0;

  ConfigEcho echo;
  echo.add("command", "to-polar");
  echo.add("raster", o.raster);
  echo.add("geometry", o.geometry);
  echo.add("r1max", o.r1max);
  echo.add("r2max", o.r2max);
  echo.add("rho", o.rho);
  echo.add("shift", geom.shift);
  echo.add("shift_sign", o.shift_sign);
  echo.add("oversample", o.oversample);
  echo.add("separators", o.separators);
  echo.add("seed", g.seed);
  echo.add("threads", g.threads);
  echo.print(os);
  os << "wrote " << o.out_archive << " fnv1a64=" << hex64(fnv1a64(archive)) << " invalid_bins=" << invalid
     << "\n";
  if (!o.out_layout.empty())
    os << "wrote " << o.out_layout << " (" << layout.width() << "x" << layout.height()
       << ") fnv1a64=" << hex64(fnv1a64(layout_bytes)) << "\n";
  return kOk;
}

inline int cmd_colormap(const GlobalOptions& g, const ColormapOptions& o, std::ostream& os) {
  LightfieldGeometry geom = read_geometry(o.geometry);
  if (o.shift) geom.shift = *o.shift;
  geom.validate();
  PolarSampling opt;
  opt.rho = o.rho;
  opt.sign = to_shift_sign(o.shift_sign);
  opt.oversample = o.oversample;
  opt.threads = g.threads;
  const PolarLightfield coverage = polar_coverage(geom, o.r1max, o.r2max, opt);
  const auto colormap = encode_pnm(render_colormap(coverage, o.separators));
  write_file_atomic(o.out_colormap, colormap);
  const CoordinateMap map = render_coordinate_map_original(geom, o.r1max, o.r2max, opt);
  std::vector<std::uint8_t> map_bytes;
  if (!o.out_map.empty()) {
    map_bytes = encode_pnm(map.image);
    write_file_atomic(o.out_map, map_bytes);
  }

  ConfigEcho echo;
  echo.add("command", "colormap");
  echo.add("geometry", o.geometry);
  echo.add("r1max", o.r1max);
  echo.add("r2max", o.r2max);
  echo.add("rho", o.rho);
  echo.add("shift", geom.shift);
  echo.add("shift_sign", o.shift_sign);
  echo.add("oversample", o.oversample);
  echo.add("separators", o.separators);
  echo.add("seed", g.seed);
  echo.add("threads", g.threads);
  echo.print(os);
  os << "wrote " << o.out_colormap << " fnv1a64=" << hex64(fnv1a64(colormap)) << "\n";
  if (!o.out_map.empty())
    os << "wrote " << o.out_map << " fnv1a64=" << hex64(fnv1a64(map_bytes)) << " colored=" << map.colored_pixels
       << " collisions=" << map.collisions << "\n";
  return kOk;
}

struct RoundtripResult {
  double xi_max_abs = 0.0;     // ray -> xi -> ray
  double polar_max_abs = 0.0;  // ray -> polar -> ray
};

inline RoundtripResult coordinate_roundtrip(std::uint64_t seed, long count, double range) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-range, range);
  RoundtripResult res;
  auto err = [](const RayTP& a, const RayTP& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.u - b.u), std::abs(a.v - b.v)});
  };
  for (long i = 0; i < count; ++i) {
    const RayTP p{dist(rng), dist(rng), dist(rng), dist(rng)};
    res.xi_max_abs = std::max(res.xi_max_abs, err(p, ray_from_xi(xi_from_ray(p))));
    res.polar_max_abs = std::max(res.polar_max_abs, err(p, ray_from_polar(polar_from_ray(p))));
  }
  return res;
}

/// Bound for the xi round trip: a few roundings of values up to 2 * range.
inline double xi_roundtrip_bound(double range) { return 4.0 * std::numeric_limits<double>::epsilon() * range; }

inline int cmd_roundtrip(const GlobalOptions& g, const RoundtripOptions& o, std::ostream& os) {
  if (o.count < 1) throw std::invalid_argument("--count must be >= 1");
  const auto res = coordinate_roundtrip(g.seed, o.count, o.range);
  ConfigEcho echo;
  echo.add("command", "roundtrip-check");
  echo.add("count", o.count);
  echo.add("range", o.range);
  echo.add("seed", g.seed);
  echo.print(os);
  os << "xi_max_abs_error=" << format_double(res.xi_max_abs) << "\n"
     << "polar_max_abs_error=" << format_double(res.polar_max_abs) << "\n";
  if (o.assert_mode && (res.xi_max_abs > xi_roundtrip_bound(o.range) || res.polar_max_abs > 1e-9))
    throw ToleranceFailure("coordinate round trip error exceeds tolerance");
  return kOk;
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& os = std::cout, std::ostream& es = std::cerr) {
  CLI::App app{"Lightfield coordinate transforms and John / Asgeirsson verification"};
  app.name("lfjohn");
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for random sample points")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();

  SynthOptions so;
  auto* synth = app.add_subcommand("synth", "Sample a scene's radiance onto a plenoptic raster");
  synth->add_option("--scene", so.scene, "Scene file (default: built-in fixture)")->check(CLI::ExistingFile);
  synth->add_option("--geometry", so.geometry, "Geometry file")->required();
  synth->add_option("--out", so.out, "Output PGM")->required();
  synth->add_option("--maxval", so.maxval, "255 or 65535")->check(CLI::IsMember({255, 65535}))->capture_default_str();
  synth->add_option("--scale", so.scale, "Radiance to [0,1] factor (default: 1/peak)");

  JohnOptions jo;
  auto* john = app.add_subcommand("check-john", "Finite-difference residuals of John's and the ultrahyperbolic equation");
  john->set_help_flag("--help", "Print this help message and exit");  // frees -h for --h
  john->add_option("--scene", jo.scene, "Scene file (default: built-in fixture)")->check(CLI::ExistingFile);
  john->add_option("--h", jo.h, "Stencil step; also run at h/2")->check(CLI::PositiveNumber)->capture_default_str();
  john->add_option("--points", jo.points, "Number of random sample rays")->capture_default_str();
  john->add_option("--box", jo.box, "Rays drawn uniformly from [-box, box]^4")->check(CLI::PositiveNumber)->capture_default_str();
  john->add_option("--which", jo.which, "john | ultrahyperbolic | both")
      ->check(CLI::IsMember({"john", "ultrahyperbolic", "both"}))
      ->capture_default_str();
  john->add_option("--out", jo.out, "CSV report (default: stdout)");
  john->add_flag("--assert", jo.assert_mode, "Fail (exit 3) unless h-halving ratio in band and rms small");
  john->add_option("--rms-tol", jo.rms_tol, "rms(h/2) bound relative to the field maximum")->capture_default_str();

  AsgeirssonOptions ao;
  auto* asg = app.add_subcommand("check-asgeirsson", "Circle-integral and discrete pixel-sum checks");
  asg->add_option("--mode", ao.mode, "continuous | discrete")
      ->check(CLI::IsMember({"continuous", "discrete"}))
      ->capture_default_str();
  asg->add_option("--scene", ao.scene, "Scene file (default: built-in fixture)")->check(CLI::ExistingFile);
  asg->add_option("--archive", ao.archive, "Polar archive (discrete mode; default: analytic grid)")->check(CLI::ExistingFile);
  asg->add_option("--configs", ao.configs, "Random configurations per theorem")->capture_default_str();
  asg->add_option("--n1", ao.n1, "Nodes for theorem 1 circles")->check(CLI::Range(8, 1 << 20))->capture_default_str();
  asg->add_option("--n2", ao.n2, "Nodes per axis for theorem 2")->check(CLI::Range(8, 1 << 14))->capture_default_str();
  asg->add_option("--rmax", ao.rmax, "Radii drawn from (0, rmax]")->capture_default_str();
  asg->add_option("--center-box", ao.center_box, "Centres drawn from [-b, b]^4")->capture_default_str();
  asg->add_option("--r1max", ao.r1max)->check(CLI::NonNegativeNumber)->capture_default_str();
  asg->add_option("--r2max", ao.r2max)->check(CLI::NonNegativeNumber)->capture_default_str();
  asg->add_option("--rho", ao.rho, "Pixels per unit radius")->check(CLI::PositiveNumber)->capture_default_str();
  asg->add_option("--oversample", ao.oversample)->check(CLI::PositiveNumber)->capture_default_str();
  asg->add_flag("--include-partial", ao.include_partial, "Also assert on partially valid pairs");
  asg->add_option("--tol", ao.tol, "rel_diff tolerance (default 1e-8 continuous, 5e-2 discrete)");
  asg->add_option("--out", ao.out, "CSV report (default: stdout)");
  asg->add_flag("--assert", ao.assert_mode, "Fail (exit 3) when rel_diff exceeds the tolerance");

  PolarOptions po;
  auto* polar = app.add_subcommand("to-polar", "Resample a raster into the polar layout");
  polar->add_option("--raster", po.raster, "Input PGM/PPM")->required()->check(CLI::ExistingFile);
  polar->add_option("--geometry", po.geometry, "Geometry file")->required();
  polar->add_option("--r1max", po.r1max)->check(CLI::NonNegativeNumber)->capture_default_str();
  polar->add_option("--r2max", po.r2max)->check(CLI::NonNegativeNumber)->capture_default_str();
  polar->add_option("--rho", po.rho, "Pixels per unit radius")->check(CLI::PositiveNumber)->capture_default_str();
  polar->add_option("--shift", po.shift, "Override the geometry shift (pixels)")->check(CLI::NonNegativeNumber);
  polar->add_option("--shift-sign", po.shift_sign, "+1 or -1")->check(CLI::IsMember({1, -1}))->capture_default_str();
  polar->add_option("--oversample", po.oversample)->check(CLI::PositiveNumber)->capture_default_str();
  polar->add_flag("--separators", po.separators, "Black separator lines between blocks");
  polar->add_option("--out-archive", po.out_archive, "Polar archive output")->required();
  polar->add_option("--out-layout", po.out_layout, "Layout image output");

  ColormapOptions co;
  auto* cmap = app.add_subcommand("colormap", "Colour maps of the polar layout and of its footprint on the raster");
  cmap->add_option("--geometry", co.geometry, "Geometry file")->required();
  cmap->add_option("--r1max", co.r1max)->check(CLI::NonNegativeNumber)->capture_default_str();
  cmap->add_option("--r2max", co.r2max)->check(CLI::NonNegativeNumber)->capture_default_str();
  cmap->add_option("--rho", co.rho, "Pixels per unit radius")->check(CLI::PositiveNumber)->capture_default_str();
  cmap->add_option("--shift", co.shift, "Override the geometry shift (pixels)")->check(CLI::NonNegativeNumber);
  cmap->add_option("--shift-sign", co.shift_sign, "+1 or -1")->check(CLI::IsMember({1, -1}))->capture_default_str();
  cmap->add_option("--oversample", co.oversample)->check(CLI::PositiveNumber)->capture_default_str();
  cmap->add_flag("--separators", co.separators, "Black separator lines between blocks");
  cmap->add_option("--out-colormap", co.out_colormap, "Polar-layout colour map (PPM)")->required();
  cmap->add_option("--out-map", co.out_map, "Original-coordinates colour map (PPM)");

  RoundtripOptions ro;
  auto* rt = app.add_subcommand("roundtrip-check", "Random ray round trips through xi and polar coordinates");
  rt->add_option("--count", ro.count)->check(CLI::PositiveNumber)->capture_default_str();
  rt->add_option("--range", ro.range, "Components drawn from [-range, range]")->check(CLI::PositiveNumber)->capture_default_str();
  rt->add_flag("--assert", ro.assert_mode, "Fail (exit 3) when the error bounds are exceeded");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    os << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    os << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    es << "lfjohn: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*synth) return cmd_synth(g, so, os);
    if (*john) return cmd_check_john(g, jo, os);
    if (*asg) return cmd_check_asgeirsson(g, ao, os);
    if (*polar) return cmd_to_polar(g, po, os);
    if (*cmap) return cmd_colormap(g, co, os);
    if (*rt) return cmd_roundtrip(g, ro, os);
  } catch (const ToleranceFailure& e) {
    es << "lfjohn: " << e.what() << "\n";
    return kNumeric;
  } catch (const CLI::ParseError& e) {
    es << "lfjohn: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    es << "lfjohn: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace lfjohn::cli
