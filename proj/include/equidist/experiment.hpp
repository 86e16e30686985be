#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "equidist/diagnostics.hpp"
#include "equidist/error.hpp"
#include "equidist/families.hpp"
#include "equidist/measure.hpp"
#include "equidist/potential.hpp"
#include "equidist/roots.hpp"

namespace equidist {

enum class ExitStatus : int { kOk = 0, kConfigError = 2, kPartial = 3, kIoError = 4 };

/// Invalid or inconsistent experiment configuration. `where()` names the
/// offending field path, or "line L, column C" for JSON syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a_k: either a constant or the index rule a_k = k.
struct ShiftRule {
  bool index_rule = false;
  Complex value{};

  Complex at(int k) const { return index_rule ? Complex(static_cast<double>(k)) : value; }
};

struct DiagnosticsSettings {
  double radius = 4.0;
  int n_probes = 64;
  std::vector<double> tau_list{0.05, 0.1, 0.2};
  int max_p = 8;
  int reference_k = 11;          // critical orbit: roots of q_K as the omega_M proxy
  int reference_samples = 10000;  // iterate family: Brolin cloud size
};

struct RenderSettings {
  Bounds bounds{-2.5, 1.0, -1.5, 1.5};
  int grid = 512;
  double clamp = 0.5;
  double dot_radius = 1.5;
  int width_px = 512;
  int max_depth = 1000;
};

struct OutputSettings {
  std::string csv_path;
  std::string svg_path;
  std::string report_path;
};

struct ExperimentConfig {
  FamilySpec family = FamilySpec::critical_orbit();
  std::optional<DensePoly> julia_map;  // map whose basin carries the Green's function (non-critical families)
  nlohmann::json family_descriptor;    // echoed into the report
  std::vector<int> k_list;
  int m = 0;
  ShiftRule shift;
  AberthConfig solver;
  DiagnosticsSettings diagnostics;
  RenderSettings render;
  OutputSettings output;
  SubsampleConfig subsample;

  GreenEvaluator green() const {
    if (family.is_critical_orbit()) return GreenEvaluator::mandelbrot(render.max_depth);
    return GreenEvaluator::filled_julia(*julia_map, render.max_depth);
  }
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + "." + key, "missing required field");
  return obj.at(key);
}

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError(path + "." + key, "unknown field");
}

inline double get_number(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

inline int get_int(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

inline Complex get_complex(const nlohmann::json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(path, "expected a number or [re, im]");
}

inline DensePoly get_poly(const nlohmann::json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a nonempty coefficient array (ascending powers)");
  std::vector<Complex> c;
  for (std::size_t i = 0; i < v.size(); ++i) c.push_back(get_complex(v[i], path + "[" + std::to_string(i) + "]"));
  DensePoly p(std::move(c));
  if (p.degree() < 2) throw ConfigError(path, "map must have degree >= 2");
  return p;
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

/// Parses and validates an experiment description.
inline ExperimentConfig parse_config(const nlohmann::json& root, bool allow_large = false) {
  using namespace detail;
  reject_unknown(root, {"family", "k_list", "m", "shift", "solver", "diagnostics", "render", "output", "subsample"},
                 "config");
  ExperimentConfig cfg;

  const auto& fam = require(root, "family", "config");
  reject_unknown(fam, {"kind", "map", "brolin"}, "config.family");
  const auto& kind = require(fam, "kind", "config.family");
  if (!kind.is_string()) throw ConfigError("config.family.kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "critical_orbit") {
    cfg.family = FamilySpec::critical_orbit();
  } else if (k == "iterate") {
    DensePoly map = get_poly(require(fam, "map", "config.family"), "config.family.map");
    cfg.julia_map = map;
    cfg.family = FamilySpec::iterate(std::move(map));
  } else if (k == "orthogonal") {
    const auto& b = require(fam, "brolin", "config.family");
    reject_unknown(b, {"map", "samples", "depth", "seed"}, "config.family.brolin");
    DensePoly map = get_poly(require(b, "map", "config.family.brolin"), "config.family.brolin.map");
    const int samples = b.contains("samples") ? get_int(b["samples"], "config.family.brolin.samples") : 20000;
    const int depth = b.contains("depth") ? get_int(b["depth"], "config.family.brolin.depth") : 40;
    const auto seed = b.contains("seed") ? static_cast<std::uint64_t>(get_int(b["seed"], "config.family.brolin.seed")) : 1;
    try {
      cfg.family = FamilySpec::orthogonal(brolin_sample(map, samples, depth, seed));
    } catch (const Error& e) {
      throw ConfigError("config.family.brolin", e.what());
    }
    cfg.julia_map = std::move(map);
  } else {
    throw ConfigError("config.family.kind", "expected critical_orbit, iterate or orthogonal, got '" + k + "'");
  }
  cfg.family_descriptor = fam;

  const auto& ks = require(root, "k_list", "config");
  if (!ks.is_array() || ks.empty()) throw ConfigError("config.k_list", "expected a nonempty integer array");
  for (std::size_t i = 0; i < ks.size(); ++i) cfg.k_list.push_back(get_int(ks[i], "config.k_list[" + std::to_string(i) + "]"));

  cfg.m = root.contains("m") ? get_int(root["m"], "config.m") : 0;
  if (cfg.m < 0) throw ConfigError("config.m", "must be >= 0");

  if (root.contains("shift")) {
    const auto& s = root["shift"];
    if (s.is_string()) {
      std::string rule = s.get<std::string>();
      rule.erase(std::remove(rule.begin(), rule.end(), ' '), rule.end());
      if (rule != "a_k=k") throw ConfigError("config.shift", "unknown shift rule '" + s.get<std::string>() + "'");
      cfg.shift.index_rule = true;
    } else {
      cfg.shift.value = get_complex(s, "config.shift");
    }
  }

  if (root.contains("solver")) {
    const auto& s = root["solver"];
    reject_unknown(s, {"init_radius", "tol", "max_iter", "seed"}, "config.solver");
    if (s.contains("init_radius")) cfg.solver.init_radius = get_number(s["init_radius"], "config.solver.init_radius");
    if (s.contains("tol")) cfg.solver.tol = get_number(s["tol"], "config.solver.tol");
    if (s.contains("max_iter")) cfg.solver.max_iter = get_int(s["max_iter"], "config.solver.max_iter");
    if (s.contains("seed")) cfg.solver.seed = static_cast<std::uint64_t>(get_int(s["seed"], "config.solver.seed"));
    if (!(cfg.solver.init_radius > 0)) throw ConfigError("config.solver.init_radius", "must be positive");
    if (!(cfg.solver.tol > 0)) throw ConfigError("config.solver.tol", "must be positive");
    if (cfg.solver.max_iter < 1) throw ConfigError("config.solver.max_iter", "must be >= 1");
  }

  if (root.contains("diagnostics")) {
    const auto& d = root["diagnostics"];
    reject_unknown(d, {"radius", "n_probes", "tau_list", "max_p", "reference_k", "reference_samples"},
                   "config.diagnostics");
    auto& out = cfg.diagnostics;
    if (d.contains("radius")) out.radius = get_number(d["radius"], "config.diagnostics.radius");
    if (d.contains("n_probes")) out.n_probes = get_int(d["n_probes"], "config.diagnostics.n_probes");
    if (d.contains("max_p")) out.max_p = get_int(d["max_p"], "config.diagnostics.max_p");
    if (d.contains("reference_k")) out.reference_k = get_int(d["reference_k"], "config.diagnostics.reference_k");
    if (d.contains("reference_samples"))
      out.reference_samples = get_int(d["reference_samples"], "config.diagnostics.reference_samples");
    if (d.contains("tau_list")) {
      const auto& t = d["tau_list"];
      if (!t.is_array()) throw ConfigError("config.diagnostics.tau_list", "expected an array");
      out.tau_list.clear();
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double tau = get_number(t[i], "config.diagnostics.tau_list[" + std::to_string(i) + "]");
        if (!(tau > 0)) throw ConfigError("config.diagnostics.tau_list[" + std::to_string(i) + "]", "must be positive");
        out.tau_list.push_back(tau);
      }
    }
    if (!(out.radius > 0)) throw ConfigError("config.diagnostics.radius", "must be positive");
    if (out.n_probes < 1) throw ConfigError("config.diagnostics.n_probes", "must be >= 1");
    if (out.max_p < 0 || out.max_p > 8) throw ConfigError("config.diagnostics.max_p", "must be in [0, 8]");
    if (out.reference_k < 1 || out.reference_k > 13) throw ConfigError("config.diagnostics.reference_k", "must be in [1, 13]");
    if (out.reference_samples < 1) throw ConfigError("config.diagnostics.reference_samples", "must be >= 1");
  }

  if (root.contains("render")) {
    const auto& r = root["render"];
    reject_unknown(r, {"bounds", "grid", "clamp", "dot_radius", "width", "max_depth"}, "config.render");
    auto& out = cfg.render;
    if (r.contains("bounds")) {
      const auto& b = r["bounds"];
      if (!b.is_array() || b.size() != 4) throw ConfigError("config.render.bounds", "expected [xmin, xmax, ymin, ymax]");
      out.bounds = {get_number(b[0], "config.render.bounds[0]"), get_number(b[1], "config.render.bounds[1]"),
                    get_number(b[2], "config.render.bounds[2]"), get_number(b[3], "config.render.bounds[3]")};
      if (out.bounds.degenerate()) throw ConfigError("config.render.bounds", "degenerate rectangle");
    }
    if (r.contains("grid")) out.grid = get_int(r["grid"], "config.render.grid");
    if (r.contains("clamp")) out.clamp = get_number(r["clamp"], "config.render.clamp");
    if (r.contains("dot_radius")) out.dot_radius = get_number(r["dot_radius"], "config.render.dot_radius");
    if (r.contains("width")) out.width_px = get_int(r["width"], "config.render.width");
    if (r.contains("max_depth")) out.max_depth = get_int(r["max_depth"], "config.render.max_depth");
    if (out.grid < 1) throw ConfigError("config.render.grid", "must be >= 1");
    if (!(out.clamp > 0)) throw ConfigError("config.render.clamp", "must be positive");
    if (!(out.dot_radius > 0)) throw ConfigError("config.render.dot_radius", "must be positive");
    if (out.width_px < 1) throw ConfigError("config.render.width", "must be >= 1");
    if (out.max_depth < 1) throw ConfigError("config.render.max_depth", "must be >= 1");
  }
  cfg.subsample.bounds = cfg.render.bounds;

  if (root.contains("subsample")) {
    const auto& s = root["subsample"];
    reject_unknown(s, {"grid", "max_iter"}, "config.subsample");
    if (s.contains("grid")) cfg.subsample.grid = get_int(s["grid"], "config.subsample.grid");
    if (s.contains("max_iter")) cfg.subsample.max_iter = get_int(s["max_iter"], "config.subsample.max_iter");
    if (cfg.subsample.grid < 1) throw ConfigError("config.subsample.grid", "must be >= 1");
    if (cfg.subsample.max_iter < 1) throw ConfigError("config.subsample.max_iter", "must be >= 1");
  }
  cfg.subsample.tol = cfg.solver.tol;

  const auto& o = require(root, "output", "config");
  reject_unknown(o, {"csv_path", "svg_path", "report_path"}, "config.output");
  auto path = [&](const char* key) -> std::string {
    if (!o.contains(key)) return {};
    if (!o[key].is_string()) throw ConfigError(std::string("config.output.") + key, "expected a string");
    return o[key].get<std::string>();
  };
  cfg.output = {path("csv_path"), path("svg_path"), path("report_path")};

  // Degree checks per k.
  for (std::size_t i = 0; i < cfg.k_list.size(); ++i) {
    const int kk = cfg.k_list[i];
    const std::string where = "config.k_list[" + std::to_string(i) + "]";
    if (cfg.family.is_critical_orbit()) {
      if (kk < 1) throw ConfigError(where, "critical-orbit index must be >= 1");
      if (kk > 13 && !allow_large) throw ConfigError(where, "k > 13 exceeds desk scale; pass --allow-large");
      if (kk <= 62 && (std::int64_t{1} << (kk - 1)) - cfg.m < 1) throw ConfigError(where, "degree n_k - m must be >= 1");
      continue;
    }
    std::int64_t n = 0;
    try {
      n = family_degree(cfg.family, kk);
    } catch (const Error& e) {
      if (!allow_large) throw ConfigError(where, e.what());
      continue;
    }
    if (n - cfg.m < 1) throw ConfigError(where, "degree n_k - m must be >= 1");
    if (n - cfg.m > kMaxSolveDegree && !allow_large) throw ConfigError(where, "degree exceeds desk scale; pass --allow-large");
  }
  return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text, bool allow_large = false) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  return parse_config(root, allow_large);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("write failed for '" + path + "'");
}

// ----------------------------------------------------------------------------
// CSV

struct RootRow {
  Complex z;
  double green_value = 0.0;
};

inline std::string format_csv(const std::vector<RootRow>& rows) {
  std::string out = "re,im,green_value\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.z.real(), r.z.imag(), r.green_value);
    out += buf;
  }
  return out;
}

inline std::vector<RootRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("re,im", 0) != 0) throw IoError("CSV missing 're,im,green_value' header");
  std::vector<RootRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ','))
      throw IoError("CSV line " + std::to_string(lineno) + ": expected re,im,green_value");
    std::getline(fields, c, ',');
    try {
      rows.push_back({{std::stod(a), std::stod(b)}, c.empty() ? 0.0 : std::stod(c)});
    } catch (const std::exception&) {
      throw IoError("CSV line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

// ----------------------------------------------------------------------------
// SVG

/// Green's function sampled at cell centres. Row 0 is the top (ymax) row.
struct GreenGrid {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

inline GreenGrid sample_green_grid(const GreenEvaluator& ge, const Bounds& b, int nx, int ny) {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::kInvalidArgument, "green grid must be nonempty");
  if (b.degenerate()) throw Error(ErrorCode::kInvalidArgument, "degenerate bounds");
  GreenGrid grid{nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny)};
  const double dx = (b.xmax - b.xmin) / nx;
  const double dy = (b.ymax - b.ymin) / ny;
  parallel_for(grid.values.size(), [&](std::size_t idx) {
    const int ix = static_cast<int>(idx % static_cast<std::size_t>(nx));
    const int iy = static_cast<int>(idx / static_cast<std::size_t>(nx));
    grid.values[idx] = green_eval(ge, {b.xmin + (ix + 0.5) * dx, b.ymax - (iy + 0.5) * dy});
  }, 256);
  return grid;
}

struct SvgStyle {
  int width_px = 512;
  double clamp = 0.5;      // g at or above this maps to white
  double dot_radius = 1.5;
};

/// Root scatter over a red potential layer: g = 0 is full red, fading
/// monotonically to white at g >= clamp. Horizontal runs of equal colour are
/// merged into one rectangle. Output is byte-deterministic.
inline std::string render_svg(std::span<const Complex> points, const GreenGrid& grid, const Bounds& bounds,
                              const SvgStyle& style = {}) {
  if (bounds.degenerate()) throw Error(ErrorCode::kInvalidArgument, "render_svg: degenerate bounds");
  if (grid.nx < 1 || grid.ny < 1 || grid.values.size() != static_cast<std::size_t>(grid.nx) * grid.ny)
    throw Error(ErrorCode::kInvalidArgument, "render_svg: empty or malformed grid");
  if (!(style.clamp > 0) || style.width_px < 1)
    throw Error(ErrorCode::kInvalidArgument, "render_svg: invalid style");

  const double w = style.width_px;
  const double h = std::max(1.0, std::round(w * (bounds.ymax - bounds.ymin) / (bounds.xmax - bounds.xmin)));
  const double cw = w / grid.nx;
  const double ch = h / grid.ny;

  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                w, h, w, h);
  out += buf;
  out += "<g shape-rendering=\"crispEdges\">\n";
  auto level = [&](double g) {
    return static_cast<int>(std::lround(255.0 * std::clamp(g / style.clamp, 0.0, 1.0)));
  };
  for (int iy = 0; iy < grid.ny; ++iy) {
    int ix = 0;
    while (ix < grid.nx) {
      const int lv = level(grid.at(ix, iy));
      int end = ix + 1;
      while (end < grid.nx && level(grid.at(end, iy)) == lv) ++end;
      std::snprintf(buf, sizeof buf, "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"#ff%02x%02x\"/>\n",
                    ix * cw, iy * ch, (end - ix) * cw, ch, lv, lv);
      out += buf;
      ix = end;
    }
  }
  out += "</g>\n<g fill=\"#000000\">\n";
  for (const auto& z : points) {
    const double cx = (z.real() - bounds.xmin) / (bounds.xmax - bounds.xmin) * w;
    const double cy = (bounds.ymax - z.imag()) / (bounds.ymax - bounds.ymin) * h;
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n", cx, cy, style.dot_radius);
    out += buf;
  }
  out += "</g>\n</svg>\n";
  return out;
}

// ----------------------------------------------------------------------------
// Runner

/// Replaces "{k}" with the index; without a placeholder and several k values,
/// "_k<k>" is inserted before the extension.
inline std::string path_for_k(const std::string& pattern, int k, bool multiple) {
  if (pattern.empty()) return {};
  const std::string tag = std::to_string(k);
  std::string out = pattern;
  const auto pos = out.find("{k}");
  if (pos != std::string::npos) return out.replace(pos, 3, tag);
  if (!multiple) return out;
  const std::filesystem::path p(pattern);
  return (p.parent_path() / (p.stem().string() + "_k" + tag + p.extension().string())).string();
}

struct KResult {
  int k = 0;
  bool partial = false;
  std::int64_t degree = 0;  // target degree n_k - m (0 when beyond 64 bits)
  Complex shift{};
  RootSolveReport solve;
  std::vector<RootRow> rows;
  std::string csv_path;
  std::string svg_path;
};

struct RunResult {
  ExitStatus status = ExitStatus::kOk;
  std::vector<KResult> results;
  nlohmann::json report;
};

namespace detail {

inline std::optional<EmpiricalMeasure> reference_measure(const ExperimentConfig& cfg, nlohmann::json& meta) {
  if (cfg.family.is_critical_orbit()) {
    const int kref = cfg.diagnostics.reference_k;
    // Sweeps needed grow linearly with degree; the reference must converge fully.
    AberthConfig solver = cfg.solver;
    solver.max_iter = std::max(solver.max_iter, 1 << kref);
    const RootSolveReport rep = solve_shifted(cfg.family, kref, 0, 0.0, solver);
    meta = {{"kind", "self_proxy_roots"}, {"k", kref}, {"size", rep.roots.size()},
            {"converged_count", rep.converged_count}};
    return root_distribution(rep.roots, static_cast<int>(rep.roots.size()));
  }
  if (cfg.family.is_orthogonal()) {
    const auto& mu = std::get<OrthogonalSampled>(cfg.family.kind).measure;
    meta = {{"kind", "sampled_measure"}, {"size", mu.size()}};
    return mu;
  }
  const DensePoly& map = *cfg.julia_map;
  if (std::abs(map.leading() - Complex{1.0}) > 1e-12) {
    meta = {{"kind", "none"}, {"reason", "map is not monic"}};
    return std::nullopt;
  }
  meta = {{"kind", "brolin"}, {"size", cfg.diagnostics.reference_samples}, {"depth", 40}};
  return brolin_sample(map, cfg.diagnostics.reference_samples, 40, cfg.solver.seed);
}

inline constexpr double kSubsampleLogModulus = 1e-6;

// log(n_k - m) for dynamical families, valid far past 64-bit degrees.
inline double log_degree(const FamilySpec& spec, int k, int m) {
  double log_n = 0.0;
  if (spec.is_critical_orbit()) {
    log_n = (k - 1) * std::numbers::ln2;
  } else {
    log_n = k * std::log(static_cast<double>(std::get<IterateFixed>(spec.kind).map.degree()));
  }
  // n - m = n (1 - m/n); the correction only matters for small n.
  return log_n + std::log1p(-m * std::exp(-log_n));
}

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

}  // namespace detail

/// Runs every k of the experiment and writes its artifacts: one CSV and one
/// SVG per k and a merged JSON report. Library errors propagate; a solve
/// that leaves roots unconverged yields ExitStatus::kPartial.
inline RunResult run(const ExperimentConfig& cfg) {
  RunResult result;
  const GreenEvaluator ge = cfg.green();
  const bool multiple = cfg.k_list.size() > 1;

  nlohmann::json ref_meta;
  const std::optional<EmpiricalMeasure> reference = detail::reference_measure(cfg, ref_meta);

  std::optional<GreenGrid> grid;
  if (!cfg.output.svg_path.empty()) {
    const double aspect = (cfg.render.bounds.ymax - cfg.render.bounds.ymin) / (cfg.render.bounds.xmax - cfg.render.bounds.xmin);
    const int ny = std::max(1, static_cast<int>(std::lround(cfg.render.grid * aspect)));
    grid = sample_green_grid(ge, cfg.render.bounds, cfg.render.grid, ny);
  }

  nlohmann::json runs = nlohmann::json::array();
  for (int k : cfg.k_list) {
    KResult kr;
    kr.k = k;
    kr.shift = cfg.shift.at(k);
    nlohmann::json entry = {{"k", k}, {"m", cfg.m}, {"shift", detail::complex_json(kr.shift)}};

    std::int64_t base_degree = 0;
    bool fits = true;
    try {
      base_degree = family_degree(cfg.family, k);
    } catch (const Error&) {
      fits = false;
    }
    kr.degree = fits ? base_degree - cfg.m : 0;
    kr.partial = !fits || kr.degree > kMaxSolveDegree;

    if (!kr.partial) {
      kr.solve = solve_shifted(FamilyMember(cfg.family, k), cfg.m, kr.shift, cfg.solver);
    } else {
      // Dynamical families only: evaluate through the recurrence directly.
      const int m = cfg.m;
      const Complex a = kr.shift;
      auto jet = [&](Complex z) {
        if (cfg.family.is_critical_orbit()) return critical_orbit_jet(z, k, m + 1);
        return iterate_jet(std::get<IterateFixed>(cfg.family.kind).map, z, k, m + 1);
      };
      // Once the degree dwarfs 1/tol, |p/p'| ~ 1/(degree |grad g|) passes the step
      // test anywhere off K. A double-precision zero must also have
      // |p|^(1/degree) close to 1.
      // At a true zero, log|p| ~ log|p'| + log(eps |z|), which is O(log n) per unit degree.
      const double log_degree = detail::log_degree(cfg.family, k, m);
      const double inv_degree = std::exp(-log_degree);
      const double slack = detail::kSubsampleLogModulus + (64.0 + log_degree) * inv_degree;
      auto accept = [&](Complex z) {
        const ExtComplex v = jet(z)[m] - ExtComplex(a);
        return v.is_zero() || v.log_abs() * inv_degree <= slack;
      };
      kr.solve = newton_subsample([&](Complex z) { return shifted_ratio(jet(z), m, a); },
                                  fits ? kr.degree : std::numeric_limits<std::int64_t>::max(), cfg.subsample, accept);
    }

    kr.rows.resize(kr.solve.roots.size());
    parallel_for(kr.rows.size(), [&](std::size_t i) {
      kr.rows[i] = {kr.solve.roots[i], green_eval(ge, kr.solve.roots[i])};
    }, 16);

    entry["degree"] = kr.degree;
    entry["partial"] = kr.partial;
    entry["roots_found"] = kr.solve.roots.size();
    entry["converged_count"] = kr.solve.converged_count;
    entry["iterations"] = kr.solve.iterations;
    entry["max_residual_ratio"] = kr.solve.max_residual_ratio;
    if (!kr.partial && !kr.solve.all_converged()) result.status = ExitStatus::kPartial;

    if (!kr.solve.roots.empty()) {
      const EmpiricalMeasure mu = kr.partial ? EmpiricalMeasure::uniform(kr.solve.roots)
                                             : root_distribution(kr.solve.roots, static_cast<int>(kr.degree));
      if (!kr.partial) {
        try {
          entry["discrepancy"] = kregularity_gap(FamilyMember(cfg.family, k), cfg.m, ge, cfg.diagnostics.radius,
                                                 cfg.diagnostics.n_probes);
        } catch (const Error& e) {
          entry["discrepancy"] = {{"error", e.what()}};
        }
      }
      nlohmann::json centering = nlohmann::json::array();
      for (double tau : cfg.diagnostics.tau_list) centering.push_back(centering_report(mu, ge, tau));
      entry["centering"] = centering;
      if (reference) entry["moment_gap"] = moment_gap(mu, *reference, cfg.diagnostics.max_p);
    }

    kr.csv_path = path_for_k(cfg.output.csv_path, k, multiple);
    kr.svg_path = path_for_k(cfg.output.svg_path, k, multiple);
    if (!kr.csv_path.empty()) write_text_file(kr.csv_path, format_csv(kr.rows));
    if (!kr.svg_path.empty()) {
      const SvgStyle style{cfg.render.width_px, cfg.render.clamp, cfg.render.dot_radius};
      write_text_file(kr.svg_path, render_svg(kr.solve.roots, *grid, cfg.render.bounds, style));
    }
    entry["csv_path"] = kr.csv_path;
    entry["svg_path"] = kr.svg_path;
    runs.push_back(std::move(entry));
    result.results.push_back(std::move(kr));
  }

  result.report = {{"family", cfg.family_descriptor},
                   {"reference", ref_meta},
                   {"runs", runs},
                   {"status", static_cast<int>(result.status)}};
  if (!cfg.output.report_path.empty()) write_text_file(cfg.output.report_path, result.report.dump(2) + "\n");
  return result;
}

}  // namespace equidist
