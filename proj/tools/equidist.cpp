// equidist: experiment runner, oracles and renderer.
//
//   equidist run <config.json> [--allow-large]
//   equidist oracle chebyshev --k K --m M --a A
//   equidist oracle companion --coeffs c0 c1 ... [--imag i0 i1 ...]
//   equidist oracle brolin --map c0 c1 ... --samples N --depth D --seed S
//   equidist render <roots.csv> <config.json> [-o out.svg]
//
// Exit codes: 0 ok, 2 config error, 3 partial convergence, 4 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "equidist/companion.hpp"
#include "equidist/equidist.hpp"

namespace {

using equidist::Complex;
using equidist::ExitStatus;

int code(ExitStatus s) { return static_cast<int>(s); }

void print_points(const std::vector<Complex>& pts) {
  std::printf("re,im\n");
  for (const auto& z : pts) std::printf("%.17g,%.17g\n", z.real(), z.imag());
}

equidist::DensePoly poly_from(const std::vector<double>& re, const std::vector<double>& im) {
  std::vector<Complex> c(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) c[i] = {re[i], i < im.size() ? im[i] : 0.0};
  return equidist::DensePoly(std::move(c));
}

int cmd_run(const std::string& config_path, bool allow_large) {
  const std::string text = equidist::read_text_file(config_path);
  const equidist::ExperimentConfig cfg = equidist::parse_config_text(text, allow_large);
  const equidist::RunResult result = equidist::run(cfg);
  for (const auto& kr : result.results) {
    std::fprintf(stderr, "k=%d degree=%lld roots=%zu converged=%d iterations=%d%s\n", kr.k,
                 static_cast<long long>(kr.degree), kr.solve.roots.size(), kr.solve.converged_count,
                 kr.solve.iterations, kr.partial ? " (partial)" : "");
  }
  return code(result.status);
}

int cmd_render(const std::string& csv_path, const std::string& config_path, std::string out_path) {
  const auto cfg = equidist::parse_config_text(equidist::read_text_file(config_path), true);
  const auto rows = equidist::parse_csv(equidist::read_text_file(csv_path));
  std::vector<Complex> pts;
  for (const auto& r : rows) pts.push_back(r.z);
  const auto& b = cfg.render.bounds;
  const int ny = std::max(1, static_cast<int>(std::lround(cfg.render.grid * (b.ymax - b.ymin) / (b.xmax - b.xmin))));
  const auto grid = equidist::sample_green_grid(cfg.green(), b, cfg.render.grid, ny);
  if (out_path.empty()) out_path = std::filesystem::path(csv_path).replace_extension(".svg").string();
  equidist::write_text_file(out_path, equidist::render_svg(pts, grid, b,
                                                           {cfg.render.width_px, cfg.render.clamp, cfg.render.dot_radius}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Root and value distributions of derivatives of polynomial families"};
  app.require_subcommand(1);

  std::string config_path;
  bool allow_large = false;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_flag("--allow-large", allow_large, "Permit k beyond desk scale (partial subsampling mode)");

  auto* oracle = app.add_subcommand("oracle", "Independent reference computations");
  oracle->require_subcommand(1);

  int cheb_k = 0, cheb_m = 0;
  double cheb_a = 0.0;
  auto* cheb = oracle->add_subcommand("chebyshev", "Closed-form zeros of (P^k)^(m) - a for P = z^2 - 2");
  cheb->add_option("--k", cheb_k, "Iterate index")->required();
  cheb->add_option("--m", cheb_m, "Derivative order (0 or 1)");
  cheb->add_option("--a", cheb_a, "Real shift in [-2, 2]");

  std::vector<double> comp_re, comp_im;
  auto* comp = oracle->add_subcommand("companion", "Companion-matrix eigenvalues of a polynomial");
  comp->add_option("--coeffs", comp_re, "Real parts, ascending powers")->required();
  comp->add_option("--imag", comp_im, "Imaginary parts, ascending powers");

  std::vector<double> brolin_map;
  int brolin_samples = 1000, brolin_depth = 40;
  std::uint64_t brolin_seed = 1;
  auto* brolin = oracle->add_subcommand("brolin", "Backward-iteration samples of the balanced measure");
  brolin->add_option("--map", brolin_map, "Real coefficients of the monic map, ascending")->required();
  brolin->add_option("--samples", brolin_samples, "Number of samples");
  brolin->add_option("--depth", brolin_depth, "Inverse steps per sample (>= 20)");
  brolin->add_option("--seed", brolin_seed, "Random seed");

  std::string render_csv, render_config, render_out;
  auto* render = app.add_subcommand("render", "Render a roots CSV over the Green's function layer");
  render->add_option("csv", render_csv, "Roots CSV (re,im,green_value)")->required();
  render->add_option("config", render_config, "Experiment config supplying family and render settings")->required();
  render->add_option("-o,--output", render_out, "Output SVG path (default: CSV path with .svg)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitStatus::kConfigError);
  }

  try {
    if (*run) return cmd_run(config_path, allow_large);
    if (*render) return cmd_render(render_csv, render_config, render_out);
    if (*cheb) {
      print_points(equidist::chebyshev_oracle_roots(cheb_k, cheb_m, cheb_a));
    } else if (*comp) {
      print_points(equidist::companion_oracle(poly_from(comp_re, comp_im)));
    } else if (*brolin) {
      const auto mu = equidist::brolin_sample(poly_from(brolin_map, {}), brolin_samples, brolin_depth, brolin_seed);
      print_points({mu.points().begin(), mu.points().end()});
    }
    return 0;
  } catch (const equidist::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return code(ExitStatus::kConfigError);
  } catch (const equidist::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return code(ExitStatus::kIoError);
  } catch (const equidist::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return code(ExitStatus::kConfigError);
  }
}
