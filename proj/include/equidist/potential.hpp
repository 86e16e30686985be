#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "equidist/error.hpp"
#include "equidist/ext_complex.hpp"
#include "equidist/measure.hpp"
#include "equidist/parallel.hpp"
#include "equidist/poly.hpp"
#include "equidist/random.hpp"
#include "equidist/roots.hpp"

namespace equidist {

/// Parameter plane of z^2 + c: the complement of the Mandelbrot set.
struct MandelbrotParameter {};

/// Dynamical plane of P: the basin of infinity of P.
struct FilledJulia {
  DensePoly map;
};

/// Green's function with pole at infinity, computed from escape of the
/// orbit. `escape_radius` decides escape; once escaped the orbit is pushed
/// further to a large bailout so the truncation error is far below double
/// precision.
struct GreenEvaluator {
  std::variant<MandelbrotParameter, FilledJulia> target;
  int max_depth = 1000;
  double escape_radius = 2.0;

  static GreenEvaluator mandelbrot(int max_depth = 1000) { return {MandelbrotParameter{}, max_depth, 2.0}; }

  static GreenEvaluator filled_julia(DensePoly map, int max_depth = 1000) {
    if (map.degree() < 2) throw Error(ErrorCode::kInvalidArgument, "filled Julia set needs a map of degree >= 2");
    const double radius = std::max(2.0, 1.0 + map.max_normalized_lower_coeff());
    return {FilledJulia{std::move(map)}, max_depth, radius};
  }

  bool is_mandelbrot() const { return std::holds_alternative<MandelbrotParameter>(target); }
};

namespace detail {

inline constexpr int kRefineSteps = 64;

inline double green_mandelbrot(const GreenEvaluator& ge, Complex c) {
  // Orbit index j holds q_j(c) = P_c^j(0), of degree 2^(j-1) in c.
  Complex z = c;
  int j = 1;
  while (std::abs(z) <= ge.escape_radius) {
    if (j >= ge.max_depth) return 0.0;
    z = z * z + c;
    ++j;
  }
  constexpr double kBailout = 1e20;
  for (int extra = 0; extra < kRefineSteps && std::abs(z) < kBailout; ++extra) {
    z = z * z + c;
    ++j;
  }
  return std::max(0.0, std::ldexp(std::log(std::abs(z)), -(j - 1)));
}

inline Complex horner(const DensePoly& p, Complex z) {
  const auto c = p.coeffs();
  Complex acc = c.back();
  for (int i = p.degree() - 1; i >= 0; --i) acc = acc * z + c[static_cast<std::size_t>(i)];
  return acc;
}

inline double green_julia(const GreenEvaluator& ge, const FilledJulia& target, Complex z) {
  const DensePoly& map = target.map;
  const double n = map.degree();
  const double log_lead = std::log(std::abs(map.leading())) / (n - 1.0);
  int j = 0;
  while (std::abs(z) <= ge.escape_radius) {
    if (j >= ge.max_depth) return 0.0;
    z = horner(map, z);
    ++j;
  }
  const double bailout = std::min(1e20, std::pow(1e250 / std::max(1.0, map.coeff_l1()), 1.0 / n));
  for (int extra = 0; extra < kRefineSteps && std::abs(z) < bailout; ++extra) {
    z = horner(map, z);
    ++j;
  }
  // n^-j (log|P^j(z)| + log|a| / (n - 1)) for leading coefficient a.
  return std::max(0.0, (std::log(std::abs(z)) + log_lead) * std::pow(n, -j));
}

}  // namespace detail

/// g(z) >= 0; zero when the orbit has not escaped within max_depth.
inline double green_eval(const GreenEvaluator& ge, Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::kInvalidArgument, "green_eval: non-finite point");
  if (ge.is_mandelbrot()) return detail::green_mandelbrot(ge, z);
  return detail::green_julia(ge, std::get<FilledJulia>(ge.target), z);
}

/// Logarithmic potential p_mu(z) = integral of log|z - w| dmu(w). Returns -inf
/// when z is a support point carrying positive mass.
inline double potential_of_measure(const EmpiricalMeasure& mu, Complex z) {
  const auto pts = mu.points();
  const auto w = mu.weights();
  std::vector<double> terms(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (pts[i] == z) return -std::numeric_limits<double>::infinity();
    terms[i] = w[i] * std::log(std::abs(z - pts[i]));
  }
  return pairwise_sum<double>(terms);
}

struct RobinEstimate {
  double value = 0.0;          // estimate of I(omega)
  std::vector<double> radii;   // probe circles
  double spread = 0.0;         // max - min of the per-radius means
};

/// I(omega) from g(z) = log|z| - I(omega) + o(1): mean of log|z| - g(z) over
/// probe circles.
inline RobinEstimate robin_constant(const GreenEvaluator& ge, std::vector<double> radii = {1e3, 1e4, 1e5},
                                    int samples_per_circle = 16) {
  if (radii.empty() || samples_per_circle < 1)
    throw Error(ErrorCode::kInvalidArgument, "robin_constant: need at least one radius and one sample");
  RobinEstimate est;
  est.radii = radii;
  std::vector<double> all;
  std::vector<double> per_radius;
  for (double r : radii) {
    std::vector<double> vals;
    for (int s = 0; s < samples_per_circle; ++s) {
      const Complex z = std::polar(r, 2.0 * std::numbers::pi * (s + 0.5) / samples_per_circle);
      const double g = green_eval(ge, z);
      if (g == 0.0)
        throw Error(ErrorCode::kInsideSet, "robin_constant: probe radius " + std::to_string(r) +
                                               " does not escape; radii too small");
      vals.push_back(std::log(std::abs(z)) - g);
    }
    per_radius.push_back(pairwise_sum<double>(vals) / samples_per_circle);
    all.insert(all.end(), vals.begin(), vals.end());
  }
  est.value = pairwise_sum<double>(all) / static_cast<double>(all.size());
  const auto [lo, hi] = std::minmax_element(per_radius.begin(), per_radius.end());
  est.spread = *hi - *lo;
  return est;
}

/// Samples of the balanced (equilibrium) measure of K(P) by backward
/// iteration: each sample starts at 3 + 0i and follows `depth` inverse
/// branches of P chosen uniformly at random. Sample i uses the counter stream
/// (seed, i), so the cloud is reproducible regardless of threading.
inline EmpiricalMeasure brolin_sample(const DensePoly& map, int n_samples, int depth, std::uint64_t seed) {
  if (map.degree() < 2) throw Error(ErrorCode::kInvalidArgument, "brolin_sample: map must have degree >= 2");
  if (std::abs(map.leading() - Complex{1.0}) > 1e-12)
    throw Error(ErrorCode::kInvalidArgument, "brolin_sample: map must be monic");
  if (n_samples < 1) throw Error(ErrorCode::kInvalidArgument, "brolin_sample: need at least one sample");
  if (depth < 20) throw Error(ErrorCode::kInvalidArgument, "brolin_sample: depth must be >= 20");

  const int n = map.degree();
  const Complex seed_point{3.0, 0.0};
  std::vector<Complex> samples(static_cast<std::size_t>(n_samples));

  parallel_for(samples.size(), [&](std::size_t i) {
    Complex z = seed_point;
    for (int step = 0; step < depth; ++step) {
      const auto branch = static_cast<int>(counter_bits(seed, i, static_cast<std::uint64_t>(step)) %
                                           static_cast<std::uint64_t>(n));
      if (n == 2) {
        // w^2 + b w + c0 = z
        const Complex b = map[1];
        const Complex disc = std::sqrt(b * b - 4.0 * (map[0] - z));
        z = (-b + (branch == 0 ? disc : -disc)) / 2.0;
      } else {
        DensePoly shifted = map - DensePoly{z};
        AberthConfig cfg;
        cfg.init_radius = 1.0 + shifted.max_normalized_lower_coeff();
        cfg.tol = 1e-14;
        cfg.max_iter = 500;
        cfg.seed = 0x5EED;
        const RootSolveReport rep = solve_polynomial(shifted, cfg);
        if (!rep.all_converged())
          throw InverseBranchError(step, "brolin_sample: inverse branch solve failed at step " + std::to_string(step));
        z = rep.roots[static_cast<std::size_t>(branch)];
      }
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InverseBranchError(step, "brolin_sample: non-finite inverse image at step " + std::to_string(step));
    }
    samples[i] = z;
  });
  return EmpiricalMeasure::uniform(std::move(samples));
}

}  // namespace equidist
