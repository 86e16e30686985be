#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "equidist/error.hpp"
#include "equidist/ext_complex.hpp"
#include "equidist/families.hpp"
#include "equidist/jet.hpp"
#include "equidist/parallel.hpp"
#include "equidist/poly.hpp"
#include "equidist/random.hpp"

namespace equidist {

struct AberthConfig {
  double init_radius = 2.5;
  double tol = 1e-10;
  int max_iter = 200;
  std::uint64_t seed = 0;
};

struct RootSolveReport {
  std::vector<Complex> roots;
  std::vector<bool> converged;
  int iterations = 0;
  double max_residual_ratio = 0.0;  // max_i |p(z_i) / p'(z_i)|
  int converged_count = 0;

  bool all_converged() const noexcept { return converged_count == static_cast<int>(roots.size()); }
};

/// Axis-aligned rectangle in the complex plane.
struct Bounds {
  double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;

  bool degenerate() const noexcept {
    return !(std::isfinite(xmin) && std::isfinite(xmax) && std::isfinite(ymin) && std::isfinite(ymax)) ||
           !(xmax > xmin) || !(ymax > ymin);
  }
  bool contains(Complex z) const noexcept {
    return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax;
  }
};

/// Newton ratio p/p' for p = jet[m] - shift, p' = jet[m + 1]. Non-finite
/// when p' vanishes.
inline Complex shifted_ratio(const Jet& jet, int m, Complex shift) {
  const ExtComplex p = jet[m] - ExtComplex(shift);
  const ExtComplex dp = jet[m + 1];
  if (dp.is_zero()) {
    if (p.is_zero()) return {0.0, 0.0};
    return {std::numeric_limits<double>::infinity(), 0.0};
  }
  return (p / dp).to_complex();
}

namespace detail {

inline std::vector<Complex> circle_start(int degree, double radius, std::uint64_t seed) {
  constexpr double kGoldenAngle = std::numbers::pi * (3.0 - 2.23606797749978969640);
  const double step = 2.0 * std::numbers::pi / degree;
  const double phase = std::fmod(static_cast<double>(seed % 1000003) * kGoldenAngle, step);
  std::vector<Complex> z(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) {
    const double jitter = 0.25 * (counter_uniform(seed, 0xAB, static_cast<std::uint64_t>(i)) - 0.5) * step;
    z[static_cast<std::size_t>(i)] = std::polar(radius, phase + step * i + jitter);
  }
  return z;
}

}  // namespace detail

/// Ehrlich-Aberth simultaneous iteration.
///
/// `ratio(z)` must return p(z)/p'(z) for the target polynomial of the given
/// degree. Each sweep evaluates all ratios against a snapshot of the current
/// iterates (Jacobi style), so the result does not depend on thread count.
/// A root is frozen once its correction drops below tol * (1 + |z|).
template <class RatioFn>
RootSolveReport aberth_solve(RatioFn&& ratio, int degree, const AberthConfig& cfg) {
  if (degree < 1) throw Error(ErrorCode::kInvalidArgument, "aberth_solve: degree must be >= 1");
  if (!(cfg.init_radius > 0.0) || !(cfg.tol > 0.0) || cfg.max_iter < 1)
    throw Error(ErrorCode::kInvalidArgument, "aberth_solve: invalid solver configuration");

  const std::size_t n = static_cast<std::size_t>(degree);
  std::vector<Complex> z = detail::circle_start(degree, cfg.init_radius, cfg.seed);
  std::vector<char> done(n, 0);
  std::vector<Complex> w(n);
  std::vector<Complex> next(n);
  std::vector<char> next_done(n, 0);

  RootSolveReport report;
  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    report.iterations = iter;
    parallel_for(n, [&](std::size_t i) {
      if (!done[i]) w[i] = ratio(z[i]);
    }, 8);
    parallel_for(n, [&](std::size_t i) {
      next[i] = z[i];
      next_done[i] = done[i];
      if (done[i]) return;
      Complex delta = w[i];
      if (!std::isfinite(delta.real()) || !std::isfinite(delta.imag())) {
        // Stationary point of p: kick off it deterministically.
        delta = std::polar(1e-3 * (1.0 + std::abs(z[i])), 2.0 * std::numbers::pi * counter_uniform(cfg.seed, i, iter));
      } else if (delta != Complex{}) {
        Complex pull{};
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const Complex d = z[i] - z[j];
          if (d != Complex{}) pull += 1.0 / d;
        }
        const Complex denom = 1.0 - delta * pull;
        if (denom != Complex{} && std::isfinite(denom.real()) && std::isfinite(denom.imag())) delta /= denom;
      }
      next[i] = z[i] - delta;
      if (std::abs(delta) <= cfg.tol * (1.0 + std::abs(z[i]))) next_done[i] = 1;
    }, 8);
    z.swap(next);
    done.swap(next_done);
    bool all = true;
    for (char d : done) all = all && d;
    if (all) break;
  }

  std::vector<double> residual(n);
  parallel_for(n, [&](std::size_t i) {
    const Complex r = ratio(z[i]);
    residual[i] = std::isfinite(std::abs(r)) ? std::abs(r) : std::numeric_limits<double>::infinity();
  }, 8);

  report.roots = std::move(z);
  report.converged.assign(done.begin(), done.end());
  for (std::size_t i = 0; i < n; ++i) {
    report.max_residual_ratio = std::max(report.max_residual_ratio, residual[i]);
    if (done[i]) ++report.converged_count;
  }
  return report;
}

/// Roots of an explicit polynomial.
inline RootSolveReport solve_polynomial(const DensePoly& p, const AberthConfig& cfg) {
  if (p.degree() < 1) throw Error(ErrorCode::kZeroPolynomial, "solve_polynomial: degree must be >= 1");
  return aberth_solve([&](Complex z) { return shifted_ratio(horner_jet(p, z, 1), 0, 0.0); }, p.degree(), cfg);
}

inline constexpr std::int64_t kMaxSolveDegree = 8192;

/// Roots of q_k^(m) - a, i.e. the preimages of a under the m-th derivative.
inline RootSolveReport solve_shifted(const FamilyMember& member, int m, Complex a, const AberthConfig& cfg) {
  if (m < 0) throw Error(ErrorCode::kInvalidArgument, "derivative order must be >= 0");
  const std::int64_t degree = member.degree() - m;
  if (degree < 1)
    throw Error(ErrorCode::kZeroPolynomial, "solve_shifted: q_k^(m) is constant (degree " +
                                                std::to_string(member.degree()) + ", m = " + std::to_string(m) + ")");
  if (degree > kMaxSolveDegree)
    throw Error(ErrorCode::kDegreeGuard, "solve_shifted: degree " + std::to_string(degree) + " exceeds " +
                                             std::to_string(kMaxSolveDegree));
  return aberth_solve([&](Complex z) { return shifted_ratio(member.jet(z, m + 1), m, a); }, static_cast<int>(degree),
                      cfg);
}

inline RootSolveReport solve_shifted(const FamilySpec& spec, int k, int m, Complex a, const AberthConfig& cfg) {
  return solve_shifted(FamilyMember(spec, k), m, a, cfg);
}

struct SubsampleConfig {
  Bounds bounds{-2.5, 1.0, -1.5, 1.5};
  int grid = 64;  // seeds per side
  double tol = 1e-10;
  int max_iter = 200;
};

/// Partial root search for degrees beyond full simultaneous solving: Newton
/// from a grid of seeds, keeping distinct converged points inside the bounds
/// that also pass `accept`. At most `degree` roots are returned; `converged`
/// is all true.
template <class RatioFn, class AcceptFn>
RootSolveReport newton_subsample(RatioFn&& ratio, std::int64_t degree, const SubsampleConfig& cfg, AcceptFn&& accept) {
  if (cfg.bounds.degenerate()) throw Error(ErrorCode::kInvalidArgument, "newton_subsample: degenerate bounds");
  if (cfg.grid < 1) throw Error(ErrorCode::kInvalidArgument, "newton_subsample: grid must be >= 1");
  const std::size_t g = static_cast<std::size_t>(cfg.grid);
  std::vector<Complex> found(g * g);
  std::vector<char> ok(g * g, 0);
  std::vector<int> iters(g * g, 0);
  parallel_for(g * g, [&](std::size_t idx) {
    const double fx = (static_cast<double>(idx % g) + 0.5) / static_cast<double>(g);
    const double fy = (static_cast<double>(idx / g) + 0.5) / static_cast<double>(g);
    Complex z{cfg.bounds.xmin + fx * (cfg.bounds.xmax - cfg.bounds.xmin),
              cfg.bounds.ymin + fy * (cfg.bounds.ymax - cfg.bounds.ymin)};
    for (int it = 1; it <= cfg.max_iter; ++it) {
      const Complex step = ratio(z);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return;
      z -= step;
      iters[idx] = it;
      if (std::abs(step) <= cfg.tol * (1.0 + std::abs(z))) {
        ok[idx] = cfg.bounds.contains(z) && accept(z);
        found[idx] = z;
        return;
      }
    }
  });

  RootSolveReport report;
  const double merge = std::sqrt(cfg.tol);
  for (std::size_t idx = 0; idx < g * g; ++idx) {
    report.iterations = std::max(report.iterations, iters[idx]);
    if (!ok[idx]) continue;
    if (static_cast<std::int64_t>(report.roots.size()) >= degree) break;
    bool dup = false;
    for (const auto& r : report.roots)
      if (std::abs(r - found[idx]) <= merge * (1.0 + std::abs(r))) {
        dup = true;
        break;
      }
    if (!dup) report.roots.push_back(found[idx]);
  }
  report.converged.assign(report.roots.size(), true);
  report.converged_count = static_cast<int>(report.roots.size());
  for (const auto& r : report.roots) report.max_residual_ratio = std::max(report.max_residual_ratio, std::abs(ratio(r)));
  return report;
}

template <class RatioFn>
RootSolveReport newton_subsample(RatioFn&& ratio, std::int64_t degree, const SubsampleConfig& cfg) {
  return newton_subsample(std::forward<RatioFn>(ratio), degree, cfg, [](Complex) { return true; });
}

}  // namespace equidist
