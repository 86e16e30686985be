#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "equidist/error.hpp"
#include "equidist/families.hpp"
#include "equidist/measure.hpp"
#include "equidist/parallel.hpp"
#include "equidist/potential.hpp"

namespace equidist {

/// Sup-norm distance between (1/(n_k - m)) log|q_k^(m)| and the Green's
/// function on a probe circle.
struct DiscrepancyReport {
  double sup_gap = 0.0;
  double probe_circle_radius = 0.0;
  int n_probes = 0;
  std::int64_t normalization = 1;  // n_k - m
};

struct CenteringReport {
  double threshold_tau = 0.0;
  std::int64_t count_above = 0;  // roots with g > tau, with multiplicity
  double fraction_above = 0.0;
};

struct MomentGap {
  int p = 0;
  int q = 0;
  double gap = 0.0;
};

/// |int z^p conj(z)^q dmu - int z^p conj(z)^q domega| for p + q <= max_p.
struct MomentGapReport {
  int max_p = 0;
  std::vector<MomentGap> gaps;
  double max_gap = 0.0;

  double gap(int p, int q) const {
    for (const auto& g : gaps)
      if (g.p == p && g.q == q) return g.gap;
    throw Error(ErrorCode::kInvalidArgument, "moment (" + std::to_string(p) + "," + std::to_string(q) + ") not in report");
  }
};

inline DiscrepancyReport kregularity_gap(const FamilyMember& member, int m, const GreenEvaluator& ge, double radius,
                                         int n_probes) {
  if (m < 0) throw Error(ErrorCode::kInvalidArgument, "derivative order must be >= 0");
  if (n_probes < 1) throw Error(ErrorCode::kInvalidArgument, "kregularity_gap: need at least one probe");
  if (!(radius > 0.0)) throw Error(ErrorCode::kInvalidArgument, "kregularity_gap: radius must be positive");
  const std::int64_t norm = member.degree() - m;
  if (norm < 1) throw Error(ErrorCode::kZeroPolynomial, "kregularity_gap: q_k^(m) is constant");

  std::vector<double> gaps(static_cast<std::size_t>(n_probes));
  std::vector<char> inside(gaps.size(), 0);
  parallel_for(gaps.size(), [&](std::size_t j) {
    const Complex z = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(j) / n_probes);
    const ExtComplex value = member.jet(z, m)[m];
    const double g = green_eval(ge, z);
    if (value.is_zero() || g == 0.0) {
      inside[j] = 1;
      return;
    }
    gaps[j] = std::abs(value.log_abs() / static_cast<double>(norm) - g);
  }, 4);
  for (char c : inside)
    if (c) throw Error(ErrorCode::kInsideSet, "kregularity_gap: probe radius " + std::to_string(radius) +
                                                  " meets the compact set or a root; radius too small");

  DiscrepancyReport rep;
  rep.sup_gap = *std::max_element(gaps.begin(), gaps.end());
  rep.probe_circle_radius = radius;
  rep.n_probes = n_probes;
  rep.normalization = norm;
  return rep;
}

inline DiscrepancyReport kregularity_gap(const FamilySpec& spec, int k, int m, const GreenEvaluator& ge, double radius,
                                         int n_probes) {
  return kregularity_gap(FamilyMember(spec, k), m, ge, radius, n_probes);
}

/// Mass of the super-level set {g > tau}, a computable stand-in for closed
/// sets L away from K.
inline CenteringReport centering_report(const EmpiricalMeasure& roots, const GreenEvaluator& ge, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::kInvalidArgument, "centering_report: tau must be positive");
  const auto pts = roots.points();
  const auto w = roots.weights();
  std::vector<double> hit(pts.size(), 0.0);
  parallel_for(pts.size(), [&](std::size_t i) {
    if (green_eval(ge, pts[i]) > tau) hit[i] = w[i];
  }, 16);
  CenteringReport rep;
  rep.threshold_tau = tau;
  rep.fraction_above = pairwise_sum<double>(hit);
  rep.count_above = std::llround(rep.fraction_above * roots.scale_count());
  return rep;
}

namespace detail {

// int z^p conj(z)^q dmu for all p + q <= max_p, indexed [p][q].
inline std::vector<std::vector<Complex>> mixed_moments(const EmpiricalMeasure& mu, int max_p) {
  const auto pts = mu.points();
  const auto w = mu.weights();
  std::vector<std::vector<Complex>> out(static_cast<std::size_t>(max_p) + 1);
  std::vector<Complex> terms(pts.size());
  for (int p = 0; p <= max_p; ++p) {
    out[static_cast<std::size_t>(p)].resize(static_cast<std::size_t>(max_p - p) + 1);
    for (int q = 0; p + q <= max_p; ++q) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        // |z|^(2 min(p,q)) z^(p-q) or its conjugate counterpart.
        const Complex z = pts[i];
        const int lo = std::min(p, q);
        Complex v = std::pow(std::norm(z), lo);
        const Complex base = p >= q ? z : std::conj(z);
        for (int r = 0; r < std::abs(p - q); ++r) v *= base;
        terms[i] = w[i] * v;
      }
      out[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] = pairwise_sum<Complex>(terms);
    }
  }
  return out;
}

}  // namespace detail

inline MomentGapReport moment_gap(const EmpiricalMeasure& mu, const EmpiricalMeasure& omega_ref, int max_p) {
  if (max_p < 0 || max_p > 8) throw Error(ErrorCode::kInvalidArgument, "moment_gap: max_p must be in [0, 8]");
  const auto a = detail::mixed_moments(mu, max_p);
  const auto b = detail::mixed_moments(omega_ref, max_p);
  MomentGapReport rep;
  rep.max_p = max_p;
  for (int p = 0; p <= max_p; ++p) {
    for (int q = 0; p + q <= max_p; ++q) {
      // Both are probability measures: the zeroth moments agree by definition.
      const double g = (p == 0 && q == 0)
                           ? 0.0
                           : std::abs(a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] -
                                      b[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]);
      rep.gaps.push_back({p, q, g});
      rep.max_gap = std::max(rep.max_gap, g);
    }
  }
  return rep;
}

/// Closed-form zeros for the Chebyshev family P^k - a with P = z^2 - 2, using
/// 2cos(t) -> 2cos(2^k t). m = 0 needs real a in [-2, 2]; m = 1 only a = 0.
inline std::vector<Complex> chebyshev_oracle_roots(int k, int m, Complex a) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "chebyshev_oracle_roots: k must be >= 0");
  if (k > 24) throw Error(ErrorCode::kDegreeGuard, "chebyshev_oracle_roots: k too large");
  const std::int64_t n = std::int64_t{1} << k;
  std::vector<Complex> roots;
  if (m == 0) {
    if (a.imag() != 0.0 || std::abs(a.real()) > 2.0)
      throw Error(ErrorCode::kUnsupported, "chebyshev_oracle_roots: m = 0 needs real a in [-2, 2]");
    const double theta = std::acos(a.real() / 2.0);
    for (std::int64_t j = 0; j < n; ++j)
      roots.emplace_back(2.0 * std::cos((theta + 2.0 * std::numbers::pi * static_cast<double>(j)) / static_cast<double>(n)));
    return roots;
  }
  if (m == 1) {
    if (a != Complex{}) throw Error(ErrorCode::kUnsupported, "chebyshev_oracle_roots: m = 1 needs a = 0");
    if (k < 1) throw Error(ErrorCode::kZeroPolynomial, "chebyshev_oracle_roots: derivative of the identity is constant");
    for (std::int64_t j = 1; j < n; ++j)
      roots.emplace_back(2.0 * std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n)));
    return roots;
  }
  throw Error(ErrorCode::kUnsupported, "chebyshev_oracle_roots: only m = 0 or m = 1");
}

/// Kolmogorov distance to the arcsine law F(x) = 1/2 + asin(x/2)/pi on [-2, 2].
inline double arcsine_ks_distance(std::span<const Complex> roots) {
  if (roots.empty()) throw Error(ErrorCode::kInvalidArgument, "arcsine_ks_distance: no roots");
  std::vector<double> x;
  x.reserve(roots.size());
  for (const auto& r : roots) {
    if (std::abs(r.imag()) > 1e-6)
      throw Error(ErrorCode::kInvalidArgument, "arcsine_ks_distance: non-real root " + std::to_string(r.real()) + "+" +
                                                   std::to_string(r.imag()) + "i");
    x.push_back(r.real());
  }
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 0.5 + std::asin(std::clamp(x[i] / 2.0, -1.0, 1.0)) / std::numbers::pi;
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// |(1/n_k) log|gamma_k| + I(omega)|.
inline double leading_coeff_gap(const DensePoly& q, const RobinEstimate& robin) {
  if (q.degree() < 1) throw Error(ErrorCode::kZeroPolynomial, "leading_coeff_gap: polynomial must be non-constant");
  return std::abs(std::log(std::abs(q.leading())) / q.degree() + robin.value);
}

inline double leading_coeff_gap(const FamilySpec& spec, int k, const RobinEstimate& robin) {
  const FamilyMember member(spec, k);
  if (member.degree() < 1) throw Error(ErrorCode::kZeroPolynomial, "leading_coeff_gap: q_k is constant");
  return std::abs(std::log(std::abs(member.leading())) / static_cast<double>(member.degree()) + robin.value);
}

inline void to_json(nlohmann::json& j, const DiscrepancyReport& r) {
  j = {{"sup_gap", r.sup_gap},
       {"probe_circle_radius", r.probe_circle_radius},
       {"n_probes", r.n_probes},
       {"normalization", r.normalization}};
}

inline void to_json(nlohmann::json& j, const CenteringReport& r) {
  j = {{"threshold_tau", r.threshold_tau}, {"count_above", r.count_above}, {"fraction_above", r.fraction_above}};
}

inline void to_json(nlohmann::json& j, const MomentGapReport& r) {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& g : r.gaps) table.push_back({g.p, g.q, g.gap});
  j = {{"max_p", r.max_p}, {"gaps", table}, {"max_gap", r.max_gap}};
}

inline void to_json(nlohmann::json& j, const RobinEstimate& r) {
  j = {{"value", r.value}, {"radii", r.radii}, {"spread", r.spread}};
}

}  // namespace equidist
