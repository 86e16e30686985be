#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "equidist/error.hpp"
#include "equidist/ext_complex.hpp"
#include "equidist/jet.hpp"
#include "equidist/measure.hpp"
#include "equidist/poly.hpp"

namespace equidist {

/// q_k(c) = P_c^k(0) with P_c(z) = z^2 + c, as polynomials in c.
struct CriticalOrbit {};

/// q_k = P^k, the k-fold iterate of a fixed polynomial of degree >= 2.
struct IterateFixed {
  DensePoly map;
};

/// q_k = monic orthogonal polynomial of degree k for a sampled measure.
struct OrthogonalSampled {
  EmpiricalMeasure measure;
};

struct FamilySpec {
  std::variant<CriticalOrbit, IterateFixed, OrthogonalSampled> kind;

  static FamilySpec critical_orbit() { return {CriticalOrbit{}}; }
  static FamilySpec iterate(DensePoly map) { return {IterateFixed{std::move(map)}}; }
  static FamilySpec orthogonal(EmpiricalMeasure measure) { return {OrthogonalSampled{std::move(measure)}}; }

  bool is_critical_orbit() const { return std::holds_alternative<CriticalOrbit>(kind); }
  bool is_iterate() const { return std::holds_alternative<IterateFixed>(kind); }
  bool is_orthogonal() const { return std::holds_alternative<OrthogonalSampled>(kind); }

  std::string name() const {
    if (is_critical_orbit()) return "critical_orbit";
    if (is_iterate()) return "iterate";
    return "orthogonal";
  }
};

/// n_k: 2^(k-1), deg(P)^k or k depending on the family.
inline std::int64_t family_degree(const FamilySpec& spec, int k) {
  if (spec.is_critical_orbit()) {
    if (k < 1) throw Error(ErrorCode::kInvalidArgument, "critical-orbit index must be >= 1");
    if (k > 62) throw Error(ErrorCode::kDegreeGuard, "critical-orbit degree 2^" + std::to_string(k - 1) + " exceeds 2^61");
    return std::int64_t{1} << (k - 1);
  }
  if (const auto* it = std::get_if<IterateFixed>(&spec.kind)) {
    if (k < 0) throw Error(ErrorCode::kInvalidArgument, "iterate index must be >= 0");
    const std::int64_t n = it->map.degree();
    std::int64_t d = 1;
    for (int i = 0; i < k; ++i) {
      if (d > std::numeric_limits<std::int64_t>::max() / n)
        throw Error(ErrorCode::kDegreeGuard, "iterate degree overflows 64 bits");
      d *= n;
    }
    return d;
  }
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "orthogonal index must be >= 0");
  return k;
}

/// (q_k(c), q_k'(c), ..., q_k^(m)(c)) for the critical orbit q_1 = c,
/// q_{k+1} = q_k^2 + c, differentiated in c through jet products.
inline Jet critical_orbit_jet(Complex c, int k, int m) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "critical-orbit index must be >= 1");
  const Jet param = Jet::variable(ExtComplex(c), m);
  Jet q = param;
  for (int i = 1; i < k; ++i) q = q * q + param;
  return q;
}

namespace detail {

inline void require_dynamic_map(const DensePoly& map) {
  if (map.degree() < 2) throw Error(ErrorCode::kInvalidArgument, "iterated map must have degree >= 2");
}

// Jet of map(f) given the jet of f.
inline Jet compose_jet(const DensePoly& map, const Jet& f) {
  const auto c = map.coeffs();
  const int order = f.order();
  Jet acc = Jet::constant(ExtComplex(c.back()), order);
  for (int i = map.degree() - 1; i >= 0; --i)
    acc = acc * f + Jet::constant(ExtComplex(c[static_cast<std::size_t>(i)]), order);
  return acc;
}

}  // namespace detail

/// Jet of P^k at z in the variable z; k = 0 gives the identity jet.
inline Jet iterate_jet(const DensePoly& map, Complex z, int k, int m) {
  detail::require_dynamic_map(map);
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "iterate index must be >= 0");
  Jet f = Jet::variable(ExtComplex(z), m);
  for (int i = 0; i < k; ++i) f = detail::compose_jet(map, f);
  return f;
}

/// Monic orthogonal polynomials p_0..p_max_deg for <f, g> = sum w_i f(x_i)
/// conj(g(x_i)).
///
/// Arnoldi on the sampled shift operator: each new vector x * q_{k-1} is
/// orthogonalized (classical Gram-Schmidt, applied twice) against the
/// orthonormal basis, while the same operations are mirrored on monomial
/// coefficient vectors. Moment matrices never appear.
inline std::vector<DensePoly> orthogonal_family(const EmpiricalMeasure& mu, int max_deg) {
  if (max_deg < 0) throw Error(ErrorCode::kInvalidArgument, "max_deg must be >= 0");
  const auto x = mu.points();
  const auto w = mu.weights();
  const std::size_t n = x.size();

  auto inner = [&](const std::vector<Complex>& f, const std::vector<Complex>& g) {
    std::vector<Complex> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = w[i] * f[i] * std::conj(g[i]);
    return pairwise_sum<Complex>(terms);
  };

  std::vector<std::vector<Complex>> basis;       // sampled orthonormal q_j
  std::vector<std::vector<Complex>> basis_coeffs;  // monomial coefficients of q_j
  basis.emplace_back(n, Complex{1.0});
  basis_coeffs.push_back({Complex{1.0}});

  for (int k = 1; k <= max_deg; ++k) {
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i] * basis.back()[i];
    std::vector<Complex> vc(static_cast<std::size_t>(k) + 1);
    for (std::size_t l = 0; l < basis_coeffs.back().size(); ++l) vc[l + 1] = basis_coeffs.back()[l];
    const double start_norm = std::sqrt(inner(v, v).real());

    for (int pass = 0; pass < 2; ++pass) {
      std::vector<Complex> h(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) h[static_cast<std::size_t>(j)] = inner(v, basis[static_cast<std::size_t>(j)]);
      for (int j = 0; j < k; ++j) {
        const Complex hj = h[static_cast<std::size_t>(j)];
        const auto& qj = basis[static_cast<std::size_t>(j)];
        const auto& cj = basis_coeffs[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < n; ++i) v[i] -= hj * qj[i];
        for (std::size_t l = 0; l < cj.size(); ++l) vc[l] -= hj * cj[l];
      }
    }

    const double norm = std::sqrt(inner(v, v).real());
    if (!(norm > 1e-10 * start_norm) || start_norm == 0.0) {
      throw RankDeficientError(k, "orthogonal_family: sampled measure cannot support degree " + std::to_string(k) +
                                      " (too few distinct support points)");
    }
    for (auto& vi : v) vi /= norm;
    for (auto& ci : vc) ci /= norm;
    basis.push_back(std::move(v));
    basis_coeffs.push_back(std::move(vc));
  }

  std::vector<DensePoly> out;
  out.reserve(basis_coeffs.size());
  for (const auto& c : basis_coeffs) {
    std::vector<Complex> monic(c);
    const Complex lead = monic.back();
    for (auto& v : monic) v /= lead;
    monic.back() = 1.0;
    out.emplace_back(std::move(monic));
  }
  return out;
}

/// Explicit coefficients of q_k, for oracle cross-checks at small degree.
inline DensePoly expand_family(const FamilySpec& spec, int k) {
  constexpr std::int64_t kMaxDegree = 4096;
  const std::int64_t n = family_degree(spec, k);
  if (n > kMaxDegree)
    throw Error(ErrorCode::kDegreeGuard,
                "expand_family: degree " + std::to_string(n) + " exceeds " + std::to_string(kMaxDegree));

  DensePoly out;
  if (spec.is_critical_orbit()) {
    const DensePoly c{0.0, 1.0};
    out = c;
    for (int i = 1; i < k; ++i) out = out * out + c;
  } else if (const auto* it = std::get_if<IterateFixed>(&spec.kind)) {
    detail::require_dynamic_map(it->map);
    out = DensePoly{0.0, 1.0};
    for (int i = 0; i < k; ++i) out = compose(it->map, out);
  } else {
    out = orthogonal_family(std::get<OrthogonalSampled>(spec.kind).measure, k).back();
  }
  for (const auto& c : out.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw Error(ErrorCode::kDegreeGuard, "expand_family: coefficients overflow double range");
  return out;
}

/// One member q_k of a family, ready for pointwise jet evaluation. Orthogonal
/// members cache their coefficients; the dynamical families are evaluated
/// through their recurrences and never expanded.
class FamilyMember {
 public:
  FamilyMember(FamilySpec spec, int k) : spec_(std::move(spec)), k_(k), degree_(family_degree(spec_, k)) {
    if (const auto* it = std::get_if<IterateFixed>(&spec_.kind)) detail::require_dynamic_map(it->map);
    if (const auto* orth = std::get_if<OrthogonalSampled>(&spec_.kind))
      poly_ = orthogonal_family(orth->measure, k).back();
  }

  const FamilySpec& spec() const noexcept { return spec_; }
  int k() const noexcept { return k_; }
  std::int64_t degree() const noexcept { return degree_; }

  Jet jet(Complex z, int order) const {
    if (spec_.is_critical_orbit()) return critical_orbit_jet(z, k_, order);
    if (const auto* it = std::get_if<IterateFixed>(&spec_.kind)) return iterate_jet(it->map, z, k_, order);
    return horner_jet(poly_, z, order);
  }

  /// Leading coefficient gamma_k. All built-in families are monic.
  Complex leading() const { return spec_.is_orthogonal() ? poly_.leading() : leading_of_iterate(); }

 private:
  Complex leading_of_iterate() const {
    const auto* it = std::get_if<IterateFixed>(&spec_.kind);
    if (!it) return 1.0;
    // lead(P^k) = a^((n^k - 1)/(n - 1)) for lead(P) = a.
    const Complex a = it->map.leading();
    const double n = it->map.degree();
    return std::pow(a, (std::pow(n, k_) - 1.0) / (n - 1.0));
  }

  FamilySpec spec_;
  int k_;
  std::int64_t degree_;
  DensePoly poly_;
};

}  // namespace equidist
