#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "equidist/error.hpp"
#include "equidist/ext_complex.hpp"
#include "equidist/jet.hpp"

namespace equidist {

/// Dense polynomial sum_i coeffs[i] z^i, kept trimmed so that the leading
/// coefficient is nonzero. The zero polynomial has no coefficients and
/// degree -1.
class DensePoly {
 public:
  DensePoly() = default;

  explicit DensePoly(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }

  DensePoly(std::initializer_list<Complex> coeffs) : c_(coeffs) { trim(); }

  static DensePoly monomial(int degree, Complex coeff = 1.0) {
    std::vector<Complex> c(static_cast<std::size_t>(degree) + 1);
    c.back() = coeff;
    return DensePoly(std::move(c));
  }

  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const noexcept { return c_.empty(); }

  Complex leading() const {
    if (is_zero()) throw Error(ErrorCode::kZeroPolynomial, "zero polynomial has no leading coefficient");
    return c_.back();
  }

  std::span<const Complex> coeffs() const noexcept { return c_; }

  Complex operator[](int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Complex{};
  }

  DensePoly& operator+=(const DensePoly& rhs) {
    if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size());
    for (std::size_t i = 0; i < rhs.c_.size(); ++i) c_[i] += rhs.c_[i];
    trim();
    return *this;
  }

  DensePoly& operator-=(const DensePoly& rhs) {
    if (rhs.c_.size() > c_.size()) c_.resize(rhs.c_.size());
    for (std::size_t i = 0; i < rhs.c_.size(); ++i) c_[i] -= rhs.c_[i];
    trim();
    return *this;
  }

  DensePoly& operator*=(Complex s) {
    for (auto& c : c_) c *= s;
    trim();
    return *this;
  }

  friend DensePoly operator+(DensePoly a, const DensePoly& b) { return a += b; }
  friend DensePoly operator-(DensePoly a, const DensePoly& b) { return a -= b; }
  friend DensePoly operator*(DensePoly a, Complex s) { return a *= s; }

  friend DensePoly operator*(const DensePoly& a, const DensePoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Complex> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return DensePoly(std::move(out));
  }

  friend bool operator==(const DensePoly& a, const DensePoly& b) = default;

  /// Sum of coefficient moduli; bounds |p(z)| for |z| <= 1.
  double coeff_l1() const noexcept {
    double s = 0.0;
    for (const auto& c : c_) s += std::abs(c);
    return s;
  }

  /// Largest |c_i / c_n| over the non-leading coefficients.
  double max_normalized_lower_coeff() const {
    const double lead = std::abs(leading());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < c_.size(); ++i) m = std::max(m, std::abs(c_[i]) / lead);
    return m;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == Complex{}) c_.pop_back();
  }

  std::vector<Complex> c_;
};

namespace detail {

// True when Horner in plain doubles cannot overflow for this (p, z, order).
inline bool hardware_safe(const DensePoly& p, Complex z, int order) {
  const double n = static_cast<double>(std::max(p.degree(), 1));
  const double growth = std::log(std::max(1.0, p.coeff_l1())) +
                        n * std::log(std::max(1.0, std::abs(z))) +
                        static_cast<double>(order) * std::log(n);
  return std::isfinite(growth) && growth < 600.0;
}

// Taylor coefficients t_j = p^(j)(z)/j! by repeated synthetic division.
template <class T>
std::vector<T> taylor_coefficients(const DensePoly& p, const T& z, int order) {
  std::vector<T> t(static_cast<std::size_t>(order) + 1);
  const auto c = p.coeffs();
  const int n = p.degree();
  t[0] = T(c[static_cast<std::size_t>(n)]);
  for (int i = n - 1; i >= 0; --i) {
    for (int j = std::min(order, n - i); j >= 1; --j) t[j] = t[j] * z + t[j - 1];
    t[0] = t[0] * z + T(c[static_cast<std::size_t>(i)]);
  }
  return t;
}

}  // namespace detail

/// p(z). Uses hardware doubles when the magnitude is provably in range and
/// falls back to extended-exponent arithmetic otherwise.
inline ExtComplex horner_eval(const DensePoly& p, Complex z) {
  if (p.is_zero()) return ExtComplex{};
  if (detail::hardware_safe(p, z, 0)) return ExtComplex(detail::taylor_coefficients<Complex>(p, z, 0)[0]);
  return detail::taylor_coefficients<ExtComplex>(p, ExtComplex(z), 0)[0];
}

/// Jet (p(z), p'(z), ..., p^(order)(z)).
inline Jet horner_jet(const DensePoly& p, Complex z, int order) {
  Jet out(order);
  if (p.is_zero()) return out;
  double factorial = 1.0;
  if (detail::hardware_safe(p, z, order)) {
    const auto t = detail::taylor_coefficients<Complex>(p, z, order);
    for (int j = 0; j <= order; ++j) {
      if (j > 0) factorial *= j;
      out[j] = ExtComplex(t[static_cast<std::size_t>(j)] * factorial);
    }
  } else {
    const auto t = detail::taylor_coefficients<ExtComplex>(p, ExtComplex(z), order);
    for (int j = 0; j <= order; ++j) {
      if (j > 0) factorial *= j;
      out[j] = t[static_cast<std::size_t>(j)] * factorial;
    }
  }
  return out;
}

/// Formal m-th derivative. Differentiating past the degree yields the zero
/// polynomial; callers detect it with is_zero().
inline DensePoly derivative(const DensePoly& p, int m) {
  if (m < 0) throw Error(ErrorCode::kInvalidArgument, "derivative order must be >= 0");
  if (m > p.degree()) return {};
  std::vector<Complex> out(static_cast<std::size_t>(p.degree() - m) + 1);
  const auto c = p.coeffs();
  for (int i = m; i <= p.degree(); ++i) {
    double falling = 1.0;  // i! / (i - m)!
    for (int r = 0; r < m; ++r) falling *= static_cast<double>(i - r);
    out[static_cast<std::size_t>(i - m)] = c[static_cast<std::size_t>(i)] * falling;
  }
  return DensePoly(std::move(out));
}

/// outer(inner(z)) by Horner over polynomials.
inline DensePoly compose(const DensePoly& outer, const DensePoly& inner) {
  if (outer.is_zero()) return {};
  const auto c = outer.coeffs();
  DensePoly acc{c.back()};
  for (int i = outer.degree() - 1; i >= 0; --i) acc = acc * inner + DensePoly{c[static_cast<std::size_t>(i)]};
  return acc;
}

}  // namespace equidist
