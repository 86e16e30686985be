#pragma once

#include <span>
#include <string>
#include <vector>

#include "equidist/error.hpp"
#include "equidist/ext_complex.hpp"

namespace equidist {

/// Value and derivatives (f(z), f'(z), ..., f^(m)(z)) at a point, truncated
/// at order m. Entries are true derivatives, not Taylor coefficients, so
/// products follow the Leibniz rule with binomial weights.
template <class T>
class BasicJet {
 public:
  explicit BasicJet(int order) : d_(static_cast<std::size_t>(order) + 1) {
    if (order < 0) throw Error(ErrorCode::kInvalidArgument, "jet order must be >= 0");
  }

  explicit BasicJet(std::vector<T> derivatives) : d_(std::move(derivatives)) {
    if (d_.empty()) throw Error(ErrorCode::kInvalidArgument, "jet needs at least a value");
  }

  /// Jet of the identity map at x: (x, 1, 0, ...).
  static BasicJet variable(const T& x, int order) {
    BasicJet j(order);
    j.d_[0] = x;
    if (order >= 1) j.d_[1] = T(1.0);
    return j;
  }

  static BasicJet constant(const T& x, int order) {
    BasicJet j(order);
    j.d_[0] = x;
    return j;
  }

  int order() const noexcept { return static_cast<int>(d_.size()) - 1; }
  const T& operator[](int j) const { return d_[static_cast<std::size_t>(j)]; }
  T& operator[](int j) { return d_[static_cast<std::size_t>(j)]; }
  std::span<const T> values() const noexcept { return d_; }

  BasicJet& operator+=(const BasicJet& rhs) {
    check_order(rhs);
    for (std::size_t j = 0; j < d_.size(); ++j) d_[j] += rhs.d_[j];
    return *this;
  }

  BasicJet& operator-=(const BasicJet& rhs) {
    check_order(rhs);
    for (std::size_t j = 0; j < d_.size(); ++j) d_[j] -= rhs.d_[j];
    return *this;
  }

  friend BasicJet operator+(BasicJet a, const BasicJet& b) { return a += b; }
  friend BasicJet operator-(BasicJet a, const BasicJet& b) { return a -= b; }

  friend BasicJet operator*(const BasicJet& a, const BasicJet& b) {
    a.check_order(b);
    const int m = a.order();
    BasicJet out(m);
    for (int j = 0; j <= m; ++j) {
      T acc{};
      double binom = 1.0;  // C(j, i)
      for (int i = 0; i <= j; ++i) {
        acc += (a[i] * b[j - i]) * binom;
        binom = binom * static_cast<double>(j - i) / static_cast<double>(i + 1);
      }
      out[j] = acc;
    }
    return out;
  }

 private:
  void check_order(const BasicJet& rhs) const {
    if (rhs.d_.size() != d_.size()) {
      throw Error(ErrorCode::kOrderMismatch,
                  "jet order mismatch: " + std::to_string(order()) + " vs " +
                      std::to_string(rhs.order()));
    }
  }

  std::vector<T> d_;
};

using Jet = BasicJet<ExtComplex>;

template <class T>
BasicJet<T> jet_mul(const BasicJet<T>& a, const BasicJet<T>& b) {
  return a * b;
}

template <class T>
BasicJet<T> jet_add(const BasicJet<T>& a, const BasicJet<T>& b) {
  return a + b;
}

template <class T, class S>
BasicJet<T> jet_scale(BasicJet<T> a, const S& s) {
  for (int j = 0; j <= a.order(); ++j) a[j] = a[j] * T(s);
  return a;
}

}  // namespace equidist
