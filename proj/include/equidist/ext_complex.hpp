#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>

namespace equidist {

using Complex = std::complex<double>;

/// Complex number with a separate 64-bit power-of-two exponent.
///
/// The value is `mantissa * 2^exponent`. After every operation the mantissa
/// is renormalized so that max(|re|, |im|) lies in [1/2, 1); zero is stored as
/// mantissa 0 with exponent 0. This keeps iterates such as q_k(c) for c far
/// outside the Mandelbrot set representable long after a hardware double
/// would overflow, and `log_abs()` stays finite for any exponent.
class ExtComplex {
 public:
  constexpr ExtComplex() = default;
  ExtComplex(Complex value) : mantissa_(value) { normalize(); }  // NOLINT
  ExtComplex(double value) : mantissa_(value, 0.0) { normalize(); }  // NOLINT

  static ExtComplex from_parts(Complex mantissa, std::int64_t exponent) {
    ExtComplex r;
    r.mantissa_ = mantissa;
    r.exponent_ = exponent;
    r.normalize();
    return r;
  }

  Complex mantissa() const noexcept { return mantissa_; }
  std::int64_t exponent() const noexcept { return exponent_; }

  bool is_zero() const noexcept {
    return mantissa_.real() == 0.0 && mantissa_.imag() == 0.0;
  }
  bool is_finite() const noexcept {
    return std::isfinite(mantissa_.real()) && std::isfinite(mantissa_.imag());
  }

  /// log|z|; -inf for zero.
  double log_abs() const noexcept {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa_)) +
           static_cast<double>(exponent_) * std::numbers::ln2;
  }

  /// Hardware value. Overflows to inf or flushes to zero outside double range.
  Complex to_complex() const noexcept {
    if (exponent_ > 4096) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      return {mantissa_.real() == 0 ? 0.0 : std::copysign(inf, mantissa_.real()),
              mantissa_.imag() == 0 ? 0.0 : std::copysign(inf, mantissa_.imag())};
    }
    if (exponent_ < -4096) return {0.0, 0.0};
    const int e = static_cast<int>(exponent_);
    return {std::ldexp(mantissa_.real(), e), std::ldexp(mantissa_.imag(), e)};
  }

  ExtComplex operator-() const noexcept {
    ExtComplex r = *this;
    r.mantissa_ = -r.mantissa_;
    return r;
  }

  ExtComplex conj() const noexcept {
    ExtComplex r = *this;
    r.mantissa_ = std::conj(r.mantissa_);
    return r;
  }

  ExtComplex& operator+=(const ExtComplex& rhs) {
    if (rhs.is_zero()) return *this;
    if (is_zero()) return *this = rhs;
    const std::int64_t diff = exponent_ - rhs.exponent_;
    // Beyond ~60 bits of separation the smaller term is below half an ulp.
    if (diff > 60) return *this;
    if (diff < -60) return *this = rhs;
    if (diff >= 0) {
      mantissa_ += scale(rhs.mantissa_, -static_cast<int>(diff));
    } else {
      mantissa_ = scale(mantissa_, static_cast<int>(diff)) + rhs.mantissa_;
      exponent_ = rhs.exponent_;
    }
    normalize();
    return *this;
  }

  ExtComplex& operator-=(const ExtComplex& rhs) { return *this += -rhs; }

  ExtComplex& operator*=(const ExtComplex& rhs) {
    mantissa_ *= rhs.mantissa_;
    exponent_ = saturate(exponent_, rhs.exponent_);
    normalize();
    return *this;
  }

  ExtComplex& operator/=(const ExtComplex& rhs) {
    mantissa_ /= rhs.mantissa_;
    exponent_ = saturate(exponent_, -rhs.exponent_);
    normalize();
    return *this;
  }

  ExtComplex& operator*=(double s) {
    mantissa_ *= s;
    normalize();
    return *this;
  }

  friend ExtComplex operator+(ExtComplex a, const ExtComplex& b) { return a += b; }
  friend ExtComplex operator-(ExtComplex a, const ExtComplex& b) { return a -= b; }
  friend ExtComplex operator*(ExtComplex a, const ExtComplex& b) { return a *= b; }
  friend ExtComplex operator/(ExtComplex a, const ExtComplex& b) { return a /= b; }
  friend ExtComplex operator*(ExtComplex a, double s) { return a *= s; }
  friend ExtComplex operator*(double s, ExtComplex a) { return a *= s; }

  friend bool operator==(const ExtComplex& a, const ExtComplex& b) noexcept {
    return a.mantissa_ == b.mantissa_ && a.exponent_ == b.exponent_;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtComplex& z) {
    return os << z.mantissa_ << "*2^" << z.exponent_;
  }

 private:
  static Complex scale(Complex v, int e) noexcept {
    return {std::ldexp(v.real(), e), std::ldexp(v.imag(), e)};
  }

  static constexpr std::int64_t kMaxExponent = std::int64_t{1} << 62;

  // Exponent sum; magnitudes beyond 2^(2^62) become inf (or zero when tiny).
  std::int64_t saturate(std::int64_t a, std::int64_t b) noexcept {
    std::int64_t e = 0;
    const bool wrapped = __builtin_add_overflow(a, b, &e);
    if ((wrapped && a > 0) || (!wrapped && e > kMaxExponent)) {
      constexpr double inf = std::numeric_limits<double>::infinity();
      mantissa_ = {mantissa_.real() == 0 ? 0.0 : std::copysign(inf, mantissa_.real()),
                   mantissa_.imag() == 0 ? 0.0 : std::copysign(inf, mantissa_.imag())};
      return 0;
    }
    if (wrapped || e < -kMaxExponent) {
      mantissa_ = {0.0, 0.0};
      return 0;
    }
    return e;
  }

  void normalize() noexcept {
    const double big = std::max(std::abs(mantissa_.real()), std::abs(mantissa_.imag()));
    if (big == 0.0) {
      mantissa_ = {0.0, 0.0};
      exponent_ = 0;
      return;
    }
    if (!std::isfinite(big)) return;
    int e = 0;
    std::frexp(big, &e);
    if (e != 0) {
      mantissa_ = scale(mantissa_, -e);
      exponent_ += e;
    }
  }

  Complex mantissa_{0.0, 0.0};
  std::int64_t exponent_ = 0;
};

inline double log_abs(const ExtComplex& z) noexcept { return z.log_abs(); }
inline double log_abs(const Complex& z) noexcept { return std::log(std::abs(z)); }

inline Complex to_complex(const ExtComplex& z) noexcept { return z.to_complex(); }
inline Complex to_complex(const Complex& z) noexcept { return z; }

inline bool is_zero(const ExtComplex& z) noexcept { return z.is_zero(); }
inline bool is_zero(const Complex& z) noexcept { return z == Complex{}; }

}  // namespace equidist
