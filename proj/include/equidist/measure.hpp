#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "equidist/error.hpp"
#include "equidist/ext_complex.hpp"
#include "equidist/parallel.hpp"

namespace equidist {

/// Weighted point cloud of total mass one. `scale_count()` is the n in
/// (1/n) sum delta_{z_j}: for a root distribution, scale_count * mu(U) is the
/// number of roots in U.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure(std::vector<Complex> points, std::vector<double> weights, int scale_count)
      : points_(std::move(points)), weights_(std::move(weights)), scale_count_(scale_count) {
    if (points_.empty()) throw Error(ErrorCode::kInvalidArgument, "measure has no support points");
    if (points_.size() != weights_.size())
      throw Error(ErrorCode::kInvalidArgument, "measure points/weights size mismatch");
    if (scale_count_ < 1) throw Error(ErrorCode::kInvalidArgument, "measure scale count must be >= 1");
    for (double w : weights_)
      if (!(w >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "measure weights must be nonnegative");
    const double total = pairwise_sum<double>(weights_);
    if (std::abs(total - 1.0) > 1e-12)
      throw Error(ErrorCode::kInvalidArgument, "measure weights must sum to 1, got " + std::to_string(total));
  }

  /// Equal weights 1/N on N points, scale count N.
  static EmpiricalMeasure uniform(std::vector<Complex> points) {
    const std::size_t n = points.size();
    if (n == 0) throw Error(ErrorCode::kInvalidArgument, "measure has no support points");
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    return EmpiricalMeasure(std::move(points), std::move(w), static_cast<int>(n));
  }

  std::span<const Complex> points() const noexcept { return points_; }
  std::span<const double> weights() const noexcept { return weights_; }
  int scale_count() const noexcept { return scale_count_; }
  std::size_t size() const noexcept { return points_.size(); }

  /// mu({z : pred(z)}).
  double mass_where(const std::function<bool(Complex)>& pred) const {
    std::vector<double> hit(points_.size(), 0.0);
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (pred(points_[i])) hit[i] = weights_[i];
    return pairwise_sum<double>(hit);
  }

  double mass_in_disk(Complex center, double radius) const {
    return mass_where([&](Complex z) { return std::abs(z - center) < radius; });
  }

 private:
  std::vector<Complex> points_;
  std::vector<double> weights_;
  int scale_count_;
};

/// mu_q = (1/n) sum_j delta_{z_j} over the roots of a degree-n polynomial,
/// repeated according to multiplicity.
inline EmpiricalMeasure root_distribution(std::span<const Complex> roots, int n) {
  if (roots.empty()) throw Error(ErrorCode::kInvalidArgument, "root distribution of an empty root list");
  if (n < 1 || static_cast<std::size_t>(n) != roots.size())
    throw Error(ErrorCode::kInvalidArgument,
                "root count " + std::to_string(roots.size()) + " does not match degree " + std::to_string(n));
  return EmpiricalMeasure::uniform(std::vector<Complex>(roots.begin(), roots.end()));
}

}  // namespace equidist
