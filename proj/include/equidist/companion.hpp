#pragma once

#include <Eigen/Eigenvalues>

#include <string>
#include <vector>

#include "equidist/error.hpp"
#include "equidist/poly.hpp"

namespace equidist {

/// Roots as eigenvalues of the companion matrix (dense complex QR via Eigen).
/// Independent of the Aberth path; meant for cross-checks at small degree.
inline std::vector<Complex> companion_oracle(const DensePoly& p) {
  constexpr int kMaxDegree = 512;
  if (p.degree() < 1) throw Error(ErrorCode::kZeroPolynomial, "companion_oracle: degree must be >= 1");
  if (p.degree() > kMaxDegree)
    throw Error(ErrorCode::kDegreeGuard, "companion_oracle: degree " + std::to_string(p.degree()) + " exceeds 512");
  const int n = p.degree();
  const auto c = p.coeffs();
  const Complex lead = p.leading();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::kNoConvergence, "companion_oracle: QR did not converge");
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  return roots;
}

}  // namespace equidist
