// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "spn/ground_state.hpp"

namespace spn {

inline constexpr double kHessianKernelTolerance = 1e-9;

/// First-order density change at S along Y = (phi, kappa, pi).
struct LinearizedDensity {
  FourierScalarField ion;       ///< sigma^(1)
  FourierScalarField electron;  ///< -e n^(1)
  FourierScalarField total() const { return ion + electron; }
};

LinearizedDensity linearized_density(const GroundState& gs, const TangentVector& y);

/// Real coordinates (Re phi, Im phi, kappa row-wise, pi row-wise).
Eigen::VectorXd to_coordinates(const TangentVector& y);
TangentVector from_coordinates(const GroundState& gs, const Eigen::VectorXd& y);
std::size_t coordinate_dimension(const GroundState& gs);

struct HessianForm {
  /// Symmetric matrix with y^T H y = <Y, E''(S) Y>.
  Eigen::MatrixXd matrix;
  /// Orthonormal basis of T_S S: the gauge direction i psi_alpha and the d translations.
  Eigen::MatrixXd orbit_tangent;
  /// Unit normal of T_S M (the coordinates of psi_alpha).
  Eigen::VectorXd charge_normal;
  /// Orthonormal basis of N_S S intersected with T_S M.
  Eigen::MatrixXd constrained_basis;

  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
  /// 1/2 <Y, E'' Y>.
  double quadratic_form(const Eigen::VectorXd& y) const { return 0.5 * y.dot(matrix * y); }
  Eigen::VectorXd project_orbit_tangent(const Eigen::VectorXd& y) const;
  Eigen::VectorXd project_orbit_normal(const Eigen::VectorXd& y) const;
  Eigen::VectorXd project_manifold_tangent(const Eigen::VectorXd& y) const;
};

HessianForm hessian_assemble(const GroundState& gs);

enum class Subspace { full, constrained };

struct HessianSpectrum {
  Eigen::VectorXd eigenvalues;  ///< ascending
  int kernel_dim = 0;
  double tolerance = 0.0;       ///< absolute threshold used for the count
  double largest_kernel = 0.0;  ///< largest |lambda| counted as zero
  double smallest_nonzero = 0.0;
  double lambda_min() const { return eigenvalues.size() ? eigenvalues(0) : 0.0; }
};

/// Eigenvalues of H on the chosen subspace; |lambda| <= tol * lambda_max counts as kernel.
HessianSpectrum hessian_spectrum(const HessianForm& form, Subspace subspace,
                                 double relative_tolerance = kHessianKernelTolerance);

/// Central difference of E at S along Y.
double first_variation_residual(const GroundState& gs, const TangentVector& y, double h = 1e-6);

}  // namespace spn
