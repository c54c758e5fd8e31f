// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Core>

#include "spn/ion_density.hpp"

namespace spn {

inline constexpr double kDefaultWienerRadius = 8.0 * kTwoPi;
inline constexpr double kWienerKernelTolerance = 1e-9;

struct WienerMatrix {
  Eigen::MatrixXd matrix;  ///< d x d, real symmetric PSD
  double tail_bound = 0.0; ///< bound on the spectral norm of the omitted series tail
  std::size_t terms = 0;   ///< number of lattice terms summed
};

/// Sigma(theta) = sum_m [xi xi^T / |xi|^2 |sigma~(xi)|^2]_{xi = theta + 2 pi m},
/// truncated to |xi| <= truncation_radius. Throws DomainError for theta in
/// the dual lattice.
WienerMatrix wiener_matrix(const IonDensityModel& sigma, const FrequencyIndex& theta,
                           double truncation_radius = kDefaultWienerRadius);

struct WienerEntry {
  FrequencyIndex theta;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd eigenvalues;  ///< ascending
  Eigen::MatrixXd kernel;       ///< d x kernel_dim, orthonormal real columns
  double tail_bound = 0.0;
  double lambda_min() const { return eigenvalues(0); }
  double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
  int kernel_dim() const { return static_cast<int>(kernel.cols()); }
};

struct WienerReport {
  std::vector<WienerEntry> entries;  ///< lexicographic over the punctured Brillouin zone
  bool wiener_holds = false;
  /// The truncated Sigma(theta) is a lower bound of the full one, so a
  /// positive verdict is always certified; a negative one is certified only
  /// when every flagged eigenvalue stays below tolerance after adding the tail.
  bool verdict_certified = false;
  int degeneracy_dim = 0;          ///< real dimension of V
  Eigen::MatrixXd degeneracy_basis;  ///< (d N^d) x dim V, orthonormal real columns
  double truncation_radius = 0.0;
  double max_tail_bound = 0.0;
  double relative_tolerance = kWienerKernelTolerance;
  double min_lambda() const;
};

/// Evaluates Sigma(theta) for every theta of the punctured Brillouin zone
/// and assembles the degeneracy space V from the kernels.
WienerReport wiener_report(const IonDensityModel& sigma,
                           double truncation_radius = kDefaultWienerRadius,
                           double relative_tolerance = kWienerKernelTolerance);

/// Real ion-displacement patterns v(n) = Re/Im of e^{-i theta n} k for
/// kernel vectors k of every Sigma(theta), as columns of a (d N^d) x M matrix.
Eigen::MatrixXd degeneracy_generators(const TorusSpec& spec,
                                      const std::vector<WienerEntry>& entries);

}  // namespace spn
