// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "spn/dynamics.hpp"

namespace spn {

/// Which minimal-energy electron state to build.
struct GroundStateChoice {
  /// Index into ground_occupations(spec).sets when no mixture is given.
  std::size_t set_index = 0;
  /// Superposition of minimal occupation sets; must satisfy the two-orbital rule.
  std::vector<std::pair<OccupationSet, cplx>> mixture;
};

/// Point S_{alpha,r} = (e^{i alpha} psi0, r, 0) of the solitary manifold and its data.
struct GroundState {
  CIVector psi0;  ///< Q(psi0) = Z
  double omega0 = 0.0;
  GroundOccupations occupations;
  IonDensityModel sigma;
  double mass = 1.0;
  double alpha = 0.0;
  Vec3 r = Vec3::Zero();

  const TorusSpec& spec() const { return sigma.spec(); }
  CIVector psi_alpha() const;
  CrystalState point(double phase, const Vec3& shift) const;
  CrystalState state() const { return point(alpha, r); }
};

/// Refuses (ModelRefusal) when sigma violates the Jellium condition and
/// throws AdmissibilityError for a mixture that breaks the two-orbital rule.
GroundState build_ground_state(BasisPtr basis, const IonDensityModel& sigma, double mass,
                               const GroundStateChoice& choice = {});

/// H^1 weights 1 + sum_j |xi_j|^2 of every determinant.
Eigen::VectorXd h1_weights(const DeterminantBasis& basis);
double h1_norm(const DeterminantBasis& basis, const Eigen::VectorXcd& coeffs);

struct ManifoldDistance {
  double distance = 0.0;
  double alpha = 0.0;  ///< in [0, 2 pi)
  Vec3 r = Vec3::Zero();
  double psi_part = 0.0;
  double q_part = 0.0;
  double p_part = 0.0;
};

/// min over (alpha, r) of ||psi - e^{i alpha} psi0||_{H^1} + |q - r| + |p|,
/// with minimal-image displacements. The three terms decouple: alpha is the
/// phase of the H^1 pairing and each component of r solves a circular least
/// squares problem exactly.
ManifoldDistance distance_to_manifold(const CrystalState& x, const GroundState& gs);

}  // namespace spn
