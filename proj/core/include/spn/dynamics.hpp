// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "spn/ci_operators.hpp"
#include "spn/ion_density.hpp"
#include "spn/spectral.hpp"

namespace spn {

/// Ion displacements q and momenta p, one row per lattice site (N^d x d).
struct IonState {
  Eigen::MatrixXd q;
  Eigen::MatrixXd p;
  double mass = 1.0;

  static IonState at_rest(const TorusSpec& spec, double mass, const Vec3& shift = Vec3::Zero());
};

/// Phase point X = (psi, q, p).
struct CrystalState {
  CIVector psi;
  IonState ions;

  const TorusSpec& spec() const { return psi.basis->spec(); }
  double charge() const { return psi.charge(); }
  /// Reduces every displacement into [0, N).
  void wrap_positions();
};

/// Coordinates of a tangent vector (or the difference of two phase points).
struct TangentVector {
  Eigen::VectorXcd psi;
  Eigen::MatrixXd q;
  Eigen::MatrixXd p;

  static TangentVector zero_like(const CrystalState& x);
  TangentVector& operator+=(const TangentVector& o);
  TangentVector& operator*=(double s);
  /// Euclidean norm of all real coordinates.
  double norm() const;
  double max_abs() const;
};

TangentVector operator+(TangentVector a, const TangentVector& b);
TangentVector operator-(TangentVector a, const TangentVector& b);
TangentVector operator*(double s, TangentVector a);

/// x + v, without wrapping.
CrystalState displaced(const CrystalState& x, const TangentVector& v);
/// x - y with minimal-image displacement differences.
TangentVector difference(const CrystalState& x, const CrystalState& y);

/// rho^i(xi) = sigma~(xi) sum_n e^{i xi (n + q(n))}.
FourierScalarField ion_charge_density(const IonDensityModel& sigma, const Eigen::MatrixXd& q);

/// rho = rho^i + rho^e.
FourierScalarField assemble_rho(const CrystalState& state, const IonDensityModel& sigma);

struct EnergyTerms {
  double electron_kinetic = 0.0;
  double coulomb = 0.0;
  double ion_kinetic = 0.0;
  double total() const { return electron_kinetic + coulomb + ion_kinetic; }
};

/// Energy contributions; the mean of rho does not enter the Coulomb term.
EnergyTerms energy_terms(const CrystalState& state, const IonDensityModel& sigma);
double energy(const CrystalState& state, const IonDensityModel& sigma);

/// f(n) = -dE/dq(n), evaluated from Phi = G rho.
Eigen::MatrixXd forces(const CrystalState& state, const IonDensityModel& sigma);
Eigen::MatrixXd forces(const CrystalState& state, const IonDensityModel& sigma,
                       const FourierScalarField& phi);

/// Right-hand side of the projected flow:
/// i psi' = T psi - e P(Phi-tensor psi), q' = p / M, p' = f.
TangentVector rhs(const CrystalState& state, const IonDensityModel& sigma);

/// Coupling part N(X) = (i e P(Phi-tensor psi), p / M, f) without the free electron flow.
TangentVector coupling(const CrystalState& state, const IonDensityModel& sigma);

}  // namespace spn
