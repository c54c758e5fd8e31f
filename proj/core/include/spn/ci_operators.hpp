// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "spn/fermion_basis.hpp"

namespace spn {

/// Transform of the one-particle transition density
/// n(x) = <bra| sum_j delta(x - x_j) |ket>; the xi = 0 entry is N^d <bra, ket>.
/// Transfers outside the retained frequency set are dropped.
FourierScalarField transition_density(const CIVector& bra, const CIVector& ket);

/// Electronic charge density rho^e = -e n(psi).
FourierScalarField one_body_density(const CIVector& psi, double e = 1.0);

/// Galerkin projection of Phi-tensor psi = sum_j Phi(x_j) psi onto the basis,
/// with the same transfer truncation as the density so the pair stays adjoint.
CIVector apply_one_body_potential(const CIVector& psi, const FourierScalarField& phi);

/// -1/2 Laplacian, diagonal in the determinant basis.
CIVector apply_kinetic(const CIVector& psi);

/// <psi, -1/2 Laplacian psi>.
double kinetic_expectation(const CIVector& psi);

}  // namespace spn
