// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <vector>

#include "spn/fourier_field.hpp"

namespace spn {

/// How the Green operator treats a nonzero xi = 0 coefficient.
enum class Neutrality {
  enforce,    ///< throw NeutralityError when |F(0)| exceeds kNeutralityTolerance
  drop_mean,  ///< silently discard the mean (it does not enter G)
};

inline constexpr double kNeutralityTolerance = 1e-10;

/// Uniform-grid quadrature of F[f] on every retained frequency. Samples are
/// laid out row-major over n_g^d points, first axis slowest.
FourierScalarField dft_forward(std::span<const double> samples, const TorusSpec& spec);
FourierScalarField dft_forward(std::span<const cplx> samples, const TorusSpec& spec);

/// Grid values of |T|^{-1} sum_xi F(xi) e^{-i xi x}.
std::vector<cplx> dft_inverse(const FourierScalarField& field);

/// Real part of dft_inverse.
std::vector<double> dft_inverse_real(const FourierScalarField& field);

/// G rho = (-Delta)^{-1} rho: divides by |xi|^2 and zeroes xi = 0.
FourierScalarField green_apply(const FourierScalarField& rho,
                               Neutrality policy = Neutrality::enforce);

/// 1/2 (rho, G rho) = 1/2 |T|^{-1} sum_{xi != 0} |rho~(xi)|^2 / |xi|^2.
double coulomb_energy(const FourierScalarField& rho, Neutrality policy = Neutrality::enforce);

/// Real L^2 pairing (f, g) = |T|^{-1} Re sum_xi F[f](xi) conj F[g](xi).
double l2_pairing(const FourierScalarField& f, const FourierScalarField& g);

}  // namespace spn
