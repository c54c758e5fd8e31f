// SPDX-License-Identifier: Apache-2.0
// Shared small configurations for the unit tests.
#pragma once

#include <random>

#include "spn/errors.hpp"
#include "spn/ground_state.hpp"

namespace fixture {

using namespace spn;

// d = 1, N = 2, n_g = 16 with the generic jellium density.
inline GroundState ground_1d(double cutoff_factor = 5.0, double mass = 1.0) {
  const TorusSpec spec(1, 2, 16);
  const auto sigma = IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 1.0);
  return build_ground_state(enumerate_basis(spec, cutoff_factor * kPi * kPi), sigma, mass);
}

// d = 2, N = 2, n_g = 16.
inline GroundState ground_2d(const IonDensityModel& sigma, double mass = 1.0) {
  return build_ground_state(enumerate_basis(sigma.spec(), 5.0 * kPi * kPi), sigma, mass);
}

inline TangentVector random_tangent(const CrystalState& x, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  TangentVector v = TangentVector::zero_like(x);
  for (Eigen::Index i = 0; i < v.psi.size(); ++i) v.psi(i) = cplx(n(rng), n(rng));
  for (Eigen::Index i = 0; i < v.q.size(); ++i) v.q.data()[i] = n(rng);
  for (Eigen::Index i = 0; i < v.p.size(); ++i) v.p.data()[i] = n(rng);
  v *= scale / v.norm();
  return v;
}

// Off-equilibrium phase point near S.
inline CrystalState perturbed(const GroundState& gs, std::uint64_t seed, double scale = 0.05) {
  CrystalState x = displaced(gs.state(), random_tangent(gs.state(), seed, scale));
  x.wrap_positions();
  return x;
}

}  // namespace fixture
