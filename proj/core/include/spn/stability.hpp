// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spn/hessian.hpp"
#include "spn/integrators.hpp"

namespace spn {

/// ||phi||_{H^1} + |kappa| + |pi|.
double v_norm(const GroundState& gs, const TangentVector& y);

/// Seeded random direction in N_S S intersected with T_S M, unit in the V-norm.
TangentVector sample_tangent_perturbation(const GroundState& gs, const HessianForm& form,
                                          std::uint64_t seed, std::uint64_t stream);

/// Uniform translation (0, s, 0) with |s| = 1 along the first axis, unit in the V-norm.
TangentVector translation_direction(const GroundState& gs);

/// S + delta Y with psi rescaled once to Q = Z.
CrystalState perturbed_state(const GroundState& gs, const TangentVector& y, double delta);

struct StabilityOptions {
  std::vector<double> deltas{1e-3, 1e-2};
  std::size_t perturbations = 8;
  std::uint64_t seed = 0;
  bool include_baseline = true;     ///< delta = 0 run
  bool include_translation = true;  ///< pure-translation run per delta
  EvolveOptions evolve{Method::implicit_midpoint, 1e-3, 10.0, 1e-12, 50, 1};
  /// Distance to S sampled every k steps.
  std::size_t sample_every = 1;
};

struct StabilityRun {
  std::string kind;  ///< "baseline", "translation" or "random"
  std::size_t perturbation = 0;
  double delta = 0.0;
  double initial_distance = 0.0;
  double sup_distance = 0.0;
  double energy_drift = 0.0;
  double charge_drift = 0.0;
  std::vector<std::pair<double, double>> distance_series;  ///< (t, d_V)
};

struct StabilityTable {
  std::vector<StabilityRun> runs;  ///< deterministic order: baseline, then per delta
  /// Largest sup distance over the random perturbations at this delta.
  double sup_distance(double delta) const;
};

/// Evolves X(0) = S + delta Y for every (delta, Y) and records sup_t d(X(t), S).
/// Runs execute in parallel; results do not depend on scheduling.
StabilityTable stability_experiment(const GroundState& gs, const StabilityOptions& options);

}  // namespace spn
