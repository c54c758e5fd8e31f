// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "spn/dynamics.hpp"

namespace spn {

enum class Method {
  implicit_midpoint,
  rk4,
  splitting,  ///< exact free electron flow, implicit midpoint on the coupling
};

Method parse_method(std::string_view name);
std::string_view method_name(Method m);

struct EvolveOptions {
  Method method = Method::implicit_midpoint;
  double dt = 1e-3;
  double duration = 1.0;
  double tolerance = 1e-12;
  int max_iterations = 50;
  /// Record every k-th step in the log (the final step is always recorded).
  std::size_t log_every = 1;
};

struct LogRecord {
  double t = 0.0;
  double energy = 0.0;
  double charge = 0.0;
  double residual = 0.0;  ///< last fixed-point update of the step (0 for explicit methods)
  int iterations = 0;
};

struct EvolutionLog {
  std::vector<LogRecord> records;
  double max_energy_drift() const;
  double max_charge_drift() const;
};

/// Invoked after every step with the step index (1-based), time and state.
using StepObserver = std::function<void(std::size_t, double, const CrystalState&)>;

struct EvolveResult {
  CrystalState state;
  EvolutionLog log;
};

/// Integrates from t = 0 to duration with a fixed step; positions are
/// wrapped into [0, N) after every step. Charge is never renormalised.
/// Throws IntegratorError when the implicit iteration does not converge.
EvolveResult evolve(const CrystalState& initial, const IonDensityModel& sigma,
                    const EvolveOptions& options, const StepObserver& observer = {});

}  // namespace spn
