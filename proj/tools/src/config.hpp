// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spn/fermion_basis.hpp"
#include "spn/integrators.hpp"
#include "spn/ion_density.hpp"

namespace spn::cli {

struct ModelConfig {
  int dimension = 1;
  int cells = 2;
  int grid = 16;
  std::optional<double> cutoff_radius;
  double Z = 1.0;
  double e = 1.0;
  double mass = 1.0;
  std::string density = "perturbed_box";
  int box_order = 2;
  double epsilon = 0.1;
  double gaussian_width = 0.02;
  std::vector<CosineMode> modes;
  std::string density_file;
  double wiener_radius = 0.0;
};

struct BasisConfig {
  double cutoff = 0.0;
  std::size_t capacity = kDefaultBasisCapacity;
  std::size_t ground_set = 0;
  std::vector<OccupationSet> mixture;
};

struct DynamicsConfig {
  Method method = Method::implicit_midpoint;
  double dt = 1e-3;
  double duration = 1.0;
  double tolerance = 1e-12;
  int max_iterations = 50;
  std::size_t log_every = 1;
  double perturbation = 0.0;
};

struct StabilityConfig {
  std::vector<double> deltas;
  std::size_t perturbations = 8;
  bool include_baseline = true;
  bool include_translation = true;
  std::size_t sample_every = 10;
  double kernel_tolerance = 1e-9;
};

struct OutputConfig {
  std::string directory = "spn_out";
  bool trajectories = true;
};

struct RunConfig {
  ModelConfig model;
  BasisConfig basis;
  DynamicsConfig dynamics;
  StabilityConfig stability;
  OutputConfig output;
  /// Every resolved key as "section.key" -> text, after defaults and overrides.
  std::map<std::string, std::string> resolved;
};

/// Reads INI text (sections model, basis, dynamics, stability, output).
/// Environment variables SPN_<SECTION>_<KEY> override file values. Unknown
/// keys and invalid values raise ConfigError before any computation.
RunConfig parse_config(const std::string& text, bool use_environment = true);
RunConfig load_config(const std::optional<std::string>& path, bool use_environment = true);

/// Torus spec described by the model block.
TorusSpec make_spec(const ModelConfig& m);

}  // namespace spn::cli
