// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include "config.hpp"

namespace spn::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInputData = 2,
  kExitRefusal = 3,
  kExitCapacity = 4,
  kExitIntegrator = 5,
};

/// Maps a library or CLI exception onto the process exit code.
int exit_code_for(const std::exception_ptr& error);

/// Reads a density file: header "d N n_g Z e", then n_g^d samples in grid
/// order. Throws InputDataError when it is missing, malformed or disagrees
/// with the model block.
IonDensityModel read_density_file(const std::string& path, const ModelConfig& model,
                                  const TorusSpec& spec);

/// Ion density described by the model block.
IonDensityModel make_density(const ModelConfig& model, const TorusSpec& spec);

/// Entry point: `args` excludes the program name. Diagnostics go to `err`,
/// progress lines to `out`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spn::cli
