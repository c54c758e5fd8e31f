// SPDX-License-Identifier: Apache-2.0
#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "spn/errors.hpp"
#include "spn/wiener.hpp"

namespace spn::cli {
namespace {

namespace pt = boost::property_tree;

struct Key {
  const char* section;
  const char* name;
  const char* fallback;
};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Schema with default values; "" means unset.
const std::vector<Key>& schema() {
  static const std::string wiener = fmt_double(kDefaultWienerRadius);
  static const std::string cutoff = fmt_double(2.0 * kTwoPi * kTwoPi);
  static const std::string capacity = std::to_string(kDefaultBasisCapacity);
  static const std::vector<Key> keys{
      {"model", "dimension", "1"},
      {"model", "cells", "2"},
      {"model", "grid", "16"},
      {"model", "cutoff_radius", ""},
      {"model", "z", "1"},
      {"model", "e", "1"},
      {"model", "mass", "1"},
      {"model", "density", "perturbed_box"},
      {"model", "box_order", "2"},
      {"model", "epsilon", "0.1"},
      {"model", "gaussian_width", "0.02"},
      {"model", "modes", ""},
      {"model", "density_file", ""},
      {"model", "wiener_radius", wiener.c_str()},
      {"basis", "cutoff", cutoff.c_str()},
      {"basis", "capacity", capacity.c_str()},
      {"basis", "ground_set", "0"},
      {"basis", "mixture", ""},
      {"dynamics", "method", "implicit_midpoint"},
      {"dynamics", "dt", "0.001"},
      {"dynamics", "duration", "1"},
      {"dynamics", "tolerance", "1e-12"},
      {"dynamics", "max_iterations", "50"},
      {"dynamics", "log_every", "1"},
      {"dynamics", "perturbation", "0"},
      {"stability", "deltas", "0.001, 0.01"},
      {"stability", "perturbations", "8"},
      {"stability", "include_baseline", "true"},
      {"stability", "include_translation", "true"},
      {"stability", "sample_every", "10"},
      {"stability", "kernel_tolerance", "1e-9"},
      {"output", "directory", "spn_out"},
      {"output", "trajectories", "true"},
  };
  return keys;
}

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw ConfigError(key + " = '" + value + "': " + why);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, v, "not a number");
  }
  if (used != v.size() || !std::isfinite(x)) bad(key, v, "not a finite number");
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &used);
  } catch (const std::exception&) {
    bad(key, v, "not an integer");
  }
  if (used != v.size()) bad(key, v, "not an integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string u = upper(v);
  if (u == "TRUE" || u == "1" || u == "YES" || u == "ON") return true;
  if (u == "FALSE" || u == "0" || u == "NO" || u == "OFF") return false;
  bad(key, v, "not a boolean");
}

FrequencyIndex to_index(const std::string& key, const std::string& v, int d) {
  std::istringstream in(v);
  FrequencyIndex h;
  int count = 0;
  std::string tok;
  while (in >> tok) {
    if (count >= d) bad(key, v, "more components than the dimension");
    h[static_cast<std::size_t>(count++)] = static_cast<int>(to_int(key, tok));
  }
  if (count != d) bad(key, v, "expected " + std::to_string(d) + " integer components");
  return h;
}

void require(bool ok, const std::string& key, const std::string& value, const char* why) {
  if (!ok) bad(key, value, why);
}

}  // namespace

TorusSpec make_spec(const ModelConfig& m) {
  try {
    return TorusSpec(m.dimension, m.cells, m.grid, m.cutoff_radius);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

RunConfig parse_config(const std::string& text, bool use_environment) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
  }

  const auto& keys = schema();
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("top-level key '" + section + "' outside any section");
    for (const auto& [name, value] : body) {
      const bool known = std::any_of(keys.begin(), keys.end(), [&](const Key& k) {
        return section == k.section && name == k.name;
      });
      if (!known) throw ConfigError("unknown config key " + section + "." + name);
    }
  }

  RunConfig cfg;
  for (const Key& k : keys) {
    const std::string path = std::string(k.section) + "." + k.name;
    std::string value = k.fallback;
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) value = *v;
    if (use_environment) {
      const std::string env = "SPN_" + upper(k.section) + "_" + upper(k.name);
      if (const char* e = std::getenv(env.c_str())) value = e;
    }
    cfg.resolved[path] = trim(value);
  }
  const auto get = [&](const char* path) -> const std::string& { return cfg.resolved.at(path); };

  ModelConfig& m = cfg.model;
  m.dimension = static_cast<int>(to_int("model.dimension", get("model.dimension")));
  m.cells = static_cast<int>(to_int("model.cells", get("model.cells")));
  m.grid = static_cast<int>(to_int("model.grid", get("model.grid")));
  if (!get("model.cutoff_radius").empty()) {
    m.cutoff_radius = to_double("model.cutoff_radius", get("model.cutoff_radius"));
  }
  m.Z = to_double("model.z", get("model.z"));
  m.e = to_double("model.e", get("model.e"));
  m.mass = to_double("model.mass", get("model.mass"));
  m.density = get("model.density");
  m.box_order = static_cast<int>(to_int("model.box_order", get("model.box_order")));
  m.epsilon = to_double("model.epsilon", get("model.epsilon"));
  m.gaussian_width = to_double("model.gaussian_width", get("model.gaussian_width"));
  m.density_file = get("model.density_file");
  m.wiener_radius = to_double("model.wiener_radius", get("model.wiener_radius"));

  require(m.dimension >= 1 && m.dimension <= 3, "model.dimension", get("model.dimension"),
          "must be 1, 2 or 3");
  require(m.cells >= 1, "model.cells", get("model.cells"), "must be positive");
  require(m.Z > 0.0, "model.z", get("model.z"), "must be positive");
  require(m.e > 0.0, "model.e", get("model.e"), "must be positive");
  require(m.mass > 0.0, "model.mass", get("model.mass"), "must be positive");
  require(m.box_order >= 1, "model.box_order", get("model.box_order"), "must be >= 1");
  require(m.epsilon >= 0.0, "model.epsilon", get("model.epsilon"), "must be >= 0");
  require(m.gaussian_width > 0.0, "model.gaussian_width", get("model.gaussian_width"),
          "must be positive");
  require(m.wiener_radius > 0.0, "model.wiener_radius", get("model.wiener_radius"),
          "must be positive");
  require(m.density == "box" || m.density == "perturbed_box" || m.density == "grid",
          "model.density", m.density, "expected box, perturbed_box or grid");
  require(m.density != "grid" || !m.density_file.empty(), "model.density_file",
          m.density_file, "required for density = grid");
  const TorusSpec spec = make_spec(m);
  (void)spec;

  // "h : amplitude; h : amplitude" with h given as d integers.
  for (const auto& item : split(get("model.modes"), ';')) {
    const auto colon = item.find(':');
    require(colon != std::string::npos, "model.modes", item, "expected 'h... : amplitude'");
    CosineMode mode;
    mode.h = to_index("model.modes", trim(item.substr(0, colon)), m.dimension);
    mode.amplitude = to_double("model.modes", trim(item.substr(colon + 1)));
    m.modes.push_back(mode);
  }

  BasisConfig& b = cfg.basis;
  b.cutoff = to_double("basis.cutoff", get("basis.cutoff"));
  const long long cap = to_int("basis.capacity", get("basis.capacity"));
  const long long set = to_int("basis.ground_set", get("basis.ground_set"));
  require(b.cutoff > 0.0, "basis.cutoff", get("basis.cutoff"), "must be positive");
  require(cap >= 1, "basis.capacity", get("basis.capacity"), "must be >= 1");
  require(set >= 0, "basis.ground_set", get("basis.ground_set"), "must be >= 0");
  b.capacity = static_cast<std::size_t>(cap);
  b.ground_set = static_cast<std::size_t>(set);
  // Occupation sets separated by ';', orbitals within a set by ','.
  for (const auto& item : split(get("basis.mixture"), ';')) {
    std::vector<FrequencyIndex> orbitals;
    for (const auto& h : split(item, ',')) {
      orbitals.push_back(to_index("basis.mixture", h, m.dimension));
    }
    try {
      b.mixture.emplace_back(std::move(orbitals));
    } catch (const DomainError& e) {
      bad("basis.mixture", item, e.what());
    }
  }

  DynamicsConfig& dyn = cfg.dynamics;
  try {
    dyn.method = parse_method(get("dynamics.method"));
  } catch (const Error& e) {
    bad("dynamics.method", get("dynamics.method"), e.what());
  }
  dyn.dt = to_double("dynamics.dt", get("dynamics.dt"));
  dyn.duration = to_double("dynamics.duration", get("dynamics.duration"));
  dyn.tolerance = to_double("dynamics.tolerance", get("dynamics.tolerance"));
  const long long iters = to_int("dynamics.max_iterations", get("dynamics.max_iterations"));
  const long long every = to_int("dynamics.log_every", get("dynamics.log_every"));
  dyn.perturbation = to_double("dynamics.perturbation", get("dynamics.perturbation"));
  require(dyn.dt > 0.0, "dynamics.dt", get("dynamics.dt"), "must be positive");
  require(dyn.duration >= 0.0, "dynamics.duration", get("dynamics.duration"), "must be >= 0");
  require(dyn.tolerance > 0.0, "dynamics.tolerance", get("dynamics.tolerance"),
          "must be positive");
  require(iters >= 1, "dynamics.max_iterations", get("dynamics.max_iterations"), "must be >= 1");
  require(every >= 1, "dynamics.log_every", get("dynamics.log_every"), "must be >= 1");
  require(dyn.perturbation >= 0.0, "dynamics.perturbation", get("dynamics.perturbation"),
          "must be >= 0");
  dyn.max_iterations = static_cast<int>(iters);
  dyn.log_every = static_cast<std::size_t>(every);

  StabilityConfig& st = cfg.stability;
  for (const auto& d : split(get("stability.deltas"), ',')) {
    const double delta = to_double("stability.deltas", d);
    require(delta >= 0.0, "stability.deltas", d, "must be >= 0");
    st.deltas.push_back(delta);
  }
  const long long count = to_int("stability.perturbations", get("stability.perturbations"));
  const long long sample = to_int("stability.sample_every", get("stability.sample_every"));
  require(count >= 0, "stability.perturbations", get("stability.perturbations"), "must be >= 0");
  require(sample >= 1, "stability.sample_every", get("stability.sample_every"), "must be >= 1");
  st.perturbations = static_cast<std::size_t>(count);
  st.sample_every = static_cast<std::size_t>(sample);
  st.include_baseline = to_bool("stability.include_baseline", get("stability.include_baseline"));
  st.include_translation =
      to_bool("stability.include_translation", get("stability.include_translation"));
  st.kernel_tolerance = to_double("stability.kernel_tolerance", get("stability.kernel_tolerance"));
  require(st.kernel_tolerance > 0.0 && st.kernel_tolerance < 1.0, "stability.kernel_tolerance",
          get("stability.kernel_tolerance"), "must lie in (0, 1)");

  cfg.output.directory = get("output.directory");
  require(!cfg.output.directory.empty(), "output.directory", "", "must not be empty");
  cfg.output.trajectories = to_bool("output.trajectories", get("output.trajectories"));
  return cfg;
}

RunConfig load_config(const std::optional<std::string>& path, bool use_environment) {
  if (!path) return parse_config("", use_environment);
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot read config file " + *path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), use_environment);
}

}  // namespace spn::cli
