// SPDX-License-Identifier: Apache-2.0
#include "spn/torus.hpp"

#include <cmath>
#include <string>

#include "spn/errors.hpp"

namespace spn {

TorusSpec::TorusSpec(int dimension, int cells_per_axis, int grid_per_axis,
                     std::optional<double> cutoff_radius)
    : dimension_(dimension), cells_(cells_per_axis), grid_(grid_per_axis) {
  if (dimension < 1 || dimension > 3) {
    throw DomainError("torus dimension must be 1, 2 or 3, got " + std::to_string(dimension));
  }
  if (cells_per_axis < 1) throw DomainError("cells_per_axis must be positive");
  if (grid_per_axis < 1 || grid_per_axis % cells_per_axis != 0) {
    throw DomainError("grid_per_axis must be a positive multiple of cells_per_axis");
  }
  cutoff_ = cutoff_radius.value_or(kTwoPi * grid_per_axis / (2.0 * cells_per_axis));
  if (!(cutoff_ > 0.0)) throw DomainError("cutoff_radius must be positive");

  volume_ = std::pow(static_cast<double>(cells_), dimension_);
  lattice_size_ = 1;
  grid_size_ = 1;
  for (int i = 0; i < dimension_; ++i) {
    lattice_size_ *= static_cast<std::size_t>(cells_);
    grid_size_ *= static_cast<std::size_t>(grid_);
  }
}

Vec3 TorusSpec::frequency(const FrequencyIndex& k) const {
  const double s = frequency_step();
  return {s * k[0], s * k[1], s * k[2]};
}

double TorusSpec::frequency_norm2(const FrequencyIndex& k) const {
  const double s = frequency_step();
  return s * s * static_cast<double>(k.norm2());
}

bool TorusSpec::in_dual_lattice(const FrequencyIndex& k) const {
  for (int i = 0; i < dimension_; ++i) {
    if (k[i] % cells_ != 0) return false;
  }
  return true;
}

namespace {

Vec3 unflatten(std::size_t flat, int dimension, int per_axis, double spacing) {
  Vec3 x = Vec3::Zero();
  for (int i = dimension - 1; i >= 0; --i) {
    x[i] = spacing * static_cast<double>(flat % static_cast<std::size_t>(per_axis));
    flat /= static_cast<std::size_t>(per_axis);
  }
  return x;
}

}  // namespace

Vec3 TorusSpec::lattice_point(std::size_t n) const {
  return unflatten(n, dimension_, cells_, 1.0);
}

Vec3 TorusSpec::grid_point(std::size_t g) const {
  return unflatten(g, dimension_, grid_, grid_spacing());
}

std::vector<FrequencyIndex> TorusSpec::brillouin_zone() const {
  std::vector<FrequencyIndex> out;
  out.reserve(lattice_size_ - 1);
  for (std::size_t n = 1; n < lattice_size_; ++n) {
    FrequencyIndex k;
    std::size_t flat = n;
    for (int i = dimension_ - 1; i >= 0; --i) {
      k[i] = static_cast<int>(flat % static_cast<std::size_t>(cells_));
      flat /= static_cast<std::size_t>(cells_);
    }
    out.push_back(k);
  }
  return out;
}

double TorusSpec::wrap(double x) const {
  const double n = static_cast<double>(cells_);
  double r = std::fmod(x, n);
  if (r < 0.0) r += n;
  if (r >= n) r -= n;
  return r;
}

double TorusSpec::minimal_image(double dx) const {
  const double n = static_cast<double>(cells_);
  return dx - n * std::floor(dx / n + 0.5);
}

}  // namespace spn
