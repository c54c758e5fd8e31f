// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace spn {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Integer frequency label h; the frequency is xi = (2 pi / N) h.
/// Components beyond the torus dimension are always zero.
struct FrequencyIndex {
  std::array<int, 3> h{0, 0, 0};

  constexpr FrequencyIndex() = default;
  constexpr FrequencyIndex(int h0, int h1 = 0, int h2 = 0) : h{h0, h1, h2} {}

  constexpr int operator[](std::size_t i) const { return h[i]; }
  constexpr int& operator[](std::size_t i) { return h[i]; }

  constexpr FrequencyIndex operator-() const { return {-h[0], -h[1], -h[2]}; }
  constexpr FrequencyIndex operator+(const FrequencyIndex& o) const {
    return {h[0] + o.h[0], h[1] + o.h[1], h[2] + o.h[2]};
  }
  constexpr FrequencyIndex operator-(const FrequencyIndex& o) const {
    return {h[0] - o.h[0], h[1] - o.h[1], h[2] - o.h[2]};
  }
  constexpr int norm2() const { return h[0] * h[0] + h[1] * h[1] + h[2] * h[2]; }
  constexpr bool is_zero() const { return h[0] == 0 && h[1] == 0 && h[2] == 0; }

  friend constexpr auto operator<=>(const FrequencyIndex&, const FrequencyIndex&) = default;
};

/// Periodic torus R^d / N Z^d with unit cells of volume one.
///
/// `grid_per_axis` is the real-space quadrature resolution over the whole
/// torus (not per cell) and must be a multiple of N. The Fourier truncation
/// keeps |h_j| <= (n_g - 1) / 2 on every axis together with |xi| <= cutoff.
class TorusSpec {
 public:
  /// Throws DomainError on invalid combinations. The default cutoff is
  /// 2 pi n_g / (2 N), i.e. every frequency of the sampling band.
  TorusSpec(int dimension, int cells_per_axis, int grid_per_axis,
            std::optional<double> cutoff_radius = std::nullopt);

  int dimension() const noexcept { return dimension_; }
  int cells_per_axis() const noexcept { return cells_; }
  int grid_per_axis() const noexcept { return grid_; }
  double cutoff_radius() const noexcept { return cutoff_; }

  /// |T| = N^d.
  double volume() const noexcept { return volume_; }
  /// Number of lattice sites (ions, electrons) N^d.
  std::size_t lattice_size() const noexcept { return lattice_size_; }
  std::size_t grid_size() const noexcept { return grid_size_; }
  double grid_spacing() const noexcept { return static_cast<double>(cells_) / grid_; }
  double frequency_step() const noexcept { return kTwoPi / cells_; }

  /// Largest |h_j| that can be represented without aliasing.
  int max_index() const noexcept { return (grid_ - 1) / 2; }

  Vec3 frequency(const FrequencyIndex& k) const;
  double frequency_norm2(const FrequencyIndex& k) const;

  /// True iff xi(k) belongs to the dual lattice 2 pi Z^d.
  bool in_dual_lattice(const FrequencyIndex& k) const;

  /// Real-space position of lattice site n (lexicographic, first axis slowest).
  Vec3 lattice_point(std::size_t n) const;
  /// Real-space position of grid point g (same ordering convention).
  Vec3 grid_point(std::size_t g) const;

  /// Representatives h in {0..N-1}^d \ {0} of the punctured discrete
  /// Brillouin zone, in lexicographic order.
  std::vector<FrequencyIndex> brillouin_zone() const;

  /// Reduce a coordinate into [0, N).
  double wrap(double x) const;
  /// Minimal-image representative of a coordinate difference, in [-N/2, N/2).
  double minimal_image(double dx) const;

  friend bool operator==(const TorusSpec&, const TorusSpec&) = default;

 private:
  int dimension_;
  int cells_;
  int grid_;
  double cutoff_;
  double volume_;
  std::size_t lattice_size_;
  std::size_t grid_size_;
};

}  // namespace spn
