// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "spn/fourier_field.hpp"

namespace spn {

inline constexpr std::size_t kDefaultBasisCapacity = 200000;

/// Kinetic energy 1/2 |xi(h)|^2 of the plane-wave orbital e^{i xi x} / sqrt|T|.
double orbital_kinetic_energy(const TorusSpec& spec, const FrequencyIndex& h);

/// N^d distinct plane-wave orbitals in canonical (lexicographic) order.
class OccupationSet {
 public:
  OccupationSet() = default;
  /// Sorts the orbitals; `sign`, when given, receives the parity of the sort
  /// permutation. Throws DomainError on repeated orbitals.
  explicit OccupationSet(std::vector<FrequencyIndex> orbitals, int* sign = nullptr);

  const std::vector<FrequencyIndex>& orbitals() const noexcept { return orbitals_; }
  std::size_t size() const noexcept { return orbitals_.size(); }
  bool contains(const FrequencyIndex& h) const;
  /// sum_j |h_j|^2 (integer form of the kinetic energy).
  int kinetic_index() const;
  double kinetic_energy(const TorusSpec& spec) const;

  friend auto operator<=>(const OccupationSet&, const OccupationSet&) = default;
  friend bool operator==(const OccupationSet&, const OccupationSet&) = default;

 private:
  std::vector<FrequencyIndex> orbitals_;
};

/// #(a \ b).
std::size_t orbital_difference(const OccupationSet& a, const OccupationSet& b);

/// Every distinct pair differs in at least two orbitals.
bool check_adr(std::span<const OccupationSet> family);

struct GroundOccupations {
  std::vector<OccupationSet> sets;  ///< canonical order
  double omega0 = 0.0;
  int kinetic_index = 0;
  bool degenerate() const noexcept { return sets.size() > 1; }
};

/// All sets of N^d distinct orbitals minimising the total kinetic energy.
GroundOccupations ground_occupations(const TorusSpec& spec,
                                     std::size_t limit = kDefaultBasisCapacity);

/// One nonzero single substitution c+_a c_b |I> = sign |target>, a != b.
struct Excitation {
  std::uint32_t target;
  std::int32_t created;      ///< orbital id a
  std::int32_t annihilated;  ///< orbital id b
  /// Field slot of the transfer xi_a - xi_b, or -1 outside the retained set.
  std::int64_t slot;
  double sign;
};

/// Slater determinants with sum_j |xi_j|^2 <= m, ordered by total kinetic
/// energy and then lexicographically, so smaller cutoffs give prefixes.
class DeterminantBasis {
 public:
  DeterminantBasis(const TorusSpec& spec, double cutoff, std::size_t capacity);

  const TorusSpec& spec() const noexcept { return spec_; }
  double cutoff() const noexcept { return cutoff_; }
  /// Largest admissible sum_j |h_j|^2.
  int kinetic_limit() const noexcept { return kinetic_limit_; }
  std::size_t size() const noexcept { return kinetic_.size(); }
  std::size_t particles() const noexcept { return particles_; }

  /// Orbitals that occur in some determinant, lexicographic; ids index this list.
  const std::vector<FrequencyIndex>& orbitals() const noexcept { return orbitals_; }
  std::span<const std::int32_t> determinant(std::size_t i) const;
  OccupationSet occupation(std::size_t i) const;
  std::optional<std::size_t> find(const OccupationSet& set) const;

  double kinetic_energy(std::size_t i) const { return kinetic_(static_cast<Eigen::Index>(i)); }
  const Eigen::VectorXd& kinetic_diagonal() const noexcept { return kinetic_; }

  std::span<const Excitation> excitations(std::size_t i) const;
  std::size_t excitation_count() const noexcept { return excitations_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::int32_t>& key) const noexcept;
  };
  std::optional<std::size_t> find_ids(const std::vector<std::int32_t>& ids) const;
  void build_excitations();

  TorusSpec spec_;
  double cutoff_;
  int kinetic_limit_;
  std::size_t particles_;
  std::vector<FrequencyIndex> orbitals_;
  std::vector<std::int32_t> ids_;  // size() * particles_, row per determinant
  Eigen::VectorXd kinetic_;
  std::unordered_map<std::vector<std::int32_t>, std::size_t, KeyHash> lookup_;
  std::vector<Excitation> excitations_;
  std::vector<std::size_t> excitation_offsets_;
};

using BasisPtr = std::shared_ptr<const DeterminantBasis>;

/// Throws CapacityError when more than `capacity` determinants qualify.
BasisPtr enumerate_basis(const TorusSpec& spec, double cutoff,
                         std::size_t capacity = kDefaultBasisCapacity);

/// Coefficients C(k) of psi = sum_k C(k) |k> over an orthonormal determinant basis.
struct CIVector {
  BasisPtr basis;
  Eigen::VectorXcd coeffs;

  CIVector() = default;
  explicit CIVector(BasisPtr b);
  CIVector(BasisPtr b, Eigen::VectorXcd c);

  /// Single determinant with the given amplitude; throws DomainError if absent.
  static CIVector determinant(BasisPtr b, const OccupationSet& set, cplx amplitude = 1.0);

  std::size_t size() const noexcept { return static_cast<std::size_t>(coeffs.size()); }
  /// Q(psi) = sum |C|^2.
  double charge() const { return coeffs.squaredNorm(); }
  /// <this, other>, antilinear in this.
  cplx dot(const CIVector& other) const;
};

}  // namespace spn
