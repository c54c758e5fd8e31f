// SPDX-License-Identifier: Apache-2.0
#include "spn/fermion_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "spn/errors.hpp"

namespace spn {

double orbital_kinetic_energy(const TorusSpec& spec, const FrequencyIndex& h) {
  return 0.5 * spec.frequency_norm2(h);
}

OccupationSet::OccupationSet(std::vector<FrequencyIndex> orbitals, int* sign)
    : orbitals_(std::move(orbitals)) {
  // Insertion sort so the parity is counted directly.
  int swaps = 0;
  for (std::size_t i = 1; i < orbitals_.size(); ++i) {
    for (std::size_t j = i; j > 0 && orbitals_[j] < orbitals_[j - 1]; --j) {
      std::swap(orbitals_[j], orbitals_[j - 1]);
      ++swaps;
    }
  }
  for (std::size_t i = 1; i < orbitals_.size(); ++i) {
    if (orbitals_[i] == orbitals_[i - 1]) {
      throw DomainError("occupation set repeats an orbital (Pauli exclusion)");
    }
  }
  if (sign != nullptr) *sign = (swaps % 2 == 0) ? 1 : -1;
}

bool OccupationSet::contains(const FrequencyIndex& h) const {
  return std::binary_search(orbitals_.begin(), orbitals_.end(), h);
}

int OccupationSet::kinetic_index() const {
  int sum = 0;
  for (const auto& h : orbitals_) sum += h.norm2();
  return sum;
}

double OccupationSet::kinetic_energy(const TorusSpec& spec) const {
  double sum = 0.0;
  for (const auto& h : orbitals_) sum += orbital_kinetic_energy(spec, h);
  return sum;
}

std::size_t orbital_difference(const OccupationSet& a, const OccupationSet& b) {
  std::size_t count = 0;
  for (const auto& h : a.orbitals()) {
    if (!b.contains(h)) ++count;
  }
  return count;
}

bool check_adr(std::span<const OccupationSet> family) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (family[i] == family[j]) continue;
      if (orbital_difference(family[i], family[j]) < 2) return false;
    }
  }
  return true;
}

namespace {

// Frequencies with |h|^2 <= limit, ordered by (|h|^2, lexicographic).
std::vector<FrequencyIndex> orbitals_within(const TorusSpec& spec, int limit) {
  const int d = spec.dimension();
  const int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(limit))));
  std::vector<FrequencyIndex> out;
  const int r1 = d > 1 ? r : 0;
  const int r2 = d > 2 ? r : 0;
  for (int a = -r; a <= r; ++a) {
    for (int b = -r1; b <= r1; ++b) {
      for (int c = -r2; c <= r2; ++c) {
        const FrequencyIndex h{a, b, c};
        if (h.norm2() <= limit) out.push_back(h);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const FrequencyIndex& x, const FrequencyIndex& y) {
    if (x.norm2() != y.norm2()) return x.norm2() < y.norm2();
    return x < y;
  });
  return out;
}

int kinetic_limit_for(const TorusSpec& spec, double cutoff) {
  // sum |xi_j|^2 <= m  <=>  sum |h_j|^2 <= m N^2 / (2 pi)^2.
  const double n = spec.cells_per_axis();
  return static_cast<int>(std::floor(cutoff * n * n / (kTwoPi * kTwoPi) + 1e-9));
}

// Depth-first enumeration of increasing index tuples from `pool` (sorted by
// norm) with total norm <= limit.
template <class Visit>
void enumerate_sets(const std::vector<FrequencyIndex>& pool, std::size_t particles, int limit,
                    Visit&& visit) {
  std::vector<int> prefix(pool.size() + 1, 0);
  for (std::size_t i = 0; i < pool.size(); ++i) prefix[i + 1] = prefix[i] + pool[i].norm2();
  std::vector<std::size_t> chosen;
  chosen.reserve(particles);
  auto rec = [&](auto&& self, std::size_t start, int used) -> void {
    const std::size_t left = particles - chosen.size();
    if (left == 0) {
      visit(chosen);
      return;
    }
    for (std::size_t i = start; i + left <= pool.size(); ++i) {
      // Cheapest completion takes the next `left` orbitals in norm order.
      if (used + prefix[i + left] - prefix[i] > limit) break;
      chosen.push_back(i);
      self(self, i + 1, used + pool[i].norm2());
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0);
}

}  // namespace

GroundOccupations ground_occupations(const TorusSpec& spec, std::size_t limit) {
  const std::size_t particles = spec.lattice_size();
  // Smallest shell radius holding at least N^d orbitals.
  int radius2 = 0;
  std::vector<FrequencyIndex> pool;
  while (true) {
    pool = orbitals_within(spec, radius2);
    if (pool.size() >= particles) break;
    ++radius2;
  }
  const int level = pool[particles - 1].norm2();
  std::vector<FrequencyIndex> inner;
  std::vector<FrequencyIndex> shell;
  for (const auto& h : pool) (h.norm2() < level ? inner : shell).push_back(h);
  // shell is already lexicographic within the outermost norm.
  shell.erase(std::remove_if(shell.begin(), shell.end(),
                             [level](const FrequencyIndex& h) { return h.norm2() != level; }),
              shell.end());
  const std::size_t pick = particles - inner.size();

  GroundOccupations out;
  std::vector<std::size_t> idx(pick);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (out.sets.size() >= limit) {
      throw CapacityError("ground-state degeneracy exceeds " + std::to_string(limit) + " sets",
                          limit);
    }
    std::vector<FrequencyIndex> orbitals = inner;
    for (std::size_t i : idx) orbitals.push_back(shell[i]);
    out.sets.emplace_back(std::move(orbitals));
    // Next combination in lexicographic order.
    std::ptrdiff_t k = static_cast<std::ptrdiff_t>(pick) - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == shell.size() - pick + static_cast<std::size_t>(k)) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (std::size_t j = static_cast<std::size_t>(k) + 1; j < pick; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::sort(out.sets.begin(), out.sets.end());
  out.kinetic_index = out.sets.front().kinetic_index();
  out.omega0 = out.sets.front().kinetic_energy(spec);
  return out;
}

std::size_t DeterminantBasis::KeyHash::operator()(
    const std::vector<std::int32_t>& key) const noexcept {
  std::size_t h = key.size();
  for (std::int32_t v : key) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

DeterminantBasis::DeterminantBasis(const TorusSpec& spec, double cutoff, std::size_t capacity)
    : spec_(spec),
      cutoff_(cutoff),
      kinetic_limit_(kinetic_limit_for(spec, cutoff)),
      particles_(spec.lattice_size()) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
    throw DomainError("basis cutoff must be positive and finite");
  }
  const auto ground = ground_occupations(spec, capacity);
  if (ground.kinetic_index > kinetic_limit_) {
    throw DomainError("basis cutoff " + std::to_string(cutoff) +
                      " is below the minimal total kinetic energy " +
                      std::to_string(2.0 * ground.omega0));
  }

  const auto pool = orbitals_within(spec, kinetic_limit_);
  std::vector<OccupationSet> sets;
  enumerate_sets(pool, particles_, kinetic_limit_, [&](const std::vector<std::size_t>& chosen) {
    if (sets.size() >= capacity) {
      throw CapacityError("determinant basis exceeds the capacity of " +
                              std::to_string(capacity) + " determinants",
                          capacity);
    }
    std::vector<FrequencyIndex> orbitals;
    orbitals.reserve(chosen.size());
    for (std::size_t i : chosen) orbitals.push_back(pool[i]);
    sets.emplace_back(std::move(orbitals));
  });
  std::sort(sets.begin(), sets.end(), [](const OccupationSet& a, const OccupationSet& b) {
    const int ka = a.kinetic_index();
    const int kb = b.kinetic_index();
    if (ka != kb) return ka < kb;
    return a < b;
  });

  for (const auto& s : sets) {
    for (const auto& h : s.orbitals()) orbitals_.push_back(h);
  }
  std::sort(orbitals_.begin(), orbitals_.end());
  orbitals_.erase(std::unique(orbitals_.begin(), orbitals_.end()), orbitals_.end());

  ids_.reserve(sets.size() * particles_);
  kinetic_.resize(static_cast<Eigen::Index>(sets.size()));
  lookup_.reserve(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    std::vector<std::int32_t> key;
    key.reserve(particles_);
    for (const auto& h : sets[i].orbitals()) {
      const auto it = std::lower_bound(orbitals_.begin(), orbitals_.end(), h);
      key.push_back(static_cast<std::int32_t>(it - orbitals_.begin()));
    }
    ids_.insert(ids_.end(), key.begin(), key.end());
    kinetic_(static_cast<Eigen::Index>(i)) = sets[i].kinetic_energy(spec_);
    lookup_.emplace(std::move(key), i);
  }
  build_excitations();
}

void DeterminantBasis::build_excitations() {
  const FourierScalarField layout(spec_);
  const std::size_t n_orb = orbitals_.size();
  excitation_offsets_.assign(size() + 1, 0);
  std::vector<std::int32_t> rest(particles_ - 1);
  std::vector<std::int32_t> key(particles_);
  for (std::size_t i = 0; i < size(); ++i) {
    const auto occ = determinant(i);
    for (std::size_t pb = 0; pb < particles_; ++pb) {
      // rest = occ without position pb
      std::size_t w = 0;
      for (std::size_t j = 0; j < particles_; ++j) {
        if (j != pb) rest[w++] = occ[j];
      }
      for (std::size_t a = 0; a < n_orb; ++a) {
        const auto ia = static_cast<std::int32_t>(a);
        if (std::binary_search(occ.begin(), occ.end(), ia)) continue;
        const auto pa = static_cast<std::size_t>(
            std::lower_bound(rest.begin(), rest.end(), ia) - rest.begin());
        std::copy(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(pa), key.begin());
        key[pa] = ia;
        std::copy(rest.begin() + static_cast<std::ptrdiff_t>(pa), rest.end(),
                  key.begin() + static_cast<std::ptrdiff_t>(pa) + 1);
        const auto target = find_ids(key);
        if (!target) continue;
        const FrequencyIndex transfer = orbitals_[a] - orbitals_[static_cast<std::size_t>(occ[pb])];
        const auto slot = layout.slot(transfer);
        excitations_.push_back({static_cast<std::uint32_t>(*target), ia, occ[pb],
                                slot ? static_cast<std::int64_t>(*slot) : -1,
                                ((pa + pb) % 2 == 0) ? 1.0 : -1.0});
      }
    }
    excitation_offsets_[i + 1] = excitations_.size();
  }
}

std::span<const std::int32_t> DeterminantBasis::determinant(std::size_t i) const {
  return {ids_.data() + i * particles_, particles_};
}

OccupationSet DeterminantBasis::occupation(std::size_t i) const {
  std::vector<FrequencyIndex> orbitals;
  for (std::int32_t id : determinant(i)) orbitals.push_back(orbitals_[static_cast<std::size_t>(id)]);
  return OccupationSet(std::move(orbitals));
}

std::optional<std::size_t> DeterminantBasis::find_ids(const std::vector<std::int32_t>& ids) const {
  const auto it = lookup_.find(ids);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> DeterminantBasis::find(const OccupationSet& set) const {
  if (set.size() != particles_) return std::nullopt;
  std::vector<std::int32_t> ids;
  for (const auto& h : set.orbitals()) {
    const auto it = std::lower_bound(orbitals_.begin(), orbitals_.end(), h);
    if (it == orbitals_.end() || *it != h) return std::nullopt;
    ids.push_back(static_cast<std::int32_t>(it - orbitals_.begin()));
  }
  return find_ids(ids);
}

std::span<const Excitation> DeterminantBasis::excitations(std::size_t i) const {
  return {excitations_.data() + excitation_offsets_[i],
          excitation_offsets_[i + 1] - excitation_offsets_[i]};
}

BasisPtr enumerate_basis(const TorusSpec& spec, double cutoff, std::size_t capacity) {
  return std::make_shared<const DeterminantBasis>(spec, cutoff, capacity);
}

CIVector::CIVector(BasisPtr b) : basis(std::move(b)) {
  coeffs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
}

CIVector::CIVector(BasisPtr b, Eigen::VectorXcd c) : basis(std::move(b)), coeffs(std::move(c)) {
  if (static_cast<std::size_t>(coeffs.size()) != basis->size()) {
    throw DimensionError("CI coefficient vector has " + std::to_string(coeffs.size()) +
                         " entries for a basis of " + std::to_string(basis->size()));
  }
}

CIVector CIVector::determinant(BasisPtr b, const OccupationSet& set, cplx amplitude) {
  const auto i = b->find(set);
  if (!i) throw DomainError("occupation set is not part of the determinant basis");
  CIVector out(std::move(b));
  out.coeffs(static_cast<Eigen::Index>(*i)) = amplitude;
  return out;
}

cplx CIVector::dot(const CIVector& other) const {
  if (coeffs.size() != other.coeffs.size()) throw DimensionError("CI vectors of different bases");
  return coeffs.dot(other.coeffs);
}

}  // namespace spn
