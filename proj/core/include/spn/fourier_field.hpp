// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "spn/torus.hpp"

namespace spn {

/// Truncated Fourier coefficients of a function on the torus.
///
/// Convention: F[f](xi) = \int_T e^{i xi x} f(x) dx, with synthesis
/// f(x) = |T|^{-1} sum_xi F[f](xi) e^{-i xi x}. Coefficients live on a dense
/// cube |h_j| <= K (K = spec.max_index()); slots outside the cutoff ball are
/// kept at zero and rejected by the mutating accessors.
class FourierScalarField {
 public:
  explicit FourierScalarField(const TorusSpec& spec);

  const TorusSpec& spec() const noexcept { return layout_->spec; }
  int extent() const noexcept { return layout_->extent; }
  std::size_t storage_size() const noexcept { return values_.size(); }

  /// Storage slot of h, if h lies inside the retained set.
  std::optional<std::size_t> slot(const FrequencyIndex& k) const;
  bool retained(const FrequencyIndex& k) const { return slot(k).has_value(); }
  bool retained_slot(std::size_t s) const { return layout_->retained[s] != 0; }
  FrequencyIndex index_of(std::size_t s) const { return layout_->index[s]; }
  /// Slot holding -h (the cube is symmetric).
  std::size_t mirror(std::size_t s) const noexcept { return values_.size() - 1 - s; }
  std::size_t zero_slot() const noexcept { return values_.size() / 2; }
  double frequency_norm2(std::size_t s) const { return layout_->xi2[s]; }
  Vec3 frequency(std::size_t s) const { return spec().frequency(layout_->index[s]); }

  /// Retained slots in storage order (lexicographic on h).
  const std::vector<std::size_t>& retained_slots() const noexcept { return layout_->slots; }

  /// Coefficient at h; zero when h is not retained.
  cplx operator[](const FrequencyIndex& k) const;
  cplx at_slot(std::size_t s) const { return values_[s]; }
  cplx& at_slot(std::size_t s) { return values_[s]; }
  /// Throws DomainError when h is outside the retained set.
  void set(const FrequencyIndex& k, cplx value);
  void add(const FrequencyIndex& k, cplx value);

  std::span<const cplx> values() const noexcept { return values_; }
  std::span<cplx> values() noexcept { return values_; }

  /// Coefficient at xi = 0 divided by |T|.
  double mean() const { return values_[zero_slot()].real() / spec().volume(); }

  /// max |F(-h) - conj F(h)| over retained slots.
  double conjugate_symmetry_defect() const;

  /// max |F(h)| over retained slots.
  double max_abs() const;

  FourierScalarField& operator+=(const FourierScalarField& other);
  FourierScalarField& operator-=(const FourierScalarField& other);
  FourierScalarField& operator*=(double factor);

  bool same_layout(const FourierScalarField& other) const noexcept {
    return layout_ == other.layout_ || layout_->spec == other.layout_->spec;
  }

 private:
  struct Layout {
    TorusSpec spec;
    int extent;
    std::vector<FrequencyIndex> index;
    std::vector<double> xi2;
    std::vector<char> retained;
    std::vector<std::size_t> slots;
  };
  static std::shared_ptr<const Layout> make_layout(const TorusSpec& spec);

  std::shared_ptr<const Layout> layout_;
  std::vector<cplx> values_;
};

FourierScalarField operator+(FourierScalarField a, const FourierScalarField& b);
FourierScalarField operator-(FourierScalarField a, const FourierScalarField& b);
FourierScalarField operator*(double factor, FourierScalarField a);

}  // namespace spn
