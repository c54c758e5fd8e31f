// SPDX-License-Identifier: Apache-2.0
#include "spn/fourier_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "spn/errors.hpp"

namespace spn {

std::shared_ptr<const FourierScalarField::Layout> FourierScalarField::make_layout(
    const TorusSpec& spec) {
  // Layouts are shared between every field of one spec.
  static std::mutex mutex;
  static std::vector<std::shared_ptr<const Layout>> cache;
  std::lock_guard lock(mutex);
  for (const auto& l : cache) {
    if (l->spec == spec) return l;
  }

  auto layout = std::make_shared<Layout>(Layout{spec, spec.max_index(), {}, {}, {}, {}});
  const int d = spec.dimension();
  const int k = layout->extent;
  const int side = 2 * k + 1;
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(side);

  layout->index.resize(total);
  layout->xi2.resize(total);
  layout->retained.resize(total);
  const double cutoff2 = spec.cutoff_radius() * spec.cutoff_radius() * (1.0 + 1e-12);
  for (std::size_t s = 0; s < total; ++s) {
    FrequencyIndex h;
    std::size_t flat = s;
    for (int i = d - 1; i >= 0; --i) {
      h[i] = static_cast<int>(flat % static_cast<std::size_t>(side)) - k;
      flat /= static_cast<std::size_t>(side);
    }
    layout->index[s] = h;
    layout->xi2[s] = spec.frequency_norm2(h);
    layout->retained[s] = layout->xi2[s] <= cutoff2 ? 1 : 0;
    if (layout->retained[s]) layout->slots.push_back(s);
  }
  if (cache.size() > 64) cache.erase(cache.begin());
  cache.push_back(layout);
  return layout;
}

FourierScalarField::FourierScalarField(const TorusSpec& spec)
    : layout_(make_layout(spec)), values_(layout_->index.size(), cplx{0.0, 0.0}) {}

std::optional<std::size_t> FourierScalarField::slot(const FrequencyIndex& k) const {
  const int d = spec().dimension();
  const int ext = extent();
  const std::size_t side = static_cast<std::size_t>(2 * ext + 1);
  std::size_t s = 0;
  for (int i = 0; i < 3; ++i) {
    if (i >= d) {
      if (k[i] != 0) return std::nullopt;
      continue;
    }
    if (k[i] < -ext || k[i] > ext) return std::nullopt;
    s = s * side + static_cast<std::size_t>(k[i] + ext);
  }
  if (!layout_->retained[s]) return std::nullopt;
  return s;
}

cplx FourierScalarField::operator[](const FrequencyIndex& k) const {
  const auto s = slot(k);
  return s ? values_[*s] : cplx{0.0, 0.0};
}

void FourierScalarField::set(const FrequencyIndex& k, cplx value) {
  const auto s = slot(k);
  if (!s) throw DomainError("frequency outside the retained Fourier set");
  values_[*s] = value;
}

void FourierScalarField::add(const FrequencyIndex& k, cplx value) {
  const auto s = slot(k);
  if (!s) throw DomainError("frequency outside the retained Fourier set");
  values_[*s] += value;
}

double FourierScalarField::conjugate_symmetry_defect() const {
  double worst = 0.0;
  for (std::size_t s : layout_->slots) {
    worst = std::max(worst, std::abs(values_[mirror(s)] - std::conj(values_[s])));
  }
  return worst;
}

double FourierScalarField::max_abs() const {
  double worst = 0.0;
  for (std::size_t s : layout_->slots) worst = std::max(worst, std::abs(values_[s]));
  return worst;
}

FourierScalarField& FourierScalarField::operator+=(const FourierScalarField& other) {
  if (!same_layout(other)) throw DimensionError("adding fields of different torus specs");
  for (std::size_t s = 0; s < values_.size(); ++s) values_[s] += other.values_[s];
  return *this;
}

FourierScalarField& FourierScalarField::operator-=(const FourierScalarField& other) {
  if (!same_layout(other)) throw DimensionError("subtracting fields of different torus specs");
  for (std::size_t s = 0; s < values_.size(); ++s) values_[s] -= other.values_[s];
  return *this;
}

FourierScalarField& FourierScalarField::operator*=(double factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

FourierScalarField operator+(FourierScalarField a, const FourierScalarField& b) { return a += b; }
FourierScalarField operator-(FourierScalarField a, const FourierScalarField& b) { return a -= b; }
FourierScalarField operator*(double factor, FourierScalarField a) { return a *= factor; }

}  // namespace spn
