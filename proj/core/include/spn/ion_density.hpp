// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spn/fourier_field.hpp"

namespace spn {

/// Real cosine mode amplitude * cos(xi(h) . x) added to a density.
struct CosineMode {
  FrequencyIndex h;
  double amplitude = 0.0;
};

/// Box spline of order k per axis (k-fold self-convolution of the unit box),
/// centred on the ion site, scaled to total charge e Z.
struct BoxDensity {
  int k = 1;
};

/// Box spline plus a jellium-preserving generic term and optional cosine modes.
///
/// The generic term has transform epsilon * e Z * sum_i sin^2(xi_i / 2)
/// * exp(-width |xi|^2): it vanishes exactly on the dual lattice and is
/// positive everywhere else. For even k the total transform is therefore
/// nonzero at every frequency off the dual lattice.
struct PerturbedBoxDensity {
  int k = 2;
  double epsilon = 0.1;
  double gaussian_width = 0.02;
  std::vector<CosineMode> modes;
};

/// Density given by real-space samples on the torus grid.
struct GridDensity {
  std::vector<double> samples;
};

using DensityKind = std::variant<BoxDensity, PerturbedBoxDensity, GridDensity>;

/// Charge density sigma of one ion. Immutable; carries its transform on the
/// retained frequencies of its torus spec.
class IonDensityModel {
 public:
  IonDensityModel(const TorusSpec& spec, DensityKind kind, double Z, double e = 1.0);

  static IonDensityModel box(const TorusSpec& spec, int k, double Z, double e = 1.0);
  static IonDensityModel perturbed_box(const TorusSpec& spec, PerturbedBoxDensity params,
                                       double Z, double e = 1.0);
  static IonDensityModel from_grid(const TorusSpec& spec, std::vector<double> samples, double Z,
                                   double e = 1.0);

  const TorusSpec& spec() const noexcept { return coefficients_.spec(); }
  const DensityKind& kind() const noexcept { return *kind_; }
  std::string kind_name() const;
  double Z() const noexcept { return Z_; }
  double e() const noexcept { return e_; }
  /// e Z.
  double total_charge() const noexcept { return Z_ * e_; }

  /// sigma~(xi(h)) at any frequency. Closed form for box kinds; for grid
  /// densities zero outside the sampled band.
  cplx transform(const FrequencyIndex& h) const;

  /// sigma~ on the retained set of spec().
  const FourierScalarField& coefficients() const noexcept { return coefficients_; }

  /// Point value sigma(x) on the torus (periodised).
  double value(const Vec3& x) const;

  /// Majorant B(xi) >= |sigma~(xi)| used for truncation tail bounds.
  double transform_bound(const Vec3& xi) const;

 private:
  std::shared_ptr<const DensityKind> kind_;
  double Z_;
  double e_;
  FourierScalarField coefficients_;
};

/// chi~_k(s) = (2 sin(s/2) / s)^k with chi~_k(0) = 1.
double box_factor(double s, int k);

/// Centred cardinal B-spline of order k on the real line (value 1/2 at the
/// jumps of the k = 1 box).
double box_spline(double x, int k);

struct JelliumVerdict {
  bool holds = false;
  double max_violation = 0.0;  ///< max |sigma~| over the punctured dual lattice
  FrequencyIndex worst;        ///< frequency attaining it
  std::size_t checked = 0;     ///< number of dual-lattice frequencies inspected
};

/// sigma~(xi) = 0 on 2 pi Z^d \ 0 within the retained set, relative to e Z.
JelliumVerdict jellium_check(const IonDensityModel& sigma, double tol = 1e-10);

/// Same, on every dual-lattice point with |xi| <= radius (closed form).
JelliumVerdict jellium_check(const IonDensityModel& sigma, double tol, double radius);

/// max over the grid of |sum_n sigma(x - n) - e Z|, by real-space lattice sums.
double uniform_ion_check(const IonDensityModel& sigma);

}  // namespace spn
