// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "spn/ion_density.hpp"
#include "spn/spectral.hpp"

namespace {

using namespace spn;
using oracle::kPi;

TEST(BoxFactor, ClosedFormValues) {
  for (int k = 1; k <= 4; ++k) {
    EXPECT_DOUBLE_EQ(box_factor(0.0, k), 1.0);
    for (int m = 1; m <= 5; ++m) EXPECT_NEAR(box_factor(2.0 * kPi * m, k), 0.0, 1e-15);
  }
  EXPECT_NEAR(box_factor(kPi, 1), 2.0 / kPi, 1e-15);
  EXPECT_NEAR(box_factor(kPi, 3), std::pow(2.0 / kPi, 3), 1e-15);
  EXPECT_NEAR(box_factor(-1.3, 2), box_factor(1.3, 2), 1e-16);
}

TEST(BoxSpline, MatchesRecurrence) {
  for (int k = 1; k <= 4; ++k) {
    for (double x = -2.6; x <= 2.6; x += 0.137) {
      EXPECT_NEAR(box_spline(x, k), oracle::bspline(x, k), 1e-14) << "k=" << k << " x=" << x;
    }
  }
  EXPECT_DOUBLE_EQ(box_spline(0.5, 1), 0.5);
}

TEST(IonDensity, BoxTransformMatchesGridQuadrature) {
  // k = 4 is C^2, so the periodic trapezoid rule converges fast.
  const TorusSpec spec(1, 2, 512);
  const auto sigma = IonDensityModel::box(spec, 4, 1.5);
  std::vector<double> samples(spec.grid_size());
  for (std::size_t g = 0; g < samples.size(); ++g) samples[g] = sigma.value(spec.grid_point(g));
  for (int h = 0; h <= 6; ++h) {
    EXPECT_NEAR(std::abs(sigma.transform({h}) - oracle::naive_dft(samples, spec, {h})), 0.0, 1e-9);
  }
  const double xi = spec.frequency({1})(0);
  EXPECT_NEAR(sigma.transform({1}).real(), 1.5 * std::pow(2.0 * std::sin(xi / 2) / xi, 4), 1e-15);
}

TEST(IonDensity, TotalChargeAndSymmetry) {
  const TorusSpec spec(2, 2, 8);
  const auto sigma = IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 2.0, 0.5);
  EXPECT_DOUBLE_EQ(sigma.total_charge(), 1.0);
  EXPECT_NEAR(std::abs(sigma.transform({0, 0}) - 1.0), 0.0, 1e-14);
  EXPECT_LE(sigma.coefficients().conjugate_symmetry_defect(), 1e-14);
  for (const auto& h : spec.brillouin_zone()) {
    EXPECT_NEAR(std::abs(sigma.transform(h) - std::conj(sigma.transform(-h))), 0.0, 1e-15);
  }
}

TEST(IonDensity, RejectsInvalidParameters) {
  const TorusSpec spec(1, 2, 8);
  EXPECT_THROW(IonDensityModel::box(spec, 0, 1.0), InvalidDensityError);
  EXPECT_THROW(IonDensityModel::box(spec, 1, -1.0), InvalidDensityError);
  EXPECT_THROW(IonDensityModel::box(spec, 1, 1.0, 0.0), InvalidDensityError);
  PerturbedBoxDensity bad;
  bad.modes = {{{0}, 0.1}};
  EXPECT_THROW(IonDensityModel::perturbed_box(spec, bad, 1.0), InvalidDensityError);
  EXPECT_THROW(IonDensityModel::from_grid(spec, std::vector<double>(5, 1.0), 1.0), DimensionError);
  // Integrates to 2, not Z = 1.
  EXPECT_THROW(IonDensityModel::from_grid(spec, std::vector<double>(8, 1.0), 1.0),
               InvalidDensityError);
}

TEST(Jellium, BoxDensitiesHold) {
  for (int d = 1; d <= 3; ++d) {
    const TorusSpec spec(d, 2, 8);
    for (int k = 1; k <= 3; ++k) {
      const auto sigma = IonDensityModel::box(spec, k, 1.0);
      EXPECT_TRUE(jellium_check(sigma).holds) << "d=" << d << " k=" << k;
      const auto wide = jellium_check(sigma, 1e-10, 16.0 * kPi);
      EXPECT_TRUE(wide.holds);
      EXPECT_GT(wide.checked, 0u);
    }
  }
}

TEST(Jellium, CosineModeOnDualLatticeViolates) {
  const TorusSpec spec(1, 2, 16);
  PerturbedBoxDensity params;
  params.modes = {{{2}, 0.05}};  // xi = 2 pi
  const auto sigma = IonDensityModel::perturbed_box(spec, params, 1.0);
  const auto v = jellium_check(sigma);
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(std::abs(v.worst[0]), 2);
  EXPECT_GT(v.max_violation, 1e-3);

  // Off-lattice modes keep the condition.
  params.modes = {{{1}, 0.05}};
  EXPECT_TRUE(jellium_check(IonDensityModel::perturbed_box(spec, params, 1.0)).holds);
}

TEST(Jellium, UniformIonCheckAgreesWithVerdict) {
  const TorusSpec spec(1, 2, 32);
  EXPECT_LE(uniform_ion_check(IonDensityModel::box(spec, 1, 1.0)), 1e-12);
  EXPECT_LE(uniform_ion_check(IonDensityModel::box(spec, 3, 2.0)), 1e-12);
  EXPECT_LE(uniform_ion_check(IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 1.0)),
            1e-9);
  PerturbedBoxDensity params;
  params.modes = {{{2}, 0.05}};
  EXPECT_GT(uniform_ion_check(IonDensityModel::perturbed_box(spec, params, 1.0)), 1e-3);
}

TEST(Jellium, GridDensityFromBoxSamples) {
  const TorusSpec spec(1, 2, 64);
  const auto box = IonDensityModel::box(spec, 2, 1.0);
  std::vector<double> samples(spec.grid_size());
  for (std::size_t g = 0; g < samples.size(); ++g) samples[g] = box.value(spec.grid_point(g));
  const auto grid = IonDensityModel::from_grid(spec, samples, 1.0);
  EXPECT_EQ(grid.kind_name(), "grid");
  EXPECT_TRUE(jellium_check(grid, 1e-10).holds);
}

}  // namespace
