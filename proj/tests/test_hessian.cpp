// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spn/hessian.hpp"
#include "spn/wiener.hpp"

namespace {

using namespace spn;
using oracle::kPi;

TEST(Hessian, CoordinatesRoundTrip) {
  const auto gs = fixture::ground_1d();
  const auto y = fixture::random_tangent(gs.state(), 3, 1.0);
  const Eigen::VectorXd c = to_coordinates(y);
  EXPECT_EQ(static_cast<std::size_t>(c.size()), coordinate_dimension(gs));
  EXPECT_NEAR(c.norm(), y.norm(), 1e-14);
  EXPECT_LE((from_coordinates(gs, c) - y).max_abs(), 0.0);
}

TEST(Hessian, LinearizedDensityMatchesFiniteDifference) {
  const auto gs = fixture::ground_1d();
  const auto s = gs.state();
  const auto y = fixture::random_tangent(s, 7, 1.0);
  const double h = 1e-6;
  auto fd = assemble_rho(displaced(s, h * y), gs.sigma);
  fd -= assemble_rho(displaced(s, -h * y), gs.sigma);
  fd *= 1.0 / (2.0 * h);
  const auto lin = linearized_density(gs, y).total();
  for (std::size_t slot : lin.retained_slots()) {
    EXPECT_NEAR(std::abs(lin.at_slot(slot) - fd.at_slot(slot)), 0.0, 1e-8);
  }
}

TEST(Hessian, QuadraticFormMatchesSecondDifference) {
  const TorusSpec spec(2, 2, 16);
  const auto gs = fixture::ground_2d(IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 1.0));
  const auto form = hessian_assemble(gs);
  const auto s = gs.state();
  const double e0 = energy(s, gs.sigma);
  const double h = 1e-4;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto y = fixture::random_tangent(s, seed, 1.0);
    const double second =
        (energy(displaced(s, h * y), gs.sigma) + energy(displaced(s, -h * y), gs.sigma) - 2.0 * e0) /
        (h * h);
    const Eigen::VectorXd c = to_coordinates(y);
    EXPECT_NEAR(c.dot(form.matrix * c), second, 1e-5 * std::max(1.0, std::abs(second)));
  }
  EXPECT_LE((form.matrix - form.matrix.transpose()).norm(), 1e-12 * form.matrix.norm());
}

TEST(Hessian, KernelIsTranslationsForWienerDensity) {
  const auto gs = fixture::ground_1d();
  const auto form = hessian_assemble(gs);
  const auto full = hessian_spectrum(form, Subspace::full);
  const auto cons = hessian_spectrum(form, Subspace::constrained);
  EXPECT_EQ(full.kernel_dim, 1);
  EXPECT_EQ(cons.kernel_dim, 0);
  EXPECT_GT(cons.lambda_min(), 0.0);
  EXPECT_GE(full.lambda_min(), -full.tolerance);

  // Uniform translation is a null direction; the gauge direction is not.
  TangentVector t = TangentVector::zero_like(gs.state());
  t.q.setOnes();
  EXPECT_NEAR(form.quadratic_form(to_coordinates(t)), 0.0, 1e-12);
  TangentVector g = TangentVector::zero_like(gs.state());
  g.psi = cplx(0.0, 1.0) * gs.psi_alpha().coeffs;
  EXPECT_NEAR(form.quadratic_form(to_coordinates(g)), gs.omega0 * gs.psi0.charge(), 1e-10);
}

TEST(Hessian, BoxOneKernelGainsDegeneracySpace) {
  const TorusSpec spec(2, 2, 16);
  const auto box = IonDensityModel::box(spec, 1, 1.0);
  const auto gs = fixture::ground_2d(box);
  const auto full = hessian_spectrum(hessian_assemble(gs), Subspace::full);
  const auto rep = wiener_report(box);
  EXPECT_EQ(rep.degeneracy_dim, 2);
  EXPECT_EQ(full.kernel_dim, 2 + rep.degeneracy_dim);

  const auto generic = fixture::ground_2d(IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 1.0));
  const auto form = hessian_assemble(generic);
  EXPECT_EQ(hessian_spectrum(form, Subspace::full).kernel_dim, 2);
  EXPECT_GT(hessian_spectrum(form, Subspace::constrained).lambda_min(), 1e-4);
}

TEST(Hessian, ProjectorsAreComplementary) {
  const auto gs = fixture::ground_1d();
  const auto form = hessian_assemble(gs);
  const Eigen::VectorXd y = to_coordinates(fixture::random_tangent(gs.state(), 4, 1.0));
  EXPECT_LE((form.project_orbit_tangent(y) + form.project_orbit_normal(y) - y).norm(), 1e-14);
  EXPECT_NEAR(form.charge_normal.dot(form.project_manifold_tangent(y)), 0.0, 1e-14);
  const Eigen::MatrixXd gram = form.constrained_basis.transpose() * form.constrained_basis;
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm(), 1e-12);
  EXPECT_LE((form.orbit_tangent.transpose() * form.constrained_basis).norm(), 1e-12);
  EXPECT_EQ(static_cast<std::size_t>(form.constrained_basis.cols()),
            form.dimension() - 1 - static_cast<std::size_t>(form.orbit_tangent.cols()));
}

TEST(FirstVariation, VanishesOnManifoldTangent) {
  const auto gs = fixture::ground_1d();
  const auto form = hessian_assemble(gs);
  for (Eigen::Index j = 0; j < form.constrained_basis.cols(); j += 3) {
    const auto y = from_coordinates(gs, form.constrained_basis.col(j));
    EXPECT_LE(std::abs(first_variation_residual(gs, y)), 1e-7);
  }
  for (Eigen::Index j = 0; j < form.orbit_tangent.cols(); ++j) {
    EXPECT_LE(std::abs(first_variation_residual(gs, from_coordinates(gs, form.orbit_tangent.col(j)))),
              1e-7);
  }
  // Radial direction: d/ds E((1 + s) psi0) = 2 omega0 Z.
  TangentVector radial = TangentVector::zero_like(gs.state());
  radial.psi = gs.psi_alpha().coeffs;
  EXPECT_NEAR(first_variation_residual(gs, radial), 2.0 * gs.omega0 * gs.psi0.charge(), 1e-6);
}

}  // namespace
