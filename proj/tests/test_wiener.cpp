// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "spn/wiener.hpp"

namespace {

using namespace spn;
using oracle::kPi;

// d = 1 box density: Sigma(theta) = sum_m |e Z chi_k(theta + 2 pi m)|^2.
double scalar_box_sum(double theta, int k, double eZ, double radius) {
  double s = 0.0;
  for (int m = -1000; m <= 1000; ++m) {
    const double xi = theta + 2.0 * kPi * m;
    if (std::abs(xi) > radius) continue;
    const double chi = std::pow(2.0 * std::sin(xi / 2) / xi, k);
    s += eZ * eZ * chi * chi;
  }
  return s;
}

TEST(Wiener, ScalarCaseMatchesDirectSum) {
  const TorusSpec spec(1, 4, 16);
  const auto sigma = IonDensityModel::box(spec, 2, 1.5);
  for (int h = 1; h < 4; ++h) {
    const double theta = spec.frequency({h})(0);
    const auto w = wiener_matrix(sigma, {h}, 40.0);
    ASSERT_EQ(w.matrix.rows(), 1);
    EXPECT_NEAR(w.matrix(0, 0), scalar_box_sum(theta, 2, 1.5, 40.0), 1e-14);
    // The omitted tail is bounded by the reported estimate.
    const double tail = scalar_box_sum(theta, 2, 1.5, 1e4) - w.matrix(0, 0);
    EXPECT_GE(w.tail_bound, tail);
  }
}

TEST(Wiener, DualLatticeThetaRejected) {
  const TorusSpec spec(1, 2, 8);
  const auto sigma = IonDensityModel::box(spec, 1, 1.0);
  EXPECT_THROW(wiener_matrix(sigma, {0}), DomainError);
  EXPECT_THROW(wiener_matrix(sigma, {2}), DomainError);
}

TEST(Wiener, PeriodicSymmetricAndPositive) {
  const TorusSpec spec(2, 3, 9);
  const auto sigma = IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 1.0);
  for (const auto& h : spec.brillouin_zone()) {
    const auto a = wiener_matrix(sigma, h).matrix;
    const auto shifted = wiener_matrix(sigma, h + FrequencyIndex{3, -3}).matrix;
    const auto mirrored = wiener_matrix(sigma, -h).matrix;
    EXPECT_LE((a - shifted).norm(), 1e-13 * a.norm());
    EXPECT_LE((a - mirrored).norm(), 1e-13 * a.norm());
    EXPECT_LE((a - a.transpose()).norm(), 1e-15 * a.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    EXPECT_GT(es.eigenvalues()(0), 0.0);
  }
}

TEST(Wiener, OneDimensionalBoxAlwaysHolds) {
  const TorusSpec spec(1, 3, 9);
  const auto rep = wiener_report(IonDensityModel::box(spec, 1, 1.0));
  EXPECT_TRUE(rep.wiener_holds);
  EXPECT_EQ(rep.degeneracy_dim, 0);
  EXPECT_EQ(rep.entries.size(), 2u);
}

TEST(Wiener, BoxOneInThreeDimensionsDegenerates) {
  const TorusSpec spec(3, 2, 8);
  const auto rep = wiener_report(IonDensityModel::box(spec, 1, 1.0));
  EXPECT_FALSE(rep.wiener_holds);
  EXPECT_EQ(rep.degeneracy_dim, 9);
  EXPECT_EQ(rep.degeneracy_basis.rows(), 24);
  // Orthonormal columns.
  const Eigen::MatrixXd gram = rep.degeneracy_basis.transpose() * rep.degeneracy_basis;
  EXPECT_LE((gram - Eigen::MatrixXd::Identity(9, 9)).norm(), 1e-12);
  for (const auto& e : rep.entries) {
    const int nonzero = (e.theta[0] != 0) + (e.theta[1] != 0) + (e.theta[2] != 0);
    if (nonzero == 1) EXPECT_LE(e.lambda_min(), 1e-10);
  }
}

TEST(Wiener, BoxOneInTwoDimensions) {
  const TorusSpec spec(2, 2, 8);
  const auto rep = wiener_report(IonDensityModel::box(spec, 1, 1.0));
  EXPECT_FALSE(rep.wiener_holds);
  EXPECT_EQ(rep.degeneracy_dim, 2);
}

TEST(Wiener, PerturbedBoxHoldsUniformly) {
  const TorusSpec spec(3, 2, 8);
  const auto rep = wiener_report(IonDensityModel::perturbed_box(spec, PerturbedBoxDensity{}, 1.0));
  EXPECT_TRUE(rep.wiener_holds);
  EXPECT_TRUE(rep.verdict_certified);
  EXPECT_EQ(rep.degeneracy_dim, 0);
  EXPECT_GT(rep.min_lambda(), 1e-4);
}

TEST(Wiener, GeneratorsAreLatticePlaneWaves) {
  // One kernel direction at theta = pi e_1 in d = 2, N = 2.
  const TorusSpec spec(2, 2, 8);
  WienerEntry entry;
  entry.theta = {1, 0};
  entry.kernel = Eigen::MatrixXd(2, 1);
  entry.kernel << 0.0, 1.0;
  const Eigen::MatrixXd g = degeneracy_generators(spec, {entry});
  ASSERT_EQ(g.rows(), 8);
  for (std::size_t n = 0; n < 4; ++n) {
    const Vec3 x = spec.lattice_point(n);
    const double c = std::cos(kPi * x(0));
    bool found = false;
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (std::abs(g(static_cast<Eigen::Index>(2 * n + 1), j) - c) < 1e-14) found = true;
      EXPECT_NEAR(g(static_cast<Eigen::Index>(2 * n), j), 0.0, 1e-14);
    }
    EXPECT_TRUE(found);
  }
}

}  // namespace
