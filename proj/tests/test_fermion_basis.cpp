// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "spn/fermion_basis.hpp"

namespace {

using namespace spn;
using Orbitals = std::vector<FrequencyIndex>;
using oracle::kPi;

TEST(OccupationSet, SortsWithPermutationSign) {
  int sign = 0;
  const OccupationSet a({{1}, {0}}, &sign);
  EXPECT_EQ(sign, -1);
  EXPECT_EQ(a.orbitals().front(), FrequencyIndex{0});
  const OccupationSet b({{2}, {-1}, {0}}, &sign);
  EXPECT_EQ(sign, 1);  // cyclic permutation
  EXPECT_EQ(b.kinetic_index(), 5);
  EXPECT_TRUE(b.contains({-1}));
  EXPECT_FALSE(b.contains({1}));
  EXPECT_THROW(OccupationSet(Orbitals{{1}, {1}}), DomainError);
}

TEST(OccupationSet, KineticEnergy) {
  const TorusSpec spec(2, 2, 8);
  const OccupationSet s({{0, 0}, {1, 0}, {1, 1}});
  // (pi^2 (1 + 2)) / 2
  EXPECT_NEAR(s.kinetic_energy(spec), 1.5 * kPi * kPi, 1e-13);
}

TEST(Admissibility, TwoOrbitalRule) {
  const std::vector<OccupationSet> good{OccupationSet(Orbitals{{0}, {1}}), OccupationSet(Orbitals{{-1}, {2}})};
  const std::vector<OccupationSet> bad{OccupationSet(Orbitals{{0}, {1}}), OccupationSet(Orbitals{{0}, {-1}})};
  EXPECT_TRUE(check_adr(good));
  EXPECT_FALSE(check_adr(bad));
  EXPECT_EQ(orbital_difference(good[0], good[1]), 2u);
  EXPECT_EQ(orbital_difference(bad[0], bad[1]), 1u);
  EXPECT_TRUE(check_adr(std::vector<OccupationSet>{good[0]}));
}

TEST(GroundOccupations, SmallTori) {
  {
    const auto g = ground_occupations(TorusSpec(1, 1, 3));
    EXPECT_EQ(g.sets.size(), 1u);
    EXPECT_DOUBLE_EQ(g.omega0, 0.0);
  }
  {
    const auto g = ground_occupations(TorusSpec(1, 2, 8));
    ASSERT_EQ(g.sets.size(), 2u);
    EXPECT_TRUE(g.degenerate());
    EXPECT_NEAR(g.omega0, kPi * kPi / 2, 1e-14);
  }
  {
    const auto g = ground_occupations(TorusSpec(1, 3, 9));
    ASSERT_EQ(g.sets.size(), 1u);
    EXPECT_NEAR(g.omega0, 4.0 * kPi * kPi / 9.0, 1e-14);
    EXPECT_EQ(g.sets[0], OccupationSet(Orbitals{{-1}, {0}, {1}}));
  }
  {
    // Three of the four |h| = 1 orbitals beside h = 0.
    const auto g = ground_occupations(TorusSpec(2, 2, 8));
    EXPECT_EQ(g.sets.size(), 4u);
    EXPECT_NEAR(g.omega0, 1.5 * kPi * kPi, 1e-13);
  }
}

TEST(DeterminantBasis, Counts) {
  EXPECT_EQ(enumerate_basis(TorusSpec(1, 1, 5), 4 * kPi * kPi)->size(), 3u);
  EXPECT_EQ(enumerate_basis(TorusSpec(1, 2, 8), kPi * kPi)->size(), 2u);
}

TEST(DeterminantBasis, BruteForceEnumeration) {
  // Every pair of distinct orbitals with h0^2 + h1^2 <= L for d = 1, N = 2.
  const TorusSpec spec(1, 2, 16);
  const auto basis = enumerate_basis(spec, 5.0 * kPi * kPi);
  std::set<std::pair<int, int>> expect;
  for (int a = -3; a <= 3; ++a) {
    for (int b = a + 1; b <= 3; ++b) {
      if (a * a + b * b <= 5) expect.insert({a, b});
    }
  }
  ASSERT_EQ(basis->size(), expect.size());
  double last = -1.0;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const auto occ = basis->occupation(i).orbitals();
    EXPECT_TRUE(expect.count({occ[0][0], occ[1][0]}));
    EXPECT_GE(basis->kinetic_energy(i), last);
    last = basis->kinetic_energy(i);
    EXPECT_EQ(basis->find(basis->occupation(i)), i);
  }
}

TEST(DeterminantBasis, NestedInCutoff) {
  const TorusSpec spec(2, 2, 8);
  const auto small = enumerate_basis(spec, 4.0 * kPi * kPi);
  const auto large = enumerate_basis(spec, 6.0 * kPi * kPi);
  EXPECT_LT(small->size(), large->size());
  for (std::size_t i = 0; i < small->size(); ++i) {
    EXPECT_TRUE(large->find(small->occupation(i)).has_value());
  }
}

TEST(DeterminantBasis, Errors) {
  const TorusSpec spec(1, 2, 16);
  EXPECT_THROW(enumerate_basis(spec, 0.5 * kPi * kPi), DomainError);
  EXPECT_THROW(enumerate_basis(spec, -1.0), DomainError);
  EXPECT_THROW(enumerate_basis(spec, 20.0 * kPi * kPi, 5), CapacityError);
  try {
    enumerate_basis(spec, 20.0 * kPi * kPi, 5);
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.budget(), 5u);
  }
}

TEST(DeterminantBasis, ExcitationsAreSingleSubstitutions) {
  const TorusSpec spec(1, 3, 12);
  const auto basis = enumerate_basis(spec, 6.0 * 4.0 * kPi * kPi / 9.0);
  const auto& orbitals = basis->orbitals();
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const auto occ = basis->occupation(i);
    for (const auto& e : basis->excitations(i)) {
      const auto target = basis->occupation(e.target);
      EXPECT_EQ(orbital_difference(occ, target), 1u);
      EXPECT_TRUE(target.contains(orbitals[static_cast<std::size_t>(e.created)]));
      EXPECT_FALSE(occ.contains(orbitals[static_cast<std::size_t>(e.created)]));
      EXPECT_TRUE(occ.contains(orbitals[static_cast<std::size_t>(e.annihilated)]));
      EXPECT_TRUE(e.sign == 1.0 || e.sign == -1.0);
    }
  }
}

TEST(CIVector, ChargeAndPairing) {
  const auto basis = enumerate_basis(TorusSpec(1, 2, 16), 5.0 * kPi * kPi);
  const auto a = CIVector::determinant(basis, OccupationSet(Orbitals{{0}, {1}}), cplx(0.0, 2.0));
  const auto b = CIVector::determinant(basis, OccupationSet(Orbitals{{-1}, {0}}));
  EXPECT_DOUBLE_EQ(a.charge(), 4.0);
  EXPECT_EQ(a.dot(b), cplx(0.0));
  EXPECT_EQ(a.dot(a), cplx(4.0));
  EXPECT_THROW(CIVector::determinant(basis, OccupationSet(Orbitals{{5}, {6}})), DomainError);
}

}  // namespace
