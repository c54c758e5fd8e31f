// SPDX-License-Identifier: Apache-2.0
#include "spn/ci_operators.hpp"

#include "spn/errors.hpp"

namespace spn {
namespace {

void check_spec(const CIVector& psi, const FourierScalarField& field) {
  if (!(psi.basis->spec() == field.spec())) {
    throw DimensionError("field and CI basis live on different torus specs");
  }
}

}  // namespace

FourierScalarField transition_density(const CIVector& bra, const CIVector& ket) {
  if (bra.basis != ket.basis && bra.size() != ket.size()) {
    throw DimensionError("transition density of vectors on different bases");
  }
  const DeterminantBasis& basis = *ket.basis;
  FourierScalarField out(basis.spec());
  auto values = out.values();
  values[out.zero_slot()] = static_cast<double>(basis.particles()) * bra.dot(ket);
  // <bra| c+_a c_b |ket> contributes at xi_a - xi_b.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const cplx ci = ket.coeffs(static_cast<Eigen::Index>(i));
    if (ci == 0.0) continue;
    for (const Excitation& x : basis.excitations(i)) {
      if (x.slot < 0) continue;
      values[static_cast<std::size_t>(x.slot)] +=
          x.sign * std::conj(bra.coeffs(static_cast<Eigen::Index>(x.target))) * ci;
    }
  }
  return out;
}

FourierScalarField one_body_density(const CIVector& psi, double e) {
  FourierScalarField out = transition_density(psi, psi);
  out *= -e;
  return out;
}

CIVector apply_one_body_potential(const CIVector& psi, const FourierScalarField& phi) {
  check_spec(psi, phi);
  const DeterminantBasis& basis = *psi.basis;
  const double inv_volume = 1.0 / basis.spec().volume();
  const cplx diagonal =
      static_cast<double>(basis.particles()) * inv_volume * phi.at_slot(phi.zero_slot());
  CIVector out(psi.basis);
  const auto n = static_cast<std::ptrdiff_t>(basis.size());
  // Gathering over the excitations of the target keeps each row independent:
  // <J| c+_b c_a |I> = sign whenever c+_a c_b |J> = sign |I>.
#pragma omp parallel for schedule(static) if (n > 512)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    cplx acc = diagonal * psi.coeffs(j);
    for (const Excitation& x : basis.excitations(ju)) {
      if (x.slot < 0) continue;
      acc += x.sign * inv_volume * phi.at_slot(static_cast<std::size_t>(x.slot)) *
             psi.coeffs(static_cast<Eigen::Index>(x.target));
    }
    out.coeffs(j) = acc;
  }
  return out;
}

CIVector apply_kinetic(const CIVector& psi) {
  return CIVector(psi.basis, psi.basis->kinetic_diagonal().cast<cplx>().cwiseProduct(psi.coeffs));
}

double kinetic_expectation(const CIVector& psi) {
  return psi.basis->kinetic_diagonal().dot(psi.coeffs.cwiseAbs2());
}

}  // namespace spn
