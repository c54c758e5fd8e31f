// SPDX-License-Identifier: Apache-2.0
#include "spn/dynamics.hpp"

#include <cmath>

#include "spn/errors.hpp"

namespace spn {

IonState IonState::at_rest(const TorusSpec& spec, double mass, const Vec3& shift) {
  if (!(mass > 0.0)) throw DomainError("ion mass must be positive");
  const auto n = static_cast<Eigen::Index>(spec.lattice_size());
  const int d = spec.dimension();
  IonState s;
  s.q.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) s.q(i, c) = spec.wrap(shift(c));
  }
  s.p = Eigen::MatrixXd::Zero(n, d);
  s.mass = mass;
  return s;
}

void CrystalState::wrap_positions() {
  const TorusSpec& s = spec();
  for (Eigen::Index i = 0; i < ions.q.size(); ++i) ions.q.data()[i] = s.wrap(ions.q.data()[i]);
}

TangentVector TangentVector::zero_like(const CrystalState& x) {
  return {Eigen::VectorXcd::Zero(x.psi.coeffs.size()),
          Eigen::MatrixXd::Zero(x.ions.q.rows(), x.ions.q.cols()),
          Eigen::MatrixXd::Zero(x.ions.p.rows(), x.ions.p.cols())};
}

TangentVector& TangentVector::operator+=(const TangentVector& o) {
  psi += o.psi;
  q += o.q;
  p += o.p;
  return *this;
}

TangentVector& TangentVector::operator*=(double s) {
  psi *= s;
  q *= s;
  p *= s;
  return *this;
}

double TangentVector::norm() const {
  return std::sqrt(psi.squaredNorm() + q.squaredNorm() + p.squaredNorm());
}

double TangentVector::max_abs() const {
  double m = 0.0;
  if (psi.size() > 0) m = std::max(m, psi.cwiseAbs().maxCoeff());
  if (q.size() > 0) m = std::max(m, q.cwiseAbs().maxCoeff());
  if (p.size() > 0) m = std::max(m, p.cwiseAbs().maxCoeff());
  return m;
}

TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
TangentVector operator-(TangentVector a, const TangentVector& b) {
  a.psi -= b.psi;
  a.q -= b.q;
  a.p -= b.p;
  return a;
}
TangentVector operator*(double s, TangentVector a) { return a *= s; }

CrystalState displaced(const CrystalState& x, const TangentVector& v) {
  CrystalState out = x;
  out.psi.coeffs += v.psi;
  out.ions.q += v.q;
  out.ions.p += v.p;
  return out;
}

TangentVector difference(const CrystalState& x, const CrystalState& y) {
  TangentVector v{x.psi.coeffs - y.psi.coeffs, x.ions.q - y.ions.q, x.ions.p - y.ions.p};
  const TorusSpec& s = x.spec();
  for (Eigen::Index i = 0; i < v.q.size(); ++i) v.q.data()[i] = s.minimal_image(v.q.data()[i]);
  return v;
}

FourierScalarField ion_charge_density(const IonDensityModel& sigma, const Eigen::MatrixXd& q) {
  const TorusSpec& spec = sigma.spec();
  const int d = spec.dimension();
  if (static_cast<std::size_t>(q.rows()) != spec.lattice_size() || q.cols() != d) {
    throw DimensionError("ion displacement array must be N^d x d");
  }
  const FourierScalarField& coeff = sigma.coefficients();
  FourierScalarField out(spec);
  std::vector<Vec3> positions(spec.lattice_size());
  for (std::size_t n = 0; n < positions.size(); ++n) {
    positions[n] = spec.lattice_point(n);
    for (int c = 0; c < d; ++c) positions[n](c) += q(static_cast<Eigen::Index>(n), c);
  }
  for (std::size_t s : coeff.retained_slots()) {
    const cplx st = coeff.at_slot(s);
    if (st == 0.0) continue;
    const Vec3 xi = coeff.frequency(s);
    cplx lattice_sum = 0.0;
    for (const Vec3& x : positions) lattice_sum += std::polar(1.0, xi.dot(x));
    out.at_slot(s) = st * lattice_sum;
  }
  return out;
}

FourierScalarField assemble_rho(const CrystalState& state, const IonDensityModel& sigma) {
  if (!(state.spec() == sigma.spec())) {
    throw DimensionError("state and ion density live on different torus specs");
  }
  FourierScalarField rho = ion_charge_density(sigma, state.ions.q);
  rho += one_body_density(state.psi, sigma.e());
  return rho;
}

EnergyTerms energy_terms(const CrystalState& state, const IonDensityModel& sigma) {
  EnergyTerms t;
  t.electron_kinetic = kinetic_expectation(state.psi);
  t.coulomb = coulomb_energy(assemble_rho(state, sigma), Neutrality::drop_mean);
  t.ion_kinetic = 0.5 * state.ions.p.squaredNorm() / state.ions.mass;
  return t;
}

double energy(const CrystalState& state, const IonDensityModel& sigma) {
  return energy_terms(state, sigma).total();
}

Eigen::MatrixXd forces(const CrystalState& state, const IonDensityModel& sigma,
                       const FourierScalarField& phi) {
  const TorusSpec& spec = sigma.spec();
  const int d = spec.dimension();
  const auto n_ions = static_cast<Eigen::Index>(spec.lattice_size());
  const FourierScalarField& coeff = sigma.coefficients();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n_ions, d);
  const double inv_volume = 1.0 / spec.volume();
  for (Eigen::Index n = 0; n < n_ions; ++n) {
    Vec3 x = spec.lattice_point(static_cast<std::size_t>(n));
    for (int c = 0; c < d; ++c) x(c) += state.ions.q(n, c);
    for (std::size_t s : coeff.retained_slots()) {
      const cplx st = coeff.at_slot(s);
      const cplx ph = phi.at_slot(s);
      if (st == 0.0 || ph == 0.0) continue;
      const Vec3 xi = coeff.frequency(s);
      // dE/dq = |T|^{-1} Re[conj(Phi~) sigma~ i xi e^{i xi x}]
      const double w = (std::conj(ph) * st * cplx(0.0, 1.0) * std::polar(1.0, xi.dot(x))).real();
      for (int c = 0; c < d; ++c) f(n, c) -= inv_volume * w * xi(c);
    }
  }
  return f;
}

Eigen::MatrixXd forces(const CrystalState& state, const IonDensityModel& sigma) {
  return forces(state, sigma, green_apply(assemble_rho(state, sigma), Neutrality::drop_mean));
}

TangentVector coupling(const CrystalState& state, const IonDensityModel& sigma) {
  const FourierScalarField phi = green_apply(assemble_rho(state, sigma), Neutrality::drop_mean);
  TangentVector v;
  v.psi = cplx(0.0, sigma.e()) * apply_one_body_potential(state.psi, phi).coeffs;
  v.q = state.ions.p / state.ions.mass;
  v.p = forces(state, sigma, phi);
  return v;
}

TangentVector rhs(const CrystalState& state, const IonDensityModel& sigma) {
  TangentVector v = coupling(state, sigma);
  v.psi -= cplx(0.0, 1.0) * apply_kinetic(state.psi).coeffs;
  return v;
}

}  // namespace spn
