// SPDX-License-Identifier: Apache-2.0
#include "spn/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "spn/errors.hpp"

namespace spn {

std::size_t coordinate_dimension(const GroundState& gs) {
  return 2 * gs.psi0.size() + 2 * gs.spec().lattice_size() * static_cast<std::size_t>(gs.spec().dimension());
}

Eigen::VectorXd to_coordinates(const TangentVector& y) {
  const Eigen::Index b = y.psi.size();
  const Eigen::Index k = y.q.size();
  Eigen::VectorXd out(2 * b + 2 * k);
  out.segment(0, b) = y.psi.real();
  out.segment(b, b) = y.psi.imag();
  // row-wise: site n, component c at n * d + c
  const Eigen::MatrixXd qt = y.q.transpose();
  const Eigen::MatrixXd pt = y.p.transpose();
  out.segment(2 * b, k) = Eigen::Map<const Eigen::VectorXd>(qt.data(), k);
  out.segment(2 * b + k, k) = Eigen::Map<const Eigen::VectorXd>(pt.data(), k);
  return out;
}

TangentVector from_coordinates(const GroundState& gs, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != coordinate_dimension(gs)) {
    throw DimensionError("coordinate vector has the wrong length");
  }
  const auto b = static_cast<Eigen::Index>(gs.psi0.size());
  const auto sites = static_cast<Eigen::Index>(gs.spec().lattice_size());
  const int d = gs.spec().dimension();
  const Eigen::Index k = sites * d;
  TangentVector v;
  v.psi.resize(b);
  for (Eigen::Index i = 0; i < b; ++i) v.psi(i) = cplx(y(i), y(b + i));
  v.q.resize(sites, d);
  v.p.resize(sites, d);
  for (Eigen::Index n = 0; n < sites; ++n) {
    for (int c = 0; c < d; ++c) {
      v.q(n, c) = y(2 * b + n * d + c);
      v.p(n, c) = y(2 * b + k + n * d + c);
    }
  }
  return v;
}

LinearizedDensity linearized_density(const GroundState& gs, const TangentVector& y) {
  const TorusSpec& spec = gs.spec();
  const int d = spec.dimension();
  const FourierScalarField& coeff = gs.sigma.coefficients();

  FourierScalarField ion(spec);
  std::vector<Vec3> sites(spec.lattice_size());
  for (std::size_t n = 0; n < sites.size(); ++n) sites[n] = spec.lattice_point(n) + gs.r;
  for (std::size_t s : coeff.retained_slots()) {
    const cplx st = coeff.at_slot(s);
    if (st == 0.0) continue;
    const Vec3 xi = coeff.frequency(s);
    cplx acc = 0.0;
    for (std::size_t n = 0; n < sites.size(); ++n) {
      double xk = 0.0;
      for (int c = 0; c < d; ++c) xk += xi(c) * y.q(static_cast<Eigen::Index>(n), c);
      if (xk != 0.0) acc += xk * std::polar(1.0, xi.dot(sites[n]));
    }
    ion.at_slot(s) = cplx(0.0, 1.0) * st * acc;
  }

  const CIVector psi = gs.psi_alpha();
  const CIVector phi(psi.basis, y.psi);
  FourierScalarField electron = transition_density(psi, phi);
  electron += transition_density(phi, psi);
  electron *= -gs.sigma.e();
  return {std::move(ion), std::move(electron)};
}

Eigen::VectorXd HessianForm::project_orbit_tangent(const Eigen::VectorXd& y) const {
  return orbit_tangent * (orbit_tangent.transpose() * y);
}

Eigen::VectorXd HessianForm::project_orbit_normal(const Eigen::VectorXd& y) const {
  return y - project_orbit_tangent(y);
}

Eigen::VectorXd HessianForm::project_manifold_tangent(const Eigen::VectorXd& y) const {
  return y - charge_normal * charge_normal.dot(y);
}

HessianForm hessian_assemble(const GroundState& gs) {
  const TorusSpec& spec = gs.spec();
  const std::size_t n = coordinate_dimension(gs);
  const auto b = static_cast<Eigen::Index>(gs.psi0.size());
  const int d = spec.dimension();
  const auto k = static_cast<Eigen::Index>(spec.lattice_size()) * d;

  // Coulomb part |T|^{-1} sum_{xi != 0} |rho^(1)|^2 / |xi|^2 = |A y|^2 with
  // A the weighted linearised-density map.
  const FourierScalarField layout(spec);
  std::vector<std::size_t> slots;
  for (std::size_t s : layout.retained_slots()) {
    if (s != layout.zero_slot()) slots.push_back(s);
  }
  const auto f = static_cast<Eigen::Index>(slots.size());
  Eigen::VectorXd weight(f);
  for (Eigen::Index i = 0; i < f; ++i) {
    weight(i) = 1.0 / std::sqrt(spec.volume() * layout.frequency_norm2(slots[static_cast<std::size_t>(i)]));
  }
  Eigen::MatrixXd a_re(f, static_cast<Eigen::Index>(n));
  Eigen::MatrixXd a_im(f, static_cast<Eigen::Index>(n));
  const auto cols = static_cast<std::ptrdiff_t>(2 * b + k);  // pi columns do not enter the density
  a_re.rightCols(k).setZero();
  a_im.rightCols(k).setZero();
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < cols; ++j) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    unit(j) = 1.0;
    const FourierScalarField rho = linearized_density(gs, from_coordinates(gs, unit)).total();
    for (Eigen::Index i = 0; i < f; ++i) {
      const cplx v = weight(i) * rho.at_slot(slots[static_cast<std::size_t>(i)]);
      a_re(i, j) = v.real();
      a_im(i, j) = v.imag();
    }
  }

  HessianForm form;
  form.matrix = a_re.transpose() * a_re + a_im.transpose() * a_im;
  const Eigen::VectorXd& kinetic = gs.psi0.basis->kinetic_diagonal();
  for (Eigen::Index i = 0; i < b; ++i) {
    form.matrix(i, i) += 2.0 * kinetic(i);
    form.matrix(b + i, b + i) += 2.0 * kinetic(i);
  }
  for (Eigen::Index i = 0; i < k; ++i) form.matrix(2 * b + k + i, 2 * b + k + i) += 1.0 / gs.mass;
  form.matrix = 0.5 * (form.matrix + form.matrix.transpose()).eval();

  // Tangent space of the orbit and the charge constraint.
  const CIVector psi = gs.psi_alpha();
  TangentVector radial = TangentVector{psi.coeffs, Eigen::MatrixXd::Zero(k / d, d),
                                       Eigen::MatrixXd::Zero(k / d, d)};
  TangentVector gauge = radial;
  gauge.psi = cplx(0.0, 1.0) * psi.coeffs;
  form.charge_normal = to_coordinates(radial).normalized();

  form.orbit_tangent.resize(static_cast<Eigen::Index>(n), 1 + d);
  form.orbit_tangent.col(0) = to_coordinates(gauge).normalized();
  for (int c = 0; c < d; ++c) {
    TangentVector shift = radial;
    shift.psi.setZero();
    shift.q.col(c).setOnes();
    form.orbit_tangent.col(1 + c) = to_coordinates(shift).normalized();
  }

  Eigen::MatrixXd excluded(static_cast<Eigen::Index>(n), 2 + d);
  excluded.col(0) = form.charge_normal;
  excluded.rightCols(1 + d) = form.orbit_tangent;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(excluded);
  const Eigen::MatrixXd q = qr.householderQ();
  form.constrained_basis = q.rightCols(static_cast<Eigen::Index>(n) - 2 - d);
  return form;
}

HessianSpectrum hessian_spectrum(const HessianForm& form, Subspace subspace,
                                 double relative_tolerance) {
  Eigen::MatrixXd m;
  if (subspace == Subspace::full) {
    m = form.matrix;
  } else {
    m = form.constrained_basis.transpose() * form.matrix * form.constrained_basis;
    m = 0.5 * (m + m.transpose()).eval();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  HessianSpectrum out;
  out.eigenvalues = eig.eigenvalues();
  const double scale = out.eigenvalues.cwiseAbs().maxCoeff();
  out.tolerance = relative_tolerance * scale;
  out.smallest_nonzero = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < out.eigenvalues.size(); ++i) {
    const double a = std::abs(out.eigenvalues(i));
    if (a <= out.tolerance) {
      ++out.kernel_dim;
      out.largest_kernel = std::max(out.largest_kernel, a);
    } else {
      out.smallest_nonzero = std::min(out.smallest_nonzero, a);
    }
  }
  return out;
}

double first_variation_residual(const GroundState& gs, const TangentVector& y, double h) {
  const CrystalState s = gs.state();
  const double plus = energy(displaced(s, h * y), gs.sigma);
  const double minus = energy(displaced(s, -h * y), gs.sigma);
  return (plus - minus) / (2.0 * h);
}

}  // namespace spn
