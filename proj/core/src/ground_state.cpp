// SPDX-License-Identifier: Apache-2.0
#include "spn/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spn/errors.hpp"

namespace spn {

CIVector GroundState::psi_alpha() const {
  return CIVector(psi0.basis, std::polar(1.0, alpha) * psi0.coeffs);
}

CrystalState GroundState::point(double phase, const Vec3& shift) const {
  return {CIVector(psi0.basis, std::polar(1.0, phase) * psi0.coeffs),
          IonState::at_rest(spec(), mass, shift)};
}

GroundState build_ground_state(BasisPtr basis, const IonDensityModel& sigma, double mass,
                               const GroundStateChoice& choice) {
  if (!(basis->spec() == sigma.spec())) {
    throw DimensionError("basis and ion density live on different torus specs");
  }
  const JelliumVerdict jellium = jellium_check(sigma);
  if (!jellium.holds) {
    throw ModelRefusal("ion density violates the Jellium condition: max |sigma~| = " +
                           std::to_string(jellium.max_violation) + " on the punctured dual lattice",
                       jellium.max_violation);
  }
  GroundOccupations occ = ground_occupations(basis->spec());

  CIVector psi(basis);
  if (choice.mixture.empty()) {
    if (choice.set_index >= occ.sets.size()) {
      throw DomainError("ground set index " + std::to_string(choice.set_index) + " out of range (" +
                        std::to_string(occ.sets.size()) + " minimal sets)");
    }
    psi = CIVector::determinant(basis, occ.sets[choice.set_index]);
  } else {
    std::vector<OccupationSet> family;
    for (const auto& [set, amplitude] : choice.mixture) {
      if (!std::binary_search(occ.sets.begin(), occ.sets.end(), set)) {
        throw DomainError("mixture component is not a minimal occupation set");
      }
      family.push_back(set);
      psi.coeffs(static_cast<Eigen::Index>(*basis->find(set))) += amplitude;
    }
    if (!check_adr(family)) {
      throw AdmissibilityError("mixture contains occupation sets differing in a single orbital");
    }
    if (psi.charge() == 0.0) throw DomainError("mixture amplitudes vanish");
  }
  psi.coeffs *= std::sqrt(sigma.Z() / psi.charge());

  GroundState gs{std::move(psi), occ.omega0, std::move(occ), sigma, mass, 0.0, Vec3::Zero()};
  if (!(mass > 0.0)) throw DomainError("ion mass must be positive");
  return gs;
}

Eigen::VectorXd h1_weights(const DeterminantBasis& basis) {
  // sum_j |xi_j|^2 = 2 x kinetic energy.
  return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(basis.size())) +
         2.0 * basis.kinetic_diagonal();
}

double h1_norm(const DeterminantBasis& basis, const Eigen::VectorXcd& coeffs) {
  return std::sqrt(h1_weights(basis).dot(coeffs.cwiseAbs2()));
}

namespace {

// argmin over r in [0, N) of sum_i |x_i - r|^2 with minimal-image differences.
// The objective is piecewise quadratic with concave kinks only, so the minimum
// is the mean of one cyclic unwrapping of the sorted points.
std::pair<double, double> circular_mean(std::vector<double> x, const TorusSpec& spec) {
  const double n = spec.cells_per_axis();
  for (double& v : x) v = spec.wrap(v);
  std::sort(x.begin(), x.end());
  const double count = static_cast<double>(x.size());
  double sum = 0.0;
  for (double v : x) sum += v;
  double best_r = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k <= x.size(); ++k) {
    // First k points moved up by N.
    if (k > 0) sum += n;
    const double r = spec.wrap(sum / count);
    double f = 0.0;
    for (double v : x) {
      const double dv = spec.minimal_image(v - r);
      f += dv * dv;
    }
    if (f < best) {
      best = f;
      best_r = r;
    }
  }
  return {best_r, best};
}

}  // namespace

ManifoldDistance distance_to_manifold(const CrystalState& x, const GroundState& gs) {
  if (x.psi.coeffs.size() != gs.psi0.coeffs.size()) {
    throw DimensionError("state and ground state use different bases");
  }
  const DeterminantBasis& basis = *gs.psi0.basis;
  const Eigen::VectorXd w = h1_weights(basis);
  ManifoldDistance out;

  cplx pairing = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    pairing += w(i) * std::conj(gs.psi0.coeffs(i)) * x.psi.coeffs(i);
  }
  out.alpha = std::abs(pairing) > 0.0 ? std::arg(pairing) : 0.0;
  if (out.alpha < 0.0) out.alpha += kTwoPi;
  const Eigen::VectorXcd residual = x.psi.coeffs - std::polar(1.0, out.alpha) * gs.psi0.coeffs;
  out.psi_part = std::sqrt(w.dot(residual.cwiseAbs2()));

  const TorusSpec& spec = gs.spec();
  double q2 = 0.0;
  for (int c = 0; c < spec.dimension(); ++c) {
    std::vector<double> col(x.ions.q.col(c).data(), x.ions.q.col(c).data() + x.ions.q.rows());
    const auto [r, f] = circular_mean(std::move(col), spec);
    out.r(c) = r;
    q2 += f;
  }
  out.q_part = std::sqrt(q2);
  out.p_part = x.ions.p.norm();
  out.distance = out.psi_part + out.q_part + out.p_part;
  return out;
}

}  // namespace spn
