// SPDX-License-Identifier: Apache-2.0
#include "spn/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spn/errors.hpp"

namespace spn {

Method parse_method(std::string_view name) {
  if (name == "implicit_midpoint" || name == "midpoint") return Method::implicit_midpoint;
  if (name == "rk4") return Method::rk4;
  if (name == "splitting") return Method::splitting;
  throw DomainError("unknown integration method '" + std::string(name) + "'");
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::implicit_midpoint:
      return "implicit_midpoint";
    case Method::rk4:
      return "rk4";
    case Method::splitting:
      return "splitting";
  }
  return "unknown";
}

double EvolutionLog::max_energy_drift() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, std::abs(r.energy - records.front().energy));
  return m;
}

double EvolutionLog::max_charge_drift() const {
  double m = 0.0;
  for (const auto& r : records) m = std::max(m, std::abs(r.charge - records.front().charge));
  return m;
}

namespace {

struct StepInfo {
  double residual = 0.0;
  int iterations = 0;
};

double scale_of(const CrystalState& x) {
  return std::max({1.0, x.psi.coeffs.cwiseAbs().maxCoeff(), x.ions.q.cwiseAbs().maxCoeff(),
                   x.ions.p.size() ? x.ions.p.cwiseAbs().maxCoeff() : 0.0});
}

// Free electron flow e^{-i s T} on the psi component.
void free_flow(Eigen::VectorXcd& psi, const Eigen::VectorXd& kinetic, double s) {
  for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) *= std::polar(1.0, -s * kinetic(i));
}

template <class Map>
StepInfo fixed_point(const CrystalState& x, CrystalState& next, Map&& map,
                     const EvolveOptions& opt, std::size_t step, double t) {
  const double tol = opt.tolerance * scale_of(x);
  StepInfo info;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    CrystalState updated = map(next);
    info.residual = difference(updated, next).max_abs();
    info.iterations = it;
    next = std::move(updated);
    if (info.residual <= tol) return info;
    if (!std::isfinite(info.residual)) break;
  }
  throw IntegratorError("implicit step " + std::to_string(step) + " at t = " + std::to_string(t) +
                            " did not converge after " + std::to_string(info.iterations) +
                            " iterations (residual " + std::to_string(info.residual) + ")",
                        step, t, info.residual);
}

StepInfo midpoint_step(CrystalState& x, const IonDensityModel& sigma, const EvolveOptions& opt,
                       std::size_t step, double t) {
  const double dt = opt.dt;
  CrystalState next = displaced(x, dt * rhs(x, sigma));
  auto map = [&](const CrystalState& y) {
    CrystalState mid = x;
    mid.psi.coeffs = 0.5 * (x.psi.coeffs + y.psi.coeffs);
    mid.ions.q = 0.5 * (x.ions.q + y.ions.q);
    mid.ions.p = 0.5 * (x.ions.p + y.ions.p);
    return displaced(x, dt * rhs(mid, sigma));
  };
  const StepInfo info = fixed_point(x, next, map, opt, step, t);
  x = std::move(next);
  return info;
}

StepInfo splitting_step(CrystalState& x, const IonDensityModel& sigma, const EvolveOptions& opt,
                        std::size_t step, double t) {
  const double dt = opt.dt;
  const Eigen::VectorXd& kinetic = x.psi.basis->kinetic_diagonal();
  // Interaction picture Z = U(-s) X; midpoint rule on Z' = U(-s) N(U(s) Z).
  auto map = [&](const CrystalState& w) {
    CrystalState mid = x;
    mid.psi.coeffs = 0.5 * (x.psi.coeffs + w.psi.coeffs);
    mid.ions.q = 0.5 * (x.ions.q + w.ions.q);
    mid.ions.p = 0.5 * (x.ions.p + w.ions.p);
    free_flow(mid.psi.coeffs, kinetic, 0.5 * dt);
    TangentVector n = coupling(mid, sigma);
    free_flow(n.psi, kinetic, -0.5 * dt);
    return displaced(x, dt * n);
  };
  CrystalState w = map(x);
  const StepInfo info = fixed_point(x, w, map, opt, step, t);
  free_flow(w.psi.coeffs, kinetic, dt);
  x = std::move(w);
  return info;
}

void rk4_step(CrystalState& x, const IonDensityModel& sigma, double dt) {
  const TangentVector k1 = rhs(x, sigma);
  const TangentVector k2 = rhs(displaced(x, 0.5 * dt * k1), sigma);
  const TangentVector k3 = rhs(displaced(x, 0.5 * dt * k2), sigma);
  const TangentVector k4 = rhs(displaced(x, dt * k3), sigma);
  x = displaced(x, (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace

EvolveResult evolve(const CrystalState& initial, const IonDensityModel& sigma,
                    const EvolveOptions& options, const StepObserver& observer) {
  if (!(options.dt > 0.0) || !std::isfinite(options.dt)) {
    throw DomainError("time step must be positive");
  }
  if (!(options.duration >= 0.0)) throw DomainError("duration must be nonnegative");
  if (!(initial.spec() == sigma.spec())) {
    throw DimensionError("state and ion density live on different torus specs");
  }
  const auto steps = static_cast<std::size_t>(std::llround(options.duration / options.dt));
  const std::size_t every = std::max<std::size_t>(1, options.log_every);

  EvolveResult out{initial, {}};
  out.state.wrap_positions();
  out.log.records.push_back({0.0, energy(out.state, sigma), out.state.charge(), 0.0, 0});

  for (std::size_t k = 1; k <= steps; ++k) {
    const double t0 = static_cast<double>(k - 1) * options.dt;
    StepInfo info;
    switch (options.method) {
      case Method::implicit_midpoint:
        info = midpoint_step(out.state, sigma, options, k, t0);
        break;
      case Method::splitting:
        info = splitting_step(out.state, sigma, options, k, t0);
        break;
      case Method::rk4:
        rk4_step(out.state, sigma, options.dt);
        break;
    }
    out.state.wrap_positions();
    const double t = static_cast<double>(k) * options.dt;
    if (k % every == 0 || k == steps) {
      out.log.records.push_back(
          {t, energy(out.state, sigma), out.state.charge(), info.residual, info.iterations});
    }
    if (observer) observer(k, t, out.state);
  }
  return out;
}

}  // namespace spn
