// SPDX-License-Identifier: Apache-2.0
#include "spn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "spn/errors.hpp"

namespace spn {

double v_norm(const GroundState& gs, const TangentVector& y) {
  return h1_norm(*gs.psi0.basis, y.psi) + y.q.norm() + y.p.norm();
}

TangentVector sample_tangent_perturbation(const GroundState& gs, const HessianForm& form,
                                          std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  Eigen::VectorXd y(static_cast<Eigen::Index>(form.dimension()));
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = normal(rng);
  // Constrained basis spans the complement of T_S S and of the charge normal.
  y = form.constrained_basis * (form.constrained_basis.transpose() * y);
  TangentVector v = from_coordinates(gs, y);
  v *= 1.0 / v_norm(gs, v);
  return v;
}

TangentVector translation_direction(const GroundState& gs) {
  TangentVector v = TangentVector::zero_like(gs.state());
  v.q.col(0).setOnes();
  v *= 1.0 / v_norm(gs, v);
  return v;
}

CrystalState perturbed_state(const GroundState& gs, const TangentVector& y, double delta) {
  CrystalState x = displaced(gs.state(), delta * y);
  const double q = x.psi.charge();
  if (q > 0.0) x.psi.coeffs *= std::sqrt(gs.sigma.Z() / q);
  x.wrap_positions();
  return x;
}

double StabilityTable::sup_distance(double delta) const {
  double m = 0.0;
  for (const auto& r : runs) {
    if (r.kind == "random" && r.delta == delta) m = std::max(m, r.sup_distance);
  }
  return m;
}

StabilityTable stability_experiment(const GroundState& gs, const StabilityOptions& options) {
  const HessianForm form = hessian_assemble(gs);
  struct Job {
    std::string kind;
    std::size_t index;
    double delta;
    TangentVector direction;
  };
  std::vector<Job> jobs;
  const TangentVector none = TangentVector::zero_like(gs.state());
  if (options.include_baseline) jobs.push_back({"baseline", 0, 0.0, none});
  for (double delta : options.deltas) {
    if (options.include_translation) {
      jobs.push_back({"translation", 0, delta, translation_direction(gs)});
    }
    for (std::size_t i = 0; i < options.perturbations; ++i) {
      jobs.push_back({"random", i, delta, sample_tangent_perturbation(gs, form, options.seed, i)});
    }
  }

  StabilityTable table;
  table.runs.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const std::size_t every = std::max<std::size_t>(1, options.sample_every);

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(jobs.size()); ++j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    StabilityRun& run = table.runs[static_cast<std::size_t>(j)];
    try {
      run.kind = job.kind;
      run.perturbation = job.index;
      run.delta = job.delta;
      const CrystalState x0 = perturbed_state(gs, job.direction, job.delta);
      run.initial_distance = distance_to_manifold(x0, gs).distance;
      run.sup_distance = run.initial_distance;
      run.distance_series.emplace_back(0.0, run.initial_distance);
      auto observer = [&](std::size_t step, double t, const CrystalState& x) {
        if (step % every != 0) return;
        const double dist = distance_to_manifold(x, gs).distance;
        run.sup_distance = std::max(run.sup_distance, dist);
        run.distance_series.emplace_back(t, dist);
      };
      const EvolveResult result = evolve(x0, gs.sigma, options.evolve, observer);
      run.energy_drift = result.log.max_energy_drift();
      run.charge_drift = result.log.max_charge_drift();
    } catch (...) {
      errors[static_cast<std::size_t>(j)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return table;
}

}  // namespace spn
