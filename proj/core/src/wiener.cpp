// SPDX-License-Identifier: Apache-2.0
#include "spn/wiener.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "spn/errors.hpp"

namespace spn {
namespace {

// Visits theta + 2 pi m (as frequency indices) for all m with |xi| <= radius.
template <class F>
void for_each_shift(const TorusSpec& spec, const FrequencyIndex& theta, double radius, F&& f) {
  const int d = spec.dimension();
  const int n = spec.cells_per_axis();
  const int reach = static_cast<int>(std::ceil(radius / kTwoPi)) + 1;
  const double r2 = radius * radius * (1.0 + 1e-12);
  FrequencyIndex m;
  const int r1 = d > 1 ? reach : 0;
  const int rr2 = d > 2 ? reach : 0;
  for (m[0] = -reach; m[0] <= reach; ++m[0]) {
    for (m[1] = -r1; m[1] <= r1; ++m[1]) {
      for (m[2] = -rr2; m[2] <= rr2; ++m[2]) {
        const FrequencyIndex h{theta[0] + n * m[0], theta[1] + n * m[1], theta[2] + n * m[2]};
        const double xi2 = spec.frequency_norm2(h);
        if (xi2 > r2) continue;
        f(h, xi2);
      }
    }
  }
}

// Sum over s in offset + 2 pi Z of a profile that is even and decreasing for |s| >= 2.
struct LineSums {
  double all = 0.0;  // whole line
  double out = 0.0;  // |s| > threshold
};

template <class F, class Tail>
LineSums line_sums(double offset, double threshold, F&& f, Tail&& integral_from) {
  // Explicit part up to |s| <= S, analytic remainder beyond.
  const double S = std::max(threshold, 2.0) + 200.0 * kTwoPi;
  LineSums r;
  const int reach = static_cast<int>(std::ceil(S / kTwoPi)) + 1;
  for (int m = -reach; m <= reach; ++m) {
    const double s = offset + kTwoPi * m;
    if (std::abs(s) > S) continue;
    const double v = f(s);
    r.all += v;
    if (std::abs(s) > threshold) r.out += v;
  }
  const double remainder = 2.0 * (f(S) + integral_from(S) / kTwoPi);
  r.all += remainder;
  r.out += remainder;
  return r;
}

// Bound on sum_{xi in theta + 2 pi Z^d, |xi| > radius} B(xi)^2.
double tail_bound(const IonDensityModel& sigma, const FrequencyIndex& theta, double radius) {
  const TorusSpec& spec = sigma.spec();
  const int d = spec.dimension();

  if (const auto* grid = std::get_if<GridDensity>(&sigma.kind())) {
    (void)grid;
    double sum = 0.0;
    const auto& c = sigma.coefficients();
    for (std::size_t s : c.retained_slots()) {
      const FrequencyIndex h = c.index_of(s);
      if (c.frequency_norm2(s) <= radius * radius) continue;
      bool same_class = true;
      for (int i = 0; i < d; ++i) {
        const int diff = h[i] - theta[i];
        if (diff % spec.cells_per_axis() != 0) same_class = false;
      }
      if (same_class) sum += std::norm(c.at_slot(s));
    }
    return sum;
  }

  // Shell radius < |xi| <= 2 radius summed explicitly.
  const double outer = 2.0 * radius;
  double shell = 0.0;
  for_each_shift(spec, theta, outer, [&](const FrequencyIndex& h, double xi2) {
    if (xi2 <= radius * radius) return;
    const double b = sigma.transform_bound(spec.frequency(h));
    shell += b * b;
  });

  // Beyond 2 radius: {|xi| > outer} lies in the union over i of {|xi_i| > outer / sqrt(d)}.
  const double threshold = outer / std::sqrt(static_cast<double>(d));
  const Vec3 offset = spec.frequency(theta);
  auto separable = [&](auto&& f, auto&& integral) {
    std::array<LineSums, 3> sums;
    for (int i = 0; i < d; ++i) sums[i] = line_sums(offset[i], threshold, f, integral);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
      double term = sums[i].out;
      for (int j = 0; j < d; ++j) {
        if (j != i) term *= sums[j].all;
      }
      total += term;
    }
    return total;
  };
  auto box_rem = [&](int k) {
    auto f = [k](double s) {
      const double a = std::abs(s);
      return a <= 2.0 ? 1.0 : std::pow(2.0 / a, 2 * k);
    };
    auto integral = [k](double a) {
      return std::pow(2.0, 2 * k) * std::pow(a, 1 - 2 * k) / (2 * k - 1);
    };
    return sigma.total_charge() * sigma.total_charge() * separable(f, integral);
  };

  double remainder = 0.0;
  if (const auto* box = std::get_if<BoxDensity>(&sigma.kind())) {
    remainder = box_rem(box->k);
  } else if (const auto* p = std::get_if<PerturbedBoxDensity>(&sigma.kind())) {
    const double w = p->gaussian_width;
    auto f = [w](double s) { return std::exp(-2.0 * w * s * s); };
    auto integral = [w](double a) { return std::exp(-2.0 * w * a * a) / (4.0 * w * a); };
    const double amp = p->epsilon * sigma.total_charge() * d;
    double modes = 0.0;
    for (const auto& m : p->modes) {
      if (spec.frequency_norm2(m.h) > outer * outer) {
        modes += std::pow(0.5 * m.amplitude * spec.volume(), 2);
      }
    }
    remainder = 3.0 * (box_rem(p->k) + amp * amp * separable(f, integral) + 2.0 * modes);
  }
  return shell + remainder;
}

}  // namespace

double WienerReport::min_lambda() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) m = std::min(m, e.lambda_min());
  return m;
}

WienerMatrix wiener_matrix(const IonDensityModel& sigma, const FrequencyIndex& theta,
                           double truncation_radius) {
  const TorusSpec& spec = sigma.spec();
  if (spec.in_dual_lattice(theta)) {
    throw DomainError("Sigma(theta) is undefined for theta in the dual lattice 2 pi Z^d");
  }
  const int d = spec.dimension();
  WienerMatrix out;
  out.matrix = Eigen::MatrixXd::Zero(d, d);
  for_each_shift(spec, theta, truncation_radius, [&](const FrequencyIndex& h, double xi2) {
    const Vec3 xi = spec.frequency(h);
    const double weight = std::norm(sigma.transform(h)) / xi2;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) out.matrix(i, j) += weight * xi[i] * xi[j];
    }
    ++out.terms;
  });
  out.tail_bound = tail_bound(sigma, theta, truncation_radius);
  return out;
}

Eigen::MatrixXd degeneracy_generators(const TorusSpec& spec,
                                      const std::vector<WienerEntry>& entries) {
  const int d = spec.dimension();
  const std::size_t lattice = spec.lattice_size();
  std::vector<Eigen::VectorXd> columns;
  for (const auto& e : entries) {
    const Vec3 theta = spec.frequency(e.theta);
    for (int c = 0; c < e.kernel.cols(); ++c) {
      Eigen::VectorXd re = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lattice) * d);
      Eigen::VectorXd im = re;
      for (std::size_t n = 0; n < lattice; ++n) {
        const double phase = theta.dot(spec.lattice_point(n));
        for (int i = 0; i < d; ++i) {
          re(static_cast<Eigen::Index>(n) * d + i) = std::cos(phase) * e.kernel(i, c);
          im(static_cast<Eigen::Index>(n) * d + i) = -std::sin(phase) * e.kernel(i, c);
        }
      }
      if (re.norm() > 1e-12) columns.push_back(re);
      if (im.norm() > 1e-12) columns.push_back(im);
    }
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(lattice) * d,
                      static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = columns[c];
  return out;
}

WienerReport wiener_report(const IonDensityModel& sigma, double truncation_radius,
                           double relative_tolerance) {
  const TorusSpec& spec = sigma.spec();
  const auto zone = spec.brillouin_zone();
  WienerReport report;
  report.truncation_radius = truncation_radius;
  report.relative_tolerance = relative_tolerance;
  report.entries.resize(zone.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(zone.size()); ++t) {
    const auto w = wiener_matrix(sigma, zone[static_cast<std::size_t>(t)], truncation_radius);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(w.matrix);
    WienerEntry& e = report.entries[static_cast<std::size_t>(t)];
    e.theta = zone[static_cast<std::size_t>(t)];
    e.matrix = w.matrix;
    e.eigenvalues = eig.eigenvalues();
    e.tail_bound = w.tail_bound;
    const double tol = relative_tolerance * w.matrix.trace();
    int count = 0;
    while (count < e.eigenvalues.size() && e.eigenvalues(count) <= tol) ++count;
    e.kernel = eig.eigenvectors().leftCols(count);
  }

  report.wiener_holds = true;
  report.verdict_certified = true;
  for (const auto& e : report.entries) {
    report.max_tail_bound = std::max(report.max_tail_bound, e.tail_bound);
    if (e.kernel_dim() > 0) {
      report.wiener_holds = false;
      const double tol = relative_tolerance * e.matrix.trace();
      if (e.eigenvalues(e.kernel_dim() - 1) + e.tail_bound > tol) report.verdict_certified = false;
    }
  }

  const Eigen::MatrixXd gens = degeneracy_generators(spec, report.entries);
  if (gens.cols() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gens, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    const double cut = 1e-9 * std::max(1.0, sv(0));
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    report.degeneracy_dim = rank;
    report.degeneracy_basis = svd.matrixU().leftCols(rank);
  } else {
    report.degeneracy_basis =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.lattice_size()) * spec.dimension(), 0);
  }
  return report;
}

}  // namespace spn
