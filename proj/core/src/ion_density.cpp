// SPDX-License-Identifier: Apache-2.0
#include "spn/ion_density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spn/errors.hpp"
#include "spn/spectral.hpp"

namespace spn {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double truncated_power(double u, int p) {
  if (p == 0) return u > 0.0 ? 1.0 : (u == 0.0 ? 0.5 : 0.0);
  return u > 0.0 ? std::pow(u, p) : 0.0;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Periodised 1D profile sum_m f(x + N m) for a profile supported in |x| <= reach.
template <class F>
double periodise(double x, double period, double reach, F&& f) {
  const int lo = static_cast<int>(std::floor((-reach - x) / period)) - 1;
  const int hi = static_cast<int>(std::ceil((reach - x) / period)) + 1;
  double sum = 0.0;
  for (int m = lo; m <= hi; ++m) sum += f(x + period * m);
  return sum;
}

double box_value(const Vec3& x, int k, int d, double period) {
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    v *= periodise(x[i], period, 0.5 * k, [k](double y) { return box_spline(y, k); });
  }
  return v;
}

// Periodised Gaussian whose torus transform is exp(-width |xi|^2).
double gaussian_value(const Vec3& x, double width, int d, double period) {
  const double reach = 14.0 * std::sqrt(2.0 * width);
  const double norm = 1.0 / std::sqrt(4.0 * kPi * width);
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    v *= periodise(x[i], period, reach,
                   [&](double y) { return norm * std::exp(-y * y / (4.0 * width)); });
  }
  return v;
}

void validate_kind(const TorusSpec& spec, const DensityKind& kind) {
  std::visit(overloaded{
                 [](const BoxDensity& b) {
                   if (b.k < 1) throw InvalidDensityError("box order k must be >= 1");
                 },
                 [](const PerturbedBoxDensity& p) {
                   if (p.k < 1) throw InvalidDensityError("box order k must be >= 1");
                   if (!(p.gaussian_width > 0.0)) {
                     throw InvalidDensityError("gaussian_width must be positive");
                   }
                   for (const auto& m : p.modes) {
                     if (m.h.is_zero()) {
                       throw InvalidDensityError("cosine mode at h = 0 changes the total charge");
                     }
                   }
                 },
                 [&spec](const GridDensity& g) {
                   if (g.samples.size() != spec.grid_size()) {
                     throw DimensionError("grid density has " + std::to_string(g.samples.size()) +
                                          " samples, torus grid has " +
                                          std::to_string(spec.grid_size()));
                   }
                   for (double v : g.samples) {
                     if (!std::isfinite(v)) throw InvalidDensityError("non-finite density sample");
                   }
                 },
             },
             kind);
}

}  // namespace

double box_factor(double s, int k) {
  if (std::abs(s) < 1e-6) return std::pow(1.0 - s * s / 24.0, k);
  return std::pow(2.0 * std::sin(0.5 * s) / s, k);
}

double box_spline(double x, int k) {
  // (1/(k-1)!) sum_j (-1)^j C(k, j) (x + k/2 - j)_+^{k-1}
  if (std::abs(x) > 0.5 * k) return 0.0;
  double sum = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binomial(k, j) * truncated_power(x + 0.5 * k - j, k - 1);
  }
  double factorial = 1.0;
  for (int i = 2; i < k; ++i) factorial *= i;
  return sum / factorial;
}

IonDensityModel::IonDensityModel(const TorusSpec& spec, DensityKind kind, double Z, double e)
    : kind_(std::make_shared<const DensityKind>(std::move(kind))), Z_(Z), e_(e),
      coefficients_(spec) {
  if (!(e > 0.0)) throw InvalidDensityError("elementary charge e must be positive");
  if (!(Z > 0.0)) throw InvalidDensityError("total ion charge e Z must be positive");
  validate_kind(spec, *kind_);

  if (const auto* grid = std::get_if<GridDensity>(kind_.get())) {
    coefficients_ = dft_forward(std::span<const double>(grid->samples), spec);
    const double integral = coefficients_[FrequencyIndex{}].real();
    if (std::abs(integral - total_charge()) > 1e-10 * std::max(1.0, total_charge())) {
      throw InvalidDensityError("grid density integrates to " + std::to_string(integral) +
                                " but e Z = " + std::to_string(total_charge()));
    }
  } else {
    for (std::size_t s : coefficients_.retained_slots()) {
      coefficients_.at_slot(s) = transform(coefficients_.index_of(s));
    }
  }
}

IonDensityModel IonDensityModel::box(const TorusSpec& spec, int k, double Z, double e) {
  return IonDensityModel(spec, BoxDensity{k}, Z, e);
}

IonDensityModel IonDensityModel::perturbed_box(const TorusSpec& spec, PerturbedBoxDensity params,
                                               double Z, double e) {
  return IonDensityModel(spec, std::move(params), Z, e);
}

IonDensityModel IonDensityModel::from_grid(const TorusSpec& spec, std::vector<double> samples,
                                           double Z, double e) {
  return IonDensityModel(spec, GridDensity{std::move(samples)}, Z, e);
}

std::string IonDensityModel::kind_name() const {
  return std::visit(overloaded{
                        [](const BoxDensity& b) { return "box_" + std::to_string(b.k); },
                        [](const PerturbedBoxDensity& p) {
                          return "perturbed_box_" + std::to_string(p.k);
                        },
                        [](const GridDensity&) { return std::string("grid"); },
                    },
                    *kind_);
}

cplx IonDensityModel::transform(const FrequencyIndex& h) const {
  const TorusSpec& sp = spec();
  const Vec3 xi = sp.frequency(h);
  const int d = sp.dimension();
  auto box_part = [&](int k) {
    double v = total_charge();
    for (int i = 0; i < d; ++i) v *= box_factor(xi[i], k);
    return v;
  };
  return std::visit(
      overloaded{
          [&](const BoxDensity& b) { return cplx(box_part(b.k)); },
          [&](const PerturbedBoxDensity& p) {
            double w = 0.0;
            for (int i = 0; i < d; ++i) {
              const double s = std::sin(0.5 * xi[i]);
              w += s * s;
            }
            double v = box_part(p.k) + p.epsilon * total_charge() * w *
                                           std::exp(-p.gaussian_width * xi.squaredNorm());
            for (const auto& m : p.modes) {
              if (m.h == h || -m.h == h) v += 0.5 * m.amplitude * sp.volume();
            }
            return cplx(v);
          },
          [&](const GridDensity&) { return coefficients_[h]; },
      },
      *kind_);
}

double IonDensityModel::value(const Vec3& x) const {
  const TorusSpec& sp = spec();
  const int d = sp.dimension();
  const double period = sp.cells_per_axis();
  return std::visit(
      overloaded{
          [&](const BoxDensity& b) { return total_charge() * box_value(x, b.k, d, period); },
          [&](const PerturbedBoxDensity& p) {
            double v = total_charge() * box_value(x, p.k, d, period);
            // sin^2(xi_i/2) = 1/2 - 1/4 e^{i xi_i} - 1/4 e^{-i xi_i}: unit shifts of g.
            double tau = 0.0;
            const double g0 = gaussian_value(x, p.gaussian_width, d, period);
            for (int i = 0; i < d; ++i) {
              Vec3 plus = x;
              Vec3 minus = x;
              plus[i] += 1.0;
              minus[i] -= 1.0;
              tau += 0.5 * g0 - 0.25 * gaussian_value(plus, p.gaussian_width, d, period) -
                     0.25 * gaussian_value(minus, p.gaussian_width, d, period);
            }
            v += p.epsilon * total_charge() * tau;
            for (const auto& m : p.modes) v += m.amplitude * std::cos(sp.frequency(m.h).dot(x));
            return v;
          },
          [&](const GridDensity&) {
            // Trigonometric interpolation of the samples.
            double v = 0.0;
            for (std::size_t s : coefficients_.retained_slots()) {
              const double phase = -coefficients_.frequency(s).dot(x);
              v += (coefficients_.at_slot(s) * cplx(std::cos(phase), std::sin(phase))).real();
            }
            return v / sp.volume();
          },
      },
      *kind_);
}

double IonDensityModel::transform_bound(const Vec3& xi) const {
  const int d = spec().dimension();
  auto box_bound = [&](int k) {
    double v = total_charge();
    for (int i = 0; i < d; ++i) {
      const double a = std::abs(xi[i]);
      v *= a <= 2.0 ? 1.0 : std::pow(2.0 / a, k);
    }
    return v;
  };
  return std::visit(
      overloaded{
          [&](const BoxDensity& b) { return box_bound(b.k); },
          [&](const PerturbedBoxDensity& p) {
            double v = box_bound(p.k) +
                       p.epsilon * total_charge() * d * std::exp(-p.gaussian_width * xi.squaredNorm());
            for (const auto& m : p.modes) {
              const Vec3 mx = spec().frequency(m.h);
              if ((mx - xi).norm() < 1e-9 || (mx + xi).norm() < 1e-9) {
                v += 0.5 * std::abs(m.amplitude) * spec().volume();
              }
            }
            return v;
          },
          [&](const GridDensity&) {
            const double step = spec().frequency_step();
            FrequencyIndex h;
            for (int i = 0; i < d; ++i) h[i] = static_cast<int>(std::lround(xi[i] / step));
            return std::abs(coefficients_[h]);
          },
      },
      *kind_);
}

JelliumVerdict jellium_check(const IonDensityModel& sigma, double tol) {
  if (!(sigma.total_charge() > 0.0)) throw InvalidDensityError("total ion charge must be positive");
  JelliumVerdict v;
  const auto& c = sigma.coefficients();
  const TorusSpec& spec = sigma.spec();
  for (std::size_t s : c.retained_slots()) {
    const FrequencyIndex h = c.index_of(s);
    if (h.is_zero() || !spec.in_dual_lattice(h)) continue;
    ++v.checked;
    const double a = std::abs(c.at_slot(s));
    if (a > v.max_violation) {
      v.max_violation = a;
      v.worst = h;
    }
  }
  v.holds = v.max_violation <= tol * sigma.total_charge();
  return v;
}

JelliumVerdict jellium_check(const IonDensityModel& sigma, double tol, double radius) {
  if (!(sigma.total_charge() > 0.0)) throw InvalidDensityError("total ion charge must be positive");
  JelliumVerdict v;
  const TorusSpec& spec = sigma.spec();
  const int d = spec.dimension();
  const int n = spec.cells_per_axis();
  const int reach = static_cast<int>(std::floor(radius / kTwoPi + 1e-12));
  FrequencyIndex m;
  const int lo1 = d > 1 ? -reach : 0, lo2 = d > 2 ? -reach : 0;
  for (m[0] = -reach; m[0] <= reach; ++m[0]) {
    for (m[1] = lo1; m[1] <= -lo1; ++m[1]) {
      for (m[2] = lo2; m[2] <= -lo2; ++m[2]) {
        if (m.is_zero()) continue;
        if (kTwoPi * std::sqrt(static_cast<double>(m.norm2())) > radius * (1.0 + 1e-12)) continue;
        const FrequencyIndex h{n * m[0], n * m[1], n * m[2]};
        ++v.checked;
        const double a = std::abs(sigma.transform(h));
        if (a > v.max_violation) {
          v.max_violation = a;
          v.worst = h;
        }
      }
    }
  }
  v.holds = v.max_violation <= tol * sigma.total_charge();
  return v;
}

double uniform_ion_check(const IonDensityModel& sigma) {
  const TorusSpec& spec = sigma.spec();
  const std::size_t lattice = spec.lattice_size();
  const int d = spec.dimension();
  double worst = 0.0;

  if (const auto* grid = std::get_if<GridDensity>(&sigma.kind())) {
    // Cell translations are whole-index shifts of n_g / N on every axis.
    const int ng = spec.grid_per_axis();
    const int per_cell = ng / spec.cells_per_axis();
    for (std::size_t g = 0; g < spec.grid_size(); ++g) {
      std::array<int, 3> j{0, 0, 0};
      std::size_t flat = g;
      for (int i = d - 1; i >= 0; --i) {
        j[i] = static_cast<int>(flat % static_cast<std::size_t>(ng));
        flat /= static_cast<std::size_t>(ng);
      }
      double sum = 0.0;
      for (std::size_t n = 0; n < lattice; ++n) {
        const Vec3 site = spec.lattice_point(n);
        std::size_t idx = 0;
        for (int i = 0; i < d; ++i) {
          int ji = (j[i] - per_cell * static_cast<int>(site[i])) % ng;
          if (ji < 0) ji += ng;
          idx = idx * static_cast<std::size_t>(ng) + static_cast<std::size_t>(ji);
        }
        sum += grid->samples[idx];
      }
      worst = std::max(worst, std::abs(sum - sigma.total_charge()));
    }
    return worst;
  }

  for (std::size_t g = 0; g < spec.grid_size(); ++g) {
    const Vec3 x = spec.grid_point(g);
    double sum = 0.0;
    for (std::size_t n = 0; n < lattice; ++n) sum += sigma.value(x - spec.lattice_point(n));
    worst = std::max(worst, std::abs(sum - sigma.total_charge()));
  }
  return worst;
}

}  // namespace spn
