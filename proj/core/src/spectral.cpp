// SPDX-License-Identifier: Apache-2.0
#include "spn/spectral.hpp"

#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "spn/errors.hpp"

namespace spn {
namespace {

// FFTW planning is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftBuffer {
 public:
  FftBuffer(const TorusSpec& spec, int sign) : size_(spec.grid_size()) {
    data_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size_));
    int dims[3];
    for (int i = 0; i < spec.dimension(); ++i) dims[i] = spec.grid_per_axis();
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft(spec.dimension(), dims, data_, data_, sign, FFTW_ESTIMATE);
  }
  ~FftBuffer() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(data_);
  }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  cplx get(std::size_t i) const { return {data_[i][0], data_[i][1]}; }
  void put(std::size_t i, cplx v) {
    data_[i][0] = v.real();
    data_[i][1] = v.imag();
  }
  void clear() {
    for (std::size_t i = 0; i < size_; ++i) data_[i][0] = data_[i][1] = 0.0;
  }
  void execute() { fftw_execute(plan_); }

 private:
  std::size_t size_;
  fftw_complex* data_;
  fftw_plan plan_;
};

// Grid slot of frequency h under the FFT's wrap-around ordering.
std::size_t fft_slot(const FrequencyIndex& h, const TorusSpec& spec) {
  const int n = spec.grid_per_axis();
  std::size_t s = 0;
  for (int i = 0; i < spec.dimension(); ++i) {
    int m = h[i] % n;
    if (m < 0) m += n;
    s = s * static_cast<std::size_t>(n) + static_cast<std::size_t>(m);
  }
  return s;
}

template <class T>
FourierScalarField forward_impl(std::span<const T> samples, const TorusSpec& spec) {
  if (samples.size() != spec.grid_size()) {
    throw DimensionError("dft_forward: expected " + std::to_string(spec.grid_size()) +
                         " samples, got " + std::to_string(samples.size()));
  }
  // FFTW_BACKWARD computes sum_j f_j e^{+2 pi i h j / n}, i.e. e^{i xi x}.
  FftBuffer buf(spec, FFTW_BACKWARD);
  for (std::size_t i = 0; i < samples.size(); ++i) buf.put(i, cplx(samples[i]));
  buf.execute();

  const double cell = std::pow(spec.grid_spacing(), spec.dimension());
  FourierScalarField out(spec);
  for (std::size_t s : out.retained_slots()) {
    out.at_slot(s) = cell * buf.get(fft_slot(out.index_of(s), spec));
  }
  return out;
}

}  // namespace

FourierScalarField dft_forward(std::span<const double> samples, const TorusSpec& spec) {
  return forward_impl(samples, spec);
}

FourierScalarField dft_forward(std::span<const cplx> samples, const TorusSpec& spec) {
  return forward_impl(samples, spec);
}

std::vector<cplx> dft_inverse(const FourierScalarField& field) {
  const TorusSpec& spec = field.spec();
  FftBuffer buf(spec, FFTW_FORWARD);
  buf.clear();
  for (std::size_t s : field.retained_slots()) {
    buf.put(fft_slot(field.index_of(s), spec), field.at_slot(s));
  }
  buf.execute();
  std::vector<cplx> out(spec.grid_size());
  const double inv_volume = 1.0 / spec.volume();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = inv_volume * buf.get(i);
  return out;
}

std::vector<double> dft_inverse_real(const FourierScalarField& field) {
  const auto values = dft_inverse(field);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].real();
  return out;
}

namespace {

void check_neutral(const FourierScalarField& rho, Neutrality policy) {
  if (policy != Neutrality::enforce) return;
  const cplx mean = rho.at_slot(rho.zero_slot());
  if (std::abs(mean) > kNeutralityTolerance) {
    throw NeutralityError("charge density is not neutral: residual charge " +
                              std::to_string(mean.real()),
                          mean.real());
  }
}

}  // namespace

FourierScalarField green_apply(const FourierScalarField& rho, Neutrality policy) {
  check_neutral(rho, policy);
  FourierScalarField out(rho.spec());
  const std::size_t zero = rho.zero_slot();
  for (std::size_t s : rho.retained_slots()) {
    if (s == zero) continue;
    out.at_slot(s) = rho.at_slot(s) / rho.frequency_norm2(s);
  }
  return out;
}

double coulomb_energy(const FourierScalarField& rho, Neutrality policy) {
  check_neutral(rho, policy);
  const std::size_t zero = rho.zero_slot();
  double sum = 0.0;
  for (std::size_t s : rho.retained_slots()) {
    if (s == zero) continue;
    sum += std::norm(rho.at_slot(s)) / rho.frequency_norm2(s);
  }
  return 0.5 * sum / rho.spec().volume();
}

double l2_pairing(const FourierScalarField& f, const FourierScalarField& g) {
  if (!f.same_layout(g)) throw DimensionError("pairing fields of different torus specs");
  double sum = 0.0;
  for (std::size_t s : f.retained_slots()) sum += (f.at_slot(s) * std::conj(g.at_slot(s))).real();
  return sum / f.spec().volume();
}

}  // namespace spn
