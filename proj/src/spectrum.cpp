#include "mrhydro/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace mrhydro {

namespace {

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

std::vector<std::complex<double>> real_fft(std::span<const double> samples) {
  const auto n = samples.size();
  if (n == 0) return {};
  const auto bins = n / 2 + 1;
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(bins));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  }
  std::copy(samples.begin(), samples.end(), in.get());
  fftw_execute(plan);
  std::vector<std::complex<double>> result(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    result[k] = {out.get()[k][0], out.get()[k][1]};
  }
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return result;
}

std::vector<double> hann_window(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(n - 1));
  }
  return w;
}

double high_frequency_energy_ratio(std::span<const double> samples,
                                   double sample_rate, double cutoff_hz) {
  const auto n = samples.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                      static_cast<double>(n);
  const auto w = hann_window(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (samples[i] - mean) * w[i];
  const auto spectrum = real_fft(x);
  double total = 0.0;
  double high = 0.0;
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const double e = std::norm(spectrum[k]);
    total += e;
    if (static_cast<double>(k) * sample_rate / static_cast<double>(n) > cutoff_hz) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

}  // namespace mrhydro
