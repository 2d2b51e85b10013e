#include "mrhydro/frf.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mrhydro/spectrum.hpp"

namespace mrhydro {

LogChirpSignal default_frf_chirp() {
  return {0.1, 100.0, 60.0, 1.25, 2.25};
}

FrequencyResponse estimate_frf_from_records(std::span<const double> input,
                                            std::span<const double> output,
                                            double sample_rate,
                                            const std::vector<double>& grid,
                                            int smoothing_bins,
                                            bool compensate_hold) {
  if (input.size() != output.size() || input.size() < 4) {
    throw std::invalid_argument("input and output records must match in length");
  }
  if (smoothing_bins < 0) throw std::invalid_argument("smoothing_bins must be >= 0");
  const auto x = real_fft(input);
  const auto y = real_fft(output);
  const auto bins = x.size();
  const double df = sample_rate / static_cast<double>(input.size());

  std::vector<std::complex<double>> sxy(bins);
  std::vector<double> sxx(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    sxy[k] = y[k] * std::conj(x[k]);
    sxx[k] = std::norm(x[k]);
  }
  // Daniell averaging of both densities before forming the ratio.
  const auto half = static_cast<std::size_t>(smoothing_bins);
  auto averaged = [&](std::size_t k) {
    std::complex<double> num = 0.0;
    double den = 0.0;
    const std::size_t a = k > half ? k - half : 0;
    const std::size_t b = std::min(bins - 1, k + half);
    for (std::size_t i = a; i <= b; ++i) {
      num += sxy[i];
      den += sxx[i];
    }
    if (den == 0.0) throw std::invalid_argument("input has no energy near a grid frequency");
    return num / den;
  };

  FrequencyResponse r;
  r.hz = grid;
  r.value.reserve(grid.size());
  const double period = 1.0 / sample_rate;
  for (double f : grid) {
    const double pos = f / df;
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= bins) throw std::invalid_argument("grid frequency above Nyquist");
    const double frac = pos - static_cast<double>(k);
    auto h = (1.0 - frac) * averaged(k) + frac * averaged(k + 1);
    if (compensate_hold) {
      const double w = 2.0 * std::numbers::pi * f;
      const double half_angle = 0.5 * w * period;
      const auto hold = std::polar(std::sin(half_angle) / half_angle, -half_angle);
      h /= hold;
    }
    r.value.push_back(h);
  }
  r.validate();
  return r;
}

FrequencyResponse estimate_frf(const ActuationLineParams& p, const LoadImpedance& z,
                               const LogChirpSignal& chirp, Channel which,
                               const FrfOptions& options) {
  validate(SignalSpec{chirp});
  const double record = chirp.duration + options.settle_tail;
  const double f_lo = 2.0 * chirp.f0;
  const double f_hi = 0.5 * chirp.f1;
  // The averaging band must stay narrow relative to the lowest frequency.
  if (options.smoothing_bins / record > 0.25 * f_lo) {
    throw std::invalid_argument("chirp too short for the requested frequency resolution");
  }
  if (f_hi >= 0.5 * options.sample_rate) {
    throw std::invalid_argument("chirp end frequency above the sampling Nyquist limit");
  }

  auto ctrl = ControllerConfig::open_loop(p, 1.0);
  ctrl.sample_rate = options.sample_rate;
  SimOptions sim;
  sim.substeps = options.substeps;
  sim.saturation = options.saturation;
  const auto run = run_simulation(p, z, ctrl, SignalSpec{chirp}, record, sim);

  const double i0 = chirp.center;
  const double y0 = channel_value(p, equilibrium_state(p, z, p.K_I * i0), which);
  std::vector<double> x(run.size());
  std::vector<double> y(run.size());
  const auto& column = which == Channel::Force ? run.force : run.pressure;
  for (std::size_t i = 0; i < run.size(); ++i) {
    x[i] = run.current[i] - i0;
    y[i] = column[i] - y0;
  }
  return estimate_frf_from_records(x, y, options.sample_rate,
                                   log_grid(f_lo, f_hi, options.points),
                                   options.smoothing_bins, options.compensate_hold);
}

}  // namespace mrhydro
