#include "mrhydro/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mrhydro/spectrum.hpp"

namespace mrhydro {

namespace {

// First time after `start` at which y crosses `level` moving in direction
// `sign`, interpolated between samples.
double first_crossing(std::span<const double> t, std::span<const double> y,
                      std::size_t start, double level, double sign) {
  for (std::size_t i = start; i < y.size(); ++i) {
    if (sign * (y[i] - level) >= 0.0) {
      if (i == start) return t[i];
      const double a = y[i - 1];
      const double b = y[i];
      const double frac = (level - a) / (b - a);
      return t[i - 1] + frac * (t[i] - t[i - 1]);
    }
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

double rise_time_10_90(std::span<const double> t, std::span<const double> y,
                       double step_time, double from, double to) {
  const double amplitude = to - from;
  if (amplitude == 0.0) throw std::invalid_argument("zero step amplitude");
  const double sign = amplitude > 0 ? 1.0 : -1.0;
  const auto start = static_cast<std::size_t>(
      std::lower_bound(t.begin(), t.end(), step_time) - t.begin());
  const double t10 = first_crossing(t, y, start, from + 0.1 * amplitude, sign);
  const double t90 = first_crossing(t, y, start, from + 0.9 * amplitude, sign);
  return t90 - t10;
}

double rms_error(std::span<const double> reference, std::span<const double> output) {
  if (reference.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double e = reference[i] - output[i];
    sum += e * e;
  }
  return std::sqrt(sum / static_cast<double>(reference.size()));
}

Metrics measure_metrics(const SimResult& r, TimeWindow window,
                        const MetricOptions& options) {
  const auto& t = r.time;
  const auto lo = static_cast<std::size_t>(
      std::lower_bound(t.begin(), t.end(), window.begin) - t.begin());
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(t.begin(), t.end(), window.end) - t.begin());
  if (!(window.end > window.begin) || hi <= lo + 1) {
    throw std::invalid_argument("metrics window is empty");
  }

  std::size_t step = 0;
  double jump = 0.0;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = std::abs(r.reference[i] - r.reference[i - 1]);
    if (d > jump) {
      jump = d;
      step = i;
    }
  }
  double runner_up = 0.0;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    if (i == step) continue;
    runner_up = std::max(runner_up, std::abs(r.reference[i] - r.reference[i - 1]));
  }
  if (jump == 0.0 || jump < 10.0 * runner_up) {
    throw std::invalid_argument("no step found in the metrics window");
  }

  Metrics m;
  m.step_time = t[step];
  const double from = r.reference[step - 1];
  const double to = r.reference[step];
  const std::span<const double> ts(t.data() + lo, hi - lo);
  const std::span<const double> ys(r.force.data() + lo, hi - lo);
  m.rise_time_10_90 = rise_time_10_90(ts, ys, m.step_time, from, to);

  m.rms_tracking_error = rms_error(
      std::span<const double>(r.reference.data() + lo, hi - lo), ys);

  const auto post_end = static_cast<std::size_t>(
      std::upper_bound(t.begin() + static_cast<long>(step), t.begin() + static_cast<long>(hi),
                       m.step_time + options.post_step_window) -
      t.begin());
  const std::span<const double> post(r.force.data() + step, post_end - step);
  const double sign = to > from ? 1.0 : -1.0;
  double peak = sign * (post.front() - to);
  for (double y : post) peak = std::max(peak, sign * (y - to));
  m.overshoot = std::max(0.0, peak / std::abs(to - from));
  m.oscillation_index =
      high_frequency_energy_ratio(post, r.sample_rate, options.oscillation_cutoff_hz);
  return m;
}

}  // namespace mrhydro
