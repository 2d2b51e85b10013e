#pragma once

#include <span>

#include "mrhydro/simulation.hpp"

namespace mrhydro {

struct TimeWindow {
  double begin;
  double end;
};

struct MetricOptions {
  double post_step_window = 0.5;   // s, for overshoot and oscillation index
  double oscillation_cutoff_hz = 15.0;
};

struct Metrics {
  double rise_time_10_90 = 0.0;     // s, +inf if 90 % is never reached
  double rms_tracking_error = 0.0;  // N
  double overshoot = 0.0;           // fraction of the step amplitude
  double oscillation_index = 0.0;   // energy above the cutoff / total
  double step_time = 0.0;           // s, detected step instant
};

/// Step metrics on the output force plus RMS tracking error over `window`.
/// The step is the largest reference jump in the window; it must dominate
/// every other sample-to-sample change tenfold. Throws std::invalid_argument
/// for an empty window or when no step is found.
Metrics measure_metrics(const SimResult& r, TimeWindow window,
                        const MetricOptions& options = {});

/// 10-90 % rise time of `y` for a step `from -> to` at `step_time`, with
/// linear interpolation between samples.
double rise_time_10_90(std::span<const double> t, std::span<const double> y,
                       double step_time, double from, double to);

double rms_error(std::span<const double> reference, std::span<const double> output);

}  // namespace mrhydro
