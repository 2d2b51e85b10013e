#pragma once

#include <array>
#include <string>

#include "mrhydro/metrics.hpp"
#include "mrhydro/simulation.hpp"
#include "mrhydro/tuning.hpp"

namespace mrhydro {

struct TunedControllers {
  ControllerConfig open;
  ControllerConfig force_pi;
  ControllerConfig pressure_pi;
  PiTuning force;
  PiTuning pressure;
};

/// Open loop with G1 = 1/K_I and both PI loops tuned on the analytical
/// channel transfers.
TunedControllers tuned_controllers(const ActuationLineParams& p, const LoadImpedance& z,
                                   const TuningGrid& grid = {});

struct ComparisonEntry {
  std::string controller;
  SimResult run;
  Metrics metrics;
};

/// Runs the three controllers on the same reference. Metrics cover
/// [step.t0 - 0.1 s, end of run].
std::array<ComparisonEntry, 3> compare_controllers(const ActuationLineParams& p,
                                                   const LoadImpedance& z,
                                                   const TunedControllers& controllers,
                                                   const MixedSignal& signal = {});

struct DrillingOptions {
  double level = 23.0;               // N
  double open_loop_deviation = 8.0;  // N, calibration target
  double duration = 10.0;            // s
  double settle = 1.0;               // s excluded from the peak search
  MultisineDisturbance disturbance{};  // amplitude is recalibrated
  bool disturbance_enabled = true;
};

struct DrillingResult {
  SimResult run;
  double peak_deviation = 0.0;         // max |F - level| after settle, N
  double disturbance_amplitude = 0.0;  // calibrated per-component amplitude, N
  double open_loop_peak_deviation = 0.0;
};

/// Scales the multisine so the open-loop run deviates by exactly the target
/// peak. The open-loop line is linear in the disturbance, so one unit run
/// fixes the scale.
double calibrate_disturbance(const ActuationLineParams& p, const LoadImpedance& z,
                             const DrillingOptions& options);

/// Constant-force hold against the calibrated disturbance under `ctrl`.
DrillingResult drilling_scenario(const ActuationLineParams& p, const LoadImpedance& z,
                                 const ControllerConfig& ctrl,
                                 const DrillingOptions& options = {});

double peak_deviation(const SimResult& run, double level, double settle);

}  // namespace mrhydro
