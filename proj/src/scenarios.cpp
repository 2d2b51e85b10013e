#include "mrhydro/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace mrhydro {

TunedControllers tuned_controllers(const ActuationLineParams& p, const LoadImpedance& z,
                                   const TuningGrid& grid) {
  const auto force = tune_pi(p, z, Channel::Force, grid);
  const auto pressure = tune_pi(p, z, Channel::Pressure, grid);
  return {ControllerConfig::open_loop(p),
          ControllerConfig::force_pi(p, force.kp, force.ki),
          ControllerConfig::pressure_pi(p, pressure.kp, pressure.ki, 1.0),
          force, pressure};
}

std::array<ComparisonEntry, 3> compare_controllers(const ActuationLineParams& p,
                                                   const LoadImpedance& z,
                                                   const TunedControllers& controllers,
                                                   const MixedSignal& signal) {
  const SignalSpec sig{signal};
  const double duration = natural_duration(sig);
  const TimeWindow window{signal.step.t0 - 0.1, duration};
  std::array<ComparisonEntry, 3> out;
  const std::array<const ControllerConfig*, 3> ctrls{
      &controllers.open, &controllers.force_pi, &controllers.pressure_pi};
  for (std::size_t i = 0; i < ctrls.size(); ++i) {
    auto run = run_simulation(p, z, *ctrls[i], sig, duration);
    auto metrics = measure_metrics(run, window);
    out[i] = {ctrls[i]->name(), std::move(run), metrics};
  }
  return out;
}

double peak_deviation(const SimResult& run, double level, double settle) {
  double peak = 0.0;
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (run.time[i] < settle) continue;
    peak = std::max(peak, std::abs(run.force[i] - level));
  }
  return peak;
}

double calibrate_disturbance(const ActuationLineParams& p, const LoadImpedance& z,
                             const DrillingOptions& options) {
  ConstantWithDisturbance unit{options.level, options.disturbance};
  unit.disturbance.amplitude = 1.0;
  const auto run = run_simulation(p, z, ControllerConfig::open_loop(p), SignalSpec{unit},
                                  options.duration);
  const double dev = peak_deviation(run, options.level, options.settle);
  if (!(dev > 0.0)) throw NumericError("disturbance produces no open-loop deviation");
  return options.open_loop_deviation / dev;
}

DrillingResult drilling_scenario(const ActuationLineParams& p, const LoadImpedance& z,
                                 const ControllerConfig& ctrl,
                                 const DrillingOptions& options) {
  DrillingResult result;
  ConstantWithDisturbance sig{options.level, options.disturbance};
  if (options.disturbance_enabled) {
    sig.disturbance.amplitude = calibrate_disturbance(p, z, options);
    const auto open = run_simulation(p, z, ControllerConfig::open_loop(p), SignalSpec{sig},
                                     options.duration);
    result.open_loop_peak_deviation = peak_deviation(open, options.level, options.settle);
  } else {
    sig.disturbance.amplitude = 0.0;
  }
  result.disturbance_amplitude = sig.disturbance.amplitude;
  result.run = run_simulation(p, z, ctrl, SignalSpec{sig}, options.duration);
  result.peak_deviation = peak_deviation(result.run, options.level, options.settle);
  return result;
}

}  // namespace mrhydro
