#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mrhydro/line_model.hpp"
#include "mrhydro/params.hpp"
#include "mrhydro/signals.hpp"

namespace mrhydro {

/// Seven states of the lumped line. Positions in m, velocities in m/s,
/// f_mr is the lagged clutch force in N.
struct PlantState {
  double x1 = 0, v1 = 0;  // clutch output / master piston
  double x2 = 0, v2 = 0;  // fluid
  double x3 = 0, v3 = 0;  // output and load
  double f_mr = 0;

  std::array<double, 7> to_array() const { return {x1, v1, x2, v2, x3, v3, f_mr}; }
  static PlantState from_array(const std::array<double, 7>& a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
  }
  bool finite() const;
};

/// Force-equivalent master line pressure k1 (x1 - x2), N.
inline double line_pressure(const ActuationLineParams& p, const PlantState& s) {
  return p.k1 * (s.x1 - s.x2);
}
/// Output force k2 (x2 - x3), N.
inline double output_force(const ActuationLineParams& p, const PlantState& s) {
  return p.k2 * (s.x2 - s.x3);
}
double channel_value(const ActuationLineParams& p, const PlantState& s, Channel c);

/// Kinetic plus spring potential energy of the line and load, J.
double mechanical_energy(const ActuationLineParams& p, const LoadImpedance& z,
                         const PlantState& s);

/// Time derivative of the state. With `one_way_clutch` the clutch force is
/// held at zero instead of being driven negative. A blocked load pins
/// x3 = v3 = 0.
PlantState plant_derivative(const PlantState& s, double current, double f_dist,
                            const ActuationLineParams& p, const LoadImpedance& z,
                            bool one_way_clutch = true);

/// Static equilibrium transmitting `clutch_force` through the line.
PlantState equilibrium_state(const ActuationLineParams& p, const LoadImpedance& z,
                             double clutch_force);

struct OpenLoop {
  double g1;  // A/N
};
struct ForcePI {
  double kp;  // A/N
  double ki;  // A/(N s)
};
struct PressurePI {
  double kp;
  double ki;
  double g2 = 1.0;  // reference pressure per reference force
};

struct ControllerConfig {
  std::variant<OpenLoop, ForcePI, PressurePI> law;
  double sample_rate = 1500.0;  // Hz
  double i_min = 0.0;           // A
  double i_max = kMaxCurrent;   // A
  double integrator_bound = kMaxCurrent;  // |integrator| <= bound, A

  static ControllerConfig open_loop(const ActuationLineParams& p);
  static ControllerConfig open_loop(const ActuationLineParams& p, double g1);
  static ControllerConfig force_pi(const ActuationLineParams& p, double kp, double ki);
  static ControllerConfig pressure_pi(const ActuationLineParams& p, double kp,
                                      double ki, double g2 = 1.0);

  void validate() const;
  std::string name() const;      // open | force-pi | pressure-pi
  std::string describe() const;  // name and gains
};

struct SimOptions {
  int substeps = 10;        // RK4 steps per controller period
  bool saturation = true;   // current clamp and one-way clutch
  /// Defaults to the equilibrium for the controller's steady current at t=0.
  std::optional<PlantState> initial_state;
  /// Overrides the PI integrator's initial value (A).
  std::optional<double> initial_integrator;
  /// Replaces the controller output with this current when set.
  std::optional<double> forced_current;
};

struct SimResult {
  std::vector<double> time;
  std::vector<double> reference;
  std::vector<double> current;
  std::vector<double> f_mr;
  std::vector<double> pressure;  // force-equivalent, N
  std::vector<double> force;     // output force, N
  std::vector<double> disturbance;
  std::vector<PlantState> states;

  std::string params_hash;
  std::string controller;
  std::string signal;
  double sample_rate = 0.0;
  double inner_step = 0.0;

  std::size_t size() const { return time.size(); }
};

class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Fixed-step RK4 plant under a sampled controller with zero-order-hold
/// current. Produces round(duration * sample_rate) + 1 samples. Throws
/// SimulationError at the first non-finite state.
SimResult run_simulation(const ActuationLineParams& p, const LoadImpedance& z,
                         const ControllerConfig& ctrl, const SignalSpec& sig,
                         double duration, const SimOptions& options = {});

/// FNV-1a digest of the canonical parameter text, hex.
std::string params_digest(const ActuationLineParams& p, const LoadImpedance& z);

}  // namespace mrhydro
