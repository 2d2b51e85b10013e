#include "mrhydro/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <type_traits>

#include "mrhydro/format.hpp"

namespace mrhydro {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

PlantState axpy(const PlantState& s, const PlantState& d, double h) {
  return {s.x1 + h * d.x1, s.v1 + h * d.v1, s.x2 + h * d.x2, s.v2 + h * d.v2,
          s.x3 + h * d.x3, s.v3 + h * d.v3, s.f_mr + h * d.f_mr};
}

// Steady current that the controller settles to for reference r.
double steady_current(const ActuationLineParams& p, const ControllerConfig& ctrl,
                      double r) {
  return std::visit(overloaded{
                        [&](const OpenLoop& c) { return c.g1 * r; },
                        [&](const ForcePI&) { return r / p.K_I; },
                        [&](const PressurePI& c) { return c.g2 * r / p.K_I; },
                    },
                    ctrl.law);
}

}  // namespace

bool PlantState::finite() const {
  for (double v : to_array()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double channel_value(const ActuationLineParams& p, const PlantState& s, Channel c) {
  return c == Channel::Force ? output_force(p, s) : line_pressure(p, s);
}

double mechanical_energy(const ActuationLineParams& p, const LoadImpedance& z,
                         const PlantState& s) {
  const double d1 = s.x1 - s.x2;
  const double d2 = s.x2 - s.x3;
  double e = 0.5 * (p.m1 * s.v1 * s.v1 + p.m2 * s.v2 * s.v2 + p.k1 * d1 * d1 +
                    p.k2 * d2 * d2);
  if (!z.is_blocked()) {
    const auto& load = z.compliant();
    e += 0.5 * (load.m3 * s.v3 * s.v3 + load.k3 * s.x3 * s.x3);
  }
  return e;
}

PlantState plant_derivative(const PlantState& s, double current, double f_dist,
                            const ActuationLineParams& p, const LoadImpedance& z,
                            bool one_way_clutch) {
  PlantState d;
  d.f_mr = (p.K_I * current - s.f_mr) / p.tau;
  if (one_way_clutch && s.f_mr <= 0.0 && d.f_mr < 0.0) d.f_mr = 0.0;

  const double spring1 = p.k1 * (s.x1 - s.x2);
  const double x3 = z.is_blocked() ? 0.0 : s.x3;
  const double spring2 = p.k2 * (s.x2 - x3);

  d.x1 = s.v1;
  d.v1 = (s.f_mr - p.b1 * s.v1 - spring1) / p.m1;
  d.x2 = s.v2;
  d.v2 = (spring1 - p.b2 * s.v2 - spring2) / p.m2;
  if (z.is_blocked()) {
    d.x3 = 0.0;
    d.v3 = 0.0;
  } else {
    const auto& load = z.compliant();
    d.x3 = s.v3;
    d.v3 = (spring2 - load.b3 * s.v3 - load.k3 * s.x3 + f_dist) / load.m3;
  }
  return d;
}

PlantState equilibrium_state(const ActuationLineParams& p, const LoadImpedance& z,
                             double clutch_force) {
  PlantState s;
  s.f_mr = clutch_force;
  // With k3 = 0 a compliant load has no static equilibrium under load; the
  // load is then left at the origin.
  s.x3 = (!z.is_blocked() && z.compliant().k3 > 0.0) ? clutch_force / z.compliant().k3
                                                      : 0.0;
  s.x2 = s.x3 + clutch_force / p.k2;
  s.x1 = s.x2 + clutch_force / p.k1;
  return s;
}

ControllerConfig ControllerConfig::open_loop(const ActuationLineParams& p) {
  return open_loop(p, 1.0 / p.K_I);
}

ControllerConfig ControllerConfig::open_loop(const ActuationLineParams& p, double g1) {
  return {OpenLoop{g1}, 1500.0, p.I_min, p.I_max, p.I_max};
}

ControllerConfig ControllerConfig::force_pi(const ActuationLineParams& p, double kp,
                                            double ki) {
  return {ForcePI{kp, ki}, 1500.0, p.I_min, p.I_max, p.I_max};
}

ControllerConfig ControllerConfig::pressure_pi(const ActuationLineParams& p, double kp,
                                               double ki, double g2) {
  return {PressurePI{kp, ki, g2}, 1500.0, p.I_min, p.I_max, p.I_max};
}

void ControllerConfig::validate() const {
  if (!(sample_rate > 0)) throw std::invalid_argument("sample_rate must be > 0");
  if (!(i_min >= 0) || !(i_max > i_min)) {
    throw std::invalid_argument("current clamp must satisfy 0 <= i_min < i_max");
  }
  if (!(integrator_bound > 0)) throw std::invalid_argument("integrator bound must be > 0");
  std::visit(overloaded{
                 [](const OpenLoop& c) {
                   if (!(c.g1 >= 0)) throw std::invalid_argument("G1 must be >= 0");
                 },
                 [](const ForcePI& c) {
                   if (!(c.kp >= 0) || !(c.ki >= 0)) {
                     throw std::invalid_argument("PI gains must be >= 0");
                   }
                 },
                 [](const PressurePI& c) {
                   if (!(c.kp >= 0) || !(c.ki >= 0) || !(c.g2 >= 0)) {
                     throw std::invalid_argument("PI gains and G2 must be >= 0");
                   }
                 },
             },
             law);
}

std::string ControllerConfig::name() const {
  return std::visit(overloaded{
                        [](const OpenLoop&) { return std::string("open"); },
                        [](const ForcePI&) { return std::string("force-pi"); },
                        [](const PressurePI&) { return std::string("pressure-pi"); },
                    },
                    law);
}

std::string ControllerConfig::describe() const {
  auto f = [](double v) { return format_shortest(v); };
  const std::string rate = ", fs=" + f(sample_rate) + ")";
  return std::visit(
      overloaded{
          [&](const OpenLoop& c) { return "open(G1=" + f(c.g1) + rate; },
          [&](const ForcePI& c) { return "force-pi(kp=" + f(c.kp) + ", ki=" + f(c.ki) + rate; },
          [&](const PressurePI& c) {
            return "pressure-pi(kp=" + f(c.kp) + ", ki=" + f(c.ki) + ", G2=" + f(c.g2) + rate;
          },
      },
      law);
}

std::string params_digest(const ActuationLineParams& p, const LoadImpedance& z) {
  Config c;
  c.line = p;
  c.load = z;
  const std::string text = save_config(c);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SimResult run_simulation(const ActuationLineParams& p, const LoadImpedance& z,
                         const ControllerConfig& ctrl, const SignalSpec& sig,
                         double duration, const SimOptions& options) {
  p.validate();
  z.validate();
  ctrl.validate();
  if (!(duration > 0)) throw std::invalid_argument("duration must be > 0");
  if (options.substeps < 1) throw std::invalid_argument("substeps must be >= 1");

  const SignalSource source(sig);
  const double period = 1.0 / ctrl.sample_rate;
  const double h = period / options.substeps;
  const auto samples = static_cast<std::size_t>(std::llround(duration * ctrl.sample_rate));
  const bool clamp = options.saturation;

  auto saturate = [&](double i) {
    return clamp ? std::clamp(i, ctrl.i_min, ctrl.i_max) : i;
  };

  const double r0 = source.reference(0.0);
  const double i0 = saturate(options.forced_current.value_or(steady_current(p, ctrl, r0)));
  PlantState state = options.initial_state.value_or(equilibrium_state(p, z, p.K_I * i0));
  double integrator = options.initial_integrator.value_or(i0);

  SimResult out;
  out.params_hash = params_digest(p, z);
  out.controller = ctrl.describe();
  out.signal = describe(sig);
  out.sample_rate = ctrl.sample_rate;
  out.inner_step = h;
  for (auto* v : {&out.time, &out.reference, &out.current, &out.f_mr, &out.pressure,
                  &out.force, &out.disturbance}) {
    v->reserve(samples + 1);
  }
  out.states.reserve(samples + 1);

  for (std::size_t n = 0; n <= samples; ++n) {
    const double t = static_cast<double>(n) * period;
    if (!state.finite()) {
      throw SimulationError("non-finite plant state at t = " + format_significant(t) + " s", t);
    }
    const double r = source.reference(t);
    const double pressure = line_pressure(p, state);
    const double force = output_force(p, state);

    double current = 0.0;
    if (options.forced_current) {
      current = *options.forced_current;
    } else {
      std::visit(overloaded{
                     [&](const OpenLoop& c) { current = c.g1 * r; },
                     [&](const auto& pi) {
                       double setpoint = r;
                       double measured = force;
                       if constexpr (std::is_same_v<std::decay_t<decltype(pi)>, PressurePI>) {
                         setpoint = pi.g2 * r;
                         measured = pressure;
                       }
                       const double e = setpoint - measured;
                       const double u = pi.kp * e + integrator;
                       current = u;
                       // Clamping anti-windup: hold the integrator while the
                       // output is saturated in the direction of the error.
                       const bool wind_up = clamp && ((u > ctrl.i_max && e > 0.0) ||
                                                      (u < ctrl.i_min && e < 0.0));
                       if (!wind_up) {
                         integrator += pi.ki * e * period;
                         integrator = std::clamp(integrator, -ctrl.integrator_bound,
                                                 ctrl.integrator_bound);
                       }
                     },
                 },
                 ctrl.law);
    }
    current = saturate(current);

    out.time.push_back(t);
    out.reference.push_back(r);
    out.current.push_back(current);
    out.f_mr.push_back(state.f_mr);
    out.pressure.push_back(pressure);
    out.force.push_back(force);
    out.disturbance.push_back(source.disturbance(t));
    out.states.push_back(state);
    if (n == samples) break;

    for (int k = 0; k < options.substeps; ++k) {
      const double ts = t + k * h;
      const double d0 = source.disturbance(ts);
      const double dm = source.disturbance(ts + 0.5 * h);
      const double d1 = source.disturbance(ts + h);
      const auto k1 = plant_derivative(state, current, d0, p, z, clamp);
      const auto k2 = plant_derivative(axpy(state, k1, 0.5 * h), current, dm, p, z, clamp);
      const auto k3 = plant_derivative(axpy(state, k2, 0.5 * h), current, dm, p, z, clamp);
      const auto k4 = plant_derivative(axpy(state, k3, h), current, d1, p, z, clamp);
      PlantState next;
      auto a = state.to_array();
      const auto a1 = k1.to_array();
      const auto a2 = k2.to_array();
      const auto a3 = k3.to_array();
      const auto a4 = k4.to_array();
      for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] += h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
      }
      next = PlantState::from_array(a);
      if (clamp && next.f_mr < 0.0) next.f_mr = 0.0;
      state = next;
    }
  }
  return out;
}

}  // namespace mrhydro
