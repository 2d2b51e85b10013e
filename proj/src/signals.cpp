#include "mrhydro/signals.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mrhydro/format.hpp"

namespace mrhydro {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_chirp(const LogChirpSignal& c) {
  if (!(c.f0 > 0)) throw std::invalid_argument("chirp f0 must be > 0");
  if (!(c.f1 > c.f0)) throw std::invalid_argument("chirp f1 must exceed f0");
  if (!(c.duration > 0)) throw std::invalid_argument("chirp duration must be > 0");
}

double chirp_value(const LogChirpSignal& c, double t, double phase_offset) {
  if (t < 0.0 || t > c.duration) return c.center;
  return c.center + c.amplitude * std::sin(chirp_phase(c, t) + phase_offset);
}

}  // namespace

std::vector<double> MultisineDisturbance::phases() const {
  // Raw 64-bit draws keep the phases identical across standard libraries.
  std::mt19937_64 rng(seed);
  std::vector<double> out(static_cast<std::size_t>(components));
  for (double& p : out) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    p = kTwoPi * u;
  }
  return out;
}

double multisine_value(const MultisineDisturbance& d,
                       const std::vector<double>& phases, double t) {
  double sum = 0.0;
  for (int i = 0; i < d.components; ++i) {
    const double f = d.f_max * (i + 1) / d.components;
    sum += std::sin(kTwoPi * f * t + phases[static_cast<std::size_t>(i)]);
  }
  return d.amplitude * sum;
}

double chirp_phase(const LogChirpSignal& c, double t) {
  const double ratio = c.f1 / c.f0;
  return kTwoPi * c.f0 * c.duration / std::log(ratio) *
         (std::pow(ratio, t / c.duration) - 1.0);
}

double chirp_frequency(const LogChirpSignal& c, double t) {
  return c.f0 * std::pow(c.f1 / c.f0, t / c.duration);
}

void validate(const SignalSpec& sig) {
  std::visit(overloaded{
                 [](const StepSignal& s) {
                   if (!(s.t0 >= 0)) throw std::invalid_argument("step t0 must be >= 0");
                 },
                 [](const LogChirpSignal& c) { check_chirp(c); },
                 [](const MixedSignal& m) {
                   if (!(m.step.t0 >= 0) || !(m.hold >= 0)) {
                     throw std::invalid_argument("mixed step timing must be >= 0");
                   }
                   check_chirp(m.chirp);
                 },
                 [](const ConstantWithDisturbance& c) {
                   if (c.disturbance.components < 1 || !(c.disturbance.f_max > 0) ||
                       !(c.disturbance.amplitude >= 0)) {
                     throw std::invalid_argument("invalid multisine disturbance");
                   }
                 },
             },
             sig);
}

double generate_signal(const SignalSpec& sig, double t) {
  return std::visit(
      overloaded{
          [t](const StepSignal& s) { return t < s.t0 ? s.from : s.to; },
          [t](const LogChirpSignal& c) { return chirp_value(c, t, 0.0); },
          [t](const MixedSignal& m) {
            if (t < m.step.t0) return m.step.from;
            if (t < m.chirp_start()) return m.step.to;
            const double tc = t - m.chirp_start();
            if (tc > m.chirp.duration) return m.chirp.center;
            return chirp_value(m.chirp, tc, std::numbers::pi / 2.0);
          },
          [](const ConstantWithDisturbance& c) { return c.level; },
      },
      sig);
}

double disturbance_force(const SignalSpec& sig, double t) {
  return SignalSource(sig).disturbance(t);
}

SignalSource::SignalSource(SignalSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  if (const auto* c = std::get_if<ConstantWithDisturbance>(&spec_)) {
    phases_ = c->disturbance.phases();
  }
}

double SignalSource::disturbance(double t) const {
  if (const auto* c = std::get_if<ConstantWithDisturbance>(&spec_)) {
    return multisine_value(c->disturbance, phases_, t);
  }
  return 0.0;
}

double natural_duration(const SignalSpec& sig) {
  return std::visit(
      overloaded{
          [](const StepSignal& s) { return s.t0 + 1.0; },
          [](const LogChirpSignal& c) { return c.duration; },
          [](const MixedSignal& m) { return m.chirp_start() + m.chirp.duration; },
          [](const ConstantWithDisturbance&) { return 10.0; },
      },
      sig);
}

std::string describe(const SignalSpec& sig) {
  auto f = [](double v) { return format_shortest(v); };
  return std::visit(
      overloaded{
          [&](const StepSignal& s) {
            return "step(t0=" + f(s.t0) + ", from=" + f(s.from) + ", to=" + f(s.to) + ")";
          },
          [&](const LogChirpSignal& c) {
            return "logchirp(f0=" + f(c.f0) + ", f1=" + f(c.f1) + ", T=" + f(c.duration) +
                   ", amplitude=" + f(c.amplitude) + ", center=" + f(c.center) + ")";
          },
          [&](const MixedSignal& m) {
            return "mixed(step " + f(m.step.from) + "->" + f(m.step.to) + " at " +
                   f(m.step.t0) + ", hold=" + f(m.hold) + ", chirp " + f(m.chirp.f0) +
                   "-" + f(m.chirp.f1) + " Hz over " + f(m.chirp.duration) +
                   " s, amplitude=" + f(m.chirp.amplitude) + ", center=" +
                   f(m.chirp.center) + ")";
          },
          [&](const ConstantWithDisturbance& c) {
            return "constant(level=" + f(c.level) + ", multisine seed=" +
                   std::to_string(c.disturbance.seed) + ", n=" +
                   std::to_string(c.disturbance.components) + ", fmax=" +
                   f(c.disturbance.f_max) + ", amplitude=" + f(c.disturbance.amplitude) + ")";
          },
      },
      sig);
}

}  // namespace mrhydro
