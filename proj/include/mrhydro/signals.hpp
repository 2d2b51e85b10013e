#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace mrhydro {

struct StepSignal {
  double t0 = 0.5;     // s
  double from = 50.0;  // N
  double to = 250.0;   // N
};

/// center + amplitude * sin(phi(t)) for 0 <= t <= duration, with
/// phi(t) = 2 pi f0 T / ln(f1/f0) * ((f1/f0)^(t/T) - 1); holds `center`
/// afterwards.
struct LogChirpSignal {
  double f0 = 0.1;         // Hz
  double f1 = 100.0;       // Hz
  double duration = 20.0;  // s
  double amplitude = 100.0;
  double center = 150.0;
};

/// Step, a hold at the step level, then a log chirp. The chirp enters with
/// a cosine phase so that it continues from center + amplitude.
struct MixedSignal {
  StepSignal step{0.5, 50.0, 250.0};
  double hold = 1.0;  // s between the step and the chirp
  LogChirpSignal chirp{0.1, 6.0, 20.0, 100.0, 150.0};

  double chirp_start() const { return step.t0 + hold; }
};

/// Sum of `components` sines at f_i = i * f_max / components (i = 1..N),
/// each of amplitude `amplitude` with a seeded uniform random phase.
struct MultisineDisturbance {
  std::uint64_t seed = 1300;
  int components = 32;
  double f_max = 10.0;      // Hz
  double amplitude = 1.0;   // N per component

  std::vector<double> phases() const;
};

struct ConstantWithDisturbance {
  double level = 23.0;  // N
  MultisineDisturbance disturbance;
};

using SignalSpec =
    std::variant<StepSignal, LogChirpSignal, MixedSignal, ConstantWithDisturbance>;

/// Throws std::invalid_argument on f0 <= 0, f1 <= f0, T <= 0 or a bad
/// multisine definition.
void validate(const SignalSpec& sig);

/// Reference value at time t >= 0.
double generate_signal(const SignalSpec& sig, double t);

/// External force acting on the load at time t; zero except for
/// ConstantWithDisturbance.
double disturbance_force(const SignalSpec& sig, double t);

double chirp_phase(const LogChirpSignal& chirp, double t);
double chirp_frequency(const LogChirpSignal& chirp, double t);

/// Length of the signal's defined content (step: t0 + 1 s).
double natural_duration(const SignalSpec& sig);

std::string describe(const SignalSpec& sig);

/// Evaluates one multisine at time t (phases precomputed).
double multisine_value(const MultisineDisturbance& d,
                       const std::vector<double>& phases, double t);

/// Signal plus its precomputed disturbance phases, for evaluation in the
/// integration loop.
class SignalSource {
 public:
  explicit SignalSource(SignalSpec spec);

  double reference(double t) const { return generate_signal(spec_, t); }
  double disturbance(double t) const;
  const SignalSpec& spec() const { return spec_; }

 private:
  SignalSpec spec_;
  std::vector<double> phases_;
};

}  // namespace mrhydro
