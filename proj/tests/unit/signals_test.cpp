#include "mrhydro/signals.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

namespace mrhydro {
namespace {

TEST(Signals, Step) {
  SignalSpec s = StepSignal{0.5, 50, 250};
  EXPECT_EQ(generate_signal(s, 0.0), 50.0);
  EXPECT_EQ(generate_signal(s, 0.4999), 50.0);
  EXPECT_EQ(generate_signal(s, 0.5), 250.0);
  EXPECT_EQ(natural_duration(s), 1.5);
}

TEST(Signals, ChirpEndpoints) {
  LogChirpSignal c{0.1, 100, 20, 100, 150};
  EXPECT_NEAR(chirp_frequency(c, 0.0), 0.1, 1e-12);
  EXPECT_NEAR(chirp_frequency(c, 20.0), 100.0, 1e-9);
  EXPECT_NEAR(chirp_frequency(c, 10.0), std::sqrt(0.1 * 100), 1e-9);
  EXPECT_EQ(chirp_phase(c, 0.0), 0.0);
  EXPECT_NEAR(generate_signal(SignalSpec{c}, 0.0), 150.0, 1e-12);
  EXPECT_EQ(generate_signal(SignalSpec{c}, 25.0), 150.0);
}

TEST(Signals, ChirpPhaseDerivativeIsFrequency) {
  LogChirpSignal c{0.1, 100, 20, 1, 0};
  const double h = 1e-6;
  for (double t : {0.5, 3.0, 11.0, 19.0}) {
    double dphi = (chirp_phase(c, t + h) - chirp_phase(c, t - h)) / (2 * h);
    EXPECT_NEAR(dphi / (2 * std::numbers::pi), chirp_frequency(c, t),
                1e-5 * chirp_frequency(c, t));
  }
}

TEST(Signals, MixedIsContinuousIntoChirp) {
  MixedSignal m;
  SignalSpec s = m;
  EXPECT_EQ(generate_signal(s, 0.2), 50.0);
  EXPECT_EQ(generate_signal(s, 1.0), 250.0);
  double t = m.chirp_start();
  EXPECT_NEAR(generate_signal(s, t), 250.0, 1e-9);
  EXPECT_NEAR(generate_signal(s, t + 1e-4), 250.0, 1e-3);
  EXPECT_NEAR(natural_duration(s), 21.5, 1e-12);
}

TEST(Signals, MultisineIsSeededAndBounded) {
  MultisineDisturbance d;
  auto a = d.phases();
  auto b = d.phases();
  EXPECT_EQ(a, b);
  MultisineDisturbance other = d;
  other.seed = 1301;
  EXPECT_NE(other.phases(), a);
  double peak = 0;
  for (double t = 0; t < 5; t += 1e-3)
    peak = std::max(peak, std::abs(multisine_value(d, a, t)));
  EXPECT_LE(peak, d.components * d.amplitude);
  EXPECT_GT(peak, 0.0);
}

TEST(Signals, MultisineSumOfSines) {
  MultisineDisturbance d{3, 2, 4.0, 0.5};
  auto ph = d.phases();
  double t = 0.37;
  double oracle = 0.5 * std::sin(2 * std::numbers::pi * 2.0 * t + ph[0]) +
                  0.5 * std::sin(2 * std::numbers::pi * 4.0 * t + ph[1]);
  EXPECT_NEAR(multisine_value(d, ph, t), oracle, 1e-14);
}

TEST(Signals, DisturbanceOnlyForDrilling) {
  EXPECT_EQ(disturbance_force(SignalSpec{StepSignal{}}, 1.0), 0.0);
  ConstantWithDisturbance c;
  SignalSource src{c};
  EXPECT_EQ(src.reference(3.0), 23.0);
  EXPECT_EQ(src.disturbance(0.3), disturbance_force(SignalSpec{c}, 0.3));
}

TEST(Signals, Validation) {
  EXPECT_THROW(validate(LogChirpSignal{0, 10, 1, 1, 0}), std::invalid_argument);
  EXPECT_THROW(validate(LogChirpSignal{10, 1, 1, 1, 0}), std::invalid_argument);
  EXPECT_THROW(validate(LogChirpSignal{1, 10, 0, 1, 0}), std::invalid_argument);
  MultisineDisturbance bad;
  bad.components = 0;
  EXPECT_THROW(validate(ConstantWithDisturbance{23, bad}), std::invalid_argument);
  EXPECT_NO_THROW(validate(MixedSignal{}));
}

}  // namespace
}  // namespace mrhydro
