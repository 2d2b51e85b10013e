#include "mrhydro/frf.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mrhydro/line_model.hpp"

namespace mrhydro {
namespace {

struct Error {
  double mag = 0;    // worst relative magnitude error
  double phase = 0;  // worst phase error, deg
};

Error compare(const FrequencyResponse& est, const RationalTF& g, double lo, double hi) {
  Error e;
  for (std::size_t i = 0; i < est.size(); ++i) {
    if (est.hz[i] < lo || est.hz[i] > hi) continue;
    auto ratio = est.value[i] / g.at_hz(est.hz[i]);
    e.mag = std::max(e.mag, std::abs(std::abs(ratio) - 1));
    e.phase = std::max(e.phase, std::abs(std::arg(ratio)) * 180 / std::numbers::pi);
  }
  return e;
}

TEST(Frf, FirstOrderRecords) {
  // Exact zero-order-hold discretization of 1/(tau s + 1).
  const double fs = 1000, tau = 0.02;
  const double a = std::exp(-1 / (fs * tau));
  LogChirpSignal chirp{0.5, 100, 40, 1, 0};
  std::size_t n = static_cast<std::size_t>(45 * fs);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = generate_signal(SignalSpec{chirp}, i / fs);
  for (std::size_t i = 1; i < n; ++i) y[i] = a * y[i - 1] + (1 - a) * x[i - 1];
  auto grid = log_grid(1, 50, 60);
  auto est = estimate_frf_from_records(x, y, fs, grid, 2, true);
  auto e = compare(est, first_order_lag(tau), 1, 50);
  EXPECT_LT(e.mag, 0.01);
  EXPECT_LT(e.phase, 0.5);
}

TEST(Frf, MatchesAnalyticalLine) {
  ActuationLineParams p;
  for (auto z : {LoadImpedance::blocked(), LoadImpedance::bench()}) {
    for (auto ch : {Channel::Force, Channel::Pressure}) {
      auto est = estimate_frf(p, z, default_frf_chirp(), ch);
      auto e = compare(est, channel_tf(p, z, ch), 0.5, 50);
      EXPECT_LT(e.mag, 0.01) << to_string(ch);
      EXPECT_LT(e.phase, 0.5) << to_string(ch);
    }
  }
}

TEST(Frf, DoublingChirpConverges) {
  ActuationLineParams p;
  auto z = LoadImpedance::bench();
  auto chirp = default_frf_chirp();
  auto a = estimate_frf(p, z, chirp, Channel::Force);
  chirp.duration *= 2;
  auto b = estimate_frf(p, z, chirp, Channel::Force);
  ASSERT_EQ(a.hz, b.hz);
  double sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = std::abs(b.value[i] - a.value[i]) / std::abs(a.value[i]);
    sum += d * d;
  }
  EXPECT_LT(std::sqrt(sum / a.size()), 0.01);
}

TEST(Frf, TooShortChirpRejected) {
  ActuationLineParams p;
  LogChirpSignal chirp{0.1, 100, 1.0, 1.25, 2.25};
  EXPECT_THROW(estimate_frf(p, LoadImpedance::bench(), chirp, Channel::Force),
               std::invalid_argument);
}

}  // namespace
}  // namespace mrhydro
