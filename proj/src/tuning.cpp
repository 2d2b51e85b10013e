#include "mrhydro/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <thread>

#include "mrhydro/roots.hpp"

namespace mrhydro {

namespace {

struct Candidate {
  std::size_t index;  // position in the grid, for deterministic ordering
  double kp;
  double ki;
  double bandwidth;
};

std::vector<double> decade_grid(double lo, double hi, int per_decade) {
  const auto n = static_cast<std::size_t>(
      std::llround(std::log10(hi / lo) * per_decade)) + 1;
  return log_grid(lo, hi, std::max<std::size_t>(n, 2));
}

// First downward crossing of 1/sqrt(2) in a sampled closed loop |T|, with
// log interpolation; +inf if none.
double sampled_bandwidth(const std::vector<double>& hz,
                         const std::vector<std::complex<double>>& loop) {
  const double target = 1.0 / std::sqrt(2.0);
  double prev = 0.0;
  for (std::size_t i = 0; i < hz.size(); ++i) {
    const double m = std::abs(loop[i] / (1.0 + loop[i]));
    if (m < target) {
      if (i == 0) return hz[0];
      const double t = (prev - target) / (prev - m);
      return std::pow(10.0, std::log10(hz[i - 1]) +
                                t * (std::log10(hz[i]) - std::log10(hz[i - 1])));
    }
    prev = m;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

RationalTF pi_loop(const RationalTF& plant, double kp, double ki) {
  const RationalTF pi(Polynomial{ki, kp}, Polynomial{0.0, 1.0});
  return pi * plant;
}

PiTuning tune_pi(const RationalTF& plant, const TuningGrid& grid) {
  const double dc = std::abs(plant.dc_gain());
  if (!std::isfinite(dc) || dc == 0.0) {
    throw NumericError("PI tuning needs a plant with finite nonzero DC gain");
  }
  for (const auto& p : plant.poles()) {
    if (!(p.real() < 0.0)) throw NumericError("PI tuning needs a stable open loop");
  }
  const auto loop_gains = decade_grid(grid.loop_gain_lo, grid.loop_gain_hi,
                                      grid.points_per_decade);
  const auto corners = decade_grid(grid.corner_lo, grid.corner_hi, grid.points_per_decade);

  const auto hz = log_grid(1e-3, 1e4, 1400);
  std::vector<std::complex<double>> h(hz.size());
  std::vector<std::complex<double>> jw(hz.size());
  for (std::size_t i = 0; i < hz.size(); ++i) {
    h[i] = plant.at_hz(hz[i]);
    jw[i] = {0.0, 2.0 * std::numbers::pi * hz[i]};
  }

  // Rows of the kp axis are independent; each worker owns whole rows.
  std::vector<std::vector<Candidate>> rows(loop_gains.size());
  auto evaluate_row = [&](std::size_t row) {
    const double kp = loop_gains[row] / dc;
    std::vector<std::complex<double>> loop(hz.size());
    FrequencyResponse sampled{hz, {}};
    for (std::size_t col = 0; col < corners.size(); ++col) {
      const double ki = kp * corners[col];
      const Polynomial characteristic =
          plant.den() * Polynomial{0.0, 1.0} + plant.num() * Polynomial{ki, kp};
      bool stable = true;
      for (const auto& r : polynomial_roots(characteristic)) {
        if (!(r.real() < 0.0)) {
          stable = false;
          break;
        }
      }
      if (!stable) continue;
      for (std::size_t i = 0; i < hz.size(); ++i) loop[i] = h[i] * (kp + ki / jw[i]);
      sampled.value = loop;
      const auto margins = stability_margins(sampled);
      if (margins.gain_margin_db < grid.min_gain_margin_db ||
          margins.phase_margin_deg < grid.min_phase_margin_deg) {
        continue;
      }
      rows[row].push_back({row * corners.size() + col, kp, ki, sampled_bandwidth(hz, loop)});
    }
  };

  const unsigned workers = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t row = w; row < loop_gains.size(); row += workers) evaluate_row(row);
      });
    }
  }

  std::vector<Candidate> feasible;
  for (auto& row : rows) feasible.insert(feasible.end(), row.begin(), row.end());
  if (feasible.empty()) throw NumericError("PI tuning: no feasible grid point");

  PiTuning result;
  result.grid_points = loop_gains.size() * corners.size();
  result.feasible_points = feasible.size();
  for (const auto& c : feasible) result.max_feasible_kp = std::max(result.max_feasible_kp, c.kp);

  std::stable_sort(feasible.begin(), feasible.end(), [](const Candidate& a, const Candidate& b) {
    if (a.bandwidth != b.bandwidth) return a.bandwidth > b.bandwidth;
    return a.index < b.index;
  });
  // The sampled margins are interpolated; confirm on the exact transfer.
  for (const auto& c : feasible) {
    const auto loop = pi_loop(plant, c.kp, c.ki);
    const auto margins = stability_margins(loop);
    if (margins.gain_margin_db < grid.min_gain_margin_db ||
        margins.phase_margin_deg < grid.min_phase_margin_deg) {
      continue;
    }
    result.kp = c.kp;
    result.ki = c.ki;
    result.margins = margins;
    const auto bw = bandwidth_3db(unity_feedback(loop));
    result.closed_loop_bandwidth_hz = bw.value_or(std::numeric_limits<double>::infinity());
    return result;
  }
  throw NumericError("PI tuning: no grid point passed the exact margin check");
}

PiTuning tune_pi(const ActuationLineParams& p, const LoadImpedance& z, Channel loop,
                 const TuningGrid& grid) {
  return tune_pi(channel_tf(p, z, loop), grid);
}

}  // namespace mrhydro
