#pragma once

#include "mrhydro/analysis.hpp"
#include "mrhydro/line_model.hpp"
#include "mrhydro/params.hpp"

namespace mrhydro {

/// Search grid for PI tuning. The proportional gain is expressed as the DC
/// loop gain kp * |H(0)| and the integral gain as the PI corner ki / kp.
struct TuningGrid {
  double loop_gain_lo = 1e-3;
  double loop_gain_hi = 1e2;
  double corner_lo = 1e-1;   // rad/s
  double corner_hi = 1e4;    // rad/s
  int points_per_decade = 40;
  double min_gain_margin_db = 6.0;
  double min_phase_margin_deg = 45.0;
};

struct PiTuning {
  double kp = 0.0;
  double ki = 0.0;
  StabilityMargins margins{};
  double closed_loop_bandwidth_hz = 0.0;
  /// Largest kp over all feasible grid points (any ki).
  double max_feasible_kp = 0.0;
  std::size_t feasible_points = 0;
  std::size_t grid_points = 0;
};

/// PI(s) * H(s) with PI(s) = kp + ki / s.
RationalTF pi_loop(const RationalTF& plant, double kp, double ki);

/// Grid search maximizing the closed-loop -3 dB bandwidth of the measured
/// signal subject to the margin floors and closed-loop stability. Ties keep
/// the first grid point (ascending kp, then ascending ki). Throws
/// NumericError when no grid point is feasible.
PiTuning tune_pi(const RationalTF& plant, const TuningGrid& grid = {});

/// Tunes the loop closed on the given channel of the line.
PiTuning tune_pi(const ActuationLineParams& p, const LoadImpedance& z,
                 Channel loop, const TuningGrid& grid = {});

}  // namespace mrhydro
