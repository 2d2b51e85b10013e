#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "mrhydro/transfer_function.hpp"

namespace mrhydro {

struct BodeRow {
  double hz;
  double magnitude_db;  // relative to the reference gain
  double phase_deg;     // unwrapped
};

struct BodeTable {
  std::vector<BodeRow> rows;
  /// |G(0)| when finite and nonzero, otherwise 1 (absolute dB).
  double reference_gain = 1.0;
};

/// Log-spaced Bode table. Phase is seeded in (-180, 180] at f_lo and
/// unwrapped upward. Throws std::invalid_argument on a bad grid and
/// NumericError when a grid point falls on a pole.
BodeTable bode(const RationalTF& g, double f_lo, double f_hi, std::size_t n);

/// First downward crossing of |G| through |G(0)|/sqrt(2), in Hz. Empty when
/// no crossing exists below 1000 Hz. Throws NumericError if G(0) is zero or
/// infinite.
std::optional<double> bandwidth_3db(const RationalTF& g);

struct RootLocusPoint {
  double gain;
  std::vector<std::complex<double>> poles;
};

struct RootLocusTrace {
  std::vector<RootLocusPoint> points;
  /// Set when the root finder failed at some gain; points hold the prefix.
  std::optional<std::string> error;
};

/// Closed-loop poles of k G / (1 + k G) for each gain, ordered so that each
/// branch continues from the nearest pole at the previous gain.
RootLocusTrace root_locus(const RationalTF& g, const std::vector<double>& gains);

/// Default gain grid: 200 log points over [1e-3 k*, 10 k*] for bounded k*,
/// otherwise [1e-3, 1e3].
std::vector<double> default_locus_gains(std::optional<double> k_star);

/// True when every root of den + k num has a negative real part.
bool closed_loop_stable(const RationalTF& g, double k);

/// Supremum of the stabilizing proportional gain, by geometric bisection on
/// [1e-6, 1e6] to 1e-3 relative. Empty means stable at 1e6 (unbounded).
/// Throws NumericError for an unstable open loop or when the loop is
/// already unstable at 1e-6.
std::optional<double> max_stable_gain(const RationalTF& g);

struct StabilityMargins {
  double gain_margin_db;    // +inf when the phase never reaches -180
  double phase_margin_deg;  // +inf when |G| never crosses 1
  double phase_crossover_hz;
  double gain_crossover_hz;
};

/// Classical margins of the loop G, scanned on 0.001-10000 Hz and refined by
/// bisection. The smallest margin over all crossings is reported.
StabilityMargins stability_margins(const RationalTF& g);

/// Same scan on a precomputed response (linear interpolation at crossings).
StabilityMargins stability_margins(const FrequencyResponse& loop);

}  // namespace mrhydro
