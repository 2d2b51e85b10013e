#pragma once

#include <span>

#include "mrhydro/line_model.hpp"
#include "mrhydro/simulation.hpp"
#include "mrhydro/transfer_function.hpp"

namespace mrhydro {

struct FrfOptions {
  std::size_t points = 200;   // output grid, log-spaced on [2 f0, f1 / 2]
  int smoothing_bins = 2;     // spectral averaging half-width, in DFT bins
  double settle_tail = 3.0;   // s of constant current after the chirp
  bool saturation = false;    // clamp-free plant by default
  bool compensate_hold = true;
  double sample_rate = 1500.0;
  int substeps = 10;
};

/// Current chirp of the open-loop bandwidth test: 1 to 3.5 A, 0.1 to 100 Hz.
LogChirpSignal default_frf_chirp();

/// Transfer estimate Y/X as the ratio of cross- to auto-spectral density,
/// each averaged over 2 * smoothing_bins + 1 adjacent DFT bins, then
/// interpolated onto `grid`. Both records must start and end at rest (zero
/// deviation). With `compensate_hold` the zero-order hold of a sampled
/// input (factor exp(-j w T/2) sinc(w T/2)) is divided out.
FrequencyResponse estimate_frf_from_records(std::span<const double> input,
                                            std::span<const double> output,
                                            double sample_rate,
                                            const std::vector<double>& grid,
                                            int smoothing_bins,
                                            bool compensate_hold);

/// Open-loop chirp experiment on the simulated line; returns the estimated
/// current-to-channel response in N/A. Throws std::invalid_argument when
/// the record is too short to resolve the lowest grid frequency.
FrequencyResponse estimate_frf(const ActuationLineParams& p, const LoadImpedance& z,
                               const LogChirpSignal& chirp, Channel which,
                               const FrfOptions& options = {});

}  // namespace mrhydro
