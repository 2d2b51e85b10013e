#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mrhydro {

/// Forward real DFT (unnormalized), bins 0..n/2.
std::vector<std::complex<double>> real_fft(std::span<const double> samples);

/// Symmetric Hann window of length n.
std::vector<double> hann_window(std::size_t n);

/// Fraction of the energy of the mean-removed, Hann-windowed signal that
/// lies above `cutoff_hz`. Zero for a constant signal.
double high_frequency_energy_ratio(std::span<const double> samples,
                                   double sample_rate, double cutoff_hz);

}  // namespace mrhydro
