#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "mrhydro/polynomial.hpp"

namespace mrhydro {

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// num(s) / den(s), stored with a monic denominator.
class RationalTF {
 public:
  /// Throws NumericError if den is the zero polynomial.
  RationalTF(Polynomial num, Polynomial den);
  static RationalTF gain(double k) { return {Polynomial{k}, Polynomial{1.0}}; }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  std::complex<double> operator()(std::complex<double> s) const;
  /// G(j 2 pi f). Throws NumericError when f <= 0 or s sits on a pole.
  std::complex<double> at_hz(double f) const;
  /// num(0)/den(0); +/-inf for a pole at the origin.
  double dc_gain() const;

  std::vector<std::complex<double>> poles() const;
  std::vector<std::complex<double>> zeros() const;

  /// Removes numerator/denominator root pairs closer than rel_tol relative
  /// to their magnitude, deflating both polynomials by the shared factor.
  RationalTF cancel_common_factors(double rel_tol = 1e-8) const;

  RationalTF scaled(double k) const { return {num_ * k, den_}; }
  bool is_proper() const { return num_.degree() <= den_.degree(); }

 private:
  Polynomial num_;
  Polynomial den_;
};

RationalTF operator+(const RationalTF& g, const RationalTF& h);
RationalTF operator*(const RationalTF& g, const RationalTF& h);
RationalTF operator*(double k, const RationalTF& g);

inline RationalTF add(const RationalTF& g, const RationalTF& h) { return g + h; }
inline RationalTF mul(const RationalTF& g, const RationalTF& h) { return g * h; }
/// G / (1 + G)
RationalTF unity_feedback(const RationalTF& g);
/// G / (1 + G H)
RationalTF feedback(const RationalTF& g, const RationalTF& h);

/// First-order lag 1 / (tau s + 1).
RationalTF first_order_lag(double tau);

struct FrequencyResponse {
  std::vector<double> hz;
  std::vector<std::complex<double>> value;

  std::size_t size() const { return hz.size(); }
  /// Throws std::invalid_argument unless frequencies are positive and
  /// strictly increasing and both columns have the same length.
  void validate() const;
};

FrequencyResponse evaluate(const RationalTF& g, const std::vector<double>& hz);

/// n log-spaced points covering [lo, hi] inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace mrhydro
