#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "mrhydro/polynomial.hpp"

namespace mrhydro {

class RootFindingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All complex roots of p with multiplicity, sorted by (real, imag).
///
/// The polynomial is rescaled to unit geometric root size, its companion
/// matrix is balanced and handed to a real Hessenberg-QR eigen solver
/// (capped at 40 * degree iterations), and each eigenvalue is then polished
/// with Newton steps on the unscaled polynomial. Exact zero roots are split
/// off before the eigen step.
///
/// Throws std::invalid_argument if degree < 1 and RootFindingError if the
/// QR iteration does not converge.
std::vector<std::complex<double>> polynomial_roots(const Polynomial& p);

/// |p(r)| / (max|coeff| * max(1, |r|)^degree).
double scaled_residual(const Polynomial& p, std::complex<double> r);

}  // namespace mrhydro
