#include "mrhydro/roots.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace mrhydro {

namespace {

// Parlett-Reinsch diagonal similarity scaling with radix-2 factors.
void balance(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

std::complex<double> polish(const Polynomial& p, const Polynomial& dp,
                            std::complex<double> z) {
  auto value = std::abs(p(z));
  for (int iter = 0; iter < 8 && value > 0.0; ++iter) {
    const auto d = dp(z);
    if (std::abs(d) == 0.0) break;
    const auto candidate = z - p(z) / d;
    const auto cv = std::abs(p(candidate));
    if (!(cv < value)) break;
    z = candidate;
    value = cv;
  }
  return z;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(const Polynomial& p) {
  if (p.degree() < 1) {
    throw std::invalid_argument("root finding needs a polynomial of degree >= 1");
  }
  const auto& c = p.coefficients();
  std::size_t zeros = 0;
  while (c[zeros] == 0.0) ++zeros;

  std::vector<std::complex<double>> roots(zeros, 0.0);
  const std::vector<double> rest(c.begin() + static_cast<long>(zeros), c.end());
  const int n = static_cast<int>(rest.size()) - 1;

  if (n == 1) {
    roots.emplace_back(-rest[0] / rest[1], 0.0);
  } else if (n > 1) {
    const double rho =
        std::pow(std::abs(rest.front() / rest.back()), 1.0 / n);
    // Monic coefficients of q(s) = p(rho s) / (a_n rho^n).
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) {
      a[i] = rest[i] * std::pow(rho, i - n) / rest.back();
    }
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -a[i];
    balance(companion);

    Eigen::EigenSolver<Eigen::MatrixXd> solver;
    solver.setMaxIterations(40 * n);
    solver.compute(companion, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
      throw RootFindingError("companion eigenvalue iteration did not converge");
    }
    const Polynomial trimmed(rest);
    const Polynomial d = trimmed.derivative();
    for (Eigen::Index i = 0; i < n; ++i) {
      roots.push_back(polish(trimmed, d, rho * solver.eigenvalues()[i]));
    }
  }

  std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return roots;
}

double scaled_residual(const Polynomial& p, std::complex<double> r) {
  const double scale = p.max_abs_coefficient() *
                       std::pow(std::max(1.0, std::abs(r)), p.degree());
  return scale == 0.0 ? 0.0 : std::abs(p(r)) / scale;
}

}  // namespace mrhydro
