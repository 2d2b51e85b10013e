#include "mrhydro/transfer_function.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mrhydro/roots.hpp"

namespace mrhydro {

namespace {

// Synthetic division by a monic factor; the remainder is discarded.
Polynomial deflate(const Polynomial& p, const Polynomial& factor) {
  const auto& c = p.coefficients();
  const auto& f = factor.coefficients();
  const int n = p.degree();
  const int m = factor.degree();
  if (n < m) return p;
  std::vector<double> rem(c);
  std::vector<double> quot(n - m + 1, 0.0);
  for (int k = n - m; k >= 0; --k) {
    const double q = rem[k + m] / f[m];
    quot[k] = q;
    for (int j = 0; j <= m; ++j) rem[k + j] -= q * f[j];
  }
  return Polynomial(std::move(quot));
}

bool close(std::complex<double> a, std::complex<double> b, double rel_tol) {
  return std::abs(a - b) <= rel_tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace

RationalTF::RationalTF(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw NumericError("transfer function with zero denominator");
  const double lead = den_.leading();
  if (lead != 1.0) {
    num_ *= 1.0 / lead;
    den_ *= 1.0 / lead;
  }
}

std::complex<double> RationalTF::operator()(std::complex<double> s) const {
  return num_(s) / den_(s);
}

std::complex<double> RationalTF::at_hz(double f) const {
  if (!(f > 0)) throw NumericError("frequency must be > 0");
  const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f);
  const auto d = den_(s);
  double scale = 0.0;
  double sk = 1.0;
  for (double c : den_.coefficients()) {
    scale += std::abs(c) * sk;
    sk *= std::abs(s);
  }
  if (std::abs(d) <= 1e-12 * scale) {
    throw NumericError("evaluation at a pole (f = " + std::to_string(f) + " Hz)");
  }
  return num_(s) / d;
}

double RationalTF::dc_gain() const {
  const double d = den_[0];
  const double n = num_[0];
  if (d == 0.0) {
    if (n == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return n > 0 ? std::numeric_limits<double>::infinity()
                 : -std::numeric_limits<double>::infinity();
  }
  return n / d;
}

std::vector<std::complex<double>> RationalTF::poles() const {
  if (den_.degree() < 1) return {};
  return polynomial_roots(den_);
}

std::vector<std::complex<double>> RationalTF::zeros() const {
  if (num_.degree() < 1) return {};
  return polynomial_roots(num_);
}

RationalTF RationalTF::cancel_common_factors(double rel_tol) const {
  if (num_.degree() < 1 || den_.degree() < 1) return *this;
  auto zs = zeros();
  auto ps = poles();
  Polynomial num = num_;
  Polynomial den = den_;
  std::vector<bool> zero_used(zs.size(), false);
  std::vector<bool> pole_used(ps.size(), false);

  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (pole_used[i]) continue;
    const auto p = ps[i];
    // Complex roots are cancelled together with their conjugate so that
    // the deflation factor stays real.
    const bool is_complex = std::abs(p.imag()) > rel_tol * std::max(1.0, std::abs(p));
    if (is_complex && p.imag() < 0) continue;
    std::size_t j = 0;
    for (; j < zs.size(); ++j) {
      if (!zero_used[j] && close(zs[j], p, rel_tol)) break;
    }
    if (j == zs.size()) continue;
    Polynomial factor;
    if (is_complex) {
      std::size_t pc = 0;
      for (; pc < ps.size(); ++pc) {
        if (!pole_used[pc] && pc != i && close(ps[pc], std::conj(p), rel_tol)) break;
      }
      std::size_t zc = 0;
      for (; zc < zs.size(); ++zc) {
        if (!zero_used[zc] && zc != j && close(zs[zc], std::conj(p), rel_tol)) break;
      }
      if (pc == ps.size() || zc == zs.size()) continue;
      pole_used[pc] = zero_used[zc] = true;
      const auto r = 0.5 * (p + zs[j]);
      factor = Polynomial{std::norm(r), -2.0 * r.real(), 1.0};
    } else {
      factor = Polynomial{-0.5 * (p.real() + zs[j].real()), 1.0};
    }
    pole_used[i] = zero_used[j] = true;
    num = deflate(num, factor);
    den = deflate(den, factor);
  }
  return {num, den};
}

RationalTF operator+(const RationalTF& g, const RationalTF& h) {
  return {g.num() * h.den() + h.num() * g.den(), g.den() * h.den()};
}

RationalTF operator*(const RationalTF& g, const RationalTF& h) {
  return {g.num() * h.num(), g.den() * h.den()};
}

RationalTF operator*(double k, const RationalTF& g) { return g.scaled(k); }

RationalTF unity_feedback(const RationalTF& g) {
  return {g.num(), g.den() + g.num()};
}

RationalTF feedback(const RationalTF& g, const RationalTF& h) {
  return {g.num() * h.den(), g.den() * h.den() + g.num() * h.num()};
}

RationalTF first_order_lag(double tau) {
  return {Polynomial{1.0}, Polynomial{1.0, tau}};
}

void FrequencyResponse::validate() const {
  if (hz.size() != value.size()) {
    throw std::invalid_argument("frequency response columns differ in length");
  }
  for (std::size_t i = 0; i < hz.size(); ++i) {
    if (!(hz[i] > 0)) throw std::invalid_argument("frequencies must be > 0");
    if (i > 0 && !(hz[i] > hz[i - 1])) {
      throw std::invalid_argument("frequencies must be strictly increasing");
    }
  }
}

FrequencyResponse evaluate(const RationalTF& g, const std::vector<double>& hz) {
  FrequencyResponse r;
  r.hz = hz;
  r.value.reserve(hz.size());
  for (double f : hz) r.value.push_back(g.at_hz(f));
  r.validate();
  return r;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("log_grid needs 0 < lo < hi and n >= 2");
  }
  std::vector<double> f(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  f.front() = lo;
  f.back() = hi;
  return f;
}

}  // namespace mrhydro
