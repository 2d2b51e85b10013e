#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace mrhydro {

/// Real polynomial in the Laplace variable, coefficients in ascending powers.
/// Trailing zeros are stripped; the zero polynomial is stored as {0}.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> ascending)
      : coeffs_(ascending) { normalize(); }
  explicit Polynomial(std::vector<double> ascending)
      : coeffs_(std::move(ascending)) { normalize(); }

  static Polynomial constant(double c) { return Polynomial{c}; }
  /// m s^2 + b s + k
  static Polynomial second_order(double m, double b, double k) {
    return Polynomial{k, b, m};
  }
  /// Monic polynomial with the given roots; complex roots must come in
  /// conjugate pairs for the result to be real (imaginary residue dropped).
  static Polynomial from_roots(std::span<const std::complex<double>> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  double leading() const { return coeffs_.back(); }
  double operator[](std::size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : 0.0;
  }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double max_abs_coefficient() const;

  double operator()(double s) const;
  std::complex<double> operator()(std::complex<double> s) const;

  Polynomial derivative() const;
  /// p(s) -> p(w * s).
  Polynomial scale_variable(double w) const;

  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(const Polynomial& q);
  Polynomial& operator*=(double c);

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(Polynomial p, const Polynomial& q) { return p *= q; }
  friend Polynomial operator*(Polynomial p, double c) { return p *= c; }
  friend Polynomial operator*(double c, Polynomial p) { return p *= c; }

  bool operator==(const Polynomial&) const = default;

 private:
  void normalize();

  std::vector<double> coeffs_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, double c);

}  // namespace mrhydro
