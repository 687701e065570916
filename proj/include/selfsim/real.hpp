#pragma once

// Extended-precision scalars shared by the algebra, fourier and ifs modules.

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

namespace selfsim {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>, boost::multiprecision::et_off>;

unsigned bits_to_digits10(unsigned bits);

/// Sets the default MPFR precision for newly created Reals and restores the
/// previous value on destruction. The default is process-wide: open scopes
/// only from serial code, never inside a parallel region.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned mantissa_bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

struct Complex {
  Real re{0};
  Real im{0};

  Complex() = default;
  Complex(Real r, Real i = Real(0)) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r, double i) : re(r), im(i) {}
  explicit Complex(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}

  std::complex<double> to_double() const {
    return {re.convert_to<double>(), im.convert_to<double>()};
  }

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) {
    Real r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o);
};

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator/(Complex a, const Complex& b) { return a /= b; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
inline Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }

inline Complex conj(const Complex& z) { return {z.re, -z.im}; }
/// |z|^2
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { return boost::multiprecision::sqrt(norm(z)); }
Complex pow(const Complex& z, long long n);
Complex exp_i(const Real& phase);
Complex sqrt(const Complex& z);

Real pi_real();
/// Unit roundoff of the current default precision.
Real working_epsilon();
unsigned working_bits();

/// Distance to the nearest integer, via the exact floor of the extended value.
Real nearest_int_dist(const Real& x);
double nearest_int_dist(double x);

/// Dense row-major matrix of Reals; sized for the small blocks this project needs.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols);
  static RealMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Real& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Real& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RealMatrix transpose() const;
  RealMatrix operator*(const RealMatrix& o) const;
  std::vector<Real> operator*(const std::vector<Real>& v) const;
  std::vector<Complex> operator*(const std::vector<Complex>& v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

using RealVector = std::vector<Real>;
using ComplexVector = std::vector<Complex>;

std::string to_string(const Real& x, int digits = 20);

}  // namespace selfsim
