#include "selfsim/real.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/constants/constants.hpp>

namespace selfsim {

namespace mp = boost::multiprecision;

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

PrecisionScope::PrecisionScope(unsigned mantissa_bits) : saved_digits10_(Real::default_precision()) {
  Real::default_precision(bits_to_digits10(mantissa_bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

Complex& Complex::operator/=(const Complex& o) {
  Real d = norm(o);
  Real r = (re * o.re + im * o.im) / d;
  im = (im * o.re - re * o.im) / d;
  re = std::move(r);
  return *this;
}

Complex pow(const Complex& z, long long n) {
  if (n < 0) return Complex(Real(1)) / pow(z, -n);
  Complex result(Real(1));
  Complex base = z;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

Complex exp_i(const Real& phase) { return {mp::cos(phase), mp::sin(phase)}; }

Complex sqrt(const Complex& z) {
  Real r = abs(z);
  Real a = mp::sqrt((r + z.re) / 2);
  Real b = mp::sqrt((r - z.re) / 2);
  if (z.im < 0) b = -b;
  return {a, b};
}

Real pi_real() { return boost::math::constants::pi<Real>(); }

unsigned working_bits() {
  return static_cast<unsigned>(std::floor((Real::default_precision() - 1) / 0.30102999566398120));
}

Real working_epsilon() { return mp::ldexp(Real(1), -static_cast<int>(working_bits()) + 1); }

Real nearest_int_dist(const Real& x) {
  Real k = mp::floor(x + Real(0.5));
  return mp::abs(x - k);
}

double nearest_int_dist(double x) { return std::abs(x - std::floor(x + 0.5)); }

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RealMatrix RealMatrix::operator*(const RealMatrix& o) const {
  RealMatrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      if ((*this)(r, k) == 0) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) out(r, c) += (*this)(r, k) * o(k, c);
    }
  return out;
}

std::vector<Real> RealMatrix::operator*(const std::vector<Real>& v) const {
  std::vector<Real> out(rows_, Real(0));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
  return out;
}

std::vector<Complex> RealMatrix::operator*(const std::vector<Complex>& v) const {
  std::vector<Complex> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) {
      out[r].re += (*this)(r, c) * v[c].re;
      out[r].im += (*this)(r, c) * v[c].im;
    }
  return out;
}

std::string to_string(const Real& x, int digits) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

}  // namespace selfsim
