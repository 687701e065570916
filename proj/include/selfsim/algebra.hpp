#pragma once

// Integer polynomials, certified root isolation and P.V. tuple certification.

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "selfsim/real.hpp"

namespace selfsim::algebra {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using selfsim::to_string;

/// Polynomial with integer coefficients, stored in ascending degree.
/// The leading coefficient is never zero.
class IntPolynomial {
 public:
  explicit IntPolynomial(std::vector<BigInt> ascending);
  IntPolynomial(std::initializer_list<long long> ascending);

  /// Accepts whitespace or comma separated decimal integers, optionally
  /// wrapped in brackets: "-1 -1 1" or "[-1, -1, 1]".
  static IntPolynomial parse(std::string_view text);
  std::string to_string() const;

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool monic() const { return coeffs_.back() == 1; }
  /// P(X) = X^n P(1/X)
  bool reciprocal() const;
  const BigInt& coeff(int i) const;
  const std::vector<BigInt>& coefficients() const { return coeffs_; }
  const BigInt& leading() const { return coeffs_.back(); }

  Complex evaluate(const Complex& z) const;
  Real evaluate(const Real& x) const;
  /// Horner evaluation of sum |c_i| |z|^i, used for rounding-error bounds.
  Real abs_evaluate(const Real& r) const;
  /// Coefficients of P' (empty for constants).
  std::vector<BigInt> derivative() const;

  friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
  friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.coeffs_ == b.coeffs_; }

 private:
  std::vector<BigInt> coeffs_;
};

struct PrecisionContext {
  unsigned mantissa_bits = 256;
  double root_tolerance = 1e-40;

  PrecisionContext() = default;
  PrecisionContext(unsigned bits, double tolerance);
};

struct ComplexRoot {
  Complex value;
  /// A true root of the attributed polynomial lies within this distance.
  Real error_radius;

  /// Certified enclosure of |value| over the disk.
  Real modulus_lower() const;
  Real modulus_upper() const;
  std::complex<double> approx() const { return value.to_double(); }
};

/// All complex roots of P, each isolated in a disjoint disk of radius at
/// most ctx.root_tolerance. Real roots have exactly zero imaginary part and
/// non-real roots come in exact conjugate pairs. Sorted by (Re, Im).
/// Throws PrecisionError when the iteration does not separate the roots.
std::vector<ComplexRoot> poly_roots(const IntPolynomial& p, const PrecisionContext& ctx);

/// Distinct algebraic integers drawn from the roots of one monic polynomial.
class AlgebraicTuple {
 public:
  /// Validates distinctness, conjugation closure and that each theta lies
  /// on a root of defining_poly.
  static AlgebraicTuple make(std::vector<ComplexRoot> thetas, IntPolynomial defining_poly,
                             const PrecisionContext& ctx);

  /// Roots of p whose certified modulus exceeds 1.
  static AlgebraicTuple outside_unit_circle(const IntPolynomial& p, const PrecisionContext& ctx);
  /// Roots of p selected by index into poly_roots(p) order.
  static AlgebraicTuple from_root_indices(const IntPolynomial& p, const std::vector<std::size_t>& indices,
                                          const PrecisionContext& ctx);
  /// Roots of p matched to double-precision approximations within match_tol.
  static std::optional<AlgebraicTuple> match(const IntPolynomial& p, const std::vector<std::complex<double>>& approx,
                                             double match_tol, const PrecisionContext& ctx);

  const std::vector<ComplexRoot>& thetas() const { return thetas_; }
  const IntPolynomial& defining_poly() const { return poly_; }
  std::size_t size() const { return thetas_.size(); }

 private:
  AlgebraicTuple(std::vector<ComplexRoot> t, IntPolynomial p) : thetas_(std::move(t)), poly_(std::move(p)) {}
  std::vector<ComplexRoot> thetas_;
  IntPolynomial poly_;
};

enum class PvStatus { pv, not_pv, inconclusive };
std::string to_string(PvStatus s);

struct PVCertificate {
  PvStatus status = PvStatus::inconclusive;
  /// 1 - (upper bound on the largest excluded modulus); 1 when nothing is excluded.
  Real inside_margin;
  IntPolynomial witness_poly{1};
  std::string reason;
};

/// Throws ContractError("algebraic integers required") for non-monic input.
PVCertificate is_pv_tuple(const AlgebraicTuple& tuple, const PrecisionContext& ctx);

/// Newton power sums s_0..s_{n_max} of the roots of a monic P.
std::vector<BigInt> power_sums(const IntPolynomial& p, int n_max);

struct DecayBound {
  /// Certified upper bound on sum |Q(z)| over the excluded roots.
  Real C;
  /// Certified upper bound on the largest excluded modulus.
  Real delta;
  /// No excluded roots: the sums are exact integers.
  bool vacuous = false;
};

/// Requires tuple certified pv (ContractError otherwise).
DecayBound decay_bound(const AlgebraicTuple& tuple, const IntPolynomial& q, const PrecisionContext& ctx);

/// sum_j Q(theta_j) theta_j^n over the tuple, evaluated at the working precision.
Complex weighted_power_sum(const AlgebraicTuple& tuple, const IntPolynomial& q, int n);

/// Products theta_J over subsets J of {z_1..z_m} containing z_1, from a Salem
/// polynomial of degree 2m. The defining polynomial is the rounded product
/// over all 2^m subsets; every rounding residual is certified below 1/2.
AlgebraicTuple pv_tuple_from_salem_products(const IntPolynomial& salem, const PrecisionContext& ctx);

/// Continued-fraction reconstruction of x as p/q with q <= denom_bound and
/// |x - p/q| <= abs_tol. Approximations that are only as good as a generic
/// irrational gets (|x - p/q| q^2 above 1e-3) are rejected.
std::optional<Rational> rational_approximation(double x, long long denom_bound, double abs_tol);

}  // namespace selfsim::algebra
