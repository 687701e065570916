#include <cmath>

#include "selfsim/algebra.hpp"
#include "selfsim/errors.hpp"

namespace selfsim::algebra {

std::optional<Rational> rational_approximation(double x, long long denom_bound, double abs_tol) {
  if (denom_bound < 1) throw ContractError("denominator bound must be >= 1");
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents h/k of the continued fraction of x, in exact integers.
  BigInt h_prev = 1, h = static_cast<long long>(std::floor(x));
  BigInt k_prev = 0, k = 1;
  long double rest = static_cast<long double>(x) - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (k > denom_bound) break;
    long double approx = h.convert_to<long double>() / k.convert_to<long double>();
    long double err = std::fabs(static_cast<long double>(x) - approx);
    long double kk = k.convert_to<long double>();
    if (err <= abs_tol && err * kk * kk <= 1e-3L) return Rational(h, k);
    if (rest < 1e-18L) break;
    long double inv = 1.0L / rest;
    long double a = std::floor(inv);
    rest = inv - a;
    BigInt ai = static_cast<long long>(a);
    BigInt h_next = ai * h + h_prev;
    BigInt k_next = ai * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return std::nullopt;
}

}  // namespace selfsim::algebra
