#include <algorithm>

#include "selfsim/algebra.hpp"
#include "selfsim/errors.hpp"

namespace selfsim::algebra {

namespace mp = boost::multiprecision;

namespace {

bool same_root(const ComplexRoot& a, const ComplexRoot& b) {
  Real slack = (abs(a.value) + abs(b.value) + 1) * working_epsilon() * 16;
  return abs(a.value - b.value) <= a.error_radius + b.error_radius + slack;
}

// Index of the certified root of p that a lies on, or -1.
int locate(const ComplexRoot& a, const std::vector<ComplexRoot>& roots) {
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (same_root(a, roots[i])) return static_cast<int>(i);
  return -1;
}

}  // namespace

std::string to_string(PvStatus s) {
  switch (s) {
    case PvStatus::pv:
      return "pv";
    case PvStatus::not_pv:
      return "not_pv";
    case PvStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

AlgebraicTuple AlgebraicTuple::make(std::vector<ComplexRoot> thetas, IntPolynomial defining_poly,
                                    const PrecisionContext& ctx) {
  if (thetas.empty()) throw ContractError("tuple must be nonempty");
  std::vector<ComplexRoot> roots = poly_roots(defining_poly, ctx);
  PrecisionScope scope(ctx.mantissa_bits + 32);
  for (const ComplexRoot& t : thetas) {
    if (locate(t, roots) < 0) throw ContractError("tuple element is not a root of " + defining_poly.to_string());
  }
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = i + 1; j < thetas.size(); ++j) {
      if (abs(thetas[i].value - thetas[j].value) <= thetas[i].error_radius + thetas[j].error_radius)
        throw ContractError("tuple elements are not distinct");
    }
    ComplexRoot mirror{conj(thetas[i].value), thetas[i].error_radius};
    bool found = std::any_of(thetas.begin(), thetas.end(), [&](const ComplexRoot& t) { return same_root(mirror, t); });
    if (!found) throw ContractError("tuple is not closed under conjugation");
  }
  return AlgebraicTuple(std::move(thetas), std::move(defining_poly));
}

AlgebraicTuple AlgebraicTuple::outside_unit_circle(const IntPolynomial& p, const PrecisionContext& ctx) {
  std::vector<ComplexRoot> chosen;
  for (ComplexRoot& r : poly_roots(p, ctx))
    if (r.modulus_lower() > 1) chosen.push_back(std::move(r));
  return make(std::move(chosen), p, ctx);
}

AlgebraicTuple AlgebraicTuple::from_root_indices(const IntPolynomial& p, const std::vector<std::size_t>& indices,
                                                 const PrecisionContext& ctx) {
  std::vector<ComplexRoot> roots = poly_roots(p, ctx);
  std::vector<ComplexRoot> chosen;
  for (std::size_t i : indices) {
    if (i >= roots.size()) throw ContractError("root index " + std::to_string(i) + " out of range");
    chosen.push_back(roots[i]);
  }
  return make(std::move(chosen), p, ctx);
}

std::optional<AlgebraicTuple> AlgebraicTuple::match(const IntPolynomial& p,
                                                    const std::vector<std::complex<double>>& approx, double match_tol,
                                                    const PrecisionContext& ctx) {
  std::vector<ComplexRoot> roots = poly_roots(p, ctx);
  std::vector<ComplexRoot> chosen;
  std::vector<bool> used(roots.size(), false);
  for (const auto& a : approx) {
    int hit = -1;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (used[i]) continue;
      if (std::abs(roots[i].approx() - a) <= match_tol * std::max(1.0, std::abs(a))) {
        if (hit >= 0) return std::nullopt;  // ambiguous at this tolerance
        hit = static_cast<int>(i);
      }
    }
    if (hit < 0) return std::nullopt;
    used[hit] = true;
    chosen.push_back(roots[hit]);
  }
  try {
    return make(std::move(chosen), p, ctx);
  } catch (const ContractError&) {
    return std::nullopt;
  }
}

namespace {
// P(s) == 0 for s = +-1, in exact integer arithmetic.
bool on_unit_circle_exactly(const IntPolynomial& p, int s) {
  BigInt v = 0, power = 1;
  for (const BigInt& c : p.coefficients()) {
    v += c * power;
    power *= s;
  }
  return v == 0;
}
}  // namespace

PVCertificate is_pv_tuple(const AlgebraicTuple& tuple, const PrecisionContext& ctx) {
  const IntPolynomial& p = tuple.defining_poly();
  if (!p.monic()) throw ContractError("algebraic integers required");
  std::vector<ComplexRoot> roots = poly_roots(p, ctx);
  PrecisionScope scope(ctx.mantissa_bits + 32);

  std::vector<bool> included(roots.size(), false);
  for (const ComplexRoot& t : tuple.thetas()) {
    int at = locate(t, roots);
    if (at < 0) throw ContractError("tuple element is not a root of its defining polynomial");
    included[at] = true;
  }

  PVCertificate cert;
  cert.witness_poly = p;
  Real max_excluded = 0;
  bool any_excluded = false;
  bool straddle = false;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Real lo = roots[i].modulus_lower();
    Real hi = roots[i].modulus_upper();
    if (included[i]) {
      if (hi <= 1) {
        cert.status = PvStatus::not_pv;
        cert.reason = "tuple element " + to_string(abs(roots[i].value), 12) + " has modulus <= 1";
      } else if (lo <= 1) {
        straddle = true;
      }
    } else {
      any_excluded = true;
      if (hi > max_excluded) max_excluded = hi;
      if (lo >= 1) {
        cert.status = PvStatus::not_pv;
        cert.reason = "excluded root of modulus " + to_string(abs(roots[i].value), 12) + " >= 1";
      } else if (hi >= 1) {
        if (roots[i].value.im == 0 && on_unit_circle_exactly(p, roots[i].value.re > 0 ? 1 : -1)) {
          cert.status = PvStatus::not_pv;
          cert.reason = "excluded root " + std::string(roots[i].value.re > 0 ? "1" : "-1") + " on the unit circle";
        } else {
          straddle = true;
        }
      }
    }
  }
  cert.inside_margin = any_excluded ? Real(1 - max_excluded) : Real(1);
  if (cert.status == PvStatus::not_pv) return cert;
  if (straddle) {
    cert.status = PvStatus::inconclusive;
    cert.reason = "a root modulus interval contains 1";
    return cert;
  }
  cert.status = PvStatus::pv;
  return cert;
}

DecayBound decay_bound(const AlgebraicTuple& tuple, const IntPolynomial& q, const PrecisionContext& ctx) {
  if (is_pv_tuple(tuple, ctx).status != PvStatus::pv) throw ContractError("decay_bound needs a certified P.V. tuple");
  std::vector<ComplexRoot> roots = poly_roots(tuple.defining_poly(), ctx);
  PrecisionScope scope(ctx.mantissa_bits + 32);
  std::vector<BigInt> dq = q.derivative();
  DecayBound out;
  out.C = 0;
  out.delta = 0;
  out.vacuous = true;
  const Real eps = working_epsilon();
  for (const ComplexRoot& r : roots) {
    if (locate(r, tuple.thetas()) >= 0) continue;
    out.vacuous = false;
    Real hi = r.modulus_upper();
    if (hi > out.delta) out.delta = hi;
    // |Q(z)| over the disk: value at the center plus radius times a bound on |Q'|.
    Real bound = abs(q.evaluate(r.value)) + eps * (4 * (q.degree() + 1)) * q.abs_evaluate(hi);
    if (!dq.empty()) bound += r.error_radius * IntPolynomial(dq).abs_evaluate(hi);
    out.C += bound;
  }
  // Loosen by 2^(-bits/2) so the bound survives re-evaluation at the caller's precision.
  const Real slack = 1 + boost::multiprecision::ldexp(Real(1), -static_cast<int>(ctx.mantissa_bits / 2));
  out.C *= slack;
  out.delta *= slack;
  return out;
}

Complex weighted_power_sum(const AlgebraicTuple& tuple, const IntPolynomial& q, int n) {
  Complex sum;
  for (const ComplexRoot& t : tuple.thetas()) sum += q.evaluate(t.value) * pow(t.value, n);
  return sum;
}

AlgebraicTuple pv_tuple_from_salem_products(const IntPolynomial& salem, const PrecisionContext& ctx) {
  if (!salem.monic()) throw ContractError("algebraic integers required");
  if (!salem.reciprocal()) throw ContractError("not a reciprocal polynomial");
  if (salem.degree() < 4 || salem.degree() % 2 != 0) throw ContractError("Salem polynomial must have even degree >= 4");
  const int m = salem.degree() / 2;
  if (m > 12) throw ResourceError("too many Salem products (2^" + std::to_string(m) + ")");

  std::vector<ComplexRoot> roots = poly_roots(salem, ctx);
  PrecisionScope scope(ctx.mantissa_bits + 32);
  const Real eps = working_epsilon();

  std::vector<ComplexRoot> big, small, upper;
  for (const ComplexRoot& r : roots) {
    bool real = r.value.im == 0;
    if (real && r.modulus_lower() > 1 && r.value.re > 0) {
      big.push_back(r);
    } else if (real && r.modulus_upper() < 1 && r.value.re > 0) {
      small.push_back(r);
    } else if (!real && r.modulus_lower() <= 1 && r.modulus_upper() >= 1) {
      if (r.value.im > 0) upper.push_back(r);
    } else {
      throw ContractError("not a Salem polynomial: root " + to_string(r.value.re, 12) + (r.value.im < 0 ? "-" : "+") +
                          to_string(mp::abs(r.value.im), 12) + "i off the unit circle");
    }
  }
  if (big.size() != 1 || small.size() != 1 || static_cast<int>(upper.size()) != m - 1)
    throw ContractError("not a Salem polynomial");

  // z_1 first, then the upper-half-plane conjugates.
  std::vector<ComplexRoot> z{big[0]};
  z.insert(z.end(), upper.begin(), upper.end());
  // Relative perturbation of z_j^{+-1} induced by the root radius.
  std::vector<Real> rel(m);
  for (int j = 0; j < m; ++j) rel[j] = z[j].error_radius / z[j].modulus_lower();

  const std::size_t count = std::size_t{1} << m;
  std::vector<Complex> theta(count);
  std::vector<Real> theta_err(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Complex prod(Real(1));
    Real growth = 1;
    for (int j = 0; j < m; ++j) {
      prod *= (mask >> j & 1) ? z[j].value : Complex(Real(1)) / z[j].value;
      growth *= 1 + 2 * rel[j] + eps * 8;
    }
    theta[mask] = prod;
    theta_err[mask] = abs(prod) * (growth - 1);
  }

  // Coefficients of prod (X - theta_J), with a perturbation bound from the
  // elementary symmetric functions of |theta_J| + err.
  std::vector<Complex> coef{Complex(Real(1))};
  std::vector<Real> mag{Real(1)};
  std::vector<Real> mag_hi{Real(1)};
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Complex> next(coef.size() + 1);
    std::vector<Real> nmag(coef.size() + 1, Real(0)), nhi(coef.size() + 1, Real(0));
    Real a = abs(theta[k]);
    Real ahi = a + theta_err[k];
    for (std::size_t i = 0; i < coef.size(); ++i) {
      next[i + 1] += coef[i];
      next[i] -= theta[k] * coef[i];
      nmag[i + 1] += mag[i];
      nmag[i] += a * mag[i];
      nhi[i + 1] += mag_hi[i];
      nhi[i] += ahi * mag_hi[i];
    }
    coef = std::move(next);
    mag = std::move(nmag);
    mag_hi = std::move(nhi);
  }
  std::vector<BigInt> rounded(coef.size());
  for (std::size_t i = 0; i < coef.size(); ++i) {
    Real nearest = mp::round(coef[i].re);
    Real residual = mp::abs(coef[i].re - nearest) + mp::abs(coef[i].im) + (mag_hi[i] - mag[i]) +
                    mag_hi[i] * eps * (4 * static_cast<long>(count) + 4);
    if (residual >= Real(0.5))
      throw PrecisionError("Salem product coefficient not certified at " + std::to_string(ctx.mantissa_bits) +
                           " bits; increase precision");
    rounded[i] = nearest.convert_to<BigInt>();
  }
  IntPolynomial product(std::move(rounded));

  std::vector<ComplexRoot> tuple;
  for (std::size_t mask = 0; mask < count; ++mask)
    if (mask & 1) tuple.push_back({theta[mask], theta_err[mask]});
  return AlgebraicTuple::make(std::move(tuple), std::move(product), ctx);
}

}  // namespace selfsim::algebra
