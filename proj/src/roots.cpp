#include <algorithm>
#include <cmath>
#include <complex>

#include "selfsim/algebra.hpp"
#include "selfsim/errors.hpp"

namespace selfsim::algebra {

namespace mp = boost::multiprecision;

namespace {

using cld = std::complex<long double>;

// Aberth-Ehrlich in long double, only to seed the extended-precision phase.
std::vector<cld> seed_roots(const std::vector<BigInt>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<long double> a(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) a[i] = c[i].convert_to<long double>();
  long double bound = 0;
  for (int i = 0; i < n; ++i) bound = std::max(bound, std::abs(a[i] / a[n]));
  const long double radius = std::min<long double>(1 + bound, 1e30L);

  std::vector<cld> z(n);
  for (int k = 0; k < n; ++k) {
    long double ang = 2 * 3.14159265358979323846L * k / n + 0.4L;
    z[k] = std::polar(radius * 0.9L, ang);
  }
  auto eval = [&](cld x, cld& dp) {
    cld p = a[n];
    dp = 0;
    for (int i = n - 1; i >= 0; --i) {
      dp = dp * x + p;
      p = p * x + a[i];
    }
    return p;
  };
  for (int iter = 0; iter < 500; ++iter) {
    long double moved = 0;
    for (int k = 0; k < n; ++k) {
      cld dp;
      cld p = eval(z[k], dp);
      if (p == cld(0)) continue;
      cld ratio = p / dp;
      cld s = 0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += cld(1) / (z[k] - z[j]);
      cld step = ratio / (cld(1) - ratio * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      moved = std::max(moved, std::abs(step) / std::max<long double>(1, std::abs(z[k])));
    }
    if (moved < 1e-17L) break;
  }
  return z;
}

struct Disk {
  Complex z;
  Real r;
};

bool disjoint(const std::vector<Disk>& d) {
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j)
      if (abs(d[i].z - d[j].z) <= d[i].r + d[j].r) return false;
  return true;
}

// Inclusion radii from Weierstrass corrections: every connected component of
// the union of D(z_k, n|W_k|) made of m disks holds exactly m roots.
std::vector<Disk> inclusion_disks(const IntPolynomial& p, const std::vector<Complex>& z) {
  const std::size_t n = z.size();
  const Real eps = working_epsilon();
  const Real lead = mp::abs(Real(p.leading()));
  std::vector<Disk> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex val = p.evaluate(z[k]);
    Real zk = abs(z[k]);
    Real rounding = eps * (4 * (p.degree() + 1)) * p.abs_evaluate(zk);
    Real denom = lead;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) denom *= abs(z[k] - z[j]);
    Real w;
    if (denom == 0)
      w = Real(1e300);
    else
      w = (abs(val) + rounding) / denom * (1 + eps * (8 * n + 8));
    out[k] = {z[k], w * n};
  }
  return out;
}

bool less_root(const ComplexRoot& a, const ComplexRoot& b) {
  if (a.value.re != b.value.re) return a.value.re < b.value.re;
  return a.value.im < b.value.im;
}

}  // namespace

PrecisionContext::PrecisionContext(unsigned bits, double tolerance) : mantissa_bits(bits), root_tolerance(tolerance) {
  if (bits < 64) throw ContractError("mantissa_bits must be at least 64");
  if (!(tolerance > 0)) throw ContractError("root_tolerance must be positive");
}

Real ComplexRoot::modulus_lower() const {
  Real m = abs(value);
  m -= error_radius + m * working_epsilon() * 4;
  return m < 0 ? Real(0) : m;
}

Real ComplexRoot::modulus_upper() const {
  Real m = abs(value);
  return m + error_radius + m * working_epsilon() * 4;
}

std::vector<ComplexRoot> poly_roots(const IntPolynomial& p, const PrecisionContext& ctx) {
  if (p.degree() < 1) throw ContractError("poly_roots needs degree >= 1");
  const int n = p.degree();
  const unsigned work_bits = ctx.mantissa_bits + 32;
  PrecisionScope scope(work_bits);

  std::vector<Complex> z;
  for (const cld& s : seed_roots(p.coefficients())) z.emplace_back(Real(s.real()), Real(s.imag()));

  std::vector<BigInt> dcoef = p.derivative();
  auto eval_d = [&](const Complex& x) {
    Complex acc(Real(dcoef.back()), Real(0));
    for (int i = static_cast<int>(dcoef.size()) - 2; i >= 0; --i) {
      acc = acc * x;
      acc.re += Real(dcoef[i]);
    }
    return acc;
  };

  const Real stop = mp::ldexp(Real(1), -static_cast<int>(work_bits) + 12);
  std::vector<Disk> disks;
  bool certified = false;
  for (int iter = 0; iter < 400; ++iter) {
    Real moved = 0;
    for (int k = 0; k < n; ++k) {
      Complex val = p.evaluate(z[k]);
      if (val.re == 0 && val.im == 0) continue;
      Complex ratio = val / eval_d(z[k]);
      Complex s;
      for (int j = 0; j < n; ++j)
        if (j != k) s += Complex(Real(1)) / (z[k] - z[j]);
      Complex step = ratio / (Complex(Real(1)) - ratio * s);
      if (!mp::isfinite(step.re) || !mp::isfinite(step.im)) continue;
      z[k] -= step;
      Real rel = abs(step) / std::max(Real(1), abs(z[k]));
      if (rel > moved) moved = rel;
    }
    if (moved < stop || iter % 8 == 7) {
      disks = inclusion_disks(p, z);
      bool small = std::all_of(disks.begin(), disks.end(), [&](const Disk& d) { return d.r <= ctx.root_tolerance / 4; });
      if (small && disjoint(disks)) {
        certified = true;
        break;
      }
      if (moved < stop && iter > 40) break;
    }
  }
  if (!certified)
    throw PrecisionError("roots of " + p.to_string() + " not separated at " + std::to_string(ctx.mantissa_bits) +
                         " bits; increase mantissa_bits");

  // Conjugate pairing. A disk whose mirror image meets no other disk holds a
  // real root, since the root set is closed under conjugation.
  std::vector<ComplexRoot> roots(n);
  std::vector<bool> done(n, false);
  for (int k = 0; k < n; ++k) {
    if (done[k]) continue;
    Complex mirror = conj(disks[k].z);
    int partner = -1;
    Real best = 0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      Real dist = abs(mirror - disks[j].z);
      if (dist <= disks[k].r + disks[j].r && (partner < 0 || dist < best)) {
        partner = j;
        best = dist;
      }
    }
    if (partner < 0) {
      if (mp::abs(disks[k].z.im) > disks[k].r)
        throw PrecisionError("conjugate of a root not isolated; increase mantissa_bits");
      roots[k] = {Complex(disks[k].z.re, Real(0)), disks[k].r + mp::abs(disks[k].z.im)};
      done[k] = true;
      continue;
    }
    int up = disks[k].z.im >= disks[partner].z.im ? k : partner;
    int down = up == k ? partner : k;
    Complex rep = disks[up].z;
    if (rep.im < 0) rep.im = -rep.im;
    Real r = std::max(disks[up].r + abs(disks[up].z - rep), disks[down].r + abs(disks[down].z - conj(rep)));
    roots[up] = {rep, r};
    roots[down] = {conj(rep), r};
    done[k] = done[partner] = true;
  }

  std::vector<Disk> snapped;
  for (const ComplexRoot& r : roots) snapped.push_back({r.value, r.error_radius});
  if (!disjoint(snapped) ||
      std::any_of(roots.begin(), roots.end(), [&](const ComplexRoot& r) { return r.error_radius > ctx.root_tolerance; }))
    throw PrecisionError("root disks overlap after conjugate pairing; increase mantissa_bits");

  std::sort(roots.begin(), roots.end(), less_root);
  return roots;
}

}  // namespace selfsim::algebra
