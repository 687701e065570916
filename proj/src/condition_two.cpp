#include <algorithm>
#include <cmath>
#include <limits>

#include "selfsim/errors.hpp"
#include "selfsim/group.hpp"

namespace selfsim::group {

namespace {

using cd = std::complex<double>;

struct Pairing {
  int map;
  int kernel;
  CVec x;  // V a_i
};

std::vector<Pairing> pairings(const ConditionOneCertificate& cert1, const std::vector<Vec>& translations) {
  std::vector<Pairing> out;
  for (std::size_t i = 0; i < translations.size(); ++i)
    for (std::size_t v = 0; v < cert1.N_elements.size(); ++v)
      out.push_back({static_cast<int>(i), static_cast<int>(v), (cert1.N_elements[v] * translations[i]).cast<cd>()});
  return out;
}

// <x, z> = sum x_l conj(z_l)
cd inner(const CVec& x, const CVec& z) { return z.dot(x); }

std::optional<Rational> as_rational(cd b, const ConditionTwoOptions& opts) {
  const double scale = std::max(1.0, std::abs(b));
  if (std::abs(b.imag()) > opts.tol * scale) return std::nullopt;
  return algebra::rational_approximation(b.real(), opts.denom_bound, opts.tol * scale);
}

cd eval_rational(const std::vector<Rational>& coeffs, cd x) {
  cd acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + it->convert_to<double>();
  return acc;
}

struct Normalized {
  bool ok = false;
  bool any_reference = false;
  std::pair<int, int> reference{-1, -1};
  std::vector<CVec> zetas;
  std::map<std::pair<int, int>, std::vector<Rational>> polys;
};

// Scale zeta_j so that <x*, zeta_j> = 1 for a reference pairing, then require
// every other pairing to interpolate through a rational polynomial of degree < k.
Normalized normalize(const std::vector<cd>& thetas, const std::vector<CVec>& zetas, const std::vector<Pairing>& pairs,
                     const ConditionTwoOptions& opts) {
  const std::size_t k = thetas.size();
  Normalized out;
  CMat vander(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < k; ++l) vander(j, l) = std::pow(thetas[j], static_cast<int>(l));
  Eigen::PartialPivLU<CMat> lu(vander);

  // Reference candidates by decreasing min_j |<x*, zeta_j>|.
  std::vector<std::pair<double, std::size_t>> order;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    double m = std::numeric_limits<double>::infinity();
    for (const CVec& z : zetas) m = std::min(m, std::abs(inner(pairs[p].x, z)));
    if (m > 1e-6) order.push_back({m, p});
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  out.any_reference = !order.empty();

  for (const auto& [m, ref] : order) {
    std::vector<CVec> scaled;
    for (const CVec& z : zetas) scaled.push_back(z / std::conj(inner(pairs[ref].x, z)));
    std::map<std::pair<int, int>, std::vector<Rational>> polys;
    bool ok = true;
    for (const Pairing& p : pairs) {
      CVec y(k);
      for (std::size_t j = 0; j < k; ++j) y(j) = inner(p.x, scaled[j]);
      CVec b = lu.solve(y);
      std::vector<Rational> coeffs;
      for (std::size_t l = 0; l < k && ok; ++l) {
        auto q = as_rational(b(l), opts);
        if (!q) ok = false;
        else coeffs.push_back(*q);
      }
      if (!ok) break;
      for (std::size_t j = 0; j < k; ++j) {
        if (std::abs(eval_rational(coeffs, thetas[j]) - y(j)) > opts.tol * std::max(1.0, std::abs(y(j)))) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      polys[{p.map, p.kernel}] = std::move(coeffs);
    }
    if (ok) {
      out.ok = true;
      out.reference = {pairs[ref].map, pairs[ref].kernel};
      out.zetas = std::move(scaled);
      out.polys = std::move(polys);
      return out;
    }
  }
  return out;
}

std::vector<double> poly_from_roots(const std::vector<cd>& roots, bool& real_ok) {
  std::vector<cd> c{1.0};
  for (cd r : roots) {
    std::vector<cd> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  real_ok = true;
  std::vector<double> out;
  for (cd x : c) {
    if (std::abs(x.imag()) > 1e-9 * std::max(1.0, std::abs(x))) real_ok = false;
    out.push_back(x.real());
  }
  return out;
}

bool near_integer(double x) { return std::abs(x - std::round(x)) <= 1e-7 * std::max(1.0, std::abs(x)); }

algebra::IntPolynomial round_poly(const std::vector<double>& c) {
  std::vector<algebra::BigInt> out;
  for (double x : c) out.emplace_back(static_cast<long long>(std::llround(x)));
  return algebra::IntPolynomial(std::move(out));
}

// Roots other than thetas strictly inside the unit disk, by companion matrix.
bool others_inside(const algebra::IntPolynomial& p, const std::vector<cd>& thetas) {
  const int n = p.degree();
  Mat comp = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coeff(i).convert_to<double>();
  Eigen::EigenSolver<Mat> es(comp, false);
  std::vector<bool> used(thetas.size(), false);
  for (Eigen::Index i = 0; i < n; ++i) {
    cd z = es.eigenvalues()(i);
    bool matched = false;
    for (std::size_t j = 0; j < thetas.size(); ++j) {
      if (!used[j] && std::abs(z - thetas[j]) <= 1e-6 * std::max(1.0, std::abs(z))) {
        used[j] = matched = true;
        break;
      }
    }
    if (!matched && std::abs(z) >= 1 - 1e-9) return false;
  }
  return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
}

// Monic integer polynomials vanishing on thetas: hints, the rounded product,
// then products with an unknown factor of degree e whose roots lie in the disk.
std::vector<algebra::IntPolynomial> integer_polynomials(const std::vector<cd>& thetas, const ConditionTwoOptions& opts) {
  std::vector<algebra::IntPolynomial> out;
  for (const auto& h : opts.pv_hints) {
    // Plain double Horner: this runs inside the parallel region.
    bool all = std::all_of(thetas.begin(), thetas.end(), [&](cd t) {
      cd val = 0;
      double mag = 0;
      for (int i = h.degree(); i >= 0; --i) {
        double c = h.coeff(i).convert_to<double>();
        val = val * t + c;
        mag = mag * std::abs(t) + std::abs(c);
      }
      return std::abs(val) <= 1e-7 * mag;
    });
    if (all) out.push_back(h);
  }
  bool real_ok = false;
  std::vector<double> prod = poly_from_roots(thetas, real_ok);
  if (real_ok && std::all_of(prod.begin(), prod.end(), near_integer)) {
    out.push_back(round_poly(prod));
    return out;
  }

  const std::size_t k = thetas.size();
  CMat vander(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < k; ++l) vander(j, l) = std::pow(thetas[j], static_cast<int>(l));
  Eigen::PartialPivLU<CMat> lu(vander);
  for (int e = 1; e <= opts.max_extension_degree; ++e) {
    const int n = static_cast<int>(k) + e;
    // Coefficient bounds from prod (X + |theta_j|) (X + 1)^e.
    std::vector<cd> bound_roots;
    for (cd t : thetas) bound_roots.push_back(-std::abs(t));
    for (int i = 0; i < e; ++i) bound_roots.push_back(-1.0);
    bool dummy = false;
    std::vector<double> bounds = poly_from_roots(bound_roots, dummy);
    double count = 1;
    for (int l = static_cast<int>(k); l < n; ++l) count *= 2 * std::floor(bounds[l] + 1e-9) + 1;
    if (count > static_cast<double>(opts.max_search)) break;

    std::vector<long long> hi(e), lim(e);
    for (int i = 0; i < e; ++i) {
      lim[i] = static_cast<long long>(std::floor(bounds[k + i] + 1e-9));
      hi[i] = -lim[i];
    }
    std::size_t found_here = 0;
    while (true) {
      CVec rhs(k);
      for (std::size_t j = 0; j < k; ++j) {
        cd acc = std::pow(thetas[j], n);
        for (int i = 0; i < e; ++i) acc += static_cast<double>(hi[i]) * std::pow(thetas[j], static_cast<int>(k) + i);
        rhs(j) = -acc;
      }
      CVec low = lu.solve(rhs);
      bool integral = true;
      for (std::size_t l = 0; l < k && integral; ++l) {
        double scale = std::max(1.0, std::abs(low(l)));
        integral = std::abs(low(l).imag()) <= 1e-7 * scale && near_integer(low(l).real());
      }
      if (integral && std::llround(low(0).real()) != 0) {
        std::vector<algebra::BigInt> c;
        for (std::size_t l = 0; l < k; ++l) c.emplace_back(static_cast<long long>(std::llround(low(l).real())));
        for (int i = 0; i < e; ++i) c.emplace_back(hi[i]);
        c.emplace_back(1);
        algebra::IntPolynomial p(std::move(c));
        if (others_inside(p, thetas)) {
          out.push_back(std::move(p));
          if (++found_here >= 4) break;
        }
      }
      int i = 0;
      while (i < e && ++hi[i] > lim[i]) hi[i] = -lim[i], ++i;
      if (i == e) break;
    }
    if (found_here > 0) break;
  }
  return out;
}

struct CandidateWork {
  std::vector<std::size_t> clusters;
  std::vector<cd> thetas;
  std::vector<CVec> zetas;
  Normalized norm;
  std::vector<algebra::IntPolynomial> polys;
  CandidateOutcome outcome;
  bool full_orbit = false;  // thetas are all roots of an integer polynomial of degree k
};

void analyse(CandidateWork& w, const std::vector<Pairing>& pairs, const ConditionTwoOptions& opts) {
  const std::size_t k = w.thetas.size();
  if (k == 1 && w.thetas[0].imag() == 0) {
    double t = w.thetas[0].real();
    auto q = algebra::rational_approximation(t, opts.denom_bound, opts.tol * std::max(1.0, std::abs(t)));
    if (q && boost::multiprecision::denominator(*q) != 1) {
      w.outcome.status = ConditionStatus::fails;
      w.outcome.reason = "theta = " + q->str() + " is rational but not an integer";
      return;
    }
  }
  w.norm = normalize(w.thetas, w.zetas, pairs, opts);
  w.polys = integer_polynomials(w.thetas, opts);
  for (const auto& p : w.polys)
    if (p.degree() == static_cast<int>(k)) w.full_orbit = true;
  if (!w.norm.any_reference) {
    w.outcome.reason = "every pairing is orthogonal to some eigenvector";
  } else if (!w.norm.ok) {
    if (w.full_orbit) {
      w.outcome.status = ConditionStatus::fails;
      w.outcome.reason = "pairings are not rational polynomials in theta of degree < k";
    } else {
      w.outcome.reason = "no rational polynomial of degree < k; the eigenvalue subset is not a full conjugate set";
    }
  } else if (w.polys.empty()) {
    w.outcome.reason = "no monic integer polynomial found within the search bounds";
  }
}

std::vector<std::vector<std::size_t>> canonical_subsets(const std::vector<std::vector<std::size_t>>& units) {
  std::vector<std::vector<std::size_t>> subsets;  // lists of unit indices
  const std::size_t u = units.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << u); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < u; ++i)
      if (mask >> i & 1) s.push_back(i);
    subsets.push_back(std::move(s));
  }
  auto size_of = [&](const std::vector<std::size_t>& s) {
    std::size_t n = 0;
    for (std::size_t i : s) n += units[i].size();
    return n;
  };
  std::stable_sort(subsets.begin(), subsets.end(), [&](const auto& a, const auto& b) {
    std::size_t sa = size_of(a), sb = size_of(b);
    return sa != sb ? sa < sb : a < b;
  });
  std::vector<std::vector<std::size_t>> out;
  for (const auto& s : subsets) {
    std::vector<std::size_t> clusters;
    for (std::size_t i : s) clusters.insert(clusters.end(), units[i].begin(), units[i].end());
    out.push_back(std::move(clusters));
  }
  return out;
}

bool try_certify(const CandidateWork& w, const algebra::PrecisionContext& ctx, ConditionTwoCertificate& cert) {
  for (const auto& p : w.polys) {
    std::optional<algebra::AlgebraicTuple> tuple;
    try {
      tuple = algebra::AlgebraicTuple::match(p, w.thetas, 1e-7, ctx);
    } catch (const PrecisionError&) {
      continue;
    }
    if (!tuple) continue;
    auto pv = algebra::is_pv_tuple(*tuple, ctx);
    if (pv.status != algebra::PvStatus::pv) continue;
    cert.status = ConditionStatus::holds;
    cert.k = static_cast<int>(w.thetas.size());
    cert.theta_values = w.thetas;
    cert.thetas = std::move(tuple);
    cert.pv = std::move(pv);
    cert.zetas = w.norm.zetas;
    cert.polys = w.norm.polys;
    cert.reference = w.norm.reference;
    return true;
  }
  return false;
}

// Repeated real eigenvalue: zeta is the projection of a rational reference
// translation onto the eigenspace, accepted when all pairings are rational.
bool repeated_fallback(const std::vector<EigenCluster>& eig, const std::vector<Pairing>& pairs,
                       const algebra::PrecisionContext& ctx, const ConditionTwoOptions& opts,
                       ConditionTwoCertificate& cert) {
  for (const Pairing& p : pairs)
    for (Eigen::Index l = 0; l < p.x.size(); ++l)
      if (!as_rational(p.x(l), opts)) {
        cert.reason = "repeated eigenvalue with irrational translations";
        return false;
      }
  for (std::size_t c = 0; c < eig.size(); ++c) {
    const EigenCluster& cl = eig[c];
    if (cl.multiplicity < 2 || !cl.real()) continue;
    if (opts.forced_k && *opts.forced_k != 1) continue;
    CMat basis(pairs.empty() ? 0 : pairs[0].x.size(), cl.multiplicity);
    for (int j = 0; j < cl.multiplicity; ++j) basis.col(j) = cl.vectors[j];
    for (const Pairing& ref : pairs) {
      CVec zeta = basis * (basis.adjoint() * ref.x);
      if (zeta.norm() <= 1e-6) continue;
      std::map<std::pair<int, int>, std::vector<Rational>> polys;
      bool ok = true;
      for (const Pairing& p : pairs) {
        auto q = as_rational(inner(p.x, zeta), opts);
        if (!q) {
          ok = false;
          break;
        }
        polys[{p.map, p.kernel}] = {*q};
      }
      if (!ok) continue;
      CandidateWork w;
      w.clusters = {c};
      w.thetas = {cl.value};
      w.polys = integer_polynomials(w.thetas, opts);
      w.norm.zetas = {zeta};
      w.norm.polys = polys;
      w.norm.reference = {ref.map, ref.kernel};
      if (try_certify(w, ctx, cert)) {
        cert.repeated_fallback = true;
        return true;
      }
    }
  }
  cert.reason = "repeated eigenvalue: no rational eigenvector found";
  return false;
}

}  // namespace

ConditionTwoCertificate check_condition_two(const ConditionOneCertificate& cert1, const std::vector<Vec>& translations,
                                            const algebra::PrecisionContext& ctx, const ConditionTwoOptions& opts) {
  if (!cert1.holds) throw ContractError("condition two needs condition one to hold");
  ConditionTwoCertificate cert;
  const auto eig = eigen_structure(cert1.generator_A);
  const auto pairs = pairings(cert1, translations);

  if (std::any_of(eig.begin(), eig.end(), [](const EigenCluster& c) { return c.multiplicity > 1; })) {
    if (!repeated_fallback(eig, pairs, ctx, opts, cert)) cert.status = ConditionStatus::inconclusive;
    return cert;
  }

  std::vector<std::vector<std::size_t>> units;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (eig[i].value.imag() < 0) continue;
    if (eig[i].real())
      units.push_back({i});
    else
      units.push_back({i, eig[i].conjugate});
  }
  std::vector<CandidateWork> work;
  for (auto& clusters : canonical_subsets(units)) {
    if (opts.forced_k && static_cast<int>(clusters.size()) != *opts.forced_k) continue;
    CandidateWork w;
    for (std::size_t c : clusters) {
      w.thetas.push_back(eig[c].value);
      w.zetas.push_back(eig[c].vectors[0]);
    }
    w.clusters = std::move(clusters);
    w.outcome.clusters = w.clusters;
    work.push_back(std::move(w));
  }
  if (work.empty()) {
    cert.status = ConditionStatus::fails;
    cert.reason = "no conjugation-closed eigenvalue subset of the requested size (conjugate pair inseparable)";
    return cert;
  }

  // Double-precision analysis is independent per candidate; certification at
  // extended precision then runs serially in canonical order.
  const long long count = static_cast<long long>(work.size());
#pragma omp parallel for schedule(dynamic)
  for (long long c = 0; c < count; ++c) analyse(work[c], pairs, opts);

  bool any_inconclusive = false;
  for (CandidateWork& w : work) {
    if (w.outcome.status == ConditionStatus::inconclusive && w.norm.ok && !w.polys.empty()) {
      if (try_certify(w, ctx, cert)) {
        w.outcome.status = ConditionStatus::holds;
        cert.candidates.push_back(w.outcome);
        return cert;
      }
      w.outcome.reason = "integer polynomials found but none certifies as P.V.";
    }
    if (w.outcome.status == ConditionStatus::inconclusive) any_inconclusive = true;
    cert.candidates.push_back(w.outcome);
  }
  cert.status = any_inconclusive ? ConditionStatus::inconclusive : ConditionStatus::fails;
  cert.reason = any_inconclusive ? "no candidate certified; see per-candidate reasons" : "every candidate fails";
  return cert;
}

double reverify_condition_two(const ConditionOneCertificate& cert1, const std::vector<Vec>& translations,
                              const ConditionTwoCertificate& cert2) {
  if (cert2.status != ConditionStatus::holds) throw ContractError("only holding certificates can be re-verified");
  const auto pairs = pairings(cert1, translations);
  const auto ref = std::find_if(pairs.begin(), pairs.end(), [&](const Pairing& p) {
    return p.map == cert2.reference.first && p.kernel == cert2.reference.second;
  });
  if (ref == pairs.end()) throw ContractError("reference pairing missing");
  const CMat inv = cert1.generator_A.inverse().cast<cd>();
  const auto d = inv.rows();
  double worst = 0;
  for (int j = 0; j < cert2.k; ++j) {
    const cd theta = cert2.theta_values[j];
    // Fresh eigenvectors through a QR-based null space, independent of the solver used before.
    CMat shifted = inv - theta * CMat::Identity(d, d);
    Eigen::ColPivHouseholderQR<CMat> qr(shifted.adjoint());
    CMat Q = qr.householderQ();
    const int mult = cert2.repeated_fallback ? static_cast<int>(d - qr.rank()) : 1;
    CMat basis = Q.rightCols(std::max(mult, 1));
    CVec zeta;
    if (cert2.repeated_fallback)
      zeta = basis * (basis.adjoint() * ref->x);
    else
      zeta = basis.col(0) / std::conj(inner(ref->x, basis.col(0)));
    worst = std::max(worst, (inv * zeta - theta * zeta).norm());
    for (const Pairing& p : pairs) {
      auto it = cert2.polys.find({p.map, p.kernel});
      if (it == cert2.polys.end()) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, std::abs(inner(p.x, zeta) - eval_rational(it->second, theta)));
    }
  }
  return worst;
}

}  // namespace selfsim::group
