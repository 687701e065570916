#include "selfsim/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "selfsim/errors.hpp"

namespace selfsim::fourier {

namespace {

using cd = std::complex<double>;

// Rounding allowance per multiplication carried in double.
constexpr double kStepRounding = 0x1.0p-50;

struct Node {
  cd c;
  RealVector eta;
  Mat K;  // eta = K xi, used only to merge branches
  double psi = 0;
  int depth = 0;
};

struct Expansion {
  bool leaf = false;
  cd value;
  double error = 0;
  std::vector<Node> children;
};

Real dot(const RealVector& a, const RealVector& b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_of(const RealVector& v) {
  Real s = 0;
  for (const Real& x : v) s += x * x;
  return boost::multiprecision::sqrt(s).convert_to<double>();
}

cd unit_phase(const Real& phase) {
  Complex z = exp_i(phase);
  return z.to_double();
}

RealVector to_real(const Vec& v) {
  RealVector out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.emplace_back(v(i));
  return out;
}

}  // namespace

MeasureAnchor measure_anchor(const ifs::IFS& ifs, const ifs::ProbabilityVector& p) {
  if (p.size() != ifs.size()) throw ContractError("probability vector size does not match the number of maps");
  if (!p.positive()) throw ContractError("probabilities must be positive");
  const int d = ifs.dimension();
  Mat M = Mat::Identity(d, d);
  Vec rhs = Vec::Zero(d);
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    M -= p.weights[i] * ifs.map(i).linear();
    rhs += p.weights[i] * ifs.map(i).translation;
  }
  MeasureAnchor a;
  a.barycenter = M.partialPivLu().solve(rhs);
  double D = 0;
  for (const auto& s : ifs.maps()) D = std::max(D, (s.apply(a.barycenter) - a.barycenter).norm());
  a.radius = D / (1 - ifs.max_ratio()) * (1 + 1e-9);
  return a;
}

Evaluator::Evaluator(const ifs::IFS& ifs, const ifs::ProbabilityVector& p, const algebra::PrecisionContext& ctx,
                     std::size_t max_nodes)
    : ifs_(ifs), p_(p.weights), ctx_(ctx), max_nodes_(max_nodes), anchor_(measure_anchor(ifs, p)) {
  if (max_nodes_ < 1) throw ContractError("max_nodes must be positive");
  double s = std::max({1.0, anchor_.barycenter.norm(), anchor_.radius});
  for (const auto& m : ifs.maps()) s = std::max(s, m.translation.norm());
  translation_scale_ = s;
}

unsigned Evaluator::required_bits(double xi_norm, double tol) const {
  double mag = std::max(1.0, xi_norm * translation_scale_);
  return static_cast<unsigned>(std::ceil(std::log2(mag)) + std::ceil(std::log2(1 / tol)) + 16);
}

FourierValue Evaluator::operator()(const RealVector& xi, double tol) const { return run(xi, tol, true); }

FourierValue Evaluator::operator()(const Vec& xi, double tol) const {
  PrecisionScope scope(ctx_.mantissa_bits);
  return run(to_real(xi), tol, true);
}

FourierValue Evaluator::serial(const RealVector& xi, double tol) const { return run(xi, tol, false); }

FourierValue Evaluator::run(const RealVector& xi_in, double tol, bool parallel) const {
  if (!(tol > 0)) throw ContractError("tol must be positive");
  const int d = ifs_.dimension();
  if (static_cast<int>(xi_in.size()) != d) throw ContractError("frequency has the wrong dimension");
  PrecisionScope scope(ctx_.mantissa_bits);

  RealVector xi;
  for (const Real& x : xi_in) xi.push_back(Real(x));
  const double xi_norm = norm_of(xi);
  const unsigned need = required_bits(xi_norm, tol);
  if (need > ctx_.mantissa_bits)
    throw PrecisionError("frequency |xi| = " + std::to_string(xi_norm) + " needs about " + std::to_string(need) +
                         " mantissa bits, have " + std::to_string(ctx_.mantissa_bits));

  const std::size_t nmaps = ifs_.size();
  std::vector<RealMatrix> lin_t;  // r_i U_i^T
  std::vector<RealVector> trans;
  std::vector<Mat> lin_t_d;
  std::vector<double> psi;
  for (const auto& s : ifs_.maps()) {
    Mat L = s.linear().transpose();
    RealMatrix R(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) R(r, c) = Real(L(r, c));
    lin_t.push_back(std::move(R));
    lin_t_d.push_back(L);
    trans.push_back(to_real(s.translation));
    psi.push_back(s.psi());
  }
  const RealVector bary = to_real(anchor_.barycenter);
  const double R = anchor_.radius;
  const double min_psi = *std::min_element(psi.begin(), psi.end());

  auto expand = [&](const Node& n) {
    Expansion e;
    const double eta_norm = norm_of(n.eta);
    if (eta_norm * R <= tol) {
      e.leaf = true;
      e.value = n.c * unit_phase(dot(n.eta, bary));
      e.error = std::abs(n.c) * (eta_norm * R + kStepRounding * (n.depth + 2) * (n.depth > 0));
      return e;
    }
    for (std::size_t i = 0; i < nmaps; ++i) {
      Node ch;
      ch.c = n.c * p_[i] * unit_phase(dot(n.eta, trans[i]));
      ch.eta = lin_t[i] * n.eta;
      ch.K = lin_t_d[i] * n.K;
      ch.psi = n.psi + psi[i];
      ch.depth = n.depth + 1;
      e.children.push_back(std::move(ch));
    }
    return e;
  };

  std::vector<Node> nodes;
  std::multimap<double, std::size_t> frontier;
  nodes.push_back(Node{1.0, xi, Mat::Identity(d, d), 0.0, 0});
  frontier.emplace(0.0, 0);

  auto insert = [&](Node&& ch) {
    const double key_tol = 1e-10;
    const double mat_tol = 1e-10 * std::exp2(-ch.psi);
    auto lo = frontier.lower_bound(ch.psi - key_tol);
    auto hi = frontier.upper_bound(ch.psi + key_tol);
    for (auto it = lo; it != hi; ++it) {
      Node& other = nodes[it->second];
      if ((other.K - ch.K).cwiseAbs().maxCoeff() <= mat_tol) {
        other.c += ch.c;
        return;
      }
    }
    if (nodes.size() >= max_nodes_)
      throw ResourceError("cut-set expansion exceeded " + std::to_string(max_nodes_) +
                          " words; raise the cap, loosen tol, or use the Monte Carlo estimate");
    nodes.push_back(std::move(ch));
    frontier.emplace(nodes.back().psi, nodes.size() - 1);
  };

  FourierValue out;
  cd sum = 0;
  double err = 0;
  std::vector<std::size_t> batch;
  std::vector<Expansion> results;
  while (!frontier.empty()) {
    batch.clear();
    if (parallel) {
      // Children of a batch node all lie beyond the window, so the batch is
      // processed in the same order the one-at-a-time loop would use.
      const double window = frontier.begin()->first + min_psi - 1e-9;
      while (!frontier.empty() && (batch.empty() || frontier.begin()->first < window)) {
        batch.push_back(frontier.begin()->second);
        frontier.erase(frontier.begin());
      }
    } else {
      batch.push_back(frontier.begin()->second);
      frontier.erase(frontier.begin());
    }
    results.assign(batch.size(), Expansion{});
    const long nb = static_cast<long>(batch.size());
#pragma omp parallel for schedule(static) if (parallel && nb >= 32)
    for (long b = 0; b < nb; ++b) results[b] = expand(nodes[batch[b]]);
    for (std::size_t b = 0; b < batch.size(); ++b) {
      Expansion& e = results[b];
      if (e.leaf) {
        sum += e.value;
        err += e.error;
      } else {
        for (Node& ch : e.children) insert(std::move(ch));
      }
      nodes[batch[b]].eta.clear();
      nodes[batch[b]].eta.shrink_to_fit();
    }
  }
  out.value = sum;
  out.error_bound = err;
  out.nodes = nodes.size();
  return out;
}

FourierValue mu_hat(const ifs::IFS& ifs, const ifs::ProbabilityVector& p, const Vec& xi, double tol,
                    const algebra::PrecisionContext& ctx, std::size_t max_nodes) {
  return Evaluator(ifs, p, ctx, max_nodes)(xi, tol);
}

FourierValue mu_hat_serial(const ifs::IFS& ifs, const ifs::ProbabilityVector& p, const Vec& xi, double tol,
                           const algebra::PrecisionContext& ctx, std::size_t max_nodes) {
  Evaluator ev(ifs, p, ctx, max_nodes);
  PrecisionScope scope(ctx.mantissa_bits);
  return ev.serial(to_real(xi), tol);
}

OracleValue mu_hat_product_oracle(const Real& lambda, const Real& xi, int terms) {
  if (!(lambda > 0 && lambda < 1)) throw ContractError("lambda must lie in (0,1)");
  if (terms < 0) throw ContractError("terms must be nonnegative");
  OracleValue out{Real(1), Real(0)};
  Real x = xi;
  for (int n = 0; n < terms; ++n) {
    out.value *= cos(x);
    x *= lambda;
  }
  // x = lambda^terms xi; the tail sum of (lambda^n |xi|)^2 / 2 is geometric.
  out.truncation = x * x / (2 * (1 - lambda * lambda));
  return out;
}

OracleValue mu_hat_product_oracle(const Real& lambda, const Real& xi) {
  if (!(lambda > 0 && lambda < 1)) throw ContractError("lambda must lie in (0,1)");
  int terms = 0;
  Real x = abs(xi);
  const Real cutoff("1e-20");
  while (x >= cutoff) {
    x *= lambda;
    ++terms;
  }
  return mu_hat_product_oracle(lambda, xi, terms);
}

WitnessSequence witness_sequence(const ifs::IFS& ifs, const ifs::ProbabilityVector& p,
                                 const group::ConditionOneCertificate& cert1,
                                 const group::ConditionTwoCertificate& cert2, int m, int n_max, double tol,
                                 const algebra::PrecisionContext& ctx) {
  if (cert2.status != group::ConditionStatus::holds) throw ContractError("witness needs a holding certificate");
  if (cert2.zetas.empty()) throw ContractError("certificate carries no eigenvectors");
  if (m < 0 || n_max < 0) throw ContractError("m and n_max must be nonnegative");
  const int d = ifs.dimension();
  double scale = 1;
  for (const auto& s : ifs.maps()) scale = std::max(scale, s.translation.norm());
  if (ifs.map(0).translation.norm() > 1e-12 * scale)
    throw ContractError("first map must fix the origin; normalize the system first");
  if (cert1.generator_A.rows() != d) throw ContractError("certificate dimension does not match the system");

  group::CVec z = group::CVec::Zero(d);
  for (const auto& zeta : cert2.zetas) {
    if (zeta.size() != d) throw ContractError("certificate dimension does not match the system");
    z += zeta;
  }
  WitnessSequence w;
  w.base_xi = z.real();
  if (z.imag().norm() > std::max(1e-9, 10 * tol) * std::max(1.0, w.base_xi.norm()))
    throw ContractError("sum of eigenvectors is not real");
  if (w.base_xi.norm() == 0) throw ContractError("witness direction is zero");
  w.B = cert1.generator_A.transpose();
  w.m = m;
  w.beta = cert1.beta;

  const double top = std::exp2(cert1.beta * (m + n_max)) * 2 * M_PI * w.base_xi.norm();
  algebra::PrecisionContext wctx = ctx;
  Evaluator probe(ifs, p, ctx);
  wctx.mantissa_bits = std::max(ctx.mantissa_bits, probe.required_bits(top, tol) + 16);
  Evaluator ev(ifs, p, wctx);
  w.bits_used = wctx.mantissa_bits;

  PrecisionScope scope(wctx.mantissa_bits);
  // B^{-1} = A^{-T} = A / s^2 where A = s * orthogonal.
  const Mat& A = cert1.generator_A;
  Real s2 = 0;
  for (int r = 0; r < d; ++r) s2 += Real(A(r, 0)) * Real(A(r, 0));
  RealMatrix Minv(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) Minv(r, c) = Real(A(r, c)) / s2;
  RealVector eta = to_real(w.base_xi);
  const Real two_pi = 2 * pi_real();
  for (Real& x : eta) x *= two_pi;
  for (int i = 0; i < m; ++i) eta = Minv * eta;
  w.min_abs = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= n_max; ++n) {
    w.frequency_norms.push_back(norm_of(eta));
    w.values.push_back(ev(eta, tol));
    w.min_abs = std::min(w.min_abs, std::abs(w.values.back().value));
    eta = Minv * eta;
  }
  return w;
}

std::vector<Real> dist_sum_diagnostic(const RealVector& b, const RealMatrix& M, const RealVector& xi, int J_max) {
  if (J_max < 0) throw ContractError("J must be nonnegative");
  if (b.size() != xi.size() || M.rows() != xi.size() || M.cols() != xi.size())
    throw ContractError("dimension mismatch in dist_sum_diagnostic");
  std::vector<Real> sums;
  Real s = 0;
  RealVector v = xi;
  for (int j = 0; j <= J_max; ++j) {
    Real dist = nearest_int_dist(dot(b, v));
    s += dist * dist;
    sums.push_back(s);
    v = M * v;
  }
  return sums;
}

}  // namespace selfsim::fourier
