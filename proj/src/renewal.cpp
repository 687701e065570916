#include "selfsim/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>

#include "selfsim/errors.hpp"
#include "selfsim/parallel.hpp"

namespace selfsim::renewal {

namespace {

constexpr std::uint64_t kWalkStream = 31;
constexpr std::uint64_t kPsiStream = 32;
constexpr long long kMaxSteps = 1'000'000'000LL;

// Kernel arithmetic as index tables, so the walk state stays exact.
struct KernelTables {
  std::vector<std::vector<int>> mult;
  std::vector<int> conj;  // n -> h^{-1} n h
  std::vector<int> step;  // n_i with g_i = h^{l_i} n_i
};

KernelTables build_tables(const WalkConfig& cfg) {
  const std::size_t n = cfg.kernel.size();
  const double tol = 1e-8;
  auto find = [&](const Mat& U) {
    for (std::size_t i = 0; i < n; ++i)
      if ((cfg.kernel[i] - U).norm() <= tol) return static_cast<int>(i);
    throw ContractError("kernel is not closed under the walk");
  };
  KernelTables t;
  t.mult.assign(n, std::vector<int>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t.mult[a][b] = find(cfg.kernel[a] * cfg.kernel[b]);
  const Mat& Uh = cfg.h->U;
  for (std::size_t a = 0; a < n; ++a) t.conj.push_back(find(Uh.transpose() * cfg.kernel[a] * Uh));
  for (std::size_t i = 0; i < cfg.generators.size(); ++i)
    t.step.push_back(find(group::matrix_power(Uh, -cfg.levels[i]) * cfg.generators[i].U));
  return t;
}

long long lattice_target(const WalkConfig& cfg, double t) {
  if (!(t > 0)) throw ContractError("t must be positive");
  const double q = t / cfg.beta;
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9 * std::max(1.0, q)) throw ContractError("t is not in the lattice psi(G)");
  return static_cast<long long>(r);
}

template <class Sample, class Fn>
std::vector<Sample> sharded(std::size_t n, std::uint64_t seed, std::uint64_t stream, bool parallel, Fn&& one) {
  std::vector<Sample> out(n);
  const long shards = static_cast<long>((n + kShardSize - 1) / kShardSize);
  std::vector<std::exception_ptr> errors(shards);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long s = 0; s < shards; ++s) {
    try {
      std::mt19937_64 rng(shard_seed(seed, stream, static_cast<std::uint64_t>(s)));
      const std::size_t lo = static_cast<std::size_t>(s) * kShardSize;
      const std::size_t hi = std::min(n, lo + kShardSize);
      for (std::size_t k = lo; k < hi; ++k) out[k] = one(rng);
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<FirstHitSample> first_hits(const WalkConfig& cfg, double t, std::size_t n, std::uint64_t seed,
                                       bool parallel) {
  cfg.validate();
  if (!cfg.discrete()) throw ContractError("first-hit simulation needs a certified discrete group");
  const long long T = lattice_target(cfg, t);
  const KernelTables tab = build_tables(cfg);
  const auto cum = cumulative_weights(cfg.weights);
  const long long max_level = *std::max_element(cfg.levels.begin(), cfg.levels.end());
  return sharded<FirstHitSample>(n, seed, kWalkStream, parallel, [&](std::mt19937_64& rng) {
    long long L = 0;
    int m = 0;
    long long steps = 0;
    while (L < T) {
      if (++steps > kMaxSteps) throw ResourceError("walk exceeded the step cap");
      const std::size_t i = pick_index(cum, uniform01(rng));
      // Y h^{l} n = h^{L+l} (h^{-l} m h^{l}) n
      for (long long c = 0; c < cfg.levels[i]; ++c) m = tab.conj[m];
      m = tab.mult[m][tab.step[i]];
      L += cfg.levels[i];
    }
    FirstHitSample s;
    s.kernel_index = m;
    s.level = static_cast<int>(L - T);
    s.overshoot = cfg.beta * static_cast<double>(L - T);
    if (s.level < 0 || s.level >= max_level) throw Error("overshoot outside [0, max psi)");
    return s;
  });
}

std::vector<double> psi_overshoots(const WalkConfig& cfg, double t, std::size_t n, std::uint64_t seed,
                                   bool parallel) {
  cfg.validate();
  if (!(t > 0)) throw ContractError("t must be positive");
  const auto psi = cfg.psi_values();
  const auto cum = cumulative_weights(cfg.weights);
  const double max_psi = *std::max_element(psi.begin(), psi.end());
  return sharded<double>(n, seed, kPsiStream, parallel, [&](std::mt19937_64& rng) {
    double s = 0;
    long long steps = 0;
    while (s < t) {
      if (++steps > kMaxSteps) throw ResourceError("walk exceeded the step cap");
      s += psi[pick_index(cum, uniform01(rng))];
    }
    const double over = s - t;
    if (over < 0 || over >= max_psi) throw Error("overshoot outside [0, max psi)");
    return over;
  });
}

}  // namespace

std::vector<double> WalkConfig::psi_values() const {
  std::vector<double> out;
  for (const auto& g : generators) out.push_back(g.t);
  return out;
}

void WalkConfig::validate() const {
  if (generators.empty() || generators.size() != weights.size())
    throw ContractError("walk needs one positive weight per generator");
  double s = 0;
  for (double w : weights) {
    if (!(w > 0)) throw ContractError("walk weights must be positive");
    s += w;
  }
  if (std::abs(s - 1) > 1e-9) throw ContractError("walk weights must sum to 1");
  for (const auto& g : generators)
    if (!(g.t > 0)) throw ContractError("every generator needs psi > 0");
  if (h) {
    if (levels.size() != generators.size()) throw ContractError("one lattice level per generator");
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (levels[i] < 1 || std::abs(generators[i].t - beta * static_cast<double>(levels[i])) > 1e-9 * generators[i].t)
        throw ContractError("psi(g_i) != l_i beta");
  }
}

WalkConfig walk_config(const ifs::IFS& ifs, const ifs::ProbabilityVector& p) {
  if (p.size() != ifs.size()) throw ContractError("probability vector size does not match the number of maps");
  WalkConfig cfg;
  cfg.weights = p.weights;
  cfg.exact_weights = p.exact;
  for (const auto& s : ifs.maps()) cfg.generators.push_back({s.psi(), s.rotation});
  return cfg;
}

WalkConfig discrete_walk_config(const ifs::IFS& ifs, const ifs::ProbabilityVector& p,
                                const group::ConditionOneCertificate& cert1) {
  if (!cert1.holds) throw ContractError("condition one does not hold");
  WalkConfig cfg = walk_config(ifs, p);
  cfg.beta = cert1.beta;
  cfg.h = GroupElement{cert1.beta, std::exp2(cert1.beta) * cert1.generator_A};
  cfg.levels = cert1.coset_exponents;
  cfg.kernel = cert1.N_elements;
  cfg.validate();
  return cfg;
}

WalkConfig lattice_walk(const std::vector<double>& psi_values, const ifs::ProbabilityVector& p, double beta) {
  if (psi_values.size() != p.size()) throw ContractError("one weight per psi-value");
  if (!(beta > 0)) throw ContractError("beta must be positive");
  WalkConfig cfg;
  cfg.weights = p.weights;
  cfg.exact_weights = p.exact;
  for (double v : psi_values) {
    cfg.generators.push_back({v, Mat::Identity(1, 1)});
    cfg.levels.push_back(std::llround(v / beta));
  }
  cfg.beta = beta;
  cfg.h = GroupElement{beta, Mat::Identity(1, 1)};
  cfg.kernel = {Mat::Identity(1, 1)};
  cfg.validate();
  return cfg;
}

GroupElement first_hit_element(const WalkConfig& cfg, const FirstHitSample& s) {
  if (!cfg.discrete()) throw ContractError("discrete walk required");
  return group::power(*cfg.h, s.level) * GroupElement{0, cfg.kernel.at(s.kernel_index)};
}

std::vector<FirstHitSample> simulate_first_hits(const WalkConfig& cfg, double t, std::size_t n_samples,
                                                std::uint64_t seed) {
  return first_hits(cfg, t, n_samples, seed, true);
}

std::vector<FirstHitSample> simulate_first_hits_serial(const WalkConfig& cfg, double t, std::size_t n_samples,
                                                       std::uint64_t seed) {
  return first_hits(cfg, t, n_samples, seed, false);
}

std::vector<double> simulate_psi_overshoots(const WalkConfig& cfg, double t, std::size_t n_samples,
                                            std::uint64_t seed) {
  return psi_overshoots(cfg, t, n_samples, seed, true);
}

std::vector<double> simulate_psi_overshoots_serial(const WalkConfig& cfg, double t, std::size_t n_samples,
                                                   std::uint64_t seed) {
  return psi_overshoots(cfg, t, n_samples, seed, false);
}

double LimitDistribution::mass(int kernel_index, int level) const {
  for (const Atom& a : atoms)
    if (a.kernel_index == kernel_index && a.level == level) return a.mass.convert_to<double>();
  return 0;
}

LimitDistribution theoretical_nu(const WalkConfig& cfg) {
  cfg.validate();
  if (!cfg.discrete()) throw ContractError("the exact limit is only available for a discrete group");
  std::vector<Rational> p;
  if (cfg.exact_weights)
    p = *cfg.exact_weights;
  else
    for (double w : cfg.weights) p.emplace_back(w);
  Rational drift = 0;
  for (std::size_t i = 0; i < p.size(); ++i) drift += p[i] * cfg.levels[i];
  const long long top = *std::max_element(cfg.levels.begin(), cfg.levels.end());
  LimitDistribution nu;
  nu.kernel_size = cfg.kernel.size();
  const Rational inv_n(1, static_cast<long long>(cfg.kernel.size()));
  for (long long j = 0; j < top; ++j) {
    Rational tail = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (cfg.levels[i] > j) tail += p[i];
    for (std::size_t k = 0; k < cfg.kernel.size(); ++k)
      nu.atoms.push_back({static_cast<int>(k), static_cast<int>(j), tail / drift * inv_n});
  }
  return nu;
}

std::vector<DensityPiece> psi_marginal_density(const WalkConfig& cfg) {
  cfg.validate();
  std::vector<std::pair<double, double>> gp;
  for (std::size_t i = 0; i < cfg.generators.size(); ++i) gp.emplace_back(cfg.generators[i].t, cfg.weights[i]);
  std::sort(gp.begin(), gp.end());
  double lambda = 0;
  for (auto [v, w] : gp) lambda += v * w;
  std::vector<DensityPiece> out;
  double prev = 0;
  for (std::size_t i = 0; i < gp.size(); ++i) {
    double alpha = 0;
    for (std::size_t k = i; k < gp.size(); ++k) alpha += gp[k].second;
    if (gp[i].first > prev) out.push_back({prev, gp[i].first, alpha / lambda});
    prev = gp[i].first;
  }
  return out;
}

double tv_distance(const std::vector<FirstHitSample>& samples, const LimitDistribution& theory) {
  if (samples.empty()) throw ContractError("no samples");
  std::map<std::pair<int, int>, std::size_t> count;
  for (const auto& s : samples) ++count[{s.kernel_index, s.level}];
  std::map<std::pair<int, int>, double> diff;
  for (const Atom& a : theory.atoms) diff[{a.kernel_index, a.level}] = -a.mass.convert_to<double>();
  for (const auto& [k, c] : count) diff[k] += static_cast<double>(c) / static_cast<double>(samples.size());
  double tv = 0;
  for (const auto& [k, v] : diff) tv += std::abs(v);
  return std::min(1.0, tv / 2);
}

double kernel_marginal_tv(const std::vector<FirstHitSample>& samples, const LimitDistribution& theory) {
  if (samples.empty()) throw ContractError("no samples");
  std::map<int, std::size_t> count;
  for (const auto& s : samples) ++count[s.kernel_index];
  std::map<int, double> diff;
  for (const Atom& a : theory.atoms) diff[a.kernel_index] -= a.mass.convert_to<double>();
  for (const auto& [k, c] : count) diff[k] += static_cast<double>(c) / static_cast<double>(samples.size());
  double tv = 0;
  for (const auto& [k, v] : diff) tv += std::abs(v);
  return std::min(1.0, tv / 2);
}

double psi_marginal_tv(const std::vector<double>& overshoots, const std::vector<DensityPiece>& density,
                       double bin_width) {
  if (overshoots.empty()) throw ContractError("no samples");
  if (!(bin_width > 0)) throw ContractError("bin width must be positive");
  const double top = density.empty() ? 0 : density.back().to;
  const std::size_t bins = static_cast<std::size_t>(std::ceil(top / bin_width - 1e-9));
  std::vector<double> emp(bins + 1, 0), th(bins + 1, 0);
  for (double x : overshoots) {
    // Nudge up so lattice points exactly on a bin edge land in their own bin.
    std::size_t b = static_cast<std::size_t>(std::max(0.0, std::floor(x / bin_width + 1e-9)));
    emp[std::min(b, bins)] += 1;
  }
  for (double& e : emp) e /= static_cast<double>(overshoots.size());
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = b * bin_width, hi = lo + bin_width;
    for (const auto& piece : density) {
      const double a = std::max(lo, piece.from), c = std::min(hi, piece.to);
      if (c > a) th[b] += (c - a) * piece.density;
    }
  }
  double tv = 0;
  for (std::size_t b = 0; b <= bins; ++b) tv += std::abs(emp[b] - th[b]);
  return tv / 2;
}

}  // namespace selfsim::renewal
