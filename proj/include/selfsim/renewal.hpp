#pragma once

// Random walks Y_n = X_1...X_n on the similarity group, first hits of the
// level t, and the renewal limit they converge to.

#include <cstdint>
#include <optional>
#include <vector>

#include "selfsim/algebra.hpp"
#include "selfsim/group.hpp"
#include "selfsim/ifs.hpp"

namespace selfsim::renewal {

using algebra::Rational;
using group::GroupElement;
using ifs::Mat;

struct WalkConfig {
  std::vector<double> weights;
  std::optional<std::vector<Rational>> exact_weights;
  std::vector<GroupElement> generators;

  // Discrete case only: g_i = h^{levels_i} n_i with n_i in the kernel.
  std::optional<GroupElement> h;
  double beta = 0;
  std::vector<long long> levels;
  std::vector<Mat> kernel;

  bool discrete() const { return h.has_value() && !kernel.empty(); }
  std::vector<double> psi_values() const;
  void validate() const;
};

/// Generators (log2 1/r_i, U_i) with weights p; no lattice data.
WalkConfig walk_config(const ifs::IFS& ifs, const ifs::ProbabilityVector& p);

/// Discrete walk with h = (beta, 2^beta A) taken from the certificate.
WalkConfig discrete_walk_config(const ifs::IFS& ifs, const ifs::ProbabilityVector& p,
                                const group::ConditionOneCertificate& cert1);

/// One-dimensional walk with trivial rotations and the given psi-values,
/// which must be integer multiples of beta.
WalkConfig lattice_walk(const std::vector<double>& psi_values, const ifs::ProbabilityVector& p, double beta);

struct FirstHitSample {
  /// gamma_{-t} Y_tau = h^level n with n = kernel[kernel_index].
  int kernel_index = 0;
  int level = 0;
  double overshoot = 0;
};

GroupElement first_hit_element(const WalkConfig& cfg, const FirstHitSample& s);

/// Throws ContractError when t is not a multiple of beta. Sharded with
/// derived seeds; the serial version returns identical samples.
std::vector<FirstHitSample> simulate_first_hits(const WalkConfig& cfg, double t, std::size_t n_samples,
                                                std::uint64_t seed);
std::vector<FirstHitSample> simulate_first_hits_serial(const WalkConfig& cfg, double t, std::size_t n_samples,
                                                       std::uint64_t seed);

/// psi(Y_tau) - t for walks whose psi-image need not be a lattice.
std::vector<double> simulate_psi_overshoots(const WalkConfig& cfg, double t, std::size_t n_samples,
                                            std::uint64_t seed);
std::vector<double> simulate_psi_overshoots_serial(const WalkConfig& cfg, double t, std::size_t n_samples,
                                                   std::uint64_t seed);

struct Atom {
  int kernel_index = 0;
  int level = 0;
  Rational mass;
};

struct LimitDistribution {
  std::vector<Atom> atoms;
  std::size_t kernel_size = 0;
  double mass(int kernel_index, int level) const;
};

/// mass(n, j) = (sum_{l_i > j} p_i) / (sum_i p_i l_i) / |N|, exactly.
LimitDistribution theoretical_nu(const WalkConfig& cfg);

struct DensityPiece {
  double from = 0;
  double to = 0;
  double density = 0;
};

/// rho_0 = alpha_i / lambda on [b_{i-1}, b_i) with b_i the sorted psi-values.
std::vector<DensityPiece> psi_marginal_density(const WalkConfig& cfg);

/// Half the L1 distance between the empirical (kernel, level) histogram and nu.
double tv_distance(const std::vector<FirstHitSample>& samples, const LimitDistribution& theory);
/// Same on the kernel marginal only.
double kernel_marginal_tv(const std::vector<FirstHitSample>& samples, const LimitDistribution& theory);
/// Binned total variation between overshoots and rho_0.
double psi_marginal_tv(const std::vector<double>& overshoots, const std::vector<DensityPiece>& density,
                       double bin_width);

}  // namespace selfsim::renewal
