#pragma once

// The subcommands behind the selfsim executable, kept in the library so tests
// can drive them without a process boundary.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selfsim/config.hpp"
#include "selfsim/fourier.hpp"
#include "selfsim/group.hpp"
#include "selfsim/ifs.hpp"

namespace selfsim::cli {

struct RunOptions {
  unsigned precision_bits = 256;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  std::size_t max_words = 10'000'000;
  std::size_t max_closure = 100'000;
  long long denom_bound = 1'000'000;
  std::string out_dir;

  /// Generator candidates examined when none is pinned.
  std::size_t max_generators = 16;
  std::optional<std::size_t> generator;
  std::optional<int> forced_k;

  bool witness = true;
  int witness_m = 4;
  int witness_n = 20;
  double witness_tol = 1e-8;
  double witness_floor = 1e-3;

  void validate() const;
};

enum class Verdict { non_rajchman_witnessed, conditions_hold, conditions_fail, inconclusive };
std::string to_string(Verdict v);

struct GeneratorResult {
  group::ConditionOneCertificate cert1;
  std::optional<group::ConditionTwoCertificate> cert2;
  double reverify_residual = 0;
};

struct DecisionReport {
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> reasons;
  ifs::IrreducibilityReport irreducibility;
  std::optional<group::DiscretenessReport> discreteness;
  std::vector<GeneratorResult> generators;
  std::optional<fourier::WitnessSequence> witness;
  /// Structured text: key-value lines with matrix blocks.
  std::string text;

  int exit_code() const { return verdict == Verdict::inconclusive ? 2 : 0; }
};

DecisionReport cmd_check(const config::SystemConfig& cfg, const RunOptions& run);

struct ScanOptions {
  std::vector<double> radii;
  int directions = 1;
  double tol = 1e-8;
  /// Replaces the radii by the witness sequence of the first holding generator.
  bool along_witness = false;
};

/// CSV: xi_norm,direction,re,im,abs,error_bound,status
std::string cmd_fourier_scan(const config::SystemConfig& cfg, const RunOptions& run, const ScanOptions& scan);

struct RenewalOptions {
  double t = 50;
  std::size_t samples = 100'000;
  bool psi_only = false;
  /// 0 picks beta for lattice walks and max psi / 10 otherwise.
  double bin_width = 0;
};

struct RenewalResult {
  /// kernel_index,level,empirical,theoretical (or bin_lo,bin_hi,... with psi_only)
  std::string csv;
  std::string summary;
  double tv = 0;
  double kernel_tv = 0;
};

RenewalResult cmd_renewal(const config::SystemConfig& cfg, const RunOptions& run, const RenewalOptions& opts);

struct ConstructOptions {
  algebra::IntPolynomial poly{1};
  /// Root indices in poly_roots order; all roots outside the unit circle when empty.
  std::vector<std::size_t> roots;
  /// Treat poly as a Salem polynomial and use its product tuple.
  bool salem = false;
  std::string name;
};

/// Throws ContractError when the tuple does not certify as P.V.
config::SystemConfig cmd_construct(const ConstructOptions& opts, const RunOptions& run);

}  // namespace selfsim::cli
