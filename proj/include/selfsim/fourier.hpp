#pragma once

// Fourier transforms of self-similar measures: a certified evaluator built on
// the self-similarity relation, witness sequences, and Monte Carlo diagnostics
// of the correlation measure.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "selfsim/algebra.hpp"
#include "selfsim/group.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/real.hpp"

namespace selfsim::fourier {

using ifs::Mat;
using ifs::Vec;

struct FourierValue {
  std::complex<double> value;
  /// Certified bound on |value - mu_hat(xi)|, rounding of the double
  /// accumulation included.
  double error_bound = 0;
  std::size_t nodes = 0;
};

/// Barycenter b = sum p_i (r_i U_i b + a_i) and a radius R with |x - b| <= R on the attractor.
struct MeasureAnchor {
  Vec barycenter;
  double radius = 0;
};

MeasureAnchor measure_anchor(const ifs::IFS& ifs, const ifs::ProbabilityVector& p);

/// Evaluates mu_hat(xi) = integral of exp(i<xi, x>) by best-first expansion of
///   mu_hat(eta) = sum_i p_i exp(i<eta, a_i>) mu_hat(r_i U_i^T eta),
/// merging branches with the same linear part, until every leaf has
/// |eta| R <= tol. Leaves are replaced by exp(i<eta, b>).
/// Frequencies and phases are carried in Real at ctx.mantissa_bits.
class Evaluator {
 public:
  Evaluator(const ifs::IFS& ifs, const ifs::ProbabilityVector& p, const algebra::PrecisionContext& ctx,
            std::size_t max_nodes = 10'000'000);

  /// OpenMP over the frontier; returns the same bits as serial().
  FourierValue operator()(const RealVector& xi, double tol) const;
  FourierValue operator()(const Vec& xi, double tol) const;
  FourierValue serial(const RealVector& xi, double tol) const;

  /// Mantissa bits needed to keep phases accurate to tol at this frequency.
  unsigned required_bits(double xi_norm, double tol) const;

  const MeasureAnchor& anchor() const { return anchor_; }
  const algebra::PrecisionContext& context() const { return ctx_; }

 private:
  FourierValue run(const RealVector& xi, double tol, bool parallel) const;

  ifs::IFS ifs_;
  std::vector<double> p_;
  algebra::PrecisionContext ctx_;
  std::size_t max_nodes_;
  MeasureAnchor anchor_;
  double translation_scale_ = 1;
};

/// One-shot helpers; build an Evaluator to reuse the anchor across many frequencies.
FourierValue mu_hat(const ifs::IFS& ifs, const ifs::ProbabilityVector& p, const Vec& xi, double tol,
                    const algebra::PrecisionContext& ctx = {}, std::size_t max_nodes = 10'000'000);
FourierValue mu_hat_serial(const ifs::IFS& ifs, const ifs::ProbabilityVector& p, const Vec& xi, double tol,
                           const algebra::PrecisionContext& ctx = {}, std::size_t max_nodes = 10'000'000);

struct OracleValue {
  Real value;
  /// Bound on the dropped tail, sum over n >= terms of (lambda^n |xi|)^2 / 2.
  Real truncation;
};

/// prod_{n < terms} cos(lambda^n xi), in the current default precision.
OracleValue mu_hat_product_oracle(const Real& lambda, const Real& xi, int terms);
/// Picks terms so that lambda^terms |xi| < 1e-20.
OracleValue mu_hat_product_oracle(const Real& lambda, const Real& xi);

struct WitnessSequence {
  Vec base_xi;
  Mat B;
  int m = 0;
  double beta = 0;
  /// |2 pi B^{-m-n} xi| for n = 0..n_max.
  std::vector<double> frequency_norms;
  std::vector<FourierValue> values;
  double min_abs = 0;
  unsigned bits_used = 0;
};

/// mu_hat along 2 pi B^{-m-n} xi with B = A^T and xi = Re sum zeta_j.
/// Requires a holding certificate for a system whose first map has zero
/// translation. Precision is raised to what the largest frequency needs.
WitnessSequence witness_sequence(const ifs::IFS& ifs, const ifs::ProbabilityVector& p,
                                 const group::ConditionOneCertificate& cert1,
                                 const group::ConditionTwoCertificate& cert2, int m, int n_max, double tol,
                                 const algebra::PrecisionContext& ctx = {});

/// Partial sums S_J = sum_{j<=J} ||<b, M^j xi>||^2 for J = 0..J_max, where
/// ||.|| is the distance to the nearest integer. Pass the expanding matrix
/// M = B^{-1}: the sum then runs outward from xi.
std::vector<Real> dist_sum_diagnostic(const RealVector& b, const RealMatrix& M, const RealVector& xi, int J_max);

struct CorrelationSample {
  /// x - y for independent chaos-game points, as columns.
  ifs::PointCloud differences;
};

CorrelationSample correlation_sample(const ifs::IFS& ifs, const ifs::ProbabilityVector& p, std::size_t n,
                                     std::uint64_t seed);

struct McEstimate {
  double mean = 0;
  double std_error = 0;
};

using Curve = std::function<Vec(double)>;

/// Mean over samples of |int_0^1 exp(i s <c(t), x>) dt|, the inner integral
/// by the midpoint rule on t_nodes nodes.
McEstimate curve_fourier_average(const CorrelationSample& samples, const Curve& curve, double s, int t_nodes);

/// Largest fraction of projected samples within delta of a grid center
/// (pitch delta), over `directions` deterministic directions. In d = 1 the
/// only direction is +1; in d = 2 directions are equally spaced angles;
/// above that they are drawn from the seed.
double strip_mass_scan(const CorrelationSample& samples, int directions, double delta, std::uint64_t seed = 1);
double strip_mass_scan_serial(const CorrelationSample& samples, int directions, double delta,
                              std::uint64_t seed = 1);

/// Empirical mean of exp(i <xi, x>) over the columns of points.
std::complex<double> empirical_fourier(const ifs::PointCloud& points, const Vec& xi);

}  // namespace selfsim::fourier
