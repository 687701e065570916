#pragma once

// The group generated by (log2 1/r_i, U_i): discreteness, the kernel N and
// the two-condition decision procedure for non-Rajchman systems.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "selfsim/algebra.hpp"
#include "selfsim/ifs.hpp"

namespace selfsim::group {

using ifs::Mat;
using ifs::Vec;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using algebra::Rational;

inline constexpr double kDefaultTol = 1e-10;

/// (t, U) acting on the right by x.(t,U) = 2^{-t} U^{-1} x.
struct GroupElement {
  double t = 0;
  Mat U;

  static GroupElement identity(int d) { return {0, Mat::Identity(d, d)}; }
  GroupElement inverse() const { return {-t, U.transpose()}; }
  Vec act(const Vec& x) const { return std::exp2(-t) * (U.transpose() * x); }
  int dimension() const { return static_cast<int>(U.rows()); }
};

GroupElement operator*(const GroupElement& a, const GroupElement& b);
GroupElement power(const GroupElement& g, long long n);
Mat matrix_power(const Mat& m, long long n);

/// Operator norm of 2^{-t1} U1^T - 2^{-t2} U2^T.
double d_op(const GroupElement& a, const GroupElement& b);

struct PsiImage {
  enum class Kind { lattice, dense_candidate };
  Kind kind = Kind::dense_candidate;
  double beta = 0;
  std::vector<long long> exponents;
  std::string note;
};

/// Integer relations among log2(1/r_i) through continued fractions of
/// L_i / L_1 with denominators <= denom_bound.
PsiImage log_lattice_detect(const std::vector<double>& ratios, long long denom_bound);

struct RotationKernel {
  bool finite = false;
  /// Identity first, then in discovery order. Partial list when not finite.
  std::vector<Mat> elements;

  /// Index of the element within tol of U, or -1.
  int find(const Mat& U, double tol = kDefaultTol) const;
};

/// Closure of the generators under products and inverses, and under
/// conjugation by each conjugator. Elements closer than tol are merged.
RotationKernel rotation_closure(const std::vector<Mat>& generators, std::size_t max_elements, double tol = kDefaultTol,
                                const std::vector<Mat>& conjugators = {});

struct DiscretenessReport {
  PsiImage psi;
  RotationKernel kernel;
  /// Element with psi = beta built from a Bezout combination of the generators.
  std::optional<GroupElement> h;
  bool discrete() const { return psi.kind == PsiImage::Kind::lattice && kernel.finite; }
};

DiscretenessReport discreteness_report(const ifs::IFS& ifs, long long denom_bound, std::size_t max_elements,
                                       double tol = kDefaultTol);

/// Contracting generators 2^{-beta} U_h V, V in N, sorted lexicographically by entries.
std::vector<Mat> generator_candidates(const DiscretenessReport& report);

struct ConditionOneCertificate {
  bool holds = false;
  std::vector<Mat> N_elements;
  Mat generator_A;
  std::size_t generator_index = 0;
  std::vector<long long> coset_exponents;
  /// Index into N_elements of V_i with r_i U_i = A^{l_i} V_i.
  std::vector<int> coset_elements;
  double residual = 0;
  double beta = 0;
  std::string note;
};

/// Throws ContractError("condition one undecidable at this precision")
/// unless the report is discrete.
ConditionOneCertificate check_condition_one(const ifs::IFS& ifs, const DiscretenessReport& report,
                                            std::size_t generator_index = 0, double tol = kDefaultTol);

struct EigenCluster {
  std::complex<double> value;  // eigenvalue of A^{-1}
  int multiplicity = 1;
  /// Orthonormal basis of the eigenspace.
  std::vector<CVec> vectors;
  /// Index of the conjugate cluster (itself when real).
  std::size_t conjugate = 0;
  bool real() const { return value.imag() == 0; }
};

/// Eigenvalues of A^{-1} clustered within cluster_tol (relative) and sorted by
/// (Re, Im). Simple eigenvectors have unit norm and first nonzero coordinate
/// positive real for the representative with Im >= 0; the conjugate cluster
/// uses the conjugate vector.
std::vector<EigenCluster> eigen_structure(const Mat& A, double cluster_tol = 1e-8);

enum class ConditionStatus { holds, fails, inconclusive };
std::string to_string(ConditionStatus s);

struct CandidateOutcome {
  std::vector<std::size_t> clusters;
  ConditionStatus status = ConditionStatus::inconclusive;
  std::string reason;
};

struct ConditionTwoOptions {
  long long denom_bound = 1'000'000;
  /// Absolute tolerance for eigen relations and rational reconstruction.
  double tol = 1e-9;
  std::optional<int> forced_k;
  std::vector<algebra::IntPolynomial> pv_hints;
  /// Degree headroom for the integer polynomial search.
  int max_extension_degree = 4;
  std::size_t max_search = 200'000;
};

struct ConditionTwoCertificate {
  ConditionStatus status = ConditionStatus::inconclusive;
  int k = 0;
  std::vector<std::complex<double>> theta_values;
  std::optional<algebra::AlgebraicTuple> thetas;
  std::optional<algebra::PVCertificate> pv;
  std::vector<CVec> zetas;
  /// (map index, N index) -> ascending rational coefficients.
  std::map<std::pair<int, int>, std::vector<Rational>> polys;
  std::pair<int, int> reference{-1, -1};
  std::vector<CandidateOutcome> candidates;
  std::string reason;
  bool repeated_fallback = false;
};

ConditionTwoCertificate check_condition_two(const ConditionOneCertificate& cert1, const std::vector<Vec>& translations,
                                            const algebra::PrecisionContext& ctx,
                                            const ConditionTwoOptions& opts = {});

/// Recomputes eigenvectors independently and checks every relation
/// |<V a_i, zeta_j> - P_{i,V}(theta_j)| <= 10 tol. Returns the largest residual.
double reverify_condition_two(const ConditionOneCertificate& cert1, const std::vector<Vec>& translations,
                              const ConditionTwoCertificate& cert2);

/// Smallest b <= bound with g_1^b = h^{b l_1} and g_1^b commuting with every g_j.
/// Throws ResourceError when the bound is exceeded.
long long find_commuting_power(const std::vector<GroupElement>& g, const GroupElement& h, long long l1, long long bound,
                               double tol = kDefaultTol);

}  // namespace selfsim::group
