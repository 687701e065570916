#pragma once

// Self-similar iterated function systems on R^d.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "selfsim/algebra.hpp"
#include "selfsim/real.hpp"

namespace selfsim::ifs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using algebra::Rational;

/// x -> ratio * rotation * x + translation
struct Similarity {
  double ratio = 0.5;
  Mat rotation;
  Vec translation;

  /// Validates 0 < ratio < 1 and orthogonality of rotation.
  static Similarity make(double ratio, Mat rotation, Vec translation);

  int dimension() const { return static_cast<int>(translation.size()); }
  Mat linear() const { return ratio * rotation; }
  Vec apply(const Vec& x) const { return ratio * (rotation * x) + translation; }
  /// log2(1/ratio)
  double psi() const;
};

/// outer o inner
Similarity compose(const Similarity& outer, const Similarity& inner);

class IFS {
 public:
  IFS(int dimension, std::vector<Similarity> maps);

  int dimension() const { return dim_; }
  std::size_t size() const { return maps_.size(); }
  const Similarity& map(std::size_t i) const { return maps_.at(i); }
  const std::vector<Similarity>& maps() const { return maps_; }
  double max_ratio() const;

 private:
  int dim_;
  std::vector<Similarity> maps_;
};

struct ProbabilityVector {
  std::vector<double> weights;
  /// Present when the weights were given as exact rationals.
  std::optional<std::vector<Rational>> exact;

  static ProbabilityVector uniform(std::size_t n);
  static ProbabilityVector from_doubles(std::vector<double> w);
  static ProbabilityVector from_rationals(std::vector<Rational> w);

  std::size_t size() const { return weights.size(); }
  bool positive() const;
};

/// Map indices, 0-based.
using Word = std::vector<int>;

struct CutSet {
  std::vector<Word> words;
  double threshold = 0;
};

/// phi_{w_0} o ... o phi_{w_{n-1}}. Throws ContractError on the empty word.
Similarity compose_word(const IFS& ifs, const Word& w);

/// (I - rU)^{-1} a
Vec fixed_point(const Similarity& s);

/// Words whose psi-value first reaches t, depth first in lexicographic order.
CutSet cut_set(const IFS& ifs, double t, std::size_t max_words = 10'000'000);

/// Prefix-freeness plus completeness over an alphabet of the given size.
bool verify_cut_set(const CutSet& cut, std::size_t alphabet);

/// Sum over the cut set of prod p_{w_j}, exactly.
Rational cut_set_weight(const CutSet& cut, const std::vector<Rational>& p);

struct IrreducibilityReport {
  bool irreducible = false;
  int rank = 0;
  int dimension = 0;
  std::vector<double> singular_values;
  int max_word_length = 0;
};

IrreducibilityReport is_affinely_irreducible(const IFS& ifs, double rel_tol = 1e-8);

/// Conjugates by T x = x - (fixed point of map 0); map 0 comes out with
/// translation exactly zero.
IFS normalize_first_map(const IFS& ifs);

/// Restricts to span(basis) (orthonormal columns) in basis coordinates.
/// Throws ContractError when a rotation does not preserve the span.
IFS project_ifs(const IFS& ifs, const Mat& basis, double tol = 1e-9);

struct PvWitness {
  algebra::AlgebraicTuple thetas;
  Mat A;
  RealMatrix A_ext;
  /// Eigenvectors of A^{-1}, one per theta, in tuple order.
  std::vector<ComplexVector> zetas;
  RealVector xi;
  /// max_j |A^{-1} zeta_j - theta_j zeta_j| at extended precision.
  Real eigen_residual;
};

struct ConstructedSystem {
  IFS ifs;
  PvWitness witness;
};

/// The (k+1)-map system x -> Ax, x -> Ax + A^{1-i} xi, i = 1..k.
ConstructedSystem construct_from_pv_tuple(const algebra::AlgebraicTuple& tuple, const algebra::PrecisionContext& ctx);

/// Points stored as columns (d x n).
using PointCloud = Eigen::MatrixXd;

/// Random iteration from the fixed point of map 0, run in independent shards
/// of kShardSize points with derived seeds. The OpenMP and serial versions
/// return identical clouds.
PointCloud chaos_game_sample(const IFS& ifs, const ProbabilityVector& p, std::size_t n, std::uint64_t seed,
                             int burn_in = 64);
PointCloud chaos_game_sample_serial(const IFS& ifs, const ProbabilityVector& p, std::size_t n, std::uint64_t seed,
                                    int burn_in = 64);

/// Fraction of points with |<x, direction> - center| <= delta.
double slab_mass(const PointCloud& points, const Vec& direction, double center, double delta);

}  // namespace selfsim::ifs
