#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "selfsim/errors.hpp"
#include "selfsim/ifs.hpp"
#include "selfsim/parallel.hpp"

namespace selfsim::ifs {

Similarity Similarity::make(double ratio, Mat rotation, Vec translation) {
  if (!(ratio > 0 && ratio < 1)) throw ContractError("contraction ratio must lie in (0,1)");
  const auto d = translation.size();
  if (rotation.rows() != d || rotation.cols() != d) throw ContractError("rotation and translation sizes differ");
  double resid = (rotation.transpose() * rotation - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  // 10 machine epsilons per dimension; config files give 17 significant digits.
  if (resid > 10 * std::numeric_limits<double>::epsilon() * std::max<Eigen::Index>(d, 1) * 4)
    throw ContractError("rotation is not orthogonal (residual " + std::to_string(resid) + ")");
  return {ratio, std::move(rotation), std::move(translation)};
}

double Similarity::psi() const { return -std::log2(ratio); }

Similarity compose(const Similarity& outer, const Similarity& inner) {
  return {outer.ratio * inner.ratio, outer.rotation * inner.rotation, outer.apply(inner.translation)};
}

IFS::IFS(int dimension, std::vector<Similarity> maps) : dim_(dimension), maps_(std::move(maps)) {
  if (dim_ < 1) throw ContractError("dimension must be positive");
  if (maps_.empty()) throw ContractError("an IFS needs at least one map");
  for (const Similarity& s : maps_)
    if (s.dimension() != dim_) throw ContractError("map dimension does not match the IFS");
}

double IFS::max_ratio() const {
  double r = 0;
  for (const Similarity& s : maps_) r = std::max(r, s.ratio);
  return r;
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  return from_rationals(std::vector<Rational>(n, Rational(1, static_cast<long long>(n))));
}

ProbabilityVector ProbabilityVector::from_doubles(std::vector<double> w) {
  if (w.empty()) throw ContractError("empty probability vector");
  double s = 0;
  for (double x : w) {
    if (!(x >= 0)) throw ContractError("negative probability weight");
    s += x;
  }
  if (std::abs(s - 1) > 1e-9) throw ContractError("probability weights must sum to 1");
  return {std::move(w), std::nullopt};
}

ProbabilityVector ProbabilityVector::from_rationals(std::vector<Rational> w) {
  if (w.empty()) throw ContractError("empty probability vector");
  Rational s = 0;
  std::vector<double> d;
  for (const Rational& x : w) {
    if (x < 0) throw ContractError("negative probability weight");
    s += x;
    d.push_back(x.convert_to<double>());
  }
  if (s != 1) throw ContractError("probability weights must sum to 1");
  return {std::move(d), std::move(w)};
}

bool ProbabilityVector::positive() const {
  return std::all_of(weights.begin(), weights.end(), [](double x) { return x > 0; });
}

Similarity compose_word(const IFS& ifs, const Word& w) {
  if (w.empty()) throw ContractError("empty word: the identity map must be handled by the caller");
  Similarity out = ifs.map(w.back());
  for (auto it = w.rbegin() + 1; it != w.rend(); ++it) out = compose(ifs.map(*it), out);
  return out;
}

Vec fixed_point(const Similarity& s) {
  const auto d = s.translation.size();
  Mat m = Mat::Identity(d, d) - s.linear();
  return m.partialPivLu().solve(s.translation);
}

CutSet cut_set(const IFS& ifs, double t, std::size_t max_words) {
  if (!(t > 0)) throw ContractError("cut-set threshold must be positive");
  std::vector<double> psi;
  for (const Similarity& s : ifs.maps()) psi.push_back(s.psi());
  const double cmp = t - 1e-12 * std::max(1.0, t);
  CutSet out;
  out.threshold = t;
  Word word;
  // Explicit stack of (depth, next symbol) keeps the order lexicographic.
  std::vector<double> acc{0.0};
  std::vector<int> next{0};
  const int ell = static_cast<int>(ifs.size());
  while (!next.empty()) {
    int& sym = next.back();
    if (sym == ell) {
      next.pop_back();
      acc.pop_back();
      if (!word.empty()) word.pop_back();
      continue;
    }
    int i = sym++;
    double v = acc.back() + psi[i];
    word.push_back(i);
    if (v >= cmp) {
      if (out.words.size() >= max_words)
        throw ResourceError("cut set exceeds " + std::to_string(max_words) +
                            " words; use a larger tolerance or the Monte Carlo estimate");
      out.words.push_back(word);
      word.pop_back();
    } else {
      acc.push_back(v);
      next.push_back(0);
    }
  }
  return out;
}

bool verify_cut_set(const CutSet& cut, std::size_t alphabet) {
  std::vector<Word> words = cut.words;
  std::sort(words.begin(), words.end());
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    const Word& a = words[i];
    const Word& b = words[i + 1];
    if (a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin())) return false;
  }
  for (const Word& w : words)
    for (int s : w)
      if (s < 0 || static_cast<std::size_t>(s) >= alphabet) return false;
  // Complete iff the uniform weights of a prefix-free set sum to 1.
  Rational total = 0;
  for (const Word& w : words) {
    Rational p = 1;
    for (std::size_t k = 0; k < w.size(); ++k) p /= static_cast<long long>(alphabet);
    total += p;
  }
  return total == 1;
}

Rational cut_set_weight(const CutSet& cut, const std::vector<Rational>& p) {
  Rational total = 0;
  for (const Word& w : cut.words) {
    Rational pw = 1;
    for (int s : w) pw *= p.at(s);
    total += pw;
  }
  return total;
}

namespace {

void words_of_length(std::size_t ell, int len, std::size_t cap, std::vector<Word>& out) {
  double count = std::pow(static_cast<double>(ell), len);
  if (count <= static_cast<double>(cap)) {
    Word w(len, 0);
    while (true) {
      out.push_back(w);
      int k = len - 1;
      while (k >= 0 && ++w[k] == static_cast<int>(ell)) w[k--] = 0;
      if (k < 0) break;
    }
    return;
  }
  std::mt19937_64 rng(0x5eedULL + len);
  for (std::size_t i = 0; i < cap; ++i) {
    Word w(len);
    for (int& s : w) s = static_cast<int>(rng() % ell);
    out.push_back(std::move(w));
  }
}

int numeric_rank(const std::vector<Vec>& pts, double rel_tol, std::vector<double>& sv) {
  const auto d = pts.front().size();
  Mat diffs(d, static_cast<Eigen::Index>(pts.size()));
  double diam = 0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    diffs.col(j) = pts[j] - pts[0];
    diam = std::max(diam, diffs.col(j).norm());
  }
  // Thin QR first so the SVD runs on a d x d factor.
  Eigen::HouseholderQR<Mat> qr(diffs.transpose());
  const auto m = std::min<Eigen::Index>(d, diffs.cols());
  Mat r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Mat> svd(r);
  Vec s = svd.singularValues();
  sv.assign(s.data(), s.data() + s.size());
  sv.resize(d, 0.0);
  if (diam == 0) return 0;
  // Singular values of the difference matrix scale with sqrt(#points).
  double cut = rel_tol * diam * std::sqrt(static_cast<double>(pts.size()));
  int rank = 0;
  for (double x : sv)
    if (x > cut) ++rank;
  return rank;
}

}  // namespace

IrreducibilityReport is_affinely_irreducible(const IFS& ifs, double rel_tol) {
  IrreducibilityReport rep;
  rep.dimension = ifs.dimension();
  std::vector<Vec> pts;
  int stable = 0;
  int prev = -1;
  for (int len : {1, 2, 4, 6}) {
    std::vector<Word> words;
    words_of_length(ifs.size(), len, 4096, words);
    for (const Word& w : words) pts.push_back(fixed_point(compose_word(ifs, w)));
    rep.rank = numeric_rank(pts, rel_tol, rep.singular_values);
    rep.max_word_length = len;
    if (rep.rank == ifs.dimension()) break;
    stable = rep.rank == prev ? stable + 1 : 0;
    prev = rep.rank;
    if (stable >= 2) break;
  }
  rep.irreducible = rep.rank == ifs.dimension();
  return rep;
}

IFS normalize_first_map(const IFS& ifs) {
  const Vec y = fixed_point(ifs.map(0));
  std::vector<Similarity> maps;
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    const Similarity& s = ifs.map(i);
    Similarity t = s;
    if (i == 0)
      t.translation = Vec::Zero(ifs.dimension());
    else
      t.translation = s.translation + s.linear() * y - y;
    maps.push_back(std::move(t));
  }
  return IFS(ifs.dimension(), std::move(maps));
}

IFS project_ifs(const IFS& ifs, const Mat& basis, double tol) {
  if (basis.rows() != ifs.dimension() || basis.cols() < 1 || basis.cols() > ifs.dimension())
    throw ContractError("subspace basis has the wrong shape");
  const auto k = basis.cols();
  double ortho = (basis.transpose() * basis - Mat::Identity(k, k)).cwiseAbs().maxCoeff();
  if (ortho > tol) throw ContractError("subspace basis is not orthonormal (residual " + std::to_string(ortho) + ")");
  std::vector<Similarity> maps;
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    const Similarity& s = ifs.map(i);
    Mat restricted = basis.transpose() * s.rotation * basis;
    double resid = (s.rotation * basis - basis * restricted).norm();
    if (resid > tol)
      throw ContractError("map " + std::to_string(i + 1) + " does not preserve the subspace (residual " +
                          std::to_string(resid) + ")");
    maps.push_back({s.ratio, restricted, basis.transpose() * s.translation});
  }
  return IFS(static_cast<int>(k), std::move(maps));
}

ConstructedSystem construct_from_pv_tuple(const algebra::AlgebraicTuple& tuple, const algebra::PrecisionContext& ctx) {
  auto cert = algebra::is_pv_tuple(tuple, ctx);
  if (cert.status != algebra::PvStatus::pv)
    throw ContractError("tuple is not a certified P.V. tuple (" + algebra::to_string(cert.status) + ")");
  PrecisionScope scope(ctx.mantissa_bits + 32);
  const auto& th = tuple.thetas();
  const Real modulus = abs(th[0].value);
  for (const auto& t : th) {
    if (boost::multiprecision::abs(abs(t.value) - modulus) > Real(1e-12) * modulus) throw ContractError("equal modulus required");
  }

  // Blocks in tuple order: a real theta gives a 1x1 block, a pair (theta,
  // conj theta) a 2x2 rotation-scaling block placed at the first of the two.
  const std::size_t k = th.size();
  RealMatrix Ainv(k, k), A(k, k);
  std::vector<ComplexVector> zetas(k, ComplexVector(k));
  std::vector<bool> placed(k, false);
  const Real inv_sqrt2 = 1 / boost::multiprecision::sqrt(Real(2));
  std::size_t p = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (placed[j]) continue;
    const Complex& z = th[j].value;
    if (z.im == 0) {
      Ainv(p, p) = z.re;
      A(p, p) = 1 / z.re;
      zetas[j][p] = Complex(Real(1), Real(0));
      placed[j] = true;
      ++p;
      continue;
    }
    std::size_t partner = k;
    for (std::size_t i = j + 1; i < k; ++i)
      if (!placed[i] && abs(th[i].value - conj(z)) <= th[i].error_radius + th[j].error_radius + Real(1e-30))
        partner = i;
    if (partner == k) throw ContractError("tuple is not closed under conjugation");
    std::size_t up = z.im > 0 ? j : partner;
    std::size_t down = up == j ? partner : j;
    Complex t = th[up].value;
    Complex tinv = Complex(Real(1)) / t;
    Ainv(p, p) = t.re;
    Ainv(p, p + 1) = -t.im;
    Ainv(p + 1, p) = t.im;
    Ainv(p + 1, p + 1) = t.re;
    A(p, p) = tinv.re;
    A(p, p + 1) = -tinv.im;
    A(p + 1, p) = tinv.im;
    A(p + 1, p + 1) = tinv.re;
    // [[a,-b],[b,a]] (1,-i) = (a+ib)(1,-i)
    zetas[up][p] = Complex(inv_sqrt2, Real(0));
    zetas[up][p + 1] = Complex(Real(0), -inv_sqrt2);
    zetas[down][p] = Complex(inv_sqrt2, Real(0));
    zetas[down][p + 1] = Complex(Real(0), inv_sqrt2);
    placed[j] = placed[partner] = true;
    p += 2;
  }

  RealVector xi(k, Real(0));
  for (const ComplexVector& z : zetas)
    for (std::size_t i = 0; i < k; ++i) xi[i] += z[i].re;

  Real resid = 0;
  for (std::size_t j = 0; j < k; ++j) {
    ComplexVector lhs = Ainv * zetas[j];
    for (std::size_t i = 0; i < k; ++i) {
      Real e = abs(lhs[i] - th[j].value * zetas[j][i]);
      if (e > resid) resid = e;
    }
  }
  const Real bound = boost::multiprecision::ldexp(Real(1), -static_cast<int>(ctx.mantissa_bits / 2));
  if (resid > bound) throw PrecisionError("eigenvector residual above 2^(-bits/2)");

  const int d = static_cast<int>(k);
  Mat Ad(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) Ad(r, c) = A(r, c).convert_to<double>();
  const double ratio = (1 / modulus).convert_to<double>();
  Mat U = Ad / ratio;

  std::vector<Similarity> maps;
  maps.push_back({ratio, U, Vec::Zero(d)});
  RealVector shift = xi;  // A^{1-i} xi, starting at i = 1
  for (std::size_t i = 1; i <= k; ++i) {
    Vec a(d);
    for (int r = 0; r < d; ++r) a(r) = shift[r].convert_to<double>();
    maps.push_back({ratio, U, a});
    shift = Ainv * shift;
  }
  return {IFS(d, std::move(maps)), PvWitness{tuple, Ad, A, std::move(zetas), std::move(xi), resid}};
}

namespace {

PointCloud run_shard(const IFS& ifs, const std::vector<double>& cum, std::size_t count, std::uint64_t seed,
                     int burn_in) {
  std::mt19937_64 rng(seed);
  Vec x = fixed_point(ifs.map(0));
  PointCloud out(ifs.dimension(), static_cast<Eigen::Index>(count));
  for (int b = 0; b < burn_in; ++b) x = ifs.map(pick_index(cum, uniform01(rng))).apply(x);
  for (std::size_t i = 0; i < count; ++i) {
    x = ifs.map(pick_index(cum, uniform01(rng))).apply(x);
    out.col(static_cast<Eigen::Index>(i)) = x;
  }
  return out;
}

void check_weights(const IFS& ifs, const ProbabilityVector& p) {
  if (p.size() != ifs.size()) throw ContractError("probability vector length does not match the IFS");
}

}  // namespace

PointCloud chaos_game_sample_serial(const IFS& ifs, const ProbabilityVector& p, std::size_t n, std::uint64_t seed,
                                    int burn_in) {
  check_weights(ifs, p);
  const auto cum = cumulative_weights(p.weights);
  PointCloud out(ifs.dimension(), static_cast<Eigen::Index>(n));
  const std::size_t shards = (n + kShardSize - 1) / kShardSize;
  for (std::size_t s = 0; s < shards; ++s) {
    std::size_t begin = s * kShardSize;
    std::size_t count = std::min(kShardSize, n - begin);
    out.middleCols(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(count)) =
        run_shard(ifs, cum, count, shard_seed(seed, 0, s), burn_in);
  }
  return out;
}

PointCloud chaos_game_sample(const IFS& ifs, const ProbabilityVector& p, std::size_t n, std::uint64_t seed,
                             int burn_in) {
  check_weights(ifs, p);
  const auto cum = cumulative_weights(p.weights);
  PointCloud out(ifs.dimension(), static_cast<Eigen::Index>(n));
  const long long shards = static_cast<long long>((n + kShardSize - 1) / kShardSize);
#pragma omp parallel for schedule(dynamic)
  for (long long s = 0; s < shards; ++s) {
    std::size_t begin = static_cast<std::size_t>(s) * kShardSize;
    std::size_t count = std::min(kShardSize, n - begin);
    out.middleCols(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(count)) =
        run_shard(ifs, cum, count, shard_seed(seed, 0, static_cast<std::uint64_t>(s)), burn_in);
  }
  return out;
}

double slab_mass(const PointCloud& points, const Vec& direction, double center, double delta) {
  if (std::abs(direction.norm() - 1) > 1e-9) throw ContractError("slab direction must be a unit vector");
  if (points.cols() == 0) return 0;
  Eigen::VectorXd proj = points.transpose() * direction;
  long hits = 0;
  for (Eigen::Index i = 0; i < proj.size(); ++i)
    if (std::abs(proj(i) - center) <= delta) ++hits;
  return static_cast<double>(hits) / static_cast<double>(proj.size());
}

}  // namespace selfsim::ifs
