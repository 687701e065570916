#include <algorithm>
#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/group.hpp"

namespace selfsim::group {

namespace {

using cd = std::complex<double>;

// Orthonormal basis of ker(M - lambda I) from the smallest singular values.
std::vector<CVec> eigenspace(const CMat& M, cd lambda, int mult) {
  const auto d = M.rows();
  CMat shifted = M - lambda * CMat::Identity(d, d);
  Eigen::JacobiSVD<CMat> svd(shifted, Eigen::ComputeFullV);
  std::vector<CVec> out;
  for (int j = 0; j < mult; ++j) out.push_back(svd.matrixV().col(d - 1 - j));
  return out;
}

void normalize_phase(CVec& v) {
  v.normalize();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-8) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

}  // namespace

std::vector<EigenCluster> eigen_structure(const Mat& A, double cluster_tol) {
  const auto d = A.rows();
  if (d == 0 || A.cols() != d) throw ContractError("eigen_structure needs a square matrix");
  CMat inv = A.inverse().cast<cd>();
  Eigen::ComplexEigenSolver<CMat> es(inv, false);
  std::vector<cd> vals(es.eigenvalues().data(), es.eigenvalues().data() + d);
  std::sort(vals.begin(), vals.end(), [](cd a, cd b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });

  std::vector<EigenCluster> clusters;
  std::vector<bool> used(vals.size(), false);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (used[i]) continue;
    const double scale = std::max(1.0, std::abs(vals[i]));
    cd sum = 0;
    int mult = 0;
    for (std::size_t j = i; j < vals.size(); ++j) {
      if (!used[j] && std::abs(vals[j] - vals[i]) <= cluster_tol * scale) {
        used[j] = true;
        sum += vals[j];
        ++mult;
      }
    }
    EigenCluster c;
    c.value = sum / static_cast<double>(mult);
    if (std::abs(c.value.imag()) <= cluster_tol * scale) c.value = {c.value.real(), 0.0};
    c.multiplicity = mult;
    clusters.push_back(std::move(c));
  }
  std::sort(clusters.begin(), clusters.end(), [](const EigenCluster& a, const EigenCluster& b) {
    return a.value.real() != b.value.real() ? a.value.real() < b.value.real() : a.value.imag() < b.value.imag();
  });

  for (std::size_t i = 0; i < clusters.size(); ++i) {
    EigenCluster& c = clusters[i];
    c.conjugate = i;
    if (!c.real()) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < clusters.size(); ++j) {
        double dist = std::abs(clusters[j].value - std::conj(c.value));
        if (j != i && dist < best) {
          best = dist;
          c.conjugate = j;
        }
      }
    }
  }
  // Representatives first (Im >= 0), conjugates copy their vectors.
  for (EigenCluster& c : clusters) {
    if (c.value.imag() < 0) continue;
    c.vectors = eigenspace(inv, c.value, c.multiplicity);
    if (c.multiplicity == 1) normalize_phase(c.vectors[0]);
    if (c.real() && c.multiplicity == 1) c.vectors[0] = c.vectors[0].real().cast<cd>();
  }
  for (EigenCluster& c : clusters) {
    if (c.value.imag() >= 0) continue;
    const EigenCluster& rep = clusters[c.conjugate];
    for (const CVec& v : rep.vectors) c.vectors.push_back(v.conjugate());
  }
  return clusters;
}

std::string to_string(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::holds:
      return "holds";
    case ConditionStatus::fails:
      return "fails";
    case ConditionStatus::inconclusive:
      return "inconclusive";
  }
  return "?";
}

}  // namespace selfsim::group
