#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "selfsim/errors.hpp"
#include "selfsim/group.hpp"

namespace selfsim::group {

GroupElement operator*(const GroupElement& a, const GroupElement& b) { return {a.t + b.t, a.U * b.U}; }

Mat matrix_power(const Mat& m, long long n) {
  Mat base = n < 0 ? Mat(m.inverse()) : m;
  n = n < 0 ? -n : n;
  Mat out = Mat::Identity(m.rows(), m.cols());
  while (n > 0) {
    if (n & 1) out = out * base;
    base = base * base;
    n >>= 1;
  }
  return out;
}

GroupElement power(const GroupElement& g, long long n) {
  Mat U = n < 0 ? matrix_power(g.U.transpose(), -n) : matrix_power(g.U, n);
  return {g.t * static_cast<double>(n), U};
}

double d_op(const GroupElement& a, const GroupElement& b) {
  if (a.dimension() != b.dimension()) throw ContractError("group elements of different dimension");
  Mat diff = std::exp2(-a.t) * a.U.transpose() - std::exp2(-b.t) * b.U.transpose();
  Eigen::JacobiSVD<Mat> svd(diff);
  return svd.singularValues()(0);
}

PsiImage log_lattice_detect(const std::vector<double>& ratios, long long denom_bound) {
  if (denom_bound < 1) throw ContractError("denominator bound must be >= 1");
  PsiImage out;
  if (ratios.empty()) return out;
  std::vector<double> L;
  for (double r : ratios) {
    if (!(r > 0 && r < 1)) throw ContractError("ratios must lie in (0,1)");
    L.push_back(-std::log2(r));
  }
  // L_i = (p_i / q_i) L_0, then clear denominators.
  std::vector<algebra::BigInt> num, den;
  for (double l : L) {
    double x = l / L[0];
    auto q = algebra::rational_approximation(x, denom_bound, 1e-11 * std::max(1.0, std::abs(x)));
    if (!q) {
      out.note = "no integer relation between log-contractions with denominators up to " + std::to_string(denom_bound);
      return out;
    }
    num.push_back(boost::multiprecision::numerator(*q));
    den.push_back(boost::multiprecision::denominator(*q));
  }
  algebra::BigInt lcm = 1;
  for (const auto& d : den) lcm = boost::multiprecision::lcm(lcm, d);
  std::vector<algebra::BigInt> m;
  algebra::BigInt g = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    m.push_back(num[i] * (lcm / den[i]));
    g = boost::multiprecision::gcd(g, m.back());
  }
  double total_L = 0, total_n = 0;
  for (std::size_t i = 0; i < L.size(); ++i) {
    algebra::BigInt n = m[i] / g;
    if (n > 1'000'000'000LL) {
      out.note = "lattice exponents too large";
      return out;
    }
    out.exponents.push_back(n.convert_to<long long>());
    total_L += L[i];
    total_n += static_cast<double>(out.exponents.back());
  }
  out.kind = PsiImage::Kind::lattice;
  out.beta = total_L / total_n;
  return out;
}

namespace {

// Lipschitz key for bucketed lookup: a fixed linear functional of the entries.
double matrix_key(const Mat& U) {
  double s = 0;
  for (Eigen::Index r = 0; r < U.rows(); ++r)
    for (Eigen::Index c = 0; c < U.cols(); ++c) s += U(r, c) * (0.5 + 0.37 * std::sin(1.0 + 3.1 * r + 7.3 * c));
  return s;
}

class ElementIndex {
 public:
  explicit ElementIndex(double tol) : tol_(tol), bucket_(std::max(1e-6, 1e4 * tol)) {}

  int find(const Mat& U, const std::vector<Mat>& elems) const {
    long long key = static_cast<long long>(std::floor(matrix_key(U) / bucket_));
    for (long long k = key - 1; k <= key + 1; ++k) {
      auto range = map_.equal_range(k);
      for (auto it = range.first; it != range.second; ++it)
        if ((elems[it->second] - U).norm() <= tol_) return it->second;
    }
    return -1;
  }
  void insert(const Mat& U, int index) {
    map_.emplace(static_cast<long long>(std::floor(matrix_key(U) / bucket_)), index);
  }

 private:
  double tol_;
  double bucket_;
  std::unordered_multimap<long long, int> map_;
};

}  // namespace

int RotationKernel::find(const Mat& U, double tol) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if ((elements[i] - U).norm() <= tol) return static_cast<int>(i);
  return -1;
}

RotationKernel rotation_closure(const std::vector<Mat>& generators, std::size_t max_elements, double tol,
                                const std::vector<Mat>& conjugators) {
  if (max_elements < 1) throw ContractError("max_elements must be positive");
  RotationKernel out;
  Eigen::Index d = 0;
  if (!generators.empty())
    d = generators[0].rows();
  else if (!conjugators.empty())
    d = conjugators[0].rows();
  if (d == 0) throw ContractError("rotation_closure needs a dimension");

  std::vector<Mat> steps;
  for (const Mat& g : generators) {
    steps.push_back(g);
    steps.push_back(g.transpose());
  }
  ElementIndex index(tol);
  out.elements.push_back(Mat::Identity(d, d));
  index.insert(out.elements[0], 0);
  std::deque<int> queue{0};
  auto add = [&](Mat m) {
    if (index.find(m, out.elements) >= 0) return true;
    if (out.elements.size() >= max_elements) return false;
    // Re-orthogonalize to stop drift along long product chains.
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    m = svd.matrixU() * svd.matrixV().transpose();
    out.elements.push_back(m);
    index.insert(out.elements.back(), static_cast<int>(out.elements.size()) - 1);
    queue.push_back(static_cast<int>(out.elements.size()) - 1);
    return true;
  };
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    const Mat e = out.elements[cur];
    for (const Mat& s : steps)
      if (!add(e * s)) return out;
    for (const Mat& c : conjugators) {
      if (!add(c * e * c.transpose())) return out;
      if (!add(c.transpose() * e * c)) return out;
    }
  }
  out.finite = true;
  return out;
}

namespace {

// Integers c with sum c_i n_i = gcd(n).
std::vector<long long> bezout(const std::vector<long long>& n) {
  std::vector<long long> c(n.size(), 0);
  c[0] = 1;
  long long g = n[0];
  for (std::size_t i = 1; i < n.size(); ++i) {
    // extended Euclid on (g, n_i)
    long long old_r = g, r = n[i], old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
      long long q = old_r / r;
      std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
      std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
      std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
    }
    for (std::size_t j = 0; j < i; ++j) c[j] *= old_s;
    c[i] = old_t;
    g = old_r;
  }
  if (g < 0)
    for (long long& x : c) x = -x;
  return c;
}

bool lex_less(const Mat& a, const Mat& b, double tol) {
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      if (a(r, c) < b(r, c) - tol) return true;
      if (a(r, c) > b(r, c) + tol) return false;
    }
  return false;
}

}  // namespace

DiscretenessReport discreteness_report(const ifs::IFS& ifs, long long denom_bound, std::size_t max_elements,
                                       double tol) {
  DiscretenessReport rep;
  std::vector<double> ratios;
  for (const auto& s : ifs.maps()) ratios.push_back(s.ratio);
  rep.psi = log_lattice_detect(ratios, denom_bound);
  const int d = ifs.dimension();
  if (rep.psi.kind != PsiImage::Kind::lattice) {
    // Without a lattice only the rotation parts can be closed up.
    std::vector<Mat> gens;
    for (const auto& s : ifs.maps()) gens.push_back(s.rotation);
    rep.kernel = rotation_closure(gens, max_elements, tol);
    return rep;
  }
  const auto& n = rep.psi.exponents;
  std::vector<long long> c = bezout(n);
  GroupElement h = GroupElement::identity(d);
  for (std::size_t i = 0; i < n.size(); ++i) {
    GroupElement gi{rep.psi.beta * static_cast<double>(n[i]), ifs.map(i).rotation};
    h = h * power(gi, c[i]);
  }
  h.t = rep.psi.beta;
  rep.h = h;
  std::vector<Mat> kernel_gens;
  for (std::size_t i = 0; i < n.size(); ++i)
    kernel_gens.push_back(matrix_power(h.U.transpose(), n[i]) * ifs.map(i).rotation);
  rep.kernel = rotation_closure(kernel_gens, max_elements, tol, {h.U});
  return rep;
}

std::vector<Mat> generator_candidates(const DiscretenessReport& report) {
  if (!report.discrete() || !report.h) return {};
  const double scale = std::exp2(-report.psi.beta);
  std::vector<Mat> out;
  for (const Mat& V : report.kernel.elements) out.push_back(scale * report.h->U * V);
  std::stable_sort(out.begin(), out.end(), [](const Mat& a, const Mat& b) { return lex_less(a, b, 1e-9); });
  return out;
}

ConditionOneCertificate check_condition_one(const ifs::IFS& ifs, const DiscretenessReport& report,
                                            std::size_t generator_index, double tol) {
  if (!report.discrete()) throw ContractError("condition one undecidable at this precision");
  auto candidates = generator_candidates(report);
  if (generator_index >= candidates.size()) throw ContractError("generator index out of range");
  ConditionOneCertificate cert;
  cert.N_elements = report.kernel.elements;
  cert.generator_A = candidates[generator_index];
  cert.generator_index = generator_index;
  cert.beta = report.psi.beta;
  cert.holds = true;
  for (std::size_t i = 0; i < ifs.size(); ++i) {
    const auto& s = ifs.map(i);
    long long l = report.psi.exponents[i];
    Mat V = matrix_power(cert.generator_A, -l) * s.linear();
    int at = report.kernel.find(V, std::max(tol, 1e-9));
    double resid = std::numeric_limits<double>::infinity();
    if (at >= 0) resid = (s.linear() - matrix_power(cert.generator_A, l) * cert.N_elements[at]).norm();
    cert.coset_exponents.push_back(l);
    cert.coset_elements.push_back(at);
    cert.residual = std::max(cert.residual, resid);
    if (at < 0 || resid > tol) {
      cert.holds = false;
      cert.note = "map " + std::to_string(i + 1) + " does not factor through A^l N";
    }
  }
  return cert;
}

long long find_commuting_power(const std::vector<GroupElement>& g, const GroupElement& h, long long l1, long long bound,
                               double tol) {
  if (g.empty()) throw ContractError("no generators");
  Mat Ub = Mat::Identity(g[0].dimension(), g[0].dimension());
  for (long long b = 1; b <= bound; ++b) {
    Ub = Ub * g[0].U;
    Mat target = matrix_power(h.U, b * l1);
    if ((Ub - target).norm() > tol) continue;
    bool commute = std::all_of(g.begin(), g.end(), [&](const GroupElement& x) {
      return (Ub * x.U - x.U * Ub).norm() <= tol;
    });
    if (commute) return b;
  }
  throw ResourceError("no commuting power up to " + std::to_string(bound) + "; kernel size may be miscertified");
}

}  // namespace selfsim::group
