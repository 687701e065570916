#include <algorithm>
#include <cmath>
#include <random>

#include "selfsim/errors.hpp"
#include "selfsim/fourier.hpp"
#include "selfsim/parallel.hpp"

namespace selfsim::fourier {

namespace {

std::vector<Vec> scan_directions(int d, int count, std::uint64_t seed) {
  std::vector<Vec> dirs;
  if (d == 1) {
    dirs.push_back(Vec::Ones(1));
    return dirs;
  }
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      double a = M_PI * k / count;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      dirs.push_back(v);
    }
    return dirs;
  }
  std::mt19937_64 rng(splitmix64(seed));
  for (int k = 0; k < count; ++k) {
    Vec v(d);
    for (int i = 0; i < d; ++i) {
      // Box-Muller keeps the stream independent of the standard library.
      double u1 = 1 - uniform01(rng), u2 = uniform01(rng);
      v(i) = std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
    }
    dirs.push_back(v.normalized());
  }
  return dirs;
}

double strip_mass_one(const ifs::PointCloud& pts, const Vec& dir, double delta) {
  const Eigen::Index n = pts.cols();
  std::vector<double> proj(n);
  for (Eigen::Index j = 0; j < n; ++j) proj[j] = dir.dot(pts.col(j));
  std::sort(proj.begin(), proj.end());
  const long long k0 = static_cast<long long>(std::floor(proj.front() / delta)) - 1;
  const long long k1 = static_cast<long long>(std::ceil(proj.back() / delta)) + 1;
  std::size_t best = 0;
  for (long long k = k0; k <= k1; ++k) {
    const double c = static_cast<double>(k) * delta;
    auto lo = std::lower_bound(proj.begin(), proj.end(), c - delta);
    auto hi = std::upper_bound(proj.begin(), proj.end(), c + delta);
    best = std::max(best, static_cast<std::size_t>(hi - lo));
  }
  return static_cast<double>(best) / static_cast<double>(n);
}

void check_scan(const CorrelationSample& samples, int directions, double delta) {
  if (!(delta > 0)) throw ContractError("delta must be positive");
  if (directions < 1) throw ContractError("need at least one direction");
  if (samples.differences.cols() == 0) throw ContractError("empty sample");
}

}  // namespace

CorrelationSample correlation_sample(const ifs::IFS& ifs, const ifs::ProbabilityVector& p, std::size_t n,
                                     std::uint64_t seed) {
  if (!p.positive()) throw ContractError("probabilities must be positive");
  auto x = ifs::chaos_game_sample(ifs, p, n, shard_seed(seed, 21, 0));
  auto y = ifs::chaos_game_sample(ifs, p, n, shard_seed(seed, 22, 0));
  return {x - y};
}

McEstimate curve_fourier_average(const CorrelationSample& samples, const Curve& curve, double s, int t_nodes) {
  if (t_nodes < 1) throw ContractError("t_nodes must be positive");
  const auto& X = samples.differences;
  const Eigen::Index n = X.cols();
  if (n == 0) throw ContractError("empty sample");
  Mat C(X.rows(), t_nodes);
  for (int k = 0; k < t_nodes; ++k) C.col(k) = curve((k + 0.5) / t_nodes);
  std::vector<double> vals(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    std::complex<double> acc = 0;
    for (int k = 0; k < t_nodes; ++k) acc += std::polar(1.0, s * C.col(k).dot(X.col(j)));
    vals[j] = std::abs(acc / static_cast<double>(t_nodes));
  }
  McEstimate e;
  for (double v : vals) e.mean += v;
  e.mean /= static_cast<double>(n);
  double var = 0;
  for (double v : vals) var += (v - e.mean) * (v - e.mean);
  e.std_error = n > 1 ? std::sqrt(var / static_cast<double>(n - 1) / static_cast<double>(n)) : 0;
  return e;
}

double strip_mass_scan(const CorrelationSample& samples, int directions, double delta, std::uint64_t seed) {
  check_scan(samples, directions, delta);
  auto dirs = scan_directions(static_cast<int>(samples.differences.rows()), directions, seed);
  std::vector<double> mass(dirs.size());
  const long nd = static_cast<long>(dirs.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < nd; ++i) mass[i] = strip_mass_one(samples.differences, dirs[i], delta);
  return *std::max_element(mass.begin(), mass.end());
}

double strip_mass_scan_serial(const CorrelationSample& samples, int directions, double delta, std::uint64_t seed) {
  check_scan(samples, directions, delta);
  double best = 0;
  for (const Vec& dir : scan_directions(static_cast<int>(samples.differences.rows()), directions, seed))
    best = std::max(best, strip_mass_one(samples.differences, dir, delta));
  return best;
}

std::complex<double> empirical_fourier(const ifs::PointCloud& points, const Vec& xi) {
  if (points.cols() == 0) throw ContractError("empty sample");
  std::complex<double> acc = 0;
  for (Eigen::Index j = 0; j < points.cols(); ++j) acc += std::polar(1.0, xi.dot(points.col(j)));
  return acc / static_cast<double>(points.cols());
}

}  // namespace selfsim::fourier
