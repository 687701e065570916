// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "pinned_oracles.hpp"
#include "properties.hpp"
#include "selfsim/commands.hpp"
#include "selfsim/renewal.hpp"

using namespace selfsim;
namespace mp = boost::multiprecision;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

ifs::Vec v1(double x) { return ifs::Vec::Constant(1, x); }

ifs::IFS bernoulli(double lambda) {
  return ifs::IFS(1, {ifs::Similarity::make(lambda, ifs::Mat::Identity(1, 1), v1(1)),
                      ifs::Similarity::make(lambda, ifs::Mat::Identity(1, 1), v1(-1))});
}

ifs::IFS quarter_turn() {
  ifs::Mat R(2, 2);
  R << 0, -1, 1, 0;
  ifs::Vec a(2), b(2);
  a << 1, 0;
  b << 0, 0;
  return ifs::IFS(2, {ifs::Similarity::make(0.5, ifs::Mat::Identity(2, 2), a), ifs::Similarity::make(0.5, R, b)});
}

const auto kHalf = ifs::ProbabilityVector::from_rationals({algebra::Rational(1, 2), algebra::Rational(1, 2)});
const algebra::PrecisionContext kCtx{256, 1e-40};
constexpr double kPhiInv = 0.6180339887498949;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Result fourier_oracle() {
  const double lambdas[4] = {0.3, 0.5, kPhiInv, 0.7};
  std::mt19937_64 rng(2024);
  double worst = 0;
  int points = 0;
  for (double lambda : lambdas) {
    fourier::Evaluator ev(bernoulli(lambda), kHalf, kCtx);
    for (int k = 0; k < 50; ++k) {
      const double xi = -100 + 200 * uniform01(rng);
      auto v = ev(v1(xi), 1e-10);
      PrecisionScope scope(256);
      auto o = fourier::mu_hat_product_oracle(Real(lambda), Real(xi));
      worst = std::max(worst, std::abs(v.value - o.value.convert_to<double>()));
      ++points;
    }
  }
  return {worst <= 1e-8, "max |mu_hat - product| " + sci(worst) + " over " + std::to_string(points) + " points"};
}

Result golden_witness() {
  fourier::Evaluator ev(bernoulli(kPhiInv), kHalf, kCtx);
  PrecisionScope scope(256);
  const Real phi = (1 + mp::sqrt(Real(5))) / 2;
  const Real two_pi = 2 * pi_real();
  double worst = 0, least = 1;
  for (int n = 0; n <= 25; ++n) {
    auto v = ev(RealVector{two_pi * mp::pow(phi, 4 + n)}, 1e-9);
    worst = std::max(worst, std::abs(v.value - pinned::kGoldenWitness[n]));
    least = std::min(least, std::abs(v.value));
  }
  const double c0 = pinned::kGoldenWitnessMin;
  return {worst <= 1e-6 && c0 > 0 && least >= c0 - 1e-6,
          "min |mu_hat(2 pi phi^(4+n))| " + sci(least) + " vs c0 " + sci(c0) + ", max deviation " + sci(worst)};
}

Result rajchman_contrast() {
  fourier::Evaluator ev(bernoulli(0.4), kHalf, kCtx);
  PrecisionScope scope(256);
  const Real two_pi = 2 * pi_real();
  int first = -1;
  double worst = 0;
  for (int n = 0; n <= 25; ++n) {
    auto v = ev(RealVector{two_pi * mp::pow(Real(5) / 2, n)}, 1e-9);
    worst = std::max(worst, std::abs(v.value - pinned::kFortyPercent[n]));
    if (first < 0 && std::abs(v.value) + v.error_bound < 1e-3) first = n;
  }
  return {first >= 0 && worst <= 1e-6,
          "first n with |mu_hat| < 1e-3: " + std::to_string(first) + ", max deviation from oracle " + sci(worst)};
}

Result pv_certification() {
  using algebra::AlgebraicTuple;
  using algebra::IntPolynomial;
  using algebra::PvStatus;
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream d;
  auto status = [&](const AlgebraicTuple& t) { return algebra::is_pv_tuple(t, kCtx).status; };
  ok &= status(AlgebraicTuple::outside_unit_circle(IntPolynomial{-2, 1}, kCtx)) == PvStatus::pv;
  ok &= status(AlgebraicTuple::outside_unit_circle(IntPolynomial{4, 0, 1}, kCtx)) == PvStatus::pv;
  ok &= status(AlgebraicTuple::from_root_indices(IntPolynomial{-2, 0, 1}, {1}, kCtx)) == PvStatus::not_pv;
  auto salem = algebra::pv_tuple_from_salem_products(IntPolynomial{1, 0, 0, -1, -1, -1, 0, 0, 1}, kCtx);
  ok &= salem.size() == 8 && status(salem) == PvStatus::pv;
  Real spread = 0;
  {
    PrecisionScope scope(256);
    const Real m0 = abs(salem.thetas()[0].value);
    for (const auto& t : salem.thetas()) {
      Real gap = mp::abs(abs(t.value) - m0);
      if (gap > spread) spread = gap;
    }
  }
  ok &= spread <= Real(1e-12);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ok &= secs < 10;
  d << "{2} pv, {2i,-2i} pv, {sqrt 2} not_pv, Salem 8-tuple pv with modulus spread " << sci(spread.convert_to<double>())
    << ", " << sci(secs) << " s";
  return {ok, d.str()};
}

Result decay_law() {
  const algebra::IntPolynomial golden{-1, -1, 1};
  auto tuple = algebra::AlgebraicTuple::outside_unit_circle(golden, kCtx);
  auto b = algebra::decay_bound(tuple, algebra::IntPolynomial{1}, kCtx);
  PrecisionScope scope(256);
  const Real phi = (1 + mp::sqrt(Real(5))) / 2;
  bool ok = b.delta <= Real(0.62) && b.delta > 0 && b.C > 0;
  int violations = 0;
  for (int n = 0; n <= 60; ++n)
    if (nearest_int_dist(mp::pow(phi, n)) > b.C * mp::pow(b.delta, n)) ++violations;
  auto s = algebra::power_sums(golden, 60);
  int lucas_mismatch = 0;
  for (int n = 0; n <= 60; ++n) lucas_mismatch += s[n] != pinned::kLucas[n];
  ok &= violations == 0 && lucas_mismatch == 0;
  return {ok, "C " + to_string(b.C, 6) + ", delta " + to_string(b.delta, 6) + ", bound violations " +
                  std::to_string(violations) + ", Lucas mismatches " + std::to_string(lucas_mismatch)};
}

Result decision_procedure() {
  auto sys = quarter_turn();
  auto rep = group::discreteness_report(sys, 1'000'000, 100'000);
  auto cand = group::generator_candidates(rep);
  std::vector<ifs::Vec> tr;
  const auto norm = ifs::normalize_first_map(sys);
  for (const auto& m : norm.maps()) tr.push_back(m.translation);
  auto index_of = [&](const ifs::Mat& A) -> std::size_t {
    for (std::size_t i = 0; i < cand.size(); ++i)
      if ((cand[i] - A).norm() < 1e-12) return i;
    return cand.size();
  };
  const std::size_t i1 = index_of(0.5 * ifs::Mat::Identity(2, 2));
  const std::size_t i2 = index_of(0.5 * sys.map(1).rotation);
  if (!rep.discrete() || i1 == cand.size() || i2 == cand.size()) return {false, "generators not found"};

  auto near = [](std::complex<double> a, std::complex<double> b) { return std::abs(a - b) < 1e-9; };
  auto c1a = group::check_condition_one(sys, rep, i1);
  auto c2a = group::check_condition_two(c1a, tr, kCtx);
  bool a_ok = c1a.holds && c2a.status == group::ConditionStatus::holds && c2a.k == 1 &&
              near(c2a.theta_values.at(0), 2.0);

  auto c1b = group::check_condition_one(sys, rep, i2);
  auto c2b = group::check_condition_two(c1b, tr, kCtx);
  bool b_ok = c1b.holds && c2b.status == group::ConditionStatus::holds && c2b.k == 2 &&
              c2b.theta_values.size() == 2 &&
              ((near(c2b.theta_values[0], {0, 2}) && near(c2b.theta_values[1], {0, -2})) ||
               (near(c2b.theta_values[0], {0, -2}) && near(c2b.theta_values[1], {0, 2})));

  group::ConditionTwoOptions forced;
  forced.forced_k = 1;
  auto c2f = group::check_condition_two(c1b, tr, kCtx, forced);
  bool f_ok = c2f.status == group::ConditionStatus::fails;

  const bool ok = rep.kernel.elements.size() == 4 && a_ok && b_ok && f_ok;
  return {ok, "|N| " + std::to_string(rep.kernel.elements.size()) + ", A1 " + group::to_string(c2a.status) +
                  " k=" + std::to_string(c2a.k) + ", A2 " + group::to_string(c2b.status) + " k=" +
                  std::to_string(c2b.k) + ", A2 with k=1 " + group::to_string(c2f.status)};
}

Result renewal_limit() {
  const auto t0 = std::chrono::steady_clock::now();
  auto lat = renewal::lattice_walk({1, 2}, kHalf, 1);
  auto nu = renewal::theoretical_nu(lat);
  bool masses = nu.atoms.size() == 2 && nu.atoms[0].mass == algebra::Rational(2, 3) &&
                nu.atoms[1].mass == algebra::Rational(1, 3);
  const double tv = renewal::tv_distance(renewal::simulate_first_hits(lat, 50, 100'000, 1), nu);

  auto sys = quarter_turn();
  auto rep = group::discreteness_report(sys, 1'000'000, 100'000);
  auto c1 = group::check_condition_one(sys, rep, 0);
  auto walk = renewal::discrete_walk_config(sys, kHalf, c1);
  const double ktv =
      renewal::kernel_marginal_tv(renewal::simulate_first_hits(walk, 50, 100'000, 1), renewal::theoretical_nu(walk));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {masses && tv <= 0.02 && ktv <= 0.02 && secs < 30,
          "lattice TV " + sci(tv) + ", kernel TV " + sci(ktv) + ", " + sci(secs) + " s"};
}

Result dist_sum() {
  // witness direction and expanding matrix from the certificate of the normalized golden system
  auto sys = ifs::normalize_first_map(bernoulli(kPhiInv));
  auto rep = group::discreteness_report(sys, 1'000'000, 10'000);
  auto c1 = group::check_condition_one(sys, rep, 0);
  std::vector<ifs::Vec> tr;
  for (const auto& m : sys.maps()) tr.push_back(m.translation);
  auto c2 = group::check_condition_two(c1, tr, kCtx);
  if (c2.status != group::ConditionStatus::holds) return {false, "golden certificate does not hold"};
  auto w = fourier::witness_sequence(sys, kHalf, c1, c2, 0, 0, 1e-8, kCtx);

  PrecisionScope scope(256);
  // B^{-1} = 1/A with A the exact contraction 1/phi
  RealMatrix M(1, 1);
  M(0, 0) = (1 + mp::sqrt(Real(5))) / 2;
  RealVector b{Real(tr[1](0))};
  auto s = fourier::dist_sum_diagnostic(b, M, {Real(w.base_xi(0))}, 40);
  const Real plateau = s[40] - s[30];

  std::mt19937_64 rng(77);
  int above = 0;
  double smallest = 1e300;
  for (int k = 0; k < 10; ++k) {
    const double xi = 2 * uniform01(rng) - 1;
    auto r = fourier::dist_sum_diagnostic(b, M, {Real(xi)}, 40);
    smallest = std::min(smallest, r[40].convert_to<double>());
    above += r[40] > 1;
  }
  return {plateau < Real(1e-6) && above == 10,
          "witness S_40 - S_30 " + sci(plateau.convert_to<double>()) + ", random S_40 min " + sci(smallest) + " (" +
              std::to_string(above) + "/10 above 1)"};
}

Result property_suites() {
  const std::pair<const char*, std::function<props::Outcome()>> suites[] = {
      {"hermitian", [] { return props::hermitian_symmetry(100, 201); }},
      {"modulus", [] { return props::modulus_bound(100, 202); }},
      {"recursion", [] { return props::self_similarity(100, 203); }},
      {"cut-set", [] { return props::cut_set_weight(100, 204); }},
      {"closure", [] { return props::closure_group_axioms(100, 205); }},
      {"reverify", [] { return props::certificate_reverification(100, 206); }},
  };
  bool ok = true;
  std::string d;
  for (const auto& [name, run] : suites) {
    auto o = run();
    ok &= o.passed() && o.instances == 100;
    d += std::string(d.empty() ? "" : ", ") + name + " " + std::to_string(o.instances - o.failures) + "/" +
         std::to_string(o.instances);
  }
  return {ok, d};
}

Result round_trip() {
  using cli::Verdict;
  cli::RunOptions run;
  std::string d;
  bool ok = true;
  auto one = [&](const char* label, cli::ConstructOptions opts, bool witness) {
    cli::RunOptions r = run;
    r.witness = witness;
    auto rep = cli::cmd_check(cli::cmd_construct(opts, run), r);
    const bool hold = rep.verdict == Verdict::conditions_hold || rep.verdict == Verdict::non_rajchman_witnessed;
    ok &= hold;
    d += std::string(d.empty() ? "" : ", ") + label + " " + cli::to_string(rep.verdict);
  };
  cli::ConstructOptions o;
  o.poly = algebra::IntPolynomial{-2, 1};
  one("{2}", o, true);
  o.poly = algebra::IntPolynomial{-1, -1, 1};
  one("{phi}", o, true);
  o.poly = algebra::IntPolynomial{4, 0, 1};
  one("{2i,-2i}", o, true);
  o.poly = algebra::IntPolynomial{1, 0, 0, -1, -1, -1, 0, 0, 1};
  o.salem = true;
  one("Salem 8-tuple (stages only)", o, false);
  return {ok, d};
}

}  // namespace

int main() {
  const std::pair<const char*, Result (*)()> criteria[] = {
      {"Fourier core against the product oracle", fourier_oracle},
      {"golden witness bounded below", golden_witness},
      {"Rajchman contrast at lambda = 0.4", rajchman_contrast},
      {"P.V. certification", pv_certification},
      {"decay law and Lucas numbers", decay_law},
      {"decision procedure on the quarter-turn system", decision_procedure},
      {"renewal limit", renewal_limit},
      {"dist-sum dichotomy", dist_sum},
      {"property suites", property_suites},
      {"construct and check round trip", round_trip},
  };
  int failed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Result v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::printf("criterion %2d %s  %s: %s [%.2f s]\n", index, v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed ? 1 : 0;
}
