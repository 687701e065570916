#include "doctest.h"

#include <cmath>

#include "selfsim/errors.hpp"
#include "selfsim/ifs.hpp"

using namespace selfsim;
using namespace selfsim::ifs;

namespace {

Mat rot(double a) {
  Mat R(2, 2);
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec v1(double x) { return Vec::Constant(1, x); }

IFS quarter_turn() {
  return IFS(2, {Similarity::make(0.5, Mat::Identity(2, 2), v2(1, 0)), Similarity::make(0.5, rot(M_PI / 2), v2(0, 0))});
}

IFS bernoulli(double lambda) {
  return IFS(1, {Similarity::make(lambda, Mat::Identity(1, 1), v1(1)),
                 Similarity::make(lambda, Mat::Identity(1, 1), v1(-1))});
}

const algebra::PrecisionContext kCtx{256, 1e-40};

}  // namespace

TEST_CASE("similarities validate their data") {
  CHECK_THROWS_AS(Similarity::make(1.0, Mat::Identity(1, 1), v1(0)), ContractError);
  CHECK_THROWS_AS(Similarity::make(0.0, Mat::Identity(1, 1), v1(0)), ContractError);
  CHECK_THROWS_AS(Similarity::make(0.5, 2 * Mat::Identity(2, 2), v2(0, 0)), ContractError);
  CHECK_THROWS_AS(Similarity::make(0.5, Mat::Identity(2, 2), v1(0)), ContractError);
  CHECK_THROWS_AS(IFS(1, {}), ContractError);
  CHECK_THROWS_AS(IFS(2, {Similarity::make(0.5, Mat::Identity(1, 1), v1(0))}), ContractError);
  auto s = Similarity::make(0.25, rot(0.3), v2(1, 2));
  CHECK(s.psi() == doctest::Approx(2.0));
  CHECK(s.dimension() == 2);
}

TEST_CASE("probability vectors") {
  CHECK_THROWS_AS(ProbabilityVector::from_doubles({0.5, 0.6}), ContractError);
  CHECK_THROWS_AS(ProbabilityVector::from_doubles({1.5, -0.5}), ContractError);
  CHECK_THROWS_AS(ProbabilityVector::from_rationals({Rational(1, 3), Rational(1, 3)}), ContractError);
  auto p = ProbabilityVector::from_rationals({Rational(1, 3), Rational(2, 3)});
  REQUIRE(p.exact);
  CHECK(p.weights[1] == doctest::Approx(2.0 / 3));
  CHECK(ProbabilityVector::uniform(4).positive());
  CHECK_FALSE(ProbabilityVector::from_doubles({1.0, 0.0}).positive());
}

TEST_CASE("word composition applies the first letter last") {
  auto sys = quarter_turn();
  Vec x = v2(0.3, -0.7);
  auto w = compose_word(sys, {0, 1, 1});
  Vec expect = sys.map(0).apply(sys.map(1).apply(sys.map(1).apply(x)));
  CHECK((w.apply(x) - expect).norm() < 1e-14);
  CHECK(w.ratio == doctest::Approx(0.125));
  CHECK_THROWS_AS(compose_word(sys, {}), ContractError);
}

TEST_CASE("fixed points") {
  auto s = Similarity::make(0.5, rot(M_PI / 2), v2(1, 0));
  Vec x = fixed_point(s);
  CHECK((s.apply(x) - x).norm() < 1e-14);
}

TEST_CASE("cut sets") {
  SUBCASE("uniform ratios give all words of one length") {
    auto cut = cut_set(bernoulli(0.5), 3);
    CHECK(cut.words.size() == 8);
    CHECK(cut.words.front() == Word{0, 0, 0});
    CHECK(cut.words.back() == Word{1, 1, 1});
    CHECK(verify_cut_set(cut, 2));
    CHECK(cut_set_weight(cut, {Rational(1, 3), Rational(2, 3)}) == 1);
  }
  SUBCASE("mixed ratios") {
    IFS sys(1, {Similarity::make(0.5, Mat::Identity(1, 1), v1(0)), Similarity::make(0.25, Mat::Identity(1, 1), v1(1))});
    auto cut = cut_set(sys, 2);
    // 00, 01, 1
    CHECK(cut.words.size() == 3);
    CHECK(verify_cut_set(cut, 2));
    CHECK(cut_set_weight(cut, {Rational(1, 5), Rational(4, 5)}) == 1);
  }
  SUBCASE("verification catches broken sets") {
    CutSet missing{{{0, 0}, {0, 1}}, 2};
    CHECK_FALSE(verify_cut_set(missing, 2));
    CutSet prefix{{{0}, {0, 1}, {1}}, 2};
    CHECK_FALSE(verify_cut_set(prefix, 2));
  }
  CHECK_THROWS_AS(cut_set(bernoulli(0.5), 20, 1000), ResourceError);
  CHECK_THROWS_AS(cut_set(bernoulli(0.5), 0), ContractError);
}

TEST_CASE("affine irreducibility") {
  auto rep = is_affinely_irreducible(quarter_turn());
  CHECK(rep.irreducible);
  CHECK(rep.rank == 2);
  // all maps preserve the x-axis
  IFS line(2, {Similarity::make(0.5, Mat::Identity(2, 2), v2(0, 0)), Similarity::make(0.5, Mat::Identity(2, 2), v2(1, 0))});
  auto lr = is_affinely_irreducible(line);
  CHECK_FALSE(lr.irreducible);
  CHECK(lr.rank == 1);
  // a single contraction has a point attractor
  IFS point(1, {Similarity::make(0.5, Mat::Identity(1, 1), v1(3))});
  CHECK_FALSE(is_affinely_irreducible(point).irreducible);
  CHECK(is_affinely_irreducible(bernoulli(0.6)).irreducible);
}

TEST_CASE("normalizing the first map") {
  auto sys = quarter_turn();
  auto n = normalize_first_map(sys);
  CHECK(n.map(0).translation.norm() == 0);
  // conjugation by a translation preserves the linear parts and moves
  // fixed points by the same offset
  Vec shift = fixed_point(sys.map(0));
  for (std::size_t i = 0; i < sys.size(); ++i) {
    CHECK((n.map(i).linear() - sys.map(i).linear()).norm() < 1e-15);
    CHECK((fixed_point(n.map(i)) - (fixed_point(sys.map(i)) - shift)).norm() < 1e-12);
  }
}

TEST_CASE("projection onto an invariant subspace") {
  IFS line(2, {Similarity::make(0.5, Mat::Identity(2, 2), v2(0, 0)), Similarity::make(0.5, Mat::Identity(2, 2), v2(1, 1))});
  Mat basis(2, 1);
  basis << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  auto p = project_ifs(line, basis);
  CHECK(p.dimension() == 1);
  CHECK(p.map(1).translation(0) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(project_ifs(quarter_turn(), basis), ContractError);
  Mat bad(2, 1);
  bad << 1, 1;
  CHECK_THROWS_AS(project_ifs(line, bad), ContractError);
}

TEST_CASE("construction from P.V. tuples") {
  SUBCASE("{2}") {
    auto t = algebra::AlgebraicTuple::outside_unit_circle(algebra::IntPolynomial{-2, 1}, kCtx);
    auto c = construct_from_pv_tuple(t, kCtx);
    CHECK(c.ifs.dimension() == 1);
    CHECK(c.ifs.size() == 2);
    CHECK(c.ifs.map(0).ratio == doctest::Approx(0.5));
    CHECK(c.ifs.map(0).translation.norm() == 0);
    CHECK(c.witness.eigen_residual < Real(1e-60));
  }
  SUBCASE("{2i, -2i}") {
    auto t = algebra::AlgebraicTuple::outside_unit_circle(algebra::IntPolynomial{4, 0, 1}, kCtx);
    auto c = construct_from_pv_tuple(t, kCtx);
    CHECK(c.ifs.dimension() == 2);
    CHECK(c.ifs.size() == 3);
    CHECK(c.ifs.map(1).ratio == doctest::Approx(0.5));
    CHECK(is_affinely_irreducible(c.ifs).irreducible);
  }
  SUBCASE("unequal moduli are rejected") {
    auto t = algebra::AlgebraicTuple::outside_unit_circle(algebra::IntPolynomial{6, -5, 1}, kCtx);
    CHECK_THROWS_WITH_AS(construct_from_pv_tuple(t, kCtx), "equal modulus required", ContractError);
  }
  SUBCASE("non-P.V. tuples are rejected") {
    auto t = algebra::AlgebraicTuple::from_root_indices(algebra::IntPolynomial{-2, 0, 1}, {1}, kCtx);
    CHECK_THROWS_AS(construct_from_pv_tuple(t, kCtx), ContractError);
  }
}

TEST_CASE("chaos game") {
  auto sys = quarter_turn();
  auto p = ProbabilityVector::uniform(2);
  auto a = chaos_game_sample(sys, p, 10'000, 42);
  auto b = chaos_game_sample_serial(sys, p, 10'000, 42);
  CHECK(a.cols() == 10'000);
  CHECK((a - b).norm() == 0);
  CHECK((chaos_game_sample(sys, p, 10'000, 43) - a).norm() > 0);
  // the attractor sits in the ball of radius |a|/(1-r) around the first fixed point
  for (Eigen::Index j = 0; j < a.cols(); ++j) CHECK_LE(a.col(j).norm(), 2.0 + 1e-9);
  CHECK_THROWS_AS(chaos_game_sample(sys, ProbabilityVector::uniform(3), 10, 1), ContractError);
}

TEST_CASE("slab mass") {
  // uniform measure on [-2, 2]
  auto pts = chaos_game_sample(bernoulli(0.5), ProbabilityVector::uniform(2), 200'000, 7);
  CHECK(slab_mass(pts, v1(1), 0, 0.4) == doctest::Approx(0.2).epsilon(0.03));
  CHECK(slab_mass(pts, v1(1), 0, 10) == 1.0);
  CHECK_THROWS_AS(slab_mass(pts, v1(2), 0, 1), ContractError);
}
