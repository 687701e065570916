#include "doctest.h"

#include <cmath>

#include "pinned_oracles.hpp"
#include "selfsim/algebra.hpp"
#include "selfsim/errors.hpp"

using namespace selfsim;
using namespace selfsim::algebra;

namespace {
const PrecisionContext kCtx{256, 1e-40};
const IntPolynomial kGolden{-1, -1, 1};
}  // namespace

TEST_CASE("polynomial parsing and printing") {
  CHECK(IntPolynomial::parse("-1 -1 1") == kGolden);
  CHECK(IntPolynomial::parse("[4, 0, 1]") == IntPolynomial{4, 0, 1});
  CHECK(IntPolynomial::parse("1 2 0 0") == IntPolynomial{1, 2});
  CHECK(kGolden.to_string() == "-1 -1 1");
  CHECK(kGolden.degree() == 2);
  CHECK(kGolden.monic());
  CHECK_FALSE(IntPolynomial({1, 2}).monic());
  CHECK(IntPolynomial({1, 0, -1, -1, -1, 0, 0, 0, 0}).degree() == 4);
  CHECK_THROWS_AS(IntPolynomial::parse("1 x 2"), ParseError);
  CHECK_THROWS_AS(IntPolynomial::parse(""), ParseError);
  CHECK_THROWS_AS(IntPolynomial({0, 0}), ContractError);
}

TEST_CASE("reciprocal test, product and evaluation") {
  CHECK_FALSE(IntPolynomial({1, 2, 3}).reciprocal());
  CHECK(IntPolynomial({1, 0, 0, -1, -1, -1, 0, 0, 1}).reciprocal());
  CHECK(IntPolynomial({1, -1}) * IntPolynomial({1, 1}) == IntPolynomial{1, 0, -1});
  PrecisionScope scope(128);
  CHECK(kGolden.evaluate(Real(2)) == 1);
  Complex v = IntPolynomial{4, 0, 1}.evaluate(Complex(Real(0), Real(2)));
  CHECK(v.re == 0);
  CHECK(v.im == 0);
}

TEST_CASE("precision context rejects tiny mantissas") {
  CHECK_THROWS_AS(PrecisionContext(32, 1e-10), ContractError);
  CHECK_THROWS_AS(PrecisionContext(128, 0), ContractError);
}

TEST_CASE("roots of the golden polynomial") {
  auto roots = poly_roots(kGolden, kCtx);
  REQUIRE(roots.size() == 2);
  PrecisionScope scope(256);
  const Real phi = (1 + boost::multiprecision::sqrt(Real(5))) / 2;
  CHECK(roots[1].value.im == 0);
  CHECK(boost::multiprecision::abs(roots[1].value.re - phi) < Real(1e-60));
  CHECK(boost::multiprecision::abs(roots[0].value.re + 1 / phi) < Real(1e-60));
  CHECK(roots[0].error_radius <= Real(1e-40));
}

TEST_CASE("roots come in exact conjugate pairs sorted by real then imaginary part") {
  auto roots = poly_roots(IntPolynomial{4, 0, 1}, kCtx);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].value.im < 0);
  CHECK(roots[0].value.re == roots[1].value.re);
  CHECK(roots[0].value.im == -roots[1].value.im);
  CHECK(std::abs(roots[1].approx() - std::complex<double>(0, 2)) < 1e-15);

  auto cubic = poly_roots(IntPolynomial{-1, 0, 1, 1}, kCtx);
  REQUIRE(cubic.size() == 3);
  for (std::size_t i = 1; i < cubic.size(); ++i) CHECK(cubic[i - 1].value.re <= cubic[i].value.re);
}

TEST_CASE("algebraic tuples validate their input") {
  auto roots = poly_roots(IntPolynomial{4, 0, 1}, kCtx);
  CHECK_THROWS_AS(AlgebraicTuple::make({roots[1]}, IntPolynomial{4, 0, 1}, kCtx), ContractError);
  CHECK_THROWS_AS(AlgebraicTuple::make({roots[1], roots[1]}, IntPolynomial{4, 0, 1}, kCtx), ContractError);
  CHECK_THROWS_AS(AlgebraicTuple::from_root_indices(kGolden, {5}, kCtx), ContractError);
  auto t = AlgebraicTuple::outside_unit_circle(IntPolynomial{4, 0, 1}, kCtx);
  CHECK(t.size() == 2);
  auto m = AlgebraicTuple::match(kGolden, {{1.618033988749895, 0}}, 1e-9, kCtx);
  REQUIRE(m);
  CHECK(m->size() == 1);
  CHECK_FALSE(AlgebraicTuple::match(kGolden, {{1.7, 0}}, 1e-9, kCtx));
}

TEST_CASE("P.V. classification") {
  auto two = AlgebraicTuple::outside_unit_circle(IntPolynomial{-2, 1}, kCtx);
  CHECK(is_pv_tuple(two, kCtx).status == PvStatus::pv);

  auto gauss = AlgebraicTuple::outside_unit_circle(IntPolynomial{4, 0, 1}, kCtx);
  CHECK(is_pv_tuple(gauss, kCtx).status == PvStatus::pv);

  auto golden = AlgebraicTuple::outside_unit_circle(kGolden, kCtx);
  auto cert = is_pv_tuple(golden, kCtx);
  CHECK(cert.status == PvStatus::pv);
  CHECK(cert.inside_margin > Real(0.38));
  CHECK(cert.inside_margin < Real(0.382));

  // sqrt 2 alone leaves -sqrt 2 outside the circle
  auto sqrt2 = AlgebraicTuple::from_root_indices(IntPolynomial{-2, 0, 1}, {1}, kCtx);
  CHECK(is_pv_tuple(sqrt2, kCtx).status == PvStatus::not_pv);

  // a root on the circle excluded from the tuple
  auto with_one = AlgebraicTuple::from_root_indices(IntPolynomial{2, -3, 1}, {1}, kCtx);
  CHECK(is_pv_tuple(with_one, kCtx).status == PvStatus::not_pv);

  CHECK_THROWS_AS(AlgebraicTuple::outside_unit_circle(IntPolynomial{-1, 2}, kCtx), ContractError);
}

TEST_CASE("Salem product tuple") {
  const IntPolynomial salem{1, 0, 0, -1, -1, -1, 0, 0, 1};
  auto tuple = pv_tuple_from_salem_products(salem, kCtx);
  CHECK(tuple.size() == 8);
  CHECK(tuple.defining_poly().degree() == 16);
  auto cert = is_pv_tuple(tuple, kCtx);
  CHECK(cert.status == PvStatus::pv);
  const Real first = abs(tuple.thetas()[0].value);
  for (const auto& t : tuple.thetas()) CHECK(boost::multiprecision::abs(abs(t.value) - first) < Real(1e-12));
  CHECK_THROWS_AS(pv_tuple_from_salem_products(kGolden, kCtx), ContractError);
  CHECK_THROWS_AS(pv_tuple_from_salem_products(IntPolynomial{1, -3, 1}, kCtx), ContractError);
}

TEST_CASE("power sums are the Lucas numbers") {
  auto s = power_sums(kGolden, 60);
  REQUIRE(s.size() == 61);
  for (int n = 0; n <= 60; ++n) CHECK(s[n] == pinned::kLucas[n]);
  auto two = power_sums(IntPolynomial{-2, 1}, 10);
  CHECK(two[10] == 1024);
  CHECK_THROWS_AS(power_sums(IntPolynomial{1, 2}, 5), ContractError);
}

TEST_CASE("decay bound for the golden tuple") {
  auto golden = AlgebraicTuple::outside_unit_circle(kGolden, kCtx);
  auto bound = decay_bound(golden, IntPolynomial{1}, kCtx);
  CHECK_FALSE(bound.vacuous);
  CHECK(bound.delta <= Real(0.62));
  CHECK(bound.C >= Real(1));
  PrecisionScope scope(256);
  const Real phi = (1 + boost::multiprecision::sqrt(Real(5))) / 2;
  for (int n = 0; n <= 60; ++n)
    CHECK(nearest_int_dist(boost::multiprecision::pow(phi, n)) <= bound.C * boost::multiprecision::pow(bound.delta, n));

  auto two = AlgebraicTuple::outside_unit_circle(IntPolynomial{-2, 1}, kCtx);
  CHECK(decay_bound(two, IntPolynomial{3}, kCtx).vacuous);
  auto sqrt2 = AlgebraicTuple::from_root_indices(IntPolynomial{-2, 0, 1}, {1}, kCtx);
  CHECK_THROWS_AS(decay_bound(sqrt2, IntPolynomial{1}, kCtx), ContractError);
}

TEST_CASE("weighted power sums") {
  auto golden = AlgebraicTuple::outside_unit_circle(kGolden, kCtx);
  PrecisionScope scope(256);
  Complex v = weighted_power_sum(golden, IntPolynomial{1}, 10);
  // phi^10 = L_10 - psi^10
  CHECK(boost::multiprecision::abs(v.re - (Real(123) - boost::multiprecision::pow(Real(-0.6180339887498949), 10))) <
        Real(1e-12));
  auto gauss = AlgebraicTuple::outside_unit_circle(IntPolynomial{4, 0, 1}, kCtx);
  Complex g = weighted_power_sum(gauss, IntPolynomial{0, 1}, 3);
  // (2i)^4 + (-2i)^4
  CHECK(boost::multiprecision::abs(g.re - 32) < Real(1e-50));
  CHECK(boost::multiprecision::abs(g.im) < Real(1e-50));
}

TEST_CASE("rational reconstruction") {
  CHECK(rational_approximation(0.75, 1000, 1e-12) == Rational(3, 4));
  CHECK(rational_approximation(22.0 / 7.0, 1000, 1e-12) == Rational(22, 7));
  CHECK(rational_approximation(-2.5, 10, 1e-12) == Rational(-5, 2));
  CHECK(rational_approximation(0.0, 10, 1e-12) == Rational(0));
  CHECK_FALSE(rational_approximation(1.618033988749895, 1'000'000, 1e-9));
  CHECK_FALSE(rational_approximation(M_PI, 1'000'000, 1e-9));
  CHECK_FALSE(rational_approximation(1.0 / 1000003, 1'000'000, 1e-13));
  CHECK_THROWS_AS(rational_approximation(1.0, 0, 1e-9), ContractError);
}
