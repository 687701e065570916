#include "doctest.h"

#include "properties.hpp"

namespace {

void report(const props::Outcome& o) {
  INFO("first failure: " << o.first_failure);
  CHECK(o.instances == 100);
  CHECK(o.failures == 0);
}

}  // namespace

TEST_CASE("hermitian symmetry") { report(props::hermitian_symmetry(100, 101)); }
TEST_CASE("modulus bounded by one") { report(props::modulus_bound(100, 102)); }
TEST_CASE("self-similarity recursion") { report(props::self_similarity(100, 103)); }
TEST_CASE("cut-set weights sum to one") { report(props::cut_set_weight(100, 104)); }
TEST_CASE("closures satisfy the group axioms") { report(props::closure_group_axioms(100, 105)); }
TEST_CASE("holding certificates re-verify") {
  int holds = 0;
  auto o = props::certificate_reverification(100, 106, &holds);
  report(o);
  CHECK(holds == 100);
}
