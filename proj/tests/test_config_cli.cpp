#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "selfsim/commands.hpp"
#include "selfsim/errors.hpp"

using namespace selfsim;
using namespace selfsim::cli;

namespace {

std::string config_dir() {
  const char* d = std::getenv("SELFSIM_CONFIG_DIR");
  return d ? d : "configs";
}

config::SystemConfig load(const std::string& name) { return config::load_config(config_dir() + "/" + name); }

config::SystemConfig parse(const std::string& text) {
  std::istringstream in(text);
  return config::parse_config(in);
}

int parse_error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

RunOptions quiet() {
  RunOptions r;
  r.witness = false;
  return r;
}

}  // namespace

TEST_CASE("parsing the sample configs") {
  auto g = load("golden.ifs");
  CHECK(g.name == "golden");
  CHECK(g.dimension == 1);
  CHECK(g.maps.size() == 2);
  CHECK(g.maps[0].ratio == 0.6180339887498949);
  REQUIRE(g.weights.exact);
  CHECK((*g.weights.exact)[0] == algebra::Rational(1, 2));

  auto q = load("quarter_turn.ifs");
  CHECK(q.dimension == 2);
  CHECK(q.maps[1].rotation(0, 1) == -1.0);
  CHECK(q.maps[1].rotation(0, 0) == 0.0);

  // weights default to uniform
  auto b = load("bernoulli_04.ifs");
  CHECK(b.weights.weights == std::vector<double>{0.5, 0.5});
  CHECK(b.maps[0].ratio == 0.4);
}

TEST_CASE("parser features") {
  auto c = parse(
      "# comment\n"
      "dimension 2\n"
      "pv_hint 4 0 1\n"
      "map\n"
      "  ratio 1/3\n"
      "  rotation\n"
      "    0 -1\n"
      "    1 0\n"
      "  translation 1/2 -1\n"
      "end\n"
      "map\n"
      "  ratio 0.25\n"
      "  angle 0\n"
      "  translation 0 0\n"
      "end\n"
      "weights 1/4 3/4\n"
      "subspace rows 2\n"
      "  1 0\n"
      "  0 2\n");
  CHECK(c.maps[0].ratio == doctest::Approx(1.0 / 3));
  CHECK(c.maps[0].translation(0) == 0.5);
  CHECK(c.pv_hints.size() == 1);
  CHECK(c.pv_hints[0] == algebra::IntPolynomial{4, 0, 1});
  REQUIRE(c.subspace);
  CHECK((c.subspace->transpose() * *c.subspace - ifs::Mat::Identity(2, 2)).norm() < 1e-14);
  CHECK(c.weights.weights[1] == 0.75);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK(parse_error_line("dimension 1\nmap\n  ratio 2\n  translation 0\nend\n") == 5);
  CHECK(parse_error_line("dimension 1\nmap\n  ratio 1/2\n  translation 0 1\nend\n") == 4);
  CHECK(parse_error_line("dimension 1\nmap\n  ratio 1/2\n  translation 0\n") > 0);
  CHECK(parse_error_line("map\n") == 1);
  CHECK(parse_error_line("dimension 1\nbogus 3\n") == 2);
  CHECK(parse_error_line("dimension 1\nmap\n ratio 1/0\nend\n") == 3);
  CHECK(parse_error_line("dimension 1\nmap\n ratio 1/2\n translation 0\nend\nweights 1/2\n") == 6);
  CHECK(parse_error_line("dimension 1\n") > 0);
  CHECK_THROWS_AS(config::load_config("/nonexistent/file.ifs"), ContractError);
}

TEST_CASE("write then read reproduces the doubles") {
  for (const char* f : {"golden.ifs", "quarter_turn.ifs", "lattice_12.ifs"}) {
    auto a = load(f);
    std::ostringstream out;
    config::write_config(out, a);
    auto b = parse(out.str());
    REQUIRE(b.maps.size() == a.maps.size());
    for (std::size_t i = 0; i < a.maps.size(); ++i) {
      CHECK(b.maps[i].ratio == a.maps[i].ratio);
      CHECK(b.maps[i].rotation == a.maps[i].rotation);
      CHECK(b.maps[i].translation == a.maps[i].translation);
    }
    CHECK(b.weights.weights == a.weights.weights);
    CHECK(b.weights.exact.has_value() == a.weights.exact.has_value());
  }
}

TEST_CASE("check verdicts on the sample configs") {
  SUBCASE("golden") {
    auto rep = cmd_check(load("golden.ifs"), RunOptions{});
    CHECK(rep.verdict == Verdict::non_rajchman_witnessed);
    CHECK(rep.exit_code() == 0);
    REQUIRE(rep.witness);
    CHECK(rep.witness->min_abs > 1e-3);
    CHECK(rep.text.find("verdict non-rajchman-witnessed") == 0);
    CHECK(rep.text.find("theta_poly -1 -1 1") != std::string::npos);
  }
  SUBCASE("quarter turn") {
    auto rep = cmd_check(load("quarter_turn.ifs"), quiet());
    CHECK(rep.verdict == Verdict::conditions_hold);
    REQUIRE(rep.discreteness);
    CHECK(rep.discreteness->kernel.elements.size() == 4);
    CHECK(rep.generators.size() == 4);
    for (const auto& g : rep.generators) {
      REQUIRE(g.cert2);
      CHECK(g.cert2->status == group::ConditionStatus::holds);
      CHECK(g.reverify_residual <= 1e-8);
    }
  }
  SUBCASE("rational contraction fails") {
    auto rep = cmd_check(load("bernoulli_04.ifs"), quiet());
    CHECK(rep.verdict == Verdict::conditions_fail);
    CHECK(rep.exit_code() == 0);
  }
  SUBCASE("dense psi-image is inconclusive") {
    auto rep = cmd_check(load("half_third.ifs"), quiet());
    CHECK(rep.verdict == Verdict::inconclusive);
    CHECK(rep.exit_code() == 2);
    CHECK_FALSE(rep.reasons.empty());
  }
  SUBCASE("reducible systems are inconclusive") {
    auto cfg = parse(
        "dimension 2\nmap\n ratio 1/2\n translation 0 0\nend\nmap\n ratio 1/2\n translation 1 0\nend\n");
    auto rep = cmd_check(cfg, quiet());
    CHECK(rep.verdict == Verdict::inconclusive);
    CHECK_FALSE(rep.irreducibility.irreducible);
  }
  SUBCASE("a supplied invariant subspace makes the line system decidable") {
    auto cfg = parse(
        "dimension 2\nmap\n ratio 1/2\n translation 0 0\nend\nmap\n ratio 1/2\n translation 1 0\nend\n"
        "subspace rows 1\n 1 0\n");
    auto rep = cmd_check(cfg, quiet());
    CHECK(rep.verdict == Verdict::conditions_hold);
  }
  SUBCASE("pinning a generator and forcing k") {
    RunOptions r = quiet();
    r.forced_k = 1;
    auto rep = cmd_check(load("quarter_turn.ifs"), r);
    int fails = 0, holds = 0;
    for (const auto& g : rep.generators) {
      fails += g.cert2->status == group::ConditionStatus::fails;
      holds += g.cert2->status == group::ConditionStatus::holds;
    }
    CHECK(fails == 2);
    CHECK(holds == 2);
    RunOptions bad = quiet();
    bad.generator = 9;
    CHECK_THROWS_AS(cmd_check(load("quarter_turn.ifs"), bad), ContractError);
  }
}

TEST_CASE("run options validate") {
  RunOptions r;
  r.precision_bits = 32;
  CHECK_THROWS_AS(r.validate(), ContractError);
  r = RunOptions{};
  r.tol = 0;
  CHECK_THROWS_AS(r.validate(), ContractError);
  r = RunOptions{};
  r.witness_n = -1;
  CHECK_THROWS_AS(r.validate(), ContractError);
  CHECK_NOTHROW(RunOptions{}.validate());
}

TEST_CASE("fourier scan") {
  ScanOptions s;
  s.radii = {0, 1, 10};
  auto csv = cmd_fourier_scan(load("golden.ifs"), RunOptions{}, s);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "xi_norm,direction,re,im,abs,error_bound,status");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(line.substr(line.size() - 3) == ",ok");
  }
  CHECK(rows == 3);
  CHECK(csv == cmd_fourier_scan(load("golden.ifs"), RunOptions{}, s));

  ScanOptions planar;
  planar.radii = {5};
  planar.directions = 3;
  auto p = cmd_fourier_scan(load("quarter_turn.ifs"), RunOptions{}, planar);
  CHECK(std::count(p.begin(), p.end(), '\n') == 4);

  RunOptions low;
  low.precision_bits = 64;
  ScanOptions huge;
  huge.radii = {1e30};
  auto h = cmd_fourier_scan(load("golden.ifs"), low, huge);
  CHECK(h.find(",precision") != std::string::npos);

  ScanOptions w;
  w.along_witness = true;
  RunOptions wr;
  wr.witness_n = 5;
  auto wc = cmd_fourier_scan(load("golden.ifs"), wr, w);
  CHECK(std::count(wc.begin(), wc.end(), '\n') == 7);
  CHECK_THROWS_AS(cmd_fourier_scan(load("bernoulli_04.ifs"), RunOptions{}, w), ContractError);
}

TEST_CASE("renewal command") {
  RenewalOptions o;
  o.samples = 50'000;
  auto r = cmd_renewal(load("lattice_12.ifs"), RunOptions{}, o);
  CHECK(r.tv < 0.02);
  CHECK(r.csv.find("kernel_index,level,empirical,theoretical") == 0);
  CHECK(r.summary.find("mode discrete") != std::string::npos);
  CHECK(cmd_renewal(load("lattice_12.ifs"), RunOptions{}, o).csv == r.csv);

  auto q = cmd_renewal(load("quarter_turn.ifs"), RunOptions{}, o);
  CHECK(q.kernel_tv < 0.02);

  CHECK_THROWS_AS(cmd_renewal(load("half_third.ifs"), RunOptions{}, o), ContractError);
  RenewalOptions psi = o;
  psi.psi_only = true;
  psi.t = 2000;
  auto h = cmd_renewal(load("half_third.ifs"), RunOptions{}, psi);
  CHECK(h.csv.find("bin_lo,bin_hi,empirical,theoretical") == 0);
  CHECK(h.tv < 0.05);
}

TEST_CASE("construct round trips") {
  RunOptions run;
  ConstructOptions two;
  two.poly = algebra::IntPolynomial{-2, 1};
  auto cfg = cmd_construct(two, run);
  CHECK(cfg.dimension == 1);
  CHECK(cfg.maps.size() == 2);
  auto rep = cmd_check(cfg, run);
  CHECK(rep.verdict == Verdict::conditions_hold);

  ConstructOptions gauss;
  gauss.poly = algebra::IntPolynomial{4, 0, 1};
  auto gcfg = cmd_construct(gauss, run);
  CHECK(gcfg.dimension == 2);
  std::ostringstream out;
  config::write_config(out, gcfg);
  auto back = parse(out.str());
  CHECK(back.pv_hints.size() == 1);
  CHECK(cmd_check(back, run).verdict == Verdict::non_rajchman_witnessed);

  ConstructOptions sqrt2;
  sqrt2.poly = algebra::IntPolynomial{-2, 0, 1};
  sqrt2.roots = {1};
  CHECK_THROWS_AS(cmd_construct(sqrt2, run), ContractError);
}
