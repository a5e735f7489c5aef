#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "rearr/corpus.hpp"
#include "rearr/errors.hpp"
#include "rearr/operators.hpp"

using namespace rearr;

namespace {

constexpr double kPi = std::numbers::pi;

double sup_error(const FamilySpec& spec, double h) {
  const DecreasingStep f = rearrange(generate(spec, h));
  const double m = oracle_support(spec);
  double worst = 0.0;
  for (int i = 1; i < 2000; ++i) {
    const double s = m * i / 2000.0;
    worst = std::max(worst, std::fabs(f(s) - oracle_value(spec, s)));
  }
  return worst;
}

}  // namespace

TEST_CASE("generate samples the closed forms") {
  const FamilySpec cone = FamilySpec::parse("cone:n=2");
  const GridFunction g = generate(cone, 0.02);
  CHECK(g.dim() == 2);
  CHECK(g.spacing() == 0.02);
  for (std::size_t i = 0; i < g.shape()[0]; ++i) {
    for (std::size_t j = 0; j < g.shape()[1]; ++j) {
      const double x = g.center(i, 0);
      const double y = g.center(j, 1);
      const double expected = std::max(0.0, 1.0 - std::hypot(x, y));
      CHECK(g.values()[i * g.shape()[1] + j] == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  const FamilySpec ball = FamilySpec::parse("ball:n=2,delta=0.1");
  const RadialProfile bp = generate_profile(ball);
  CHECK(bp(0.5) == 1.0);
  CHECK(bp(0.9) == doctest::Approx(1.0));
  CHECK(bp(0.95) == doctest::Approx(0.5));
  CHECK(bp(1.0) == 0.0);

  // u = H_{1/2} chi_(0,1) composed with t = r^2: 2 (1 - r).
  const FamilySpec radial = FamilySpec::parse("radial:n=2");
  const RadialProfile rp = generate_profile(radial);
  for (double r : {0.0, 0.2, 0.5, 0.8, 0.99}) {
    CHECK(rp(r) == doctest::Approx(2.0 * (1.0 - r)).epsilon(1e-12));
    if (r > 0.0) CHECK(rp(r) == doctest::Approx(H_eval(StepFunction({1.0}, {1.0}), 0.5, r * r)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(generate_profile(FamilySpec::parse("gauss:n=2")), UnsupportedError);

  const GridFunction zero = generate(FamilySpec::parse("cone:n=2,height=0"), 0.05);
  CHECK(zero.max_value() == 0.0);
}

TEST_CASE("oracle rearrangements") {
  const FamilySpec cone2 = FamilySpec::parse("cone:n=2");
  for (double s : {0.1, 1.0, 3.0}) CHECK(oracle_value(cone2, s) == doctest::Approx(1.0 - std::sqrt(s / kPi)));
  CHECK(oracle_support(cone2) == doctest::Approx(kPi));
  const FamilySpec cone1 = FamilySpec::parse("cone:n=1");
  for (double s : {0.1, 1.0, 1.9}) CHECK(oracle_value(cone1, s) == doctest::Approx(1.0 - s / 2.0));
  CHECK(oracle_value(cone1, 2.5) == 0.0);

  // delta = 1 still ramps; the plateau of a ball of measure m is chi_(0, m).
  const FamilySpec ball = FamilySpec::parse("ball:n=3,delta=0.2");
  const double plateau = 4.0 * kPi / 3.0 * 0.8 * 0.8 * 0.8;
  CHECK(oracle_value(ball, 0.99 * plateau) == 1.0);
  CHECK(oracle_value(ball, 1.01 * plateau) < 1.0);

  const DecreasingStep sampled = oracle_rearrangement(cone2, 100);
  CHECK(sampled.size() == 100);
  CHECK(sampled.support() == doctest::Approx(kPi));
  CHECK(sampled.values()[0] == doctest::Approx(oracle_value(cone2, kPi / 200.0)));

  CHECK_THROWS_AS(oracle_rearrangement(FamilySpec::parse("randsmooth:n=2")), UnsupportedError);
  CHECK_THROWS_AS(oracle_value(FamilySpec::parse("randsmooth:n=2"), 0.5), UnsupportedError);
  CHECK_THROWS_AS(lipschitz_constant(FamilySpec::parse("randsmooth:n=2")), UnsupportedError);
}

TEST_CASE("oracle agreement halves with h") {
  // Whether a cell center hits the peak swings single halvings, so the rate
  // is checked over two of them.
  for (int n : {1, 2, 3}) {
    for (const FamilySpec& spec : default_corpus(n)) {
      if (spec.kind == "randsmooth") continue;
      const double L = lipschitz_constant(spec);
      const double h0 = n == 3 ? 1.0 / 32 : 1.0 / 64;
      std::vector<double> err;
      for (double h : {h0, h0 / 2, h0 / 4}) {
        err.push_back(sup_error(spec, h));
        INFO(spec.label(), " h=", h);
        CHECK(err.back() <= L * h * std::sqrt(n));
      }
      INFO(spec.label());
      CHECK(err[2] <= 0.36 * err[0]);
    }
  }
}

TEST_CASE("generation is deterministic") {
  for (const char* text : {"randsmooth:n=2,seed=7", "randsmooth:n=3,seed=11", "multibump:n=2", "gauss:n=1"}) {
    const FamilySpec spec = FamilySpec::parse(text);
    const GridFunction a = generate(spec, 1.0 / 32);
    const GridFunction b = generate(spec, 1.0 / 32);
    REQUIRE(a.size() == b.size());
    CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  }
  const GridFunction s7 = generate(FamilySpec::parse("randsmooth:n=2,seed=7"), 1.0 / 32);
  const GridFunction s8 = generate(FamilySpec::parse("randsmooth:n=2,seed=8"), 1.0 / 32);
  CHECK_FALSE(std::equal(s7.values().begin(), s7.values().end(), s8.values().begin()));
}

TEST_CASE("resolution limit") {
  CHECK_THROWS_AS(generate(FamilySpec::parse("cone:n=2"), 0.2), ResolutionError);
  CHECK_NOTHROW(generate(FamilySpec::parse("cone:n=2"), 0.125));
  CHECK_THROWS_AS(generate(FamilySpec::parse("cone:n=2"), -0.1), DomainError);
}

TEST_CASE("family parsing") {
  const FamilySpec b = FamilySpec::parse("ball-indicator-mollified:n=3,delta=0.05");
  CHECK(b.kind == "ball");
  CHECK(b.n == 3);
  CHECK(b.param("delta") == 0.05);
  CHECK(b.param("radius") == 1.0);
  CHECK(FamilySpec::parse(b.label()).label() == b.label());
  CHECK(FamilySpec::parse("cone", 3).n == 3);
  CHECK(FamilySpec::parse("random-smooth:seed=2").kind == "randsmooth");
  CHECK(FamilySpec::parse("gaussian-bump-truncated").kind == "gauss");

  const std::vector<FamilySpec> balls = parse_family_list("ball:n=2,delta=0.2;0.1;0.05");
  REQUIRE(balls.size() == 3);
  CHECK(balls[1].param("delta") == 0.1);
  CHECK(balls[2].param("delta") == 0.05);
  const std::vector<FamilySpec> mixed = parse_family_list("cone:n=2;ball:n=2,delta=0.1");
  REQUIRE(mixed.size() == 2);
  CHECK(mixed[1].kind == "ball");
  const std::vector<FamilySpec> cont = parse_family_list("cone:n=2;radius=0.5");
  REQUIRE(cont.size() == 2);
  CHECK(cont[1].param("radius") == 0.5);

  CHECK_THROWS_AS(FamilySpec::parse("sphere:n=2"), ParseError);
  CHECK_THROWS_AS(FamilySpec::parse("cone:n=2,width=3"), ParseError);
  CHECK_THROWS_AS(FamilySpec::parse("cone:n=4"), ParseError);
  CHECK_THROWS_AS(FamilySpec::parse("cone:n=2,radius=abc"), ParseError);
  CHECK_THROWS_AS(FamilySpec::parse("ball:n=2,delta=2"), DomainError);
  CHECK_THROWS_AS(parse_family_list("0.1;cone"), ParseError);
}

TEST_CASE("default corpus") {
  for (int n : {1, 2, 3}) {
    const std::vector<FamilySpec> c = default_corpus(n);
    CHECK(c.size() == 7);
    for (const FamilySpec& s : c) CHECK(s.n == n);
  }
  CHECK(is_radial(FamilySpec::parse("cone")));
  CHECK(is_radial(FamilySpec::parse("radial")));
  CHECK_FALSE(is_radial(FamilySpec::parse("multibump")));
}
