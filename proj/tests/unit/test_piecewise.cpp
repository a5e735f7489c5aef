#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "rearr/errors.hpp"
#include "rearr/piecewise.hpp"

using namespace rearr;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Midpoint rule on a log grid for integral of s^w g(s) over (lo, hi), split
// at the segment ends of g.
double numeric(const Piecewise& g, double w, double lo, double hi, int steps = 20000) {
  std::vector<double> cuts{lo};
  for (const Segment& s : g.segments())
    if (s.hi > lo && s.hi < hi) cuts.push_back(s.hi);
  cuts.push_back(hi);
  long double acc = 0.0L;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = std::log(cuts[k]);
    const double b = std::log(cuts[k + 1]);
    for (int i = 0; i < steps; ++i) {
      const double s = std::exp(a + (b - a) * (i + 0.5) / steps);
      acc += static_cast<long double>(std::pow(s, w + 1.0) * g(s)) * (b - a) / steps;
    }
  }
  return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("from_step and evaluation") {
  const Piecewise g = Piecewise::from_step(StepFunction({1, 2}, {3, 1}));
  CHECK(g(0.5) == 3);
  CHECK(g(1.0) == 3);
  CHECK(g(1.5) == 1);
  CHECK(g(2.5) == 0);
  CHECK(g.end() == 2);
  CHECK(g.monomial_segments());
  CHECK(Piecewise()(1.0) == 0.0);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(Piecewise({Segment{0.5, 1.0, {}}}), DomainError);
  CHECK_THROWS_AS(Piecewise({Segment{0.0, 1.0, {}}, Segment{1.5, 2.0, {}}}), DomainError);
  CHECK_THROWS_AS(Piecewise({Segment{0.0, 0.0, {}}}), DomainError);
}

TEST_CASE("term helpers") {
  const std::vector<Term> merged = simplify_terms({{1.0, 2.0, 0}, {2.0, 2.0 + 1e-14, 0}, {0.0, 3.0, 0}});
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].coef == 3.0);

  const std::vector<Term> inv{{1.0, -1.0, 0}};
  const std::vector<Term> anti = antiderivative(inv);
  CHECK(eval_terms(anti, std::exp(2.0)) == doctest::Approx(2.0));

  const std::vector<Term> logterm{{1.0, 0.0, 1}};
  const std::vector<Term> anti2 = antiderivative(logterm);  // t ln t - t
  CHECK(eval_terms(anti2, 3.0) == doctest::Approx(3.0 * std::log(3.0) - 3.0));

  CHECK(limit_at_zero(std::vector<Term>{{2.0, 1.0, 1}, {1.0, 0.0, 0}}) == 1.0);
  CHECK(limit_at_infinity(std::vector<Term>{{2.0, -1.0, 1}}) == 0.0);
  CHECK_THROWS_AS(limit_at_zero(std::vector<Term>{{1.0, -0.5, 0}}), DivergenceError);
  CHECK_THROWS_AS(limit_at_infinity(std::vector<Term>{{1.0, 0.0, 1}}), DivergenceError);
}

TEST_CASE("head and tail integrals against quadrature") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> b;
    std::vector<double> v;
    double s = 0.0;
    double level = 3.0;
    for (int i = 0; i < 5; ++i) {
      s += u(rng);
      b.push_back(s);
      v.push_back(level);
      level *= u(rng);
    }
    const Piecewise g = Piecewise::from_step(StepFunction(b, v));
    for (double w : {-1.0, -0.5, 0.0, 0.5}) {
      const Piecewise tail = g.tail_integral(w, kInf);
      for (double t : {0.05, 0.3, 1.0, 2.5}) {
        if (t >= s) continue;
        CHECK(tail(t) == doctest::Approx(numeric(g, w, t, s)).epsilon(1e-6));
      }
      if (w > -1.0) {
        const Piecewise head = g.head_integral(w);
        for (double t : {0.3, 1.0, 2.5, 10.0}) {
          const double expected = numeric(g, w, 1e-12, std::min(t, s), 200000);
          CHECK(head(t) == doctest::Approx(expected).epsilon(1e-5));
        }
      }
    }
    // Bounded tail vanishes past the bound.
    const Piecewise bounded = g.tail_integral(-0.5, 0.5 * s);
    CHECK(bounded(0.6 * s) == 0.0);
    CHECK(bounded(0.1) == doctest::Approx(numeric(g, -0.5, 0.1, 0.5 * s)).epsilon(1e-6));
  }
}

TEST_CASE("closure under repeated averaging") {
  // P applied twice to chi_(0,1): P chi = min(1, 1/t); P P chi = 1 for t <= 1,
  // (1 + ln t)/t past 1.
  const Piecewise chi = Piecewise::from_step(StepFunction({1.0}, {1.0}));
  const Piecewise p1 = chi.head_integral(0.0).times_power(-1.0);
  const Piecewise p2 = p1.head_integral(0.0).times_power(-1.0);
  CHECK(p1(0.5) == doctest::Approx(1.0));
  CHECK(p1(4.0) == doctest::Approx(0.25));
  CHECK(p2(0.5) == doctest::Approx(1.0));
  CHECK(p2(4.0) == doctest::Approx((1.0 + std::log(4.0)) / 4.0));
  CHECK_FALSE(p2.monomial_segments());
}

TEST_CASE("weighted integral, arithmetic and restriction") {
  const Piecewise chi = Piecewise::from_step(StepFunction({1.0}, {1.0}));
  const Piecewise tail = chi.head_integral(0.0).times_power(-1.0);  // min(1, 1/t)
  CHECK(tail.weighted_integral(-1.5, 1.0, kInf) == doctest::Approx(2.0 / 3.0));
  CHECK(tail.weighted_integral(-0.5, 0.0, 1.0) == doctest::Approx(2.0));
  CHECK(tail.weighted_integral(-1.0, 1.0, kInf) == doctest::Approx(1.0));
  CHECK_THROWS_AS(tail.weighted_integral(0.0, 1.0, kInf), DivergenceError);
  const Piecewise diff = tail - chi;
  CHECK(diff(0.5) == doctest::Approx(0.0));
  CHECK(diff(2.0) == doctest::Approx(0.5));
  const Piecewise sum = tail + chi.scaled(2.0);
  CHECK(sum(0.5) == doctest::Approx(3.0));
  const Piecewise r = tail.restricted(3.0);
  CHECK(r(2.0) == doctest::Approx(0.5));
  CHECK(r(4.0) == 0.0);
  const Piecewise sq = tail.abs_power(2.0);
  CHECK(sq(2.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(tail.head_integral(0.0).abs_power(2.0), UnsupportedError);
}
