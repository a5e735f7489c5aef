#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "rearr/errors.hpp"
#include "rearr/stepfn.hpp"

using namespace rearr;

namespace {

DecreasingStep indicator(double m) { return DecreasingStep::make({m}, {1.0}); }

// f* of the cone (1 - |x|)_+ in R^2 is 1 - sqrt(s/pi) on (0, pi); sampled at
// cell midpoints.
DecreasingStep cone_star(std::size_t m) {
  std::vector<double> b(m);
  std::vector<double> v(m);
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < m; ++i) {
    b[i] = pi * (i + 1.0) / m;
    v[i] = 1.0 - std::sqrt((i + 0.5) / m);
  }
  return DecreasingStep::make(b, v);
}

// Midpoint rule in log-spaced pieces; independent of the closed forms.
double numeric_weighted(const StepFunction& f, double a, double t0, double t1) {
  long double acc = 0.0L;
  double lo = t0;
  std::vector<double> cuts{t0};
  for (double b : f.breaks())
    if (b > t0 && b < t1) cuts.push_back(b);
  cuts.push_back(t1);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    lo = cuts[k];
    const double hi = cuts[k + 1];
    const int steps = 20000;
    for (int i = 0; i < steps; ++i) {
      const double x = lo + (hi - lo) * (i + 0.5) / steps;
      acc += static_cast<long double>(std::pow(x, a) * f(x)) * (hi - lo) / steps;
    }
  }
  return static_cast<double>(acc);
}

std::vector<double> log_points(double lo, double hi, int count) {
  std::vector<double> t(count);
  for (int i = 0; i < count; ++i) t[i] = lo * std::pow(hi / lo, i / (count - 1.0));
  return t;
}

DecreasingStep random_decreasing(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> b;
  std::vector<double> v;
  double s = 0.0;
  double level = 5.0 * u(rng);
  for (int i = 0; i < m; ++i) {
    s += u(rng);
    b.push_back(s);
    v.push_back(level);
    level *= u(rng);
  }
  return DecreasingStep::make(b, v);
}

}  // namespace

TEST_CASE("make validates and canonicalizes") {
  const DecreasingStep f = DecreasingStep::make({1, 2, 3}, {3, 2, 1});
  CHECK(f.size() == 3);
  CHECK(f(0.5) == 3);
  CHECK(f(1.0) == 3);
  CHECK(f(1.5) == 2);
  CHECK(f(3.0) == 1);
  CHECK(f(3.5) == 0);

  const DecreasingStep merged = DecreasingStep::make({1, 2}, {2, 2});
  REQUIRE(merged.size() == 1);
  CHECK(merged.breaks()[0] == 2);
  CHECK(merged.values()[0] == 2);

  CHECK_THROWS_AS(DecreasingStep::make({2, 1}, {3, 1}), DomainError);
  CHECK_THROWS_AS(DecreasingStep::make({1, 2}, {1, 2}), MonotonicityError);
  CHECK_THROWS_AS(DecreasingStep::make({1, 2}, {1}), DomainError);
  CHECK_THROWS_AS(DecreasingStep::make({1}, {-1}), DomainError);
  CHECK_THROWS_AS(StepFunction({0.0}, {1.0}), DomainError);

  const DecreasingStep trailing = DecreasingStep::make({1, 2}, {1, 0});
  CHECK(trailing.size() == 1);
  CHECK(trailing.support() == 1);
}

TEST_CASE("weighted integral") {
  const StepFunction chi({1.0}, {1.0});
  CHECK(weighted_integral(chi, -0.5, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(weighted_integral(chi, 0.0, 0.0, 1.0) == 1.0);
  CHECK(weighted_integral(StepFunction({1, 2}, {2, 1}), 0.0, 0.0, 2.0) == 3.0);
  CHECK(weighted_integral(chi, -1.0, 0.5, 4.0) == doctest::Approx(std::log(2.0)));
  CHECK(weighted_integral(chi, 0.0, 0.0, std::numeric_limits<double>::infinity()) == 1.0);
  CHECK_THROWS_AS(weighted_integral(chi, -1.0, 0.0, 1.0), DivergenceError);
  CHECK_THROWS_AS(weighted_integral(chi, 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(weighted_integral(chi, 0.0, -1.0, 1.0), DomainError);

  // Closed form against an independent midpoint rule.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const DecreasingStep f = random_decreasing(rng, 6);
    for (double a : {-0.5, 0.0, 0.7, 2.0}) {
      const double t0 = 0.1 * (trial + 1);
      const double exact = weighted_integral(f.as_step(), a, t0, f.support());
      CHECK(exact == doctest::Approx(numeric_weighted(f.as_step(), a, t0, f.support())).epsilon(1e-7));
    }
  }
}

TEST_CASE("weighted integral does not depend on the segmentation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const DecreasingStep f = random_decreasing(rng, 8);
    // Split every step in two: same function, twice the segments.
    std::vector<double> b;
    std::vector<double> v;
    double prev = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      b.push_back(0.5 * (prev + f.breaks()[i]));
      v.push_back(f.values()[i]);
      b.push_back(f.breaks()[i]);
      v.push_back(f.values()[i]);
      prev = f.breaks()[i];
    }
    const StepFunction split(b, v);
    for (double a : {-0.5, 0.0, 1.5}) {
      const double x = weighted_integral(f.as_step(), a, 0.0, f.support());
      const double y = weighted_integral(split, a, 0.0, f.support());
      const double ulp = std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
      CHECK(std::fabs(x - y) <= 4 * ulp);
    }
  }
}

TEST_CASE("double star and oscillation") {
  const DecreasingStep chi = indicator(1.0);
  CHECK(double_star_eval(chi, 2.0) == 0.5);
  CHECK(double_star_eval(chi, 0.5) == 1.0);
  CHECK(oscillation_eval(chi, 2.0) == 0.5);
  CHECK(oscillation_eval(chi, 0.5) == 0.0);
  CHECK_THROWS_AS(double_star_eval(chi, 0.0), DomainError);
  CHECK_THROWS_AS(oscillation_eval(chi, -1.0), DomainError);

  // Cone in R^2: f**(pi) = 1/3, f**(1) - f*(1) = 1 - 2/(3 sqrt pi) - (1 - 1/sqrt pi).
  const DecreasingStep cone = cone_star(1 << 16);
  const double pi = std::numbers::pi;
  CHECK(double_star_eval(cone, pi) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
  const double expected = 1.0 / (3.0 * std::sqrt(pi));
  CHECK(expected == doctest::Approx(0.1881).epsilon(1e-3));
  CHECK(oscillation_eval(cone, 1.0) == doctest::Approx(expected).epsilon(1e-4));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const DecreasingStep f = random_decreasing(rng, 7);
    double prev = std::numeric_limits<double>::infinity();
    for (double t : log_points(1e-3, 3.0 * f.support(), 60)) {
      const double ds = double_star_eval(f, t);
      CHECK(ds <= prev * (1 + 1e-15));
      CHECK(oscillation_eval(f, t) >= 0.0);
      prev = ds;
    }
  }
}

TEST_CASE("maximal function is the tail integral of the oscillation") {
  // f**(t) = int_t^inf (f** - f*)(s) ds / s, by an independent midpoint rule
  // in log s.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const DecreasingStep f = random_decreasing(rng, 5);
    for (double t : log_points(0.05, 2.0 * f.support(), 20)) {
      long double acc = 0.0L;
      std::vector<double> cuts{std::log(t)};
      for (double b : f.breaks())
        if (b > t) cuts.push_back(std::log(b));
      cuts.push_back(std::log(f.support() * 1e7));
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const int steps = 50000;
        const double lo = cuts[k];
        const double hi = cuts[k + 1];
        for (int i = 0; i < steps; ++i) {
          const double u = lo + (hi - lo) * (i + 0.5) / steps;
          acc += oscillation_eval(f, std::exp(u)) * (hi - lo) / steps;
        }
      }
      // Beyond the cut the integrand is mass/s^2.
      acc += f.mass() / (f.support() * 1e7);
      CHECK(static_cast<double>(acc) == doctest::Approx(double_star_eval(f, t)).epsilon(1e-6));
    }
  }
}

TEST_CASE("stieltjes sum") {
  const DecreasingStep chi = indicator(1.0);
  CHECK(stieltjes_sum(chi, 0.5, 2.0) == 1.0);
  CHECK(stieltjes_sum(chi, 0.5, 0.5) == 0.0);
  CHECK(stieltjes_sum(DecreasingStep::make({1, 4}, {2, 1}), 0.5, 4.0) == 3.0);

  // Integration by parts: t (f** - f*)(t) = sum over jumps s_i <= t of
  // s_i (v_i - v_{i+1}) minus the part of the last jump sitting above f*(t).
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const DecreasingStep f = random_decreasing(rng, 9);
    for (double t : log_points(0.01, 2.0 * f.support(), 40)) {
      long double direct = 0.0L;
      const double level = f(t);
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double next = i + 1 < f.size() ? f.values()[i + 1] : 0.0;
        if (f.breaks()[i] < t) direct += static_cast<long double>(f.breaks()[i]) *
                                         (std::max(f.values()[i], level) - std::max(next, level));
      }
      const double lhs = t * oscillation_eval(f, t);
      CHECK(lhs == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dilation") {
  const DecreasingStep chi = indicator(1.0);
  const DecreasingStep d = dilate(chi, 2.0);
  CHECK(d.breaks()[0] == 2.0);
  CHECK(d.values()[0] == 1.0);
  const DecreasingStep same = dilate(chi, 1.0);
  CHECK(same.breaks()[0] == 1.0);
  CHECK_THROWS_AS(dilate(chi, 0.0), DomainError);
  const DecreasingStep four = dilate(chi, 4.0);
  CHECK(std::sqrt(weighted_integral(four.as_step(), 0.0, 0.0, four.support())) == 2.0);
}

TEST_CASE("prefix integrals") {
  const DecreasingStep f = DecreasingStep::make({1, 3}, {2, 1});
  CHECK(f.integral_to(0.5) == 1.0);
  CHECK(f.integral_to(1.0) == 2.0);
  CHECK(f.integral_to(2.0) == 3.0);
  CHECK(f.integral_to(10.0) == 4.0);
  CHECK(f.mass() == 4.0);
  CHECK(f.sup() == 2.0);
  const DecreasingStep zero;
  CHECK(zero.mass() == 0.0);
  CHECK(zero(1.0) == 0.0);
  CHECK(double_star_eval(zero, 1.0) == 0.0);
}
