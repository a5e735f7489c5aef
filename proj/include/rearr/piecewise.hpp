#pragma once

// Piecewise power-log functions on (0, inf).
//
// On each segment (lo, hi] the function is a finite sum of terms
// c * t^e * (ln t)^k.  The class is closed under the Hardy-type operators
// (averages and tails against power weights), which lets f**, f** - f*,
// Q(f** - f*), H_{k/n} images and their compositions be represented exactly
// and evaluated without quadrature.

#include <cstddef>
#include <span>
#include <vector>

#include "rearr/stepfn.hpp"

namespace rearr {

struct Term {
  double coef = 0.0;
  double power = 0.0;
  int log_power = 0;
};

struct Segment {
  double lo = 0.0;
  double hi = 0.0;  // may be +inf
  std::vector<Term> terms;

  double eval(double t) const;
};

class Piecewise {
 public:
  // The zero function.
  Piecewise() = default;

  // Segments must be contiguous, start at 0 and have lo < hi.  The function
  // vanishes beyond the last segment.
  explicit Piecewise(std::vector<Segment> segments);

  static Piecewise from_step(const StepFunction& f);
  static Piecewise from_step(const DecreasingStep& f) {
    return from_step(f.as_step());
  }

  std::span<const Segment> segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  double end() const { return segments_.empty() ? 0.0 : segments_.back().hi; }

  double operator()(double t) const;

  // Integral of s^a g(s) over (t0, t1), exact per term.  t1 may be +inf.
  double weighted_integral(double a, double t0, double t1) const;

  // t^e * g(t).
  Piecewise times_power(double e) const;
  Piecewise scaled(double c) const;
  // Restriction to (0, bound].
  Piecewise restricted(double bound) const;

  Piecewise operator+(const Piecewise& other) const;
  Piecewise operator-(const Piecewise& other) const;

  // True when every segment is one pure power term (no logarithm), the case
  // where |g|^q t^w integrates in closed form.
  bool monomial_segments() const;
  // |g|^q for monomial_segments() data; UnsupportedError otherwise.
  Piecewise abs_power(double q) const;

  // R(t) = integral of s^w g(s) over (t, bound); zero for t >= bound.
  Piecewise tail_integral(double w, double bound) const;
  // A(t) = integral of s^w g(s) over (0, t); constant past the last segment.
  Piecewise head_integral(double w) const;

 private:
  std::vector<Segment> segments_;
};

// Merges like terms (powers equal within 1e-12, same log power) and drops
// zero coefficients.
std::vector<Term> simplify_terms(std::vector<Term> terms);

// Antiderivative of a sum of terms (no integration constant).
std::vector<Term> antiderivative(std::span<const Term> terms);

double eval_terms(std::span<const Term> terms, double t);

// Limit of a term sum at 0+ or +inf; DivergenceError if infinite.
double limit_at_zero(std::span<const Term> terms);
double limit_at_infinity(std::span<const Term> terms);

}  // namespace rearr
