#pragma once

// Exact algebra for nonnegative piecewise-constant functions on (0, inf).
//
// A step function with breaks s_1 < ... < s_m and values v_1, ..., v_m takes
// the value v_i on (s_{i-1}, s_i] (s_0 = 0) and vanishes on (s_m, inf).  All
// integrals against power weights are evaluated segment by segment with the
// closed-form antiderivative, so no quadrature error enters.

#include <cstddef>
#include <span>
#include <vector>

namespace rearr {

class StepFunction {
 public:
  // The zero function.
  StepFunction() = default;

  // Throws DomainError unless the lists have equal length, the breaks are
  // finite, positive and strictly increasing, and the values are finite.
  StepFunction(std::vector<double> breaks, std::vector<double> values);

  std::span<const double> breaks() const { return breaks_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return breaks_.size(); }
  bool empty() const { return breaks_.empty(); }

  // Right end of the last step (0 for the zero function).
  double support() const { return breaks_.empty() ? 0.0 : breaks_.back(); }

  // f(t) for t > 0; t <= 0 returns the first value (the limit at 0+).
  double operator()(double t) const;

  // Index of the step containing t, or size() when t > support().
  std::size_t segment_of(double t) const;

 private:
  std::vector<double> breaks_;
  std::vector<double> values_;
};

// Nonnegative, nonincreasing step function: the canonical home of f* and
// |grad f|*.  Adjacent equal values are merged and trailing zero steps are
// dropped, so two equal functions have identical representations.
class DecreasingStep {
 public:
  DecreasingStep() = default;

  // make_step: validates and canonicalizes.  Non-monotone values raise
  // MonotonicityError; bad breaks or negative values raise DomainError.
  static DecreasingStep make(std::vector<double> breaks,
                             std::vector<double> values);

  // Builds from (value, measure) pairs already sorted by decreasing value;
  // used by rearrangement routines.  Zero-measure entries are skipped.
  static DecreasingStep from_sorted_levels(std::span<const double> values,
                                           std::span<const double> measures);

  const StepFunction& as_step() const { return step_; }
  std::span<const double> breaks() const { return step_.breaks(); }
  std::span<const double> values() const { return step_.values(); }
  std::size_t size() const { return step_.size(); }
  bool empty() const { return step_.empty(); }
  double support() const { return step_.support(); }
  double operator()(double t) const { return step_(t); }

  // Largest value (f*(0+)); 0 for the zero function.
  double sup() const { return empty() ? 0.0 : values().front(); }

  // Integral over (0, t], O(log m) through cached prefix sums.
  double integral_to(double t) const;
  double mass() const { return prefix_.empty() ? 0.0 : prefix_.back(); }

 private:
  explicit DecreasingStep(StepFunction step);

  StepFunction step_;
  std::vector<double> prefix_;  // prefix_[i] = integral over (0, s_{i+1}]
};

// Integral of s^a f(s) over (t0, t1); t1 may be +inf.  Raises DomainError for
// t0 < 0 or t0 >= t1, DivergenceError when a <= -1 and f is nonzero next to 0.
double weighted_integral(const StepFunction& f, double a, double t0, double t1);

// f**(t) = (1/t) * integral of f* over (0, t).  DomainError for t <= 0.
double double_star_eval(const DecreasingStep& f, double t);

// f**(t) - f*(t) >= 0.  DomainError for t <= 0.
double oscillation_eval(const DecreasingStep& f, double t);

// Stieltjes form of the integral of s^a d(-f*) over (0, t]: the sum over jump
// points s_i <= t of s_i^a * (v_i - v_{i+1}), with v_{m+1} = 0.
double stieltjes_sum(const DecreasingStep& f, double a, double t);

// t -> f(t / s): breaks scaled by s.  DomainError for s <= 0.
StepFunction dilate(const StepFunction& f, double s);
DecreasingStep dilate(const DecreasingStep& f, double s);

}  // namespace rearr
