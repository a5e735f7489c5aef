#pragma once

// Hardy-type operators on (0, inf):
//   P g(t)     = (1/t) int_0^t g
//   Q_a g(t)   = t^{-a} int_t^inf s^a g(s) ds/s        (0 <= a < 1, Q = Q_0)
//   H_a g(t)   = int_t^bound s^a g(s) ds/s             (0 < a < 1)
// The *_eval forms act on step functions through closed-form segment
// integrals; the symbolic forms map Piecewise to Piecewise and compose.

#include <limits>

#include "rearr/piecewise.hpp"
#include "rearr/stepfn.hpp"

namespace rearr {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

double hardy_P_eval(const StepFunction& g, double t);
double hardy_Q_eval(const StepFunction& g, double a, double t);
double H_eval(const StepFunction& g, double a, double t, double bound = kUnbounded);

Piecewise hardy_P(const Piecewise& g);
Piecewise hardy_Q(const Piecewise& g, double a = 0.0);
Piecewise hardy_H(const Piecewise& g, double a, double bound = kUnbounded);

// f** and f** - f* as exact piecewise functions (f** ~ |f|_1 / t past the
// support).
Piecewise double_star(const DecreasingStep& f);
Piecewise oscillation(const DecreasingStep& f);

// (H_{1/n})^k g(t) by symbolic composition, k in {1, 2, 3}.
double iterated_H1n(const StepFunction& g, int k, int n, double t);

// n^{k-1} / (k-1)! int_t^inf s^{1/n} (s^{1/n} - t^{1/n})^{k-1} g(s) ds/s,
// expanded binomially into weighted step integrals.
double closed_form_H1n_k(const StepFunction& g, int k, int n, double t);

}  // namespace rearr
