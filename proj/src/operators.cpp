#include "rearr/operators.hpp"

#include <cmath>
#include <string>

#include "rearr/errors.hpp"

namespace rearr {
namespace {

void require_t(double t) {
  if (!(t > 0.0)) throw DomainError("operator evaluation needs t > 0");
}

void require_q_exponent(double a) {
  if (!(a >= 0.0 && a < 1.0)) throw DomainError("Q_a needs 0 <= a < 1");
}

void require_h_exponent(double a) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("H_a needs 0 < a < 1");
}

void require_k(int k, int n) {
  if (k < 1) throw DomainError("iteration count must be >= 1");
  if (k > 3) throw UnsupportedError("iterated H is implemented for k <= 3 only");
  if (n < 2) throw DomainError("H_{1/n} needs n >= 2");
}

}  // namespace

double hardy_P_eval(const StepFunction& g, double t) {
  require_t(t);
  return weighted_integral(g, 0.0, 0.0, t) / t;
}

double hardy_Q_eval(const StepFunction& g, double a, double t) {
  require_t(t);
  require_q_exponent(a);
  if (t >= g.support()) return 0.0;
  return std::pow(t, -a) * weighted_integral(g, a - 1.0, t, kUnbounded);
}

double H_eval(const StepFunction& g, double a, double t, double bound) {
  require_t(t);
  require_h_exponent(a);
  const double upper = std::min(bound, g.support());
  if (t >= upper) return 0.0;
  return weighted_integral(g, a - 1.0, t, upper);
}

Piecewise hardy_P(const Piecewise& g) { return g.head_integral(0.0).times_power(-1.0); }

Piecewise hardy_Q(const Piecewise& g, double a) {
  require_q_exponent(a);
  const Piecewise tail = g.tail_integral(a - 1.0, kUnbounded);
  return a == 0.0 ? tail : tail.times_power(-a);
}

Piecewise hardy_H(const Piecewise& g, double a, double bound) {
  require_h_exponent(a);
  if (!(bound > 0.0)) throw DomainError("H_a needs a positive domain bound");
  return g.tail_integral(a - 1.0, bound);
}

Piecewise double_star(const DecreasingStep& f) { return hardy_P(Piecewise::from_step(f)); }

Piecewise oscillation(const DecreasingStep& f) {
  return double_star(f) - Piecewise::from_step(f);
}

double iterated_H1n(const StepFunction& g, int k, int n, double t) {
  require_k(k, n);
  require_t(t);
  Piecewise image = Piecewise::from_step(g);
  for (int i = 0; i < k; ++i) image = hardy_H(image, 1.0 / n);
  return image(t);
}

double closed_form_H1n_k(const StepFunction& g, int k, int n, double t) {
  require_k(k, n);
  require_t(t);
  if (t >= g.support()) return 0.0;
  // (s^{1/n} - t^{1/n})^{k-1} = sum_j C(k-1, j) s^{j/n} (-t^{1/n})^{k-1-j}
  const long double tn = std::pow(static_cast<long double>(t), 1.0L / n);
  long double acc = 0.0L;
  long double binom = 1.0L;
  for (int j = 0; j < k; ++j) {
    const long double scale = binom * std::pow(-tn, k - 1 - j);
    acc += scale * weighted_integral(g, (j + 1.0) / n - 1.0, t, kUnbounded);
    binom = binom * (k - 1 - j) / (j + 1);
  }
  long double factorial = 1.0L;
  for (int j = 2; j < k; ++j) factorial *= j;
  return static_cast<double>(std::pow(static_cast<long double>(n), k - 1) / factorial * acc);
}

}  // namespace rearr
