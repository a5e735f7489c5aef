#include "rearr/stepfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rearr/errors.hpp"

namespace rearr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral of s^a over (lo, hi) with 0 <= lo < hi <= inf, in extended
// precision so that splitting a segment changes the result by at most an ulp.
long double power_segment(long double a, long double lo, long double hi) {
  const long double e = a + 1.0L;
  if (std::fabs(e) < 1e-14L) {
    if (lo <= 0.0L || std::isinf(hi)) throw DivergenceError("integral of 1/s diverges");
    return std::log(hi / lo);
  }
  if (std::isinf(hi)) {
    if (e >= 0.0L) throw DivergenceError("power weight diverges at infinity");
    return -std::pow(lo, e) / e;
  }
  if (lo <= 0.0L) {
    if (e < 0.0L) throw DivergenceError("power weight diverges at 0");
    return std::pow(hi, e) / e;
  }
  return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

}  // namespace

StepFunction::StepFunction(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values)) {
  if (breaks_.size() != values_.size())
    throw DomainError("breaks and values differ in length");
  double prev = 0.0;
  for (double s : breaks_) {
    if (!std::isfinite(s) || !(s > prev))
      throw DomainError("breaks must be finite, positive and strictly increasing");
    prev = s;
  }
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("step values must be finite");
}

std::size_t StepFunction::segment_of(double t) const {
  return static_cast<std::size_t>(
      std::lower_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin());
}

double StepFunction::operator()(double t) const {
  const std::size_t i = segment_of(t);
  return i < values_.size() ? values_[i] : 0.0;
}

DecreasingStep::DecreasingStep(StepFunction step) : step_(std::move(step)) {
  prefix_.reserve(step_.size());
  long double acc = 0.0L;
  double prev = 0.0;
  for (std::size_t i = 0; i < step_.size(); ++i) {
    acc += static_cast<long double>(step_.values()[i]) *
           (static_cast<long double>(step_.breaks()[i]) - prev);
    prev = step_.breaks()[i];
    prefix_.push_back(static_cast<double>(acc));
  }
}

DecreasingStep DecreasingStep::make(std::vector<double> breaks,
                                    std::vector<double> values) {
  if (breaks.empty() || breaks.size() != values.size())
    throw DomainError("make_step needs equal-length nonempty lists");
  double prev = 0.0;
  for (double s : breaks) {
    if (!std::isfinite(s) || !(s > prev))
      throw DomainError("breaks must be finite, positive and strictly increasing");
    prev = s;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw DomainError("decreasing step values must be finite and nonnegative");
    if (i > 0 && values[i] > values[i - 1])
      throw MonotonicityError("values must be nonincreasing (index " +
                              std::to_string(i) + ")");
  }
  std::vector<double> b;
  std::vector<double> v;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!v.empty() && v.back() == values[i]) {
      b.back() = breaks[i];
    } else {
      b.push_back(breaks[i]);
      v.push_back(values[i]);
    }
  }
  while (!v.empty() && v.back() == 0.0) {
    v.pop_back();
    b.pop_back();
  }
  return DecreasingStep(StepFunction(std::move(b), std::move(v)));
}

DecreasingStep DecreasingStep::from_sorted_levels(std::span<const double> values,
                                                  std::span<const double> measures) {
  if (values.size() != measures.size())
    throw DomainError("levels and measures differ in length");
  std::vector<double> b;
  std::vector<double> v;
  long double cum = 0.0L;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (measures[i] <= 0.0) continue;
    if (values[i] < 0.0 || !std::isfinite(values[i]))
      throw DomainError("rearranged values must be finite and nonnegative");
    if (!v.empty() && values[i] > v.back())
      throw MonotonicityError("levels must be sorted by decreasing value");
    cum += measures[i];
    if (!v.empty() && v.back() == values[i]) {
      b.back() = static_cast<double>(cum);
    } else {
      b.push_back(static_cast<double>(cum));
      v.push_back(values[i]);
    }
  }
  while (!v.empty() && v.back() == 0.0) {
    v.pop_back();
    b.pop_back();
  }
  return DecreasingStep(StepFunction(std::move(b), std::move(v)));
}

double DecreasingStep::integral_to(double t) const {
  if (t <= 0.0) return 0.0;
  const std::size_t i = step_.segment_of(t);
  if (i >= size()) return mass();
  const double left = i == 0 ? 0.0 : step_.breaks()[i - 1];
  const double before = i == 0 ? 0.0 : prefix_[i - 1];
  return before + step_.values()[i] * (t - left);
}

double weighted_integral(const StepFunction& f, double a, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 > t0))
    throw DomainError("weighted_integral needs 0 <= t0 < t1");
  long double acc = 0.0L;
  double left = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double right = f.breaks()[i];
    const double lo = std::max(left, t0);
    const double hi = std::min(right, t1);
    left = right;
    if (lo >= hi || f.values()[i] == 0.0) continue;
    acc += static_cast<long double>(f.values()[i]) * power_segment(a, lo, hi);
  }
  return static_cast<double>(acc);
}

double double_star_eval(const DecreasingStep& f, double t) {
  if (!(t > 0.0)) throw DomainError("f** needs t > 0");
  return f.integral_to(t) / t;
}

double oscillation_eval(const DecreasingStep& f, double t) {
  if (!(t > 0.0)) throw DomainError("oscillation needs t > 0");
  // (1/t) * sum over steps left of t of (v_j - f*(t)) * width_j; exact and
  // nonnegative term by term.
  const std::size_t k = f.as_step().segment_of(t);
  const double ft = f(t);
  long double acc = 0.0L;
  double left = 0.0;
  for (std::size_t j = 0; j < f.size() && j <= k; ++j) {
    const double right = std::min(f.breaks()[j], t);
    acc += static_cast<long double>(f.values()[j] - ft) * (right - left);
    left = f.breaks()[j];
  }
  return static_cast<double>(acc / t);
}

double stieltjes_sum(const DecreasingStep& f, double a, double t) {
  if (!(t > 0.0)) throw DomainError("stieltjes_sum needs t > 0");
  long double acc = 0.0L;
  for (std::size_t i = 0; i < f.size() && f.breaks()[i] <= t; ++i) {
    const double next = i + 1 < f.size() ? f.values()[i + 1] : 0.0;
    acc += std::pow(static_cast<long double>(f.breaks()[i]), static_cast<long double>(a)) *
           (f.values()[i] - next);
  }
  return static_cast<double>(acc);
}

StepFunction dilate(const StepFunction& f, double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("dilation factor must be positive");
  std::vector<double> b(f.breaks().begin(), f.breaks().end());
  for (double& x : b) x *= s;
  return StepFunction(std::move(b), std::vector<double>(f.values().begin(), f.values().end()));
}

DecreasingStep dilate(const DecreasingStep& f, double s) {
  if (f.empty()) {
    if (!(s > 0.0)) throw DomainError("dilation factor must be positive");
    return f;
  }
  const StepFunction d = dilate(f.as_step(), s);
  return DecreasingStep::make(std::vector<double>(d.breaks().begin(), d.breaks().end()),
                              std::vector<double>(d.values().begin(), d.values().end()));
}

}  // namespace rearr
