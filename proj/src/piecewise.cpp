#include "rearr/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rearr/errors.hpp"

namespace rearr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPowerSnap = 1e-12;

double snap_power(double p) {
  if (std::fabs(p) < kPowerSnap) return 0.0;
  if (std::fabs(p + 1.0) < kPowerSnap) return -1.0;
  return p;
}

long double factorial_ratio(int k, int j) {  // k! / j!
  long double r = 1.0L;
  for (int i = j + 1; i <= k; ++i) r *= i;
  return r;
}

// Integral of the terms over (lo, hi) with the endpoint limits at 0 and inf.
long double integrate_terms(std::span<const Term> terms, double lo, double hi) {
  if (terms.size() == 1 && terms[0].log_power == 0) {
    // Pure power: closed form without the generic antiderivative.
    const long double c = terms[0].coef;
    const long double e = static_cast<long double>(terms[0].power) + 1.0L;
    if (e == 0.0L) {
      if (lo <= 0.0 || std::isinf(hi)) throw DivergenceError("integral of c/s diverges");
      return c * std::log(static_cast<long double>(hi) / lo);
    }
    if (std::isinf(hi)) {
      if (e > 0.0L) throw DivergenceError("power term diverges at infinity");
      return -c * std::pow(static_cast<long double>(lo), e) / e;
    }
    if (lo <= 0.0) {
      if (e < 0.0L) throw DivergenceError("power term diverges at 0");
      return c * std::pow(static_cast<long double>(hi), e) / e;
    }
    return c * (std::pow(static_cast<long double>(hi), e) -
                std::pow(static_cast<long double>(lo), e)) / e;
  }
  const std::vector<Term> anti = antiderivative(terms);
  const long double upper = std::isinf(hi) ? limit_at_infinity(anti) : eval_terms(anti, hi);
  const long double lower = lo <= 0.0 ? limit_at_zero(anti) : eval_terms(anti, lo);
  return upper - lower;
}

std::vector<Term> shifted(std::span<const Term> terms, double e) {
  std::vector<Term> out(terms.begin(), terms.end());
  for (Term& t : out) t.power = snap_power(t.power + e);
  return out;
}

}  // namespace

double Segment::eval(double t) const { return eval_terms(terms, t); }

double eval_terms(std::span<const Term> terms, double t) {
  long double acc = 0.0L;
  const long double lt = std::log(static_cast<long double>(t));
  for (const Term& term : terms) {
    long double v = term.coef;
    if (term.power != 0.0) v *= std::pow(static_cast<long double>(t), static_cast<long double>(term.power));
    for (int k = 0; k < term.log_power; ++k) v *= lt;
    acc += v;
  }
  return static_cast<double>(acc);
}

std::vector<Term> simplify_terms(std::vector<Term> terms) {
  for (Term& t : terms) t.power = snap_power(t.power);
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.log_power != b.log_power) return a.log_power < b.log_power;
    return a.power < b.power;
  });
  std::vector<Term> out;
  for (const Term& t : terms) {
    if (!out.empty() && out.back().log_power == t.log_power &&
        std::fabs(out.back().power - t.power) <= kPowerSnap) {
      out.back().coef += t.coef;
    } else {
      out.push_back(t);
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
  return out;
}

std::vector<Term> antiderivative(std::span<const Term> terms) {
  std::vector<Term> out;
  for (const Term& t : terms) {
    const double p = snap_power(t.power);
    if (p == -1.0) {
      out.push_back({t.coef / (t.log_power + 1), 0.0, t.log_power + 1});
      continue;
    }
    // Repeated integration by parts of t^p (ln t)^k.
    const long double e = static_cast<long double>(p) + 1.0L;
    const int k = t.log_power;
    for (int j = k; j >= 0; --j) {
      const long double sign = ((k - j) % 2 == 0) ? 1.0L : -1.0L;
      const long double c = sign * factorial_ratio(k, j) / std::pow(e, k - j + 1);
      out.push_back({static_cast<double>(t.coef * c), snap_power(p + 1.0), j});
    }
  }
  return simplify_terms(std::move(out));
}

double limit_at_zero(std::span<const Term> terms) {
  double acc = 0.0;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    const double p = snap_power(t.power);
    if (p > 0.0) continue;
    if (p == 0.0 && t.log_power == 0) {
      acc += t.coef;
      continue;
    }
    throw DivergenceError("function is unbounded at 0");
  }
  return acc;
}

double limit_at_infinity(std::span<const Term> terms) {
  double acc = 0.0;
  for (const Term& t : terms) {
    if (t.coef == 0.0) continue;
    const double p = snap_power(t.power);
    if (p < 0.0) continue;
    if (p == 0.0 && t.log_power == 0) {
      acc += t.coef;
      continue;
    }
    throw DivergenceError("function is unbounded at infinity");
  }
  return acc;
}

Piecewise::Piecewise(std::vector<Segment> segments) : segments_(std::move(segments)) {
  double prev = 0.0;
  for (Segment& s : segments_) {
    if (s.lo != prev || !(s.hi > s.lo))
      throw DomainError("piecewise segments must be contiguous from 0 with lo < hi");
    prev = s.hi;
    s.terms = simplify_terms(std::move(s.terms));
  }
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i)
    if (std::isinf(segments_[i].hi)) throw DomainError("only the last segment may be unbounded");
}

Piecewise Piecewise::from_step(const StepFunction& f) {
  std::vector<Segment> segs;
  segs.reserve(f.size());
  double left = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    Segment s{left, f.breaks()[i], {}};
    if (f.values()[i] != 0.0) s.terms.push_back({f.values()[i], 0.0, 0});
    segs.push_back(std::move(s));
    left = f.breaks()[i];
  }
  return Piecewise(std::move(segs));
}

double Piecewise::operator()(double t) const {
  if (segments_.empty() || t > end()) return 0.0;
  if (t <= 0.0) return limit_at_zero(segments_.front().terms);
  auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                             [](const Segment& s, double x) { return s.hi < x; });
  return it->eval(t);
}

double Piecewise::weighted_integral(double a, double t0, double t1) const {
  if (!(t0 >= 0.0) || !(t1 > t0)) throw DomainError("weighted_integral needs 0 <= t0 < t1");
  long double acc = 0.0L;
  for (const Segment& s : segments_) {
    const double lo = std::max(s.lo, t0);
    const double hi = std::min(s.hi, t1);
    if (lo >= hi || s.terms.empty()) continue;
    acc += integrate_terms(shifted(s.terms, a), lo, hi);
  }
  return static_cast<double>(acc);
}

Piecewise Piecewise::times_power(double e) const {
  std::vector<Segment> segs(segments_.begin(), segments_.end());
  for (Segment& s : segs) s.terms = shifted(s.terms, e);
  return Piecewise(std::move(segs));
}

Piecewise Piecewise::scaled(double c) const {
  std::vector<Segment> segs(segments_.begin(), segments_.end());
  for (Segment& s : segs)
    for (Term& t : s.terms) t.coef *= c;
  return Piecewise(std::move(segs));
}

Piecewise Piecewise::restricted(double bound) const {
  std::vector<Segment> segs;
  for (const Segment& s : segments_) {
    if (s.lo >= bound) break;
    segs.push_back(s);
    segs.back().hi = std::min(s.hi, bound);
  }
  return Piecewise(std::move(segs));
}

namespace {

Piecewise combine(const Piecewise& a, const Piecewise& b, double sign) {
  std::vector<double> cuts;
  for (const Segment& s : a.segments()) cuts.push_back(s.hi);
  for (const Segment& s : b.segments()) cuts.push_back(s.hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Segment> out;
  std::size_t ia = 0;
  std::size_t ib = 0;
  const auto as = a.segments();
  const auto bs = b.segments();
  double left = 0.0;
  for (double right : cuts) {
    while (ia < as.size() && as[ia].hi < right) ++ia;
    while (ib < bs.size() && bs[ib].hi < right) ++ib;
    Segment seg{left, right, {}};
    if (ia < as.size()) seg.terms = as[ia].terms;
    if (ib < bs.size())
      for (Term t : bs[ib].terms) {
        t.coef *= sign;
        seg.terms.push_back(t);
      }
    out.push_back(std::move(seg));
    left = right;
  }
  return Piecewise(std::move(out));
}

}  // namespace

Piecewise Piecewise::operator+(const Piecewise& other) const { return combine(*this, other, 1.0); }
Piecewise Piecewise::operator-(const Piecewise& other) const { return combine(*this, other, -1.0); }

bool Piecewise::monomial_segments() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) {
    return s.terms.size() <= 1 && (s.terms.empty() || s.terms[0].log_power == 0);
  });
}

Piecewise Piecewise::abs_power(double q) const {
  if (!monomial_segments()) throw UnsupportedError("abs_power needs one power term per segment");
  std::vector<Segment> segs;
  segs.reserve(segments_.size());
  for (const Segment& s : segments_) {
    Segment out{s.lo, s.hi, {}};
    if (!s.terms.empty())
      out.terms.push_back({std::pow(std::fabs(s.terms[0].coef), q), s.terms[0].power * q, 0});
    segs.push_back(std::move(out));
  }
  return Piecewise(std::move(segs));
}

Piecewise Piecewise::head_integral(double w) const {
  std::vector<Segment> out;
  out.reserve(segments_.size() + 1);
  long double acc = 0.0L;
  for (const Segment& s : segments_) {
    const std::vector<Term> anti = antiderivative(shifted(s.terms, w));
    const double at_lo = s.lo <= 0.0 ? limit_at_zero(anti) : eval_terms(anti, s.lo);
    Segment seg{s.lo, s.hi, anti};
    seg.terms.push_back({static_cast<double>(acc - at_lo), 0.0, 0});
    if (!std::isinf(s.hi)) acc += integrate_terms(shifted(s.terms, w), s.lo, s.hi);
    out.push_back(std::move(seg));
  }
  if (!segments_.empty() && !std::isinf(end()) && acc != 0.0L)
    out.push_back({end(), kInf, {{static_cast<double>(acc), 0.0, 0}}});
  return Piecewise(std::move(out));
}

Piecewise Piecewise::tail_integral(double w, double bound) const {
  const Piecewise g = std::isinf(bound) ? *this : restricted(bound);
  const auto segs = g.segments();
  std::vector<Segment> out(segs.size());
  long double acc = 0.0L;  // integral over (hi_i, bound)
  for (std::size_t r = segs.size(); r-- > 0;) {
    const Segment& s = segs[r];
    const std::vector<Term> integrand = shifted(s.terms, w);
    std::vector<Term> anti = antiderivative(integrand);
    const double at_hi = std::isinf(s.hi) ? limit_at_infinity(anti) : eval_terms(anti, s.hi);
    Segment seg{s.lo, s.hi, {}};
    for (Term t : anti) {
      t.coef = -t.coef;
      seg.terms.push_back(t);
    }
    seg.terms.push_back({static_cast<double>(acc + at_hi), 0.0, 0});
    out[r] = std::move(seg);
    if (r > 0 && !integrand.empty()) acc += integrate_terms(integrand, s.lo, s.hi);
  }
  return Piecewise(std::move(out));
}

}  // namespace rearr
