#include "rearr/spaces.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "rearr/errors.hpp"
#include "rearr/operators.hpp"

namespace rearr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& tok, const std::string& context) {
  if (tok == "inf") return kInf;
  double x = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError("bad number '" + tok + "' in space spec '" + context + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

void validate(const RiSpaceSpec& s) {
  using K = RiSpaceSpec::Kind;
  switch (s.kind) {
    case K::Lebesgue:
      if (!(s.p >= 1.0)) throw DomainError("Lebesgue exponent must be in [1, inf]");
      break;
    case K::Lorentz:
      if (!(s.p > 0.0) || std::isinf(s.p) || !(s.q > 0.0))
        throw DomainError("Lorentz needs 0 < p < inf and 0 < q <= inf");
      break;
    case K::Weak:
      if (!(s.p > 0.0) || std::isinf(s.p)) throw DomainError("weak Lorentz needs 0 < p < inf");
      break;
    case K::Orlicz:
      if (!(s.phi.p >= 1.0) || std::isinf(s.phi.p) || !(s.phi.beta >= 0.0))
        throw DomainError("Young function needs p >= 1 and beta >= 0");
      break;
  }
  if (!(s.domain_measure > 0.0)) throw DomainError("domain measure must be positive");
}

DecreasingStep restrict_step(const DecreasingStep& f, double m) {
  if (std::isinf(m) || f.support() <= m) return f;
  std::vector<double> b;
  std::vector<double> v;
  for (std::size_t i = 0; i < f.size(); ++i) {
    b.push_back(std::min(f.breaks()[i], m));
    v.push_back(f.values()[i]);
    if (f.breaks()[i] >= m) break;
  }
  return DecreasingStep::make(std::move(b), std::move(v));
}

// inf{lambda > 0 : modular(lambda) <= 1} for a nonincreasing modular.
double luxemburg(const std::function<double(double)>& modular) {
  double lo = 1.0;
  double hi = 1.0;
  while (modular(hi) > 1.0) {
    hi *= 2.0;
    if (hi > 1e300) throw DivergenceError("Orlicz modular stays above 1");
  }
  lo = hi;
  while (modular(lo) <= 1.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) return 0.0;
  }
  while (hi / lo - 1.0 > 1e-13) {
    const double mid = std::sqrt(lo * hi);
    if (modular(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return std::sqrt(lo * hi);
}

// Nodes of a Gauss-Legendre rule laid over a geometric refinement of the
// segments: pieces never exceed a factor 2 in t, the piece next to 0 is
// refined 60 times, and an unbounded tail is followed for 80 doublings.
struct Node {
  double t;
  double w;
  double value;
};

std::vector<Node> discretize(const Piecewise& g) {
  using Rule = boost::math::quadrature::gauss<double, 8>;
  std::vector<Node> nodes;
  const auto add_piece = [&](const Segment& seg, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const auto& x = Rule::abscissa();
    const auto& w = Rule::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int sgn : {-1, 1}) {
        if (x[i] == 0.0 && sgn < 0) continue;
        const double t = mid + sgn * half * x[i];
        nodes.push_back({t, half * w[i], seg.eval(t)});
      }
    }
  };
  for (const Segment& seg : g.segments()) {
    if (seg.terms.empty()) {
      if (!std::isinf(seg.hi)) nodes.push_back({0.5 * (seg.lo + seg.hi), seg.hi - seg.lo, 0.0});
      continue;
    }
    double lo = seg.lo;
    double hi = seg.hi;
    if (lo == 0.0) {
      const double top = std::isinf(hi) ? 1.0 : hi;
      double b = top;
      for (int k = 0; k < 60; ++k) {
        add_piece(seg, 0.5 * b, b);
        b *= 0.5;
      }
      nodes.push_back({0.5 * b, b, seg.eval(0.5 * b)});
      lo = top;
      if (lo >= hi) continue;
    }
    if (std::isinf(hi)) {
      double a = lo;
      for (int k = 0; k < 80; ++k) {
        add_piece(seg, a, 2.0 * a);
        a *= 2.0;
      }
      continue;
    }
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::log2(hi / lo))));
    const double ratio = std::pow(hi / lo, 1.0 / pieces);
    double a = lo;
    for (int k = 0; k < pieces; ++k) {
      const double b = k + 1 == pieces ? hi : a * ratio;
      add_piece(seg, a, b);
      a = b;
    }
  }
  for (Node& nd : nodes) nd.value = std::fabs(nd.value);
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.t < b.t; });
  return nodes;
}

bool nonincreasing(const std::vector<Node>& nodes) {
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].value > nodes[i - 1].value * (1.0 + 1e-12) + 1e-300) return false;
  return true;
}

// Sup of t^r |g(t)| over monomial segments: each piece is monotone, so the
// sup sits at a segment end (limits at 0 and inf included).
double monomial_weighted_sup(const Piecewise& g, double r) {
  double best = 0.0;
  for (const Segment& s : g.segments()) {
    if (s.terms.empty()) continue;
    const Term t{std::fabs(s.terms[0].coef), s.terms[0].power + r, 0};
    const std::vector<Term> one{t};
    best = std::max(best, s.lo == 0.0 ? limit_at_zero(one) : eval_terms(one, s.lo));
    best = std::max(best, std::isinf(s.hi) ? limit_at_infinity(one) : eval_terms(one, s.hi));
  }
  return best;
}

DecreasingStep rearranged_nodes(std::vector<Node> nodes) {
  std::sort(nodes.begin(), nodes.end(),
            [](const Node& a, const Node& b) { return a.value > b.value; });
  std::vector<double> v;
  std::vector<double> w;
  for (const Node& nd : nodes) {
    if (nd.value <= 0.0 || nd.w <= 0.0) continue;
    v.push_back(nd.value);
    w.push_back(nd.w);
  }
  return DecreasingStep::from_sorted_levels(v, w);
}

}  // namespace

YoungFunction YoungFunction::power(double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("power Young function needs p >= 1");
  return {Family::Power, p, 0.0};
}

YoungFunction YoungFunction::power_log(double p, double beta) {
  if (!(p >= 1.0) || std::isinf(p) || !(beta >= 0.0) || std::isinf(beta))
    throw DomainError("power-log Young function needs p >= 1 and beta >= 0");
  return {Family::PowerLog, p, beta};
}

double YoungFunction::operator()(double t) const {
  if (t <= 0.0) return 0.0;
  const double base = std::pow(t, p);
  if (family == Family::Power || beta == 0.0) return base;
  return base * std::pow(std::log(std::numbers::e + t), beta);
}

bool YoungFunction::convex_on_samples() const {
  if ((*this)(0.0) != 0.0) return false;
  double prev_t = 0.0;
  double prev_v = 0.0;
  for (int k = 0; k <= 1200; ++k) {
    const double t = std::pow(10.0, -6.0 + k / 100.0);
    const double v = (*this)(t);
    if (v < prev_v) return false;
    const double mid = (*this)(0.5 * (prev_t + t));
    if (mid > 0.5 * (prev_v + v) * (1.0 + 1e-12)) return false;
    prev_t = t;
    prev_v = v;
  }
  return true;
}

RiSpaceSpec::RiSpaceSpec() : domain_measure(kInf) {}

RiSpaceSpec RiSpaceSpec::lebesgue(double p) {
  RiSpaceSpec s;
  s.kind = Kind::Lebesgue;
  s.p = p;
  validate(s);
  return s;
}

RiSpaceSpec RiSpaceSpec::lorentz(double p, double q) {
  RiSpaceSpec s;
  s.kind = Kind::Lorentz;
  s.p = p;
  s.q = q;
  validate(s);
  return s;
}

RiSpaceSpec RiSpaceSpec::weak(double p) {
  RiSpaceSpec s;
  s.kind = Kind::Weak;
  s.p = p;
  s.q = kInf;
  validate(s);
  return s;
}

RiSpaceSpec RiSpaceSpec::orlicz(YoungFunction phi) {
  RiSpaceSpec s;
  s.kind = Kind::Orlicz;
  s.phi = phi;
  s.p = phi.p;
  validate(s);
  return s;
}

RiSpaceSpec RiSpaceSpec::parse(const std::string& text) {
  std::string body = text;
  double measure = kInf;
  if (const auto at = text.find('@'); at != std::string::npos) {
    body = text.substr(0, at);
    measure = parse_number(text.substr(at + 1), text);
  }
  const auto colon = body.find(':');
  if (colon == std::string::npos) throw ParseError("space spec needs 'kind:params': " + text);
  const std::string kind = body.substr(0, colon);
  const std::string rest = body.substr(colon + 1);
  RiSpaceSpec s;
  try {
    if (kind == "Lp") {
      s = lebesgue(parse_number(rest, text));
    } else if (kind == "Lorentz") {
      const auto parts = split(rest, ',');
      if (parts.size() != 2) throw ParseError("Lorentz needs 'p,q': " + text);
      s = lorentz(parse_number(parts[0], text), parse_number(parts[1], text));
    } else if (kind == "Weak") {
      s = weak(parse_number(rest, text));
    } else if (kind == "Orlicz") {
      const auto c2 = rest.find(':');
      if (c2 == std::string::npos) throw ParseError("Orlicz needs a family: " + text);
      const std::string fam = rest.substr(0, c2);
      const auto parts = split(rest.substr(c2 + 1), ',');
      if (fam == "power" && parts.size() == 1) {
        s = orlicz(YoungFunction::power(parse_number(parts[0], text)));
      } else if (fam == "power-log" && parts.size() == 2) {
        s = orlicz(YoungFunction::power_log(parse_number(parts[0], text),
                                            parse_number(parts[1], text)));
      } else {
        throw ParseError("unknown Orlicz family or arity: " + text);
      }
    } else {
      throw ParseError("unknown space kind '" + kind + "'");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const DomainError& e) {
    throw ParseError(std::string(e.what()) + ": " + text);
  }
  s.domain_measure = measure;
  validate(s);
  return s;
}

std::string RiSpaceSpec::to_string() const {
  std::string out;
  switch (kind) {
    case Kind::Lebesgue: out = "Lp:" + fmt(p); break;
    case Kind::Lorentz: out = "Lorentz:" + fmt(p) + "," + fmt(q); break;
    case Kind::Weak: out = "Weak:" + fmt(p); break;
    case Kind::Orlicz:
      out = phi.family == YoungFunction::Family::Power
                ? "Orlicz:power:" + fmt(phi.p)
                : "Orlicz:power-log:" + fmt(phi.p) + "," + fmt(phi.beta);
      break;
  }
  if (!std::isinf(domain_measure)) out += "@" + fmt(domain_measure);
  return out;
}

double ri_norm(const RiSpaceSpec& spec, const DecreasingStep& f_in) {
  validate(spec);
  const DecreasingStep f = restrict_step(f_in, spec.domain_measure);
  if (f.empty()) return 0.0;
  const auto s = f.breaks();
  const auto v = f.values();
  const std::size_t m = f.size();
  using K = RiSpaceSpec::Kind;
  // Abel summation: every term is nonnegative, so no cancellation.
  const auto layered = [&](double q, const std::function<long double(double)>& base) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
      const long double next = i + 1 < m ? std::pow(static_cast<long double>(v[i + 1]), q) : 0.0L;
      acc += (std::pow(static_cast<long double>(v[i]), q) - next) * base(s[i]);
    }
    return acc;
  };
  switch (spec.kind) {
    case K::Lebesgue: {
      if (std::isinf(spec.p)) return f.sup();
      const long double acc = layered(spec.p, [](double x) { return static_cast<long double>(x); });
      return static_cast<double>(std::pow(acc, 1.0L / spec.p));
    }
    case K::Lorentz:
    case K::Weak: {
      if (spec.kind == K::Weak || std::isinf(spec.q)) {
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) best = std::max(best, std::pow(s[i], 1.0 / spec.p) * v[i]);
        return best;
      }
      const long double r = spec.q / spec.p;
      const long double acc = layered(spec.q, [r](double x) {
        return std::pow(static_cast<long double>(x), r) / r;
      });
      return static_cast<double>(std::pow(acc, 1.0L / spec.q));
    }
    case K::Orlicz: {
      return luxemburg([&](double lambda) {
        long double acc = 0.0L;
        double left = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          acc += static_cast<long double>(spec.phi(v[i] / lambda)) * (s[i] - left);
          left = s[i];
        }
        return static_cast<double>(acc);
      });
    }
  }
  return 0.0;
}

double ri_norm(const RiSpaceSpec& spec, const Piecewise& g_in) {
  validate(spec);
  const Piecewise g = std::isinf(spec.domain_measure) ? g_in : g_in.restricted(spec.domain_measure);
  if (g.empty()) return 0.0;
  using K = RiSpaceSpec::Kind;
  const bool mono = g.monomial_segments();
  if (spec.kind == K::Lebesgue && !std::isinf(spec.p) && mono) {
    const double acc = g.abs_power(spec.p).weighted_integral(0.0, 0.0, g.end());
    return std::pow(acc, 1.0 / spec.p);
  }
  const std::vector<Node> nodes = discretize(g);
  switch (spec.kind) {
    case K::Lebesgue: {
      if (std::isinf(spec.p)) {
        if (mono) return monomial_weighted_sup(g, 0.0);
        double best = 0.0;
        for (const Node& nd : nodes) best = std::max(best, nd.value);
        return best;
      }
      long double acc = 0.0L;
      for (const Node& nd : nodes) acc += nd.w * std::pow(static_cast<long double>(nd.value), spec.p);
      return static_cast<double>(std::pow(acc, 1.0L / spec.p));
    }
    case K::Lorentz:
    case K::Weak: {
      if (!nonincreasing(nodes)) return ri_norm(spec, rearranged_nodes(nodes));
      const bool sup = spec.kind == K::Weak || std::isinf(spec.q);
      if (sup) {
        if (mono) return monomial_weighted_sup(g, 1.0 / spec.p);
        double best = 0.0;
        for (const Node& nd : nodes) best = std::max(best, std::pow(nd.t, 1.0 / spec.p) * nd.value);
        return best;
      }
      if (mono) {
        const double acc =
            g.abs_power(spec.q).weighted_integral(spec.q / spec.p - 1.0, 0.0, g.end());
        return std::pow(acc, 1.0 / spec.q);
      }
      long double acc = 0.0L;
      for (const Node& nd : nodes)
        acc += nd.w * std::pow(static_cast<long double>(std::pow(nd.t, 1.0 / spec.p) * nd.value),
                               spec.q) / nd.t;
      return static_cast<double>(std::pow(acc, 1.0L / spec.q));
    }
    case K::Orlicz: {
      return luxemburg([&](double lambda) {
        long double acc = 0.0L;
        for (const Node& nd : nodes) acc += nd.w * static_cast<long double>(spec.phi(nd.value / lambda));
        return static_cast<double>(acc);
      });
    }
  }
  return 0.0;
}

double lorentz_maximal_norm(double p, double q, const DecreasingStep& f) {
  if (!(p > 1.0) || std::isinf(p)) throw DomainError("maximal Lorentz functional needs 1 < p < inf");
  if (!(q > 0.0)) throw DomainError("maximal Lorentz functional needs q > 0");
  if (f.empty()) return 0.0;
  if (q == 1.0) {
    // int t^{1/p - 2} int_0^t f* = p' int s^{1/p - 1} f*(s) ds by Fubini.
    const double pp = p / (p - 1.0);
    return pp * weighted_integral(f.as_step(), 1.0 / p - 1.0, 0.0, f.support());
  }
  return ri_norm(RiSpaceSpec::lorentz(p, q), double_star(f));
}

double dilation_norm_estimate(const RiSpaceSpec& spec, double s,
                              std::span<const DecreasingStep> probes) {
  if (!(s > 0.0) || std::isinf(s)) throw DomainError("dilation factor must be positive");
  double best = -1.0;
  for (const DecreasingStep& f : probes) {
    const double base = ri_norm(spec, f);
    if (!(base > 0.0)) continue;
    best = std::max(best, ri_norm(spec, dilate(f, s)) / base);
  }
  if (best < 0.0) throw DomainError("every dilation probe has zero norm");
  return best;
}

std::vector<DecreasingStep> default_boyd_probes() {
  std::vector<DecreasingStep> probes;
  for (int j = -6; j <= 6; ++j) probes.push_back(DecreasingStep::make({std::pow(10.0, j)}, {1.0}));
  probes.push_back(DecreasingStep::make({1.0, 2.0, 4.0, 8.0}, {8.0, 4.0, 2.0, 1.0}));
  probes.push_back(DecreasingStep::make({0.01, 1.0, 100.0}, {100.0, 1.0, 0.01}));
  probes.push_back(DecreasingStep::make({1e-3, 1e3}, {1e3, 1e-3}));
  return probes;
}

BoydIndices boyd_indices(const RiSpaceSpec& spec) {
  validate(spec);
  using K = RiSpaceSpec::Kind;
  if (spec.kind != K::Orlicz) {
    const double r = std::isinf(spec.p) ? 0.0 : 1.0 / spec.p;
    return {r, r, true};
  }
  const std::vector<DecreasingStep> probes = default_boyd_probes();
  double lo = kInf;
  double hi = -kInf;
  for (int j = 1; j <= 8; ++j) {
    for (double s : {std::ldexp(1.0, j), std::ldexp(1.0, -j)}) {
      const double r = std::log(dilation_norm_estimate(spec, s, probes)) / std::log(s);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  // The Luxemburg bisection is accurate to about 1e-13; widen accordingly.
  const double pad = 1e-9;
  return {std::clamp(lo - pad, 0.0, 1.0), std::clamp(hi + pad, 0.0, 1.0), false};
}

TargetNorms optimal_target_norm(const RiSpaceSpec& spec, int k, int n, const DecreasingStep& f) {
  if (k < 1 || n <= k) throw DomainError("optimal_target_norm needs 1 <= k < n");
  const double a = static_cast<double>(k) / n;
  TargetNorms out;
  out.oscillation = ri_norm(spec, oscillation(f).times_power(-a));
  try {
    out.maximal = ri_norm(spec, double_star(f).times_power(-a));
  } catch (const DivergenceError&) {
    out.maximal = kInf;
  }
  return out;
}

}  // namespace rearr
