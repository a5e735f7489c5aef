#include "rearr/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "rearr/errors.hpp"
#include "rearr/operators.hpp"

namespace rearr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kIdentitySlack = 1e-8;
constexpr double kProfileSlack = 0.05;
constexpr int kProbeCount = 40;
constexpr double kProbeCells = 32.0;
constexpr double kPairCells = 64.0;

double santalo(int n) { return std::pow(unit_ball_measure(n), -1.0 / n); }

bool needs_grid(const std::string& id) {
  return id != "polya-szego" && id != "sobolev-identity" && id != "cincouno";
}

void require_known(const std::string& id) {
  const auto& ids = check_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end())
    throw UnknownCheckError("unknown check '" + id + "'");
}

InequalityReport finalize(const std::string& id, const std::vector<CurvePoint>& samples,
                          double constant, double slack) {
  InequalityReport r;
  r.id = id;
  r.constant_used = constant;
  r.slack = slack;
  if (is_identity_check(id)) {
    double worst = 0.0;
    bool first = true;
    for (const CurvePoint& s : samples) {
      const double scale = std::max(std::fabs(s.lhs), std::fabs(s.rhs));
      const double dev = scale == 0.0 ? 0.0 : std::fabs(s.lhs - s.rhs) / scale;
      if (first || dev > worst) {
        worst = dev;
        r.lhs = s.lhs;
        r.rhs = s.rhs;
        first = false;
      }
    }
    r.ratio = 1.0 + worst;
  } else {
    r.ratio = 0.0;
    bool first = true;
    for (const CurvePoint& s : samples) {
      double q = 0.0;
      if (s.rhs > 0.0)
        q = std::max(0.0, s.lhs) / s.rhs;
      else if (s.lhs > 0.0)
        q = kInf;
      if (first || q > r.ratio) {
        r.ratio = q;
        r.lhs = s.lhs;
        r.rhs = s.rhs;
        first = false;
      }
    }
  }
  r.pass = r.ratio <= 1.0 + slack;
  return r;
}

// sup of t^r |g(t)| for monomial data, attained at segment ends.
double weighted_sup(const Piecewise& g, double r) {
  double best = 0.0;
  for (const Segment& s : g.segments()) {
    if (s.terms.empty()) continue;
    const std::vector<Term> one{{std::fabs(s.terms[0].coef), s.terms[0].power + r, 0}};
    best = std::max(best, s.lo == 0.0 ? limit_at_zero(one) : eval_terms(one, s.lo));
    best = std::max(best, std::isinf(s.hi) ? limit_at_infinity(one) : eval_terms(one, s.hi));
  }
  return best;
}

double gardel_lhs(const Piecewise& osc, int n, double p, double q) {
  const Piecewise g = osc.times_power(1.0 / p - 1.0 / n);
  if (std::isinf(q)) return weighted_sup(g, 0.0);
  return std::pow(g.abs_power(q).weighted_integral(-1.0, 0.0, kInf), 1.0 / q);
}

double conjugate_target(int n) { return static_cast<double>(n) / (n - 1); }

std::vector<CurvePoint> curve_samples(const std::string& id, const CheckContext& ctx,
                                      const std::vector<double>& ts,
                                      const std::vector<std::pair<double, double>>& pairs) {
  const int n = ctx.n();
  const double c = santalo(n);
  const DecreasingStep& fs = ctx.fstar();
  const DecreasingStep& gs = ctx.grad_star();
  std::vector<CurvePoint> out;
  if (id == "truncacion" || id == "boca") {
    for (const auto& [a, b] : pairs) {
      const double drop = fs(a) - fs(b);
      const double grad = c * gs.integral_to(b - a);
      if (id == "truncacion")
        out.push_back({a, drop * std::pow(a, 1.0 - 1.0 / n), grad});
      else
        out.push_back({a, a * drop, std::pow(a, 1.0 / n) * grad});
    }
    return out;
  }
  if (id == "intermedia") {
    for (double t : ts) out.push_back({t, stieltjes_sum(fs, 1.0 - 1.0 / n, t), c * gs.integral_to(t)});
    return out;
  }
  if (id == "tres") {
    for (double t : ts)
      out.push_back({t, oscillation_eval(fs, t), c * std::pow(t, 1.0 / n) * gs.integral_to(t) / t});
    return out;
  }
  if (id == "teoA2") {
    const Piecewise acc = ctx.osc().times_power(-1.0 / n).head_integral(0.0);
    for (double t : ts) out.push_back({t, acc(t), n * c * gs.integral_to(t)});
    return out;
  }
  if (id == "polya-szego") {
    const DecreasingStep radial =
        ctx.radial_input() ? gs : radial_gradient_rearrangement(symmetric_rearrangement(fs, n, ctx.h()), n);
    for (double t : ts) out.push_back({t, radial.integral_to(t) / t, n * gs.integral_to(t) / t});
    return out;
  }
  if (id == "layer-cake") {
    const GridFunction& f = *ctx.grid();
    const double cell = f.cell_measure();
    for (double t : ts) {
      const double level = fs(t);
      long double acc = 0.0L;
      for (double v : f.values())
        if (v > level) acc += v - level;
      out.push_back({t, t * oscillation_eval(fs, t), static_cast<double>(acc * cell)});
    }
    return out;
  }
  if (id == "cincouno") {
    const Piecewise qosc = hardy_Q(ctx.osc());
    for (double t : ts) out.push_back({t, qosc(t), double_star_eval(fs, t)});
    return out;
  }
  if (id == "balboa") {
    const double alpha = 1.0 + 1.0 / n;
    const double calpha = (1.0 - std::pow(2.0, -alpha)) / alpha;
    const Piecewise fb = ctx.osc().times_power(-1.0 / n);
    const Piecewise qf = hardy_Q(fb);
    for (double t : ts) out.push_back({t, calpha * fb(t), qf(t)});
    return out;
  }
  throw UnsupportedError("check '" + id + "' has no curve form");
}

std::vector<CurvePoint> scalar_samples(const std::string& id, const CheckContext& ctx) {
  const int n = ctx.n();
  const double c = santalo(n);
  const DecreasingStep& fs = ctx.fstar();
  const double grad_l1 = ctx.grad_star().mass();
  const CheckParams& prm = ctx.params();
  if (id == "gn-weak") {
    double lhs = 0.0;
    if (n == 1) {
      lhs = fs.sup();
    } else {
      for (std::size_t i = 0; i < fs.size(); ++i)
        lhs = std::max(lhs, fs.values()[i] * std::pow(fs.breaks()[i], 1.0 - 1.0 / n));
    }
    return {{0.0, lhs, c * grad_l1}};
  }
  if (id == "gn-strong" || id == "teoA5") {
    double lhs = 0.0;
    if (n == 1)
      lhs = fs.sup();
    else if (id == "gn-strong")
      lhs = ri_norm(RiSpaceSpec::lebesgue(conjugate_target(n)), fs);
    else
      lhs = lorentz_maximal_norm(conjugate_target(n), 1.0, fs);
    return {{0.0, lhs, check_constant(id, n, prm) * grad_l1}};
  }
  if (id == "gardel") {
    const double lhs = gardel_lhs(ctx.osc(), n, prm.p, prm.q);
    const double rhs = ri_norm(RiSpaceSpec::lorentz(prm.p, prm.q), ctx.grad_star());
    return {{0.0, lhs, check_constant(id, n, prm) * rhs}};
  }
  if (id == "final") {
    const BoydIndices b = boyd_indices(prm.space);
    if (!(b.alpha > 0.0))
      throw DomainError("final needs a space with positive lower Boyd index, got " +
                        prm.space.to_string());
    const double lhs = ri_norm(prm.space, ctx.osc().times_power(-1.0 / n));
    return {{0.0, lhs, ri_norm(prm.space, ctx.grad_star())}};
  }
  if (id == "sobolev-identity") {
    const double lhs = ctx.osc().weighted_integral(-1.0 / n, 0.0, kInf);
    const double rhs = n == 1 ? fs.sup()
                              : (1.0 - 1.0 / n) * lorentz_maximal_norm(conjugate_target(n), 1.0, fs);
    return {{0.0, lhs, rhs}};
  }
  throw UnsupportedError("check '" + id + "' is not scalar");
}

bool is_scalar(const std::string& id) {
  return id == "gn-weak" || id == "gn-strong" || id == "teoA5" || id == "gardel" ||
         id == "final" || id == "sobolev-identity";
}

std::vector<std::pair<double, double>> default_pairs(const std::vector<double>& probes,
                                                     double cell) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i + 1; j < probes.size(); ++j)
      if (probes[j] - probes[i] >= kPairCells * cell) out.emplace_back(probes[i], probes[j]);
  return out;
}

}  // namespace

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{
      "balboa",     "boca",   "cincouno", "final",       "gardel",
      "gn-strong",  "gn-weak", "intermedia", "layer-cake", "polya-szego",
      "sobolev-identity", "teoA2", "teoA5", "tres",        "truncacion"};
  return ids;
}

bool is_identity_check(const std::string& id) {
  return id == "layer-cake" || id == "sobolev-identity" || id == "cincouno";
}

bool is_gating(const std::string& id, const CheckParams& params) {
  if (id == "final") return false;
  if (id == "gardel") return params.p == 1.0;
  return true;
}

std::vector<double> default_probes(double h, int n, double support) {
  double lo = h > 0.0 ? kProbeCells * std::pow(h, n) : 1e-4 * support;
  double hi = 4.0 * support;
  if (!(lo > 0.0)) lo = 1e-3;
  if (!(hi > 2.0 * lo)) hi = 100.0 * lo;
  std::vector<double> out(kProbeCount);
  for (int i = 0; i < kProbeCount; ++i)
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (kProbeCount - 1));
  if (h > 0.0) {
    // Whole cells of the probe spacing, so that every finer level sees the
    // probes at step boundaries too.
    const double cell = std::pow(h, n);
    for (double& t : out) t = std::round(t / cell) * cell;
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return out;
}

CheckContext::CheckContext(const GridFunction& f, CheckParams params)
    : params_(std::move(params)) {
  if (params_.n != 0 && params_.n != f.dim())
    throw DomainError("check dimension does not match the grid");
  n_ = f.dim();
  h_ = f.spacing();
  grid_ = std::make_shared<const GridFunction>(f);
  fstar_ = rearrange(f);
  grad_star_ = rearrange(gradient_magnitude(f));
  osc_ = oscillation(fstar_);
  const double ph = params_.probe_h > 0.0 ? params_.probe_h : h_;
  probes_ = params_.probes.empty() ? default_probes(ph, n_, fstar_.support()) : params_.probes;
  pairs_ = params_.pairs.empty() ? default_pairs(probes_, std::pow(ph, n_)) : params_.pairs;
}

CheckContext::CheckContext(const RadialProfile& p, int n, CheckParams params)
    : params_(std::move(params)) {
  if (n < 1 || n > 3) throw DomainError("dimension must be 1, 2 or 3");
  n_ = n;
  fstar_ = profile_rearrangement(p, n);
  grad_star_ = radial_gradient_rearrangement(p, n);
  osc_ = oscillation(fstar_);
  probes_ = params_.probes.empty() ? default_probes(0.0, n_, fstar_.support()) : params_.probes;
  pairs_ = params_.pairs;
}

double check_constant(const std::string& id, int n, const CheckParams& params) {
  require_known(id);
  const double c = santalo(n);
  if (id == "gn-weak" || id == "truncacion" || id == "boca" || id == "intermedia" || id == "tres")
    return c;
  if (id == "teoA2") return n * c;
  if (id == "polya-szego") return n;
  if (id == "gn-strong" || id == "teoA5") return n == 1 ? c : n * n / (n - 1.0) * c;
  if (id == "gardel") return params.p == 1.0 ? n * c : 1.0;
  if (id == "balboa") {
    const double alpha = 1.0 + 1.0 / n;
    return (1.0 - std::pow(2.0, -alpha)) / alpha;
  }
  return 1.0;
}

InequalityReport check(const std::string& id, const CheckContext& ctx) {
  require_known(id);
  if (ctx.radial_input() && needs_grid(id))
    throw InputKindError("check '" + id + "' needs a grid function");
  const CheckParams& prm = ctx.params();
  if (id == "gardel") {
    if (!(prm.p >= 1.0) || !(prm.q >= 1.0)) throw DomainError("gardel needs p >= 1 and q >= 1");
    if (prm.p == 1.0 && prm.q != 1.0) throw DomainError("gardel with p = 1 needs q = 1");
  }
  double slack = is_identity_check(id) ? kIdentitySlack : prm.slack;
  if (id == "polya-szego" && !ctx.radial_input()) slack += kProfileSlack;
  InequalityReport r;
  if (is_scalar(id)) {
    r = finalize(id, scalar_samples(id, ctx), check_constant(id, ctx.n(), prm), slack);
  } else if (id == "balboa") {
    std::vector<CurvePoint> samples = curve_samples(id, ctx, ctx.probes(), ctx.pairs());
    // Norm comparison of Qf and Qg, g = n gamma^{-1/n} |grad f|*.
    const int n = ctx.n();
    const Piecewise qf = hardy_Q(ctx.osc().times_power(-1.0 / n));
    const Piecewise qg = hardy_Q(Piecewise::from_step(ctx.grad_star())).scaled(n * santalo(n));
    samples.push_back({0.0, ri_norm(prm.space, qf), ri_norm(prm.space, qg)});
    r = finalize(id, samples, check_constant(id, n, prm), slack);
  } else {
    r = finalize(id, curve_samples(id, ctx, ctx.probes(), ctx.pairs()),
                 check_constant(id, ctx.n(), prm), slack);
  }
  r.h = ctx.h();
  return r;
}

InequalityReport check(const std::string& id, const GridFunction& f, const CheckParams& params) {
  require_known(id);
  return check(id, CheckContext(f, params));
}

InequalityReport check(const std::string& id, const RadialProfile& f, int n,
                       const CheckParams& params) {
  require_known(id);
  if (needs_grid(id)) throw InputKindError("check '" + id + "' needs a grid function");
  return check(id, CheckContext(f, n, params));
}

std::vector<CurvePoint> check_curve(const std::string& id, const CheckContext& ctx,
                                    const std::vector<double>& t) {
  require_known(id);
  if (ctx.radial_input() && needs_grid(id))
    throw InputKindError("check '" + id + "' needs a grid function");
  std::vector<std::pair<double, double>> pairs;
  for (double x : t) pairs.emplace_back(x, 2.0 * x);
  return curve_samples(id, ctx, t, pairs);
}

double cincouno_bound(const DecreasingStep& fstar, double a, const RiSpaceSpec& space) {
  if (!(a >= 0.0)) throw DomainError("cincouno exponent must be >= 0");
  const double num = ri_norm(space, double_star(fstar).times_power(-a));
  const double den = ri_norm(space, oscillation(fstar).times_power(-a));
  if (den == 0.0) return num == 0.0 ? 0.0 : kInf;
  return num / den;
}

std::vector<double> level_spacings(double finest, int levels) {
  if (!(finest > 0.0) || levels < 1) throw DomainError("need a positive spacing and levels >= 1");
  std::vector<double> out(levels);
  for (int i = 0; i < levels; ++i) out[i] = std::ldexp(finest, levels - 1 - i);
  return out;
}

Trend refinement_trend(const std::string& id, const FamilySpec& family,
                       const std::vector<double>& spacings, const CheckParams& params) {
  require_known(id);
  Trend tr;
  CheckParams prm = params;
  if (prm.probe_h == 0.0 && !spacings.empty())
    prm.probe_h = *std::max_element(spacings.begin(), spacings.end());
  for (double h : spacings) tr.levels.emplace_back(h, check(id, generate(family, h), prm).ratio);
  if (tr.levels.size() >= 2) {
    double mh = 0.0;
    double mr = 0.0;
    for (const auto& [h, r] : tr.levels) {
      mh += h;
      mr += r;
    }
    mh /= tr.levels.size();
    mr /= tr.levels.size();
    double num = 0.0;
    double den = 0.0;
    for (const auto& [h, r] : tr.levels) {
      num += (h - mh) * (r - mr);
      den += (h - mh) * (h - mh);
    }
    tr.slope = den > 0.0 ? num / den : 0.0;
  }
  return tr;
}

ConstantEstimate best_constant_search(const std::string& id,
                                      const std::vector<FamilySpec>& family,
                                      const std::vector<double>& spacings,
                                      const CheckParams& params) {
  require_known(id);
  if (family.empty()) throw DomainError("best_constant_search needs a nonempty family");
  if (spacings.empty()) throw DomainError("best_constant_search needs at least one spacing");
  ConstantEstimate est;
  for (const FamilySpec& member : family) {
    std::vector<double> consts;
    std::vector<double> used;
    for (std::size_t i = 0; i < spacings.size(); ++i) {
      std::optional<GridFunction> grid;
      try {
        grid.emplace(generate(member, spacings[i]));
      } catch (const ResolutionError&) {
        if (i + 1 == spacings.size()) throw;
        continue;
      }
      const InequalityReport r = check(id, *grid, params);
      consts.push_back(r.ratio * r.constant_used);
      used.push_back(spacings[i]);
    }
    double value = consts.back();
    if (consts.size() >= 2) {
      const double h1 = used[used.size() - 2];
      const double h2 = used.back();
      const double c1 = consts[consts.size() - 2];
      const double c2 = consts.back();
      value = c2 - h2 * (c1 - c2) / (h1 - h2);
    }
    est.members.push_back(value);
  }
  est.best = *std::max_element(est.members.begin(), est.members.end());
  est.extrapolated = est.best;
  const bool balls = std::all_of(family.begin(), family.end(),
                                 [](const FamilySpec& f) { return f.kind == "ball"; });
  if (balls && family.size() >= 2) {
    std::vector<std::pair<double, double>> by_delta;
    for (std::size_t i = 0; i < family.size(); ++i)
      by_delta.emplace_back(family[i].param("delta"), est.members[i]);
    std::sort(by_delta.begin(), by_delta.end());
    const auto [d1, c1] = by_delta[0];
    const auto [d2, c2] = by_delta[1];
    if (d2 > d1) est.extrapolated = c1 - d1 * (c2 - c1) / (d2 - d1);
  }
  return est;
}

}  // namespace rearr
