#include "rearr/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "rearr/errors.hpp"
#include "rearr/operators.hpp"

namespace rearr {
namespace {

constexpr int kMinCells = 16;

std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_value(const std::string& tok, const std::string& context) {
  double x = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() ||
      !std::isfinite(x))
    throw ParseError("bad value '" + tok + "' in family '" + context + "'");
  return x;
}

std::string canonical_kind(const std::string& k) {
  if (k == "cone") return "cone";
  if (k == "ball" || k == "ball-indicator-mollified") return "ball";
  if (k == "gauss" || k == "gaussian-bump-truncated") return "gauss";
  if (k == "multibump" || k == "multi-bump") return "multibump";
  if (k == "radial" || k == "radial-from-profile") return "radial";
  if (k == "randsmooth" || k == "random-smooth") return "randsmooth";
  throw ParseError("unknown family kind '" + k + "'");
}

const std::vector<std::pair<std::string, double>>& defaults_for(const std::string& kind) {
  static const std::vector<std::pair<std::string, double>> cone{{"radius", 1.0}, {"height", 1.0}};
  static const std::vector<std::pair<std::string, double>> ball{
      {"radius", 1.0}, {"height", 1.0}, {"delta", 0.1}};
  static const std::vector<std::pair<std::string, double>> gauss{
      {"radius", 1.0}, {"height", 1.0}, {"sigma", 0.4}};
  static const std::vector<std::pair<std::string, double>> multibump{{"count", 3.0},
                                                                     {"height", 1.0}};
  static const std::vector<std::pair<std::string, double>> radial{{"levels", 1.0},
                                                                  {"height", 1.0}};
  static const std::vector<std::pair<std::string, double>> randsmooth{
      {"seed", 7.0}, {"radius", 1.0}, {"height", 1.0}};
  if (kind == "cone") return cone;
  if (kind == "ball") return ball;
  if (kind == "gauss") return gauss;
  if (kind == "multibump") return multibump;
  if (kind == "radial") return radial;
  return randsmooth;
}

void validate(const FamilySpec& s) {
  if (s.n < 1 || s.n > 3) throw DomainError("family dimension must be 1, 2 or 3");
  const double height = s.param("height");
  if (!(height >= 0.0)) throw DomainError("height must be >= 0");
  if (s.kind == "cone" || s.kind == "ball" || s.kind == "gauss" || s.kind == "randsmooth")
    if (!(s.param("radius") > 0.0)) throw DomainError("radius must be positive");
  if (s.kind == "ball") {
    const double d = s.param("delta");
    if (!(d > 0.0 && d <= 1.0)) throw DomainError("ball delta must be in (0, 1]");
  }
  if (s.kind == "gauss" && !(s.param("sigma") > 0.0)) throw DomainError("sigma must be positive");
  if (s.kind == "multibump") {
    const double c = s.param("count");
    if (c != std::floor(c) || c < 1 || c > 8) throw DomainError("count must be an integer in 1..8");
  }
  if (s.kind == "radial") {
    const double k = s.param("levels");
    if (k != std::floor(k) || k < 1 || k > 64) throw DomainError("levels must be an integer in 1..64");
  }
  if (s.kind == "randsmooth") {
    const double seed = s.param("seed");
    if (seed != std::floor(seed) || seed < 0) throw DomainError("seed must be a nonnegative integer");
  }
}

// Bumps of the multibump family: centers along the first axis.
struct Bump {
  double center;
  double radius;
  double height;
};

std::vector<Bump> bumps_of(const FamilySpec& s) {
  const int count = static_cast<int>(s.param("count"));
  std::vector<Bump> out;
  double cursor = 0.0;
  const double gap = 0.1;
  for (int j = 0; j < count; ++j) {
    const double r = 0.5 * std::pow(0.8, j);
    if (j > 0) cursor += gap;
    out.push_back({cursor + r, r, s.param("height") * std::pow(0.75, j)});
    cursor += 2.0 * r;
  }
  for (Bump& b : out) b.center -= 0.5 * cursor;
  return out;
}

double gauss_value(const FamilySpec& s, double r) {
  const double R = s.param("radius");
  if (r >= R) return 0.0;
  const double sig2 = 2.0 * s.param("sigma") * s.param("sigma");
  const double floor = std::exp(-R * R / sig2);
  return s.param("height") * (std::exp(-r * r / sig2) - floor) / (1.0 - floor);
}

// Staircase g of the radial family: value (levels - j)/levels on
// ((j)/levels, (j+1)/levels], scaled by height.
StepFunction radial_source(const FamilySpec& s) {
  const int k = static_cast<int>(s.param("levels"));
  std::vector<double> b;
  std::vector<double> v;
  for (int j = 0; j < k; ++j) {
    b.push_back(static_cast<double>(j + 1) / k);
    v.push_back(s.param("height") * static_cast<double>(k - j) / k);
  }
  return StepFunction(std::move(b), std::move(v));
}

// u(r) = n * sum_j v_j (b_j^{1/n} - max(b_{j-1}, r^n)^{1/n})_+ written in r.
RadialProfile radial_profile(const FamilySpec& s) {
  const StepFunction g = radial_source(s);
  const int n = s.n;
  const std::size_t k = g.size();
  std::vector<double> radii(k + 1);
  std::vector<double> values(k + 1, 0.0);
  radii[0] = 0.0;
  for (std::size_t j = 0; j < k; ++j) radii[j + 1] = std::pow(g.breaks()[j], 1.0 / n);
  for (std::size_t i = 0; i <= k; ++i) {
    long double acc = 0.0L;
    for (std::size_t j = i; j < k; ++j) acc += static_cast<long double>(g.values()[j]) * (radii[j + 1] - radii[j]);
    values[i] = static_cast<double>(n * acc);
  }
  values[k] = 0.0;
  return RadialProfile(std::move(radii), std::move(values));
}

// Coarse lattice of the randsmooth family: 33 points per axis on
// [-radius, radius], values in [0, 1] after smoothing and normalization.
struct Lattice {
  int dim;
  int m;
  double spacing;
  std::vector<double> values;
  double at(int i, int j, int l) const {
    if (i < 0 || j < 0 || l < 0 || i >= m || (dim > 1 && j >= m) || (dim > 2 && l >= m)) return 0.0;
    std::size_t idx = static_cast<std::size_t>(i);
    if (dim > 1) idx = idx * m + j;
    if (dim > 2) idx = idx * m + l;
    return values[idx];
  }
};

Lattice build_lattice(const FamilySpec& s) {
  Lattice lat{s.n, 33, 2.0 * s.param("radius") / 32.0, {}};
  std::size_t total = 1;
  for (int a = 0; a < s.n; ++a) total *= lat.m;
  std::mt19937_64 rng(static_cast<std::uint64_t>(s.param("seed")));
  lat.values.resize(total);
  for (double& v : lat.values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  std::vector<std::size_t> stride(s.n);
  std::size_t acc = 1;
  for (int a = s.n; a-- > 0;) {
    stride[a] = acc;
    acc *= lat.m;
  }
  for (int pass = 0; pass < 3; ++pass) {
    for (int a = 0; a < s.n; ++a) {
      std::vector<double> next(total, 0.0);
      for (std::size_t idx = 0; idx < total; ++idx) {
        const int i = static_cast<int>((idx / stride[a]) % lat.m);
        double sum = 0.0;
        for (int d = -2; d <= 2; ++d)
          if (i + d >= 0 && i + d < lat.m)
            sum += lat.values[idx + static_cast<std::ptrdiff_t>(d) * static_cast<std::ptrdiff_t>(stride[a])];
        next[idx] = sum / 5.0;
      }
      lat.values.swap(next);
    }
  }
  double peak = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    bool edge = false;
    for (int a = 0; a < s.n; ++a) {
      const int i = static_cast<int>((idx / stride[a]) % lat.m);
      if (i < 2 || i > lat.m - 3) edge = true;
    }
    if (edge) lat.values[idx] = 0.0;
    peak = std::max(peak, lat.values[idx]);
  }
  if (peak > 0.0)
    for (double& v : lat.values) v /= peak;
  return lat;
}

double lattice_value(const Lattice& lat, double radius, const std::array<double, 3>& x) {
  std::array<int, 3> base{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (int a = 0; a < lat.dim; ++a) {
    const double u = (x[a] + radius) / lat.spacing;
    if (u <= 0.0 || u >= lat.m - 1) return 0.0;
    base[a] = static_cast<int>(std::floor(u));
    frac[a] = u - base[a];
  }
  double acc = 0.0;
  const int corners = 1 << lat.dim;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::array<int, 3> idx{0, 0, 0};
    for (int a = 0; a < lat.dim; ++a) {
      const int bit = (c >> a) & 1;
      idx[a] = base[a] + bit;
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    acc += w * lat.at(idx[0], idx[1], idx[2]);
  }
  return acc;
}

double norm_of(const std::array<double, 3>& x, int n) {
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
  return std::sqrt(r2);
}

void require_resolution(double feature, double h) {
  if (feature / h < kMinCells)
    throw ResolutionError("grid spacing " + fmt(h) + " leaves fewer than 16 cells across a feature of size " +
                          fmt(feature));
}

}  // namespace

double FamilySpec::param(const std::string& key) const {
  for (const auto& [k, v] : params)
    if (k == key) return v;
  for (const auto& [k, v] : defaults_for(kind))
    if (k == key) return v;
  throw DomainError("family '" + kind + "' has no parameter '" + key + "'");
}

void FamilySpec::set(const std::string& key, double value) {
  if (key == "n") {
    if (value != std::floor(value) || value < 1 || value > 3)
      throw ParseError("n must be 1, 2 or 3");
    n = static_cast<int>(value);
    return;
  }
  const auto& defs = defaults_for(kind);
  if (std::none_of(defs.begin(), defs.end(), [&](const auto& d) { return d.first == key; }))
    throw ParseError("family '" + kind + "' has no parameter '" + key + "'");
  for (auto& [k, v] : params)
    if (k == key) {
      v = value;
      return;
    }
  params.emplace_back(key, value);
}

std::string FamilySpec::label() const {
  std::string out = kind + ":n=" + std::to_string(n);
  for (const auto& [k, v] : params) out += "," + k + "=" + fmt(v);
  return out;
}

FamilySpec FamilySpec::parse(const std::string& text, int default_n) {
  const auto colon = text.find(':');
  FamilySpec s;
  s.kind = canonical_kind(text.substr(0, colon));
  s.n = default_n;
  if (colon != std::string::npos) {
    const std::string rest = text.substr(colon + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      std::size_t end = rest.find(',', start);
      if (end == std::string::npos) end = rest.size();
      const std::string item = rest.substr(start, end - start);
      if (!item.empty()) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value in family '" + text + "'");
        s.set(item.substr(0, eq), parse_value(item.substr(eq + 1), text));
      }
      start = end + 1;
    }
  }
  try {
    validate(s);
  } catch (const ParseError&) {
    throw;
  } catch (const DomainError& e) {
    throw ParseError(std::string(e.what()) + " in family '" + text + "'");
  }
  return s;
}

std::vector<FamilySpec> parse_family_list(const std::string& text, int default_n) {
  std::vector<FamilySpec> out;
  std::string last_key;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    if (item.find(':') != std::string::npos || out.empty()) {
      out.push_back(FamilySpec::parse(item, default_n));
      const auto comma = item.rfind(',');
      const auto from = comma == std::string::npos ? item.find(':') : comma;
      const auto eq = item.find('=', from == std::string::npos ? 0 : from);
      last_key = (from == std::string::npos || eq == std::string::npos)
                     ? std::string()
                     : item.substr(from + 1, eq - from - 1);
      continue;
    }
    FamilySpec next = out.back();
    const auto eq = item.find('=');
    if (eq != std::string::npos) {
      last_key = item.substr(0, eq);
      next.set(last_key, parse_value(item.substr(eq + 1), item));
    } else {
      if (last_key.empty()) throw ParseError("bare value '" + item + "' has no key to continue");
      next.set(last_key, parse_value(item, item));
    }
    try {
      validate(next);
    } catch (const DomainError& e) {
      throw ParseError(std::string(e.what()) + " in family item '" + item + "'");
    }
    out.push_back(next);
  }
  return out;
}

std::vector<FamilySpec> default_corpus(int n) {
  std::vector<FamilySpec> out;
  for (const char* text : {"cone", "ball:delta=0.2", "ball:delta=0.1", "gauss", "multibump",
                           "radial", "randsmooth:seed=7"})
    out.push_back(FamilySpec::parse(text, n));
  return out;
}

bool is_radial(const FamilySpec& spec) {
  return spec.kind == "cone" || spec.kind == "ball" || spec.kind == "radial";
}

GridFunction generate(const FamilySpec& spec, double h) {
  validate(spec);
  if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
  const int n = spec.n;
  const double height = spec.param("height");
  if (spec.kind == "cone" || spec.kind == "ball" || spec.kind == "radial") {
    const RadialProfile p = generate_profile(spec);
    require_resolution(2.0 * p.support_radius(), h);
    return GridFunction::sample(n, h, p.support_radius(), [&](const std::array<double, 3>& x) {
      return p(norm_of(x, n));
    });
  }
  if (spec.kind == "gauss") {
    const double R = spec.param("radius");
    require_resolution(2.0 * R, h);
    return GridFunction::sample(n, h, R, [&](const std::array<double, 3>& x) {
      return gauss_value(spec, norm_of(x, n));
    });
  }
  if (spec.kind == "multibump") {
    const std::vector<Bump> bumps = bumps_of(spec);
    require_resolution(2.0 * bumps.back().radius, h);
    const double reach_x = bumps.back().center + bumps.back().radius;
    const std::array<double, 3> reach{reach_x, bumps.front().radius, bumps.front().radius};
    return GridFunction::sample(n, h, reach, [&](const std::array<double, 3>& x) {
      double v = 0.0;
      for (const Bump& b : bumps) {
        std::array<double, 3> y = x;
        y[0] -= b.center;
        const double r = norm_of(y, n);
        if (r < b.radius) v = std::max(v, b.height * (1.0 - r / b.radius));
      }
      return v;
    });
  }
  // randsmooth
  const double R = spec.param("radius");
  require_resolution(2.0 * R, h);
  if (height == 0.0) return GridFunction::sample(n, h, R, [](const std::array<double, 3>&) { return 0.0; });
  const Lattice lat = build_lattice(spec);
  return GridFunction::sample(n, h, R, [&](const std::array<double, 3>& x) {
    return height * lattice_value(lat, R, x);
  });
}

RadialProfile generate_profile(const FamilySpec& spec) {
  validate(spec);
  const double height = spec.param("height");
  if (spec.kind == "cone") {
    return RadialProfile({0.0, spec.param("radius")}, {height, 0.0});
  }
  if (spec.kind == "ball") {
    const double R = spec.param("radius");
    const double d = spec.param("delta");
    if (d >= 1.0) return RadialProfile({0.0, R}, {height, 0.0});
    return RadialProfile({0.0, R * (1.0 - d), R}, {height, height, 0.0});
  }
  if (spec.kind == "radial") return radial_profile(spec);
  throw UnsupportedError("family '" + spec.kind + "' has no exact radial profile");
}

double oracle_support(const FamilySpec& spec) {
  validate(spec);
  const double gamma = unit_ball_measure(spec.n);
  if (spec.param("height") == 0.0) return 0.0;
  if (spec.kind == "cone" || spec.kind == "ball" || spec.kind == "gauss")
    return gamma * std::pow(spec.param("radius"), spec.n);
  if (spec.kind == "radial") return gamma;
  if (spec.kind == "multibump") {
    double acc = 0.0;
    for (const Bump& b : bumps_of(spec)) acc += gamma * std::pow(b.radius, spec.n);
    return acc;
  }
  throw UnsupportedError("randsmooth has no closed-form rearrangement");
}

double oracle_value(const FamilySpec& spec, double s) {
  if (!(s > 0.0)) throw DomainError("oracle needs s > 0");
  const double support = oracle_support(spec);
  if (s >= support) return 0.0;
  const int n = spec.n;
  const double gamma = unit_ball_measure(n);
  const double height = spec.param("height");
  // For radial decreasing members f*(s) = u(r) with gamma r^n = s.
  const double r = std::pow(s / gamma, 1.0 / n);
  if (spec.kind == "cone") return height * (1.0 - r / spec.param("radius"));
  if (spec.kind == "ball") {
    const double R = spec.param("radius");
    const double d = spec.param("delta");
    return r <= R * (1.0 - d) ? height : height * (R - r) / (R * d);
  }
  if (spec.kind == "gauss") return gauss_value(spec, r);
  if (spec.kind == "radial") {
    // u = H_{1/n} g at t = |x|^n = s / gamma; for n = 1 the weight is s^0.
    const StepFunction g = radial_source(spec);
    const double t = s / gamma;
    if (n == 1) return weighted_integral(g, 0.0, t, g.support());
    return H_eval(g, 1.0 / n, t);
  }
  // multibump: invert lambda(t) = sum_j gamma (r_j (1 - t/h_j))_+^n.
  const std::vector<Bump> bumps = bumps_of(spec);
  const auto lambda = [&](double t) {
    double acc = 0.0;
    for (const Bump& b : bumps)
      if (t < b.height) acc += gamma * std::pow(b.radius * (1.0 - t / b.height), n);
    return acc;
  };
  double lo = 0.0;
  double hi = bumps.front().height;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * bumps.front().height; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lambda(mid) > s)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

DecreasingStep oracle_rearrangement(const FamilySpec& spec, std::size_t steps) {
  if (steps == 0) throw DomainError("oracle needs at least one step");
  const double support = oracle_support(spec);
  if (support == 0.0) return DecreasingStep();
  std::vector<double> b(steps);
  std::vector<double> v(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    b[i] = support * static_cast<double>(i + 1) / static_cast<double>(steps);
    v[i] = oracle_value(spec, support * (static_cast<double>(i) + 0.5) / static_cast<double>(steps));
  }
  b.back() = support;
  for (std::size_t i = 1; i < steps; ++i) v[i] = std::min(v[i], v[i - 1]);
  return DecreasingStep::make(std::move(b), std::move(v));
}

double lipschitz_constant(const FamilySpec& spec) {
  validate(spec);
  const double height = spec.param("height");
  if (spec.kind == "cone") return height / spec.param("radius");
  if (spec.kind == "ball") return height / (spec.param("radius") * spec.param("delta"));
  if (spec.kind == "gauss") {
    const double R = spec.param("radius");
    const double sig = spec.param("sigma");
    const double floor = std::exp(-R * R / (2.0 * sig * sig));
    const double rstar = std::min(sig, R);
    return height * rstar / (sig * sig) * std::exp(-rstar * rstar / (2.0 * sig * sig)) / (1.0 - floor);
  }
  if (spec.kind == "multibump") {
    double best = 0.0;
    for (const Bump& b : bumps_of(spec)) best = std::max(best, b.height / b.radius);
    return best;
  }
  if (spec.kind == "radial") {
    const RadialProfile p = radial_profile(spec);
    double best = 0.0;
    for (std::size_t j = 1; j < p.radii().size(); ++j)
      best = std::max(best, (p.values()[j - 1] - p.values()[j]) / (p.radii()[j] - p.radii()[j - 1]));
    return best;
  }
  throw UnsupportedError("randsmooth has no closed-form Lipschitz constant");
}

}  // namespace rearr
