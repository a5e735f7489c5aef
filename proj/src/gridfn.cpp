#include "rearr/gridfn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "rearr/errors.hpp"

namespace rearr {
namespace {

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok) {
  double x = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError("bad number in grid file: '" + tok + "'");
  return x;
}

// Strides for row-major storage.
std::array<std::size_t, 3> strides_of(std::span<const std::size_t> shape) {
  std::array<std::size_t, 3> st{0, 0, 0};
  std::size_t acc = 1;
  for (std::size_t a = shape.size(); a-- > 0;) {
    st[a] = acc;
    acc *= shape[a];
  }
  return st;
}

bool on_outer_layer(std::size_t flat, std::span<const std::size_t> shape,
                    const std::array<std::size_t, 3>& st) {
  for (std::size_t a = 0; a < shape.size(); ++a) {
    const std::size_t i = (flat / st[a]) % shape[a];
    if (i == 0 || i + 1 == shape[a]) return true;
  }
  return false;
}

}  // namespace

GridFunction::GridFunction(int dim, double h, std::vector<std::size_t> shape,
                           std::vector<double> values)
    : dim_(dim), h_(h), shape_(std::move(shape)), values_(std::move(values)) {
  if (dim_ < 1 || dim_ > 3) throw DomainError("grid dimension must be 1, 2 or 3");
  if (!(h_ > 0.0) || !std::isfinite(h_)) throw DomainError("grid spacing must be positive");
  if (shape_.size() != static_cast<std::size_t>(dim_))
    throw DomainError("grid shape must have one extent per axis");
  std::size_t count = 1;
  for (std::size_t e : shape_) {
    if (e < 3) throw DomainError("every grid extent must be at least 3");
    count *= e;
  }
  if (count != values_.size()) throw DomainError("grid value count does not match shape");
  const auto st = strides_of(shape_);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v < 0.0) throw DomainError("grid values must be finite and >= 0");
    if (v != 0.0 && on_outer_layer(i, shape_, st))
      throw DomainError("grid function must vanish on the outer layer");
  }
}

GridFunction GridFunction::sample(
    int dim, double h, double reach,
    const std::function<double(const std::array<double, 3>&)>& f) {
  return sample(dim, h, std::array<double, 3>{reach, reach, reach}, f);
}

GridFunction GridFunction::sample(
    int dim, double h, const std::array<double, 3>& reach,
    const std::function<double(const std::array<double, 3>&)>& f) {
  if (dim < 1 || dim > 3) throw DomainError("grid dimension must be 1, 2 or 3");
  if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
  std::vector<std::size_t> shape(dim);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    if (!(reach[a] > 0.0)) throw DomainError("sampling reach must be positive");
    shape[a] = 2 * static_cast<std::size_t>(std::ceil(reach[a] / h)) + 5;
    total *= shape[a];
  }
  std::vector<double> values(total, 0.0);
  const auto st = strides_of(shape);
  for (std::size_t i = 0; i < total; ++i) {
    if (on_outer_layer(i, shape, st)) continue;
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a)
      x[a] = (static_cast<double>((i / st[a]) % shape[a]) - 0.5 * static_cast<double>(shape[a] - 1)) * h;
    values[i] = f(x);
  }
  return GridFunction(dim, h, std::move(shape), std::move(values));
}

double GridFunction::cell_measure() const { return std::pow(h_, dim_); }

double GridFunction::max_value() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double GridFunction::center(std::size_t index, int axis) const {
  return (static_cast<double>(index) - 0.5 * static_cast<double>(shape_[axis] - 1)) * h_;
}

GridFunction GridFunction::map(const std::function<double(double)>& phi) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), phi);
  return GridFunction(dim_, h_, shape_, std::move(out));
}

double GridFunction::lp_norm(double p) const {
  if (std::isinf(p)) return max_value();
  if (!(p >= 1.0)) throw DomainError("lp_norm needs p >= 1");
  long double acc = 0.0L;
  for (double v : values_)
    if (v != 0.0) acc += std::pow(static_cast<long double>(v), static_cast<long double>(p));
  return static_cast<double>(std::pow(acc * cell_measure(), 1.0L / p));
}

RadialProfile::RadialProfile(std::vector<double> radii, std::vector<double> values)
    : radii_(std::move(radii)), values_(std::move(values)) {
  if (radii_.size() < 2 || radii_.size() != values_.size())
    throw DomainError("radial profile needs at least two knots");
  if (radii_.front() != 0.0) throw DomainError("radial profile must start at r = 0");
  for (std::size_t i = 1; i < radii_.size(); ++i) {
    if (!(radii_[i] > radii_[i - 1]) || !std::isfinite(radii_[i]))
      throw DomainError("profile radii must be strictly increasing");
    if (values_[i] > values_[i - 1])
      throw MonotonicityError("profile values must be nonincreasing");
  }
  if (values_.back() != 0.0) throw DomainError("profile must end at value 0");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("profile values must be finite");
}

double RadialProfile::operator()(double r) const {
  if (r <= 0.0) return values_.front();
  if (r >= radii_.back()) return 0.0;
  const std::size_t j = static_cast<std::size_t>(
      std::upper_bound(radii_.begin(), radii_.end(), r) - radii_.begin());
  const double r0 = radii_[j - 1];
  const double r1 = radii_[j];
  const double w = (r - r0) / (r1 - r0);
  return values_[j - 1] + w * (values_[j] - values_[j - 1]);
}

double unit_ball_measure(int n) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double distribution(const GridFunction& f, double t) {
  if (!(t >= 0.0)) throw DomainError("distribution needs t >= 0");
  const auto vals = f.values();
  const auto count = std::count_if(vals.begin(), vals.end(), [t](double v) { return v > t; });
  return static_cast<double>(count) * f.cell_measure();
}

DecreasingStep rearrange(const GridFunction& f) {
  std::vector<double> vals;
  vals.reserve(f.size());
  for (double v : f.values())
    if (v > 0.0) vals.push_back(v);
  std::sort(vals.begin(), vals.end(), std::greater<>());
  std::vector<double> breaks;
  std::vector<double> levels;
  const double cell = f.cell_measure();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    // Breaks as count * cell: a single rounding per break.
    if (i + 1 < vals.size() && vals[i + 1] == vals[i]) continue;
    breaks.push_back(static_cast<double>(i + 1) * cell);
    levels.push_back(vals[i]);
  }
  if (breaks.empty()) return DecreasingStep();
  return DecreasingStep::make(std::move(breaks), std::move(levels));
}

GridFunction gradient_magnitude(const GridFunction& f) {
  const auto shape = f.shape();
  const auto st = strides_of(shape);
  const auto vals = f.values();
  const double inv2h = 0.5 / f.spacing();
  std::vector<double> out(vals.size(), 0.0);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (on_outer_layer(i, shape, st)) continue;
    double sq = 0.0;
    for (int a = 0; a < f.dim(); ++a) {
      const double d = (vals[i + st[a]] - vals[i - st[a]]) * inv2h;
      sq += d * d;
    }
    out[i] = std::sqrt(sq);
  }
  return GridFunction(f.dim(), f.spacing(), {shape.begin(), shape.end()}, std::move(out));
}

GridFunction truncate(const GridFunction& f, double t1, double t2) {
  if (!(t1 >= 0.0) || !(t2 > t1)) throw DomainError("truncate needs 0 <= t1 < t2");
  return f.map([t1, t2](double v) { return v > t2 ? t2 - t1 : (v > t1 ? v - t1 : 0.0); });
}

RadialProfile symmetric_rearrangement(const DecreasingStep& fstar, int n, double spacing) {
  if (spacing < 0.0 || !std::isfinite(spacing)) throw DomainError("spacing must be >= 0");
  const double gamma = unit_ball_measure(n);
  const auto to_r = [gamma, n](double s) { return std::pow(s / gamma, 1.0 / n); };
  if (fstar.empty()) return RadialProfile({0.0, 1.0}, {0.0, 0.0});
  if (spacing > 0.0) {
    const auto knots = static_cast<std::size_t>(std::ceil(to_r(fstar.support()) / spacing));
    std::vector<double> radii;
    std::vector<double> values;
    for (std::size_t k = 0; k <= knots; ++k) {
      const double r = k * spacing;
      radii.push_back(r);
      values.push_back(k == knots ? 0.0 : fstar(gamma * std::pow(r, n)));
    }
    return RadialProfile(std::move(radii), std::move(values));
  }
  std::vector<double> radii{0.0};
  std::vector<double> values{fstar.values().front()};
  double left = 0.0;
  for (std::size_t i = 0; i < fstar.size(); ++i) {
    const double right = fstar.breaks()[i];
    radii.push_back(to_r(0.5 * (left + right)));
    values.push_back(fstar.values()[i]);
    left = right;
  }
  radii.push_back(to_r(fstar.support()));
  values.push_back(0.0);
  return RadialProfile(std::move(radii), std::move(values));
}

RadialProfile symmetric_rearrangement(const GridFunction& f) {
  return symmetric_rearrangement(rearrange(f), f.dim());
}

DecreasingStep radial_gradient_rearrangement(const RadialProfile& p, int n) {
  const double gamma = unit_ball_measure(n);
  struct Band {
    double slope;
    double measure;
  };
  std::vector<Band> bands;
  const auto r = p.radii();
  const auto u = p.values();
  for (std::size_t j = 1; j < r.size(); ++j) {
    const double slope = (u[j - 1] - u[j]) / (r[j] - r[j - 1]);
    if (slope <= 0.0) continue;
    bands.push_back({slope, gamma * (std::pow(r[j], n) - std::pow(r[j - 1], n))});
  }
  std::stable_sort(bands.begin(), bands.end(),
                   [](const Band& a, const Band& b) { return a.slope > b.slope; });
  std::vector<double> slopes;
  std::vector<double> measures;
  for (const Band& b : bands) {
    slopes.push_back(b.slope);
    measures.push_back(b.measure);
  }
  return DecreasingStep::from_sorted_levels(slopes, measures);
}

DecreasingStep profile_rearrangement(const RadialProfile& p, int n) {
  const double gamma = unit_ball_measure(n);
  const auto r = p.radii();
  const auto u = p.values();
  std::vector<double> breaks;
  std::vector<double> values;
  for (std::size_t j = 1; j < r.size(); ++j) {
    const long double r0 = r[j - 1];
    const long double r1 = r[j];
    const long double m = (static_cast<long double>(u[j]) - u[j - 1]) / (r1 - r0);
    const long double dn = std::pow(r1, n) - std::pow(r0, n);
    const long double dn1 = std::pow(r1, n + 1) - std::pow(r0, n + 1);
    // Mean of u over the band with respect to n r^{n-1} dr.
    const long double mean = (u[j - 1] - m * r0) + m * n / (n + 1) * dn1 / dn;
    breaks.push_back(static_cast<double>(gamma * std::pow(r1, n)));
    values.push_back(std::max(0.0, static_cast<double>(mean)));
  }
  for (std::size_t i = 1; i < values.size(); ++i) values[i] = std::min(values[i], values[i - 1]);
  return DecreasingStep::make(std::move(breaks), std::move(values));
}

void write_grid(std::ostream& out, const GridFunction& f) {
  out << f.dim() << ' ' << shortest(f.spacing());
  for (std::size_t e : f.shape()) out << ' ' << e;
  out << '\n';
  for (double v : f.values()) out << shortest(v) << '\n';
}

GridFunction read_grid(std::istream& in) {
  std::string tok;
  int dim = 0;
  if (!(in >> dim)) throw ParseError("grid file: missing dimension");
  if (dim < 1 || dim > 3) throw ParseError("grid file: dimension must be 1, 2 or 3");
  if (!(in >> tok)) throw ParseError("grid file: missing spacing");
  const double h = parse_double(tok);
  std::vector<std::size_t> shape(dim);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    long long e = 0;
    if (!(in >> e) || e < 3) throw ParseError("grid file: bad extent");
    shape[a] = static_cast<std::size_t>(e);
    total *= shape[a];
  }
  std::vector<double> values;
  values.reserve(total);
  while (values.size() < total && in >> tok) values.push_back(parse_double(tok));
  if (values.size() != total) throw ParseError("grid file: too few values");
  if (in >> tok) throw ParseError("grid file: trailing data");
  return GridFunction(dim, h, std::move(shape), std::move(values));
}

}  // namespace rearr
