#pragma once

// Compactly supported nonnegative functions sampled on uniform cell-centered
// grids in R^n (n = 1, 2, 3), and the radial profiles of their symmetric
// decreasing rearrangements.

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "rearr/stepfn.hpp"

namespace rearr {

class GridFunction {
 public:
  GridFunction() = default;

  // Values are row-major (last axis fastest).  Throws DomainError unless
  // dim is 1..3, h > 0, every extent is >= 3, the values are finite and
  // nonnegative, and every cell of the outer layer is zero.
  GridFunction(int dim, double h, std::vector<std::size_t> shape,
               std::vector<double> values);

  // Samples f at the cell centers of the smallest box holding the ball of
  // radius `reach` around the origin plus two zero layers on each side.
  // Cell centers sit at (i - (N-1)/2) * h with N = 2*ceil(reach/h) + 5.
  static GridFunction sample(int dim, double h, double reach,
                             const std::function<double(const std::array<double, 3>&)>& f);
  // Same with a separate reach per axis (a box instead of a cube).
  static GridFunction sample(int dim, double h, const std::array<double, 3>& reach,
                             const std::function<double(const std::array<double, 3>&)>& f);

  int dim() const { return dim_; }
  double spacing() const { return h_; }
  double cell_measure() const;
  std::span<const std::size_t> shape() const { return shape_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double max_value() const;

  // Coordinate of a cell center along one axis.
  double center(std::size_t index, int axis) const;

  // Pointwise map; the result must stay nonnegative and vanish where the
  // input vanishes on the outer layer.
  GridFunction map(const std::function<double(double)>& phi) const;

  // Lebesgue norm of the cell values, p >= 1 (p = inf gives the max).
  double lp_norm(double p) const;

 private:
  int dim_ = 1;
  double h_ = 1.0;
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
};

// Piecewise-linear nonincreasing profile u(r) with u(r_M) = 0.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(std::vector<double> radii, std::vector<double> values);

  std::span<const double> radii() const { return radii_; }
  std::span<const double> values() const { return values_; }
  double support_radius() const { return radii_.empty() ? 0.0 : radii_.back(); }
  double operator()(double r) const;

 private:
  std::vector<double> radii_;
  std::vector<double> values_;
};

// pi^{n/2} / Gamma(n/2 + 1).
double unit_ball_measure(int n);

// Measure of {f > t}.  DomainError for t < 0.
double distribution(const GridFunction& f, double t);

DecreasingStep rearrange(const GridFunction& f);

// Euclidean norm of the central-difference gradient.  The outer layer of the
// result is zero, so inputs should keep a second zero layer (sample() does).
GridFunction gradient_magnitude(const GridFunction& f);

// min(max(f - t1, 0), t2 - t1).  DomainError unless 0 <= t1 < t2.
GridFunction truncate(const GridFunction& f, double t1, double t2);

// Radial profile of f in the radius r = (s / gamma_n)^{1/n}.  With spacing 0
// f* is interpolated linearly between the midpoints of its steps, flat up to
// the first midpoint and zero at the end of the support.  With a spacing the
// knots are r = k * spacing, which keeps the slopes at grid scale.
RadialProfile symmetric_rearrangement(const GridFunction& f);
RadialProfile symmetric_rearrangement(const DecreasingStep& fstar, int n, double spacing = 0.0);

// Decreasing rearrangement of |u'| viewed as a function on R^n.
DecreasingStep radial_gradient_rearrangement(const RadialProfile& p, int n);

// f*(s) = u((s / gamma_n)^{1/n}) sampled as a step function: on each radial
// band the average of the linear piece over the band's s-range.
DecreasingStep profile_rearrangement(const RadialProfile& p, int n);

// Text format: header line "dim h n_1 ... n_dim" followed by the row-major
// values, one per line.  Doubles are written in shortest round-trip form.
void write_grid(std::ostream& out, const GridFunction& f);
GridFunction read_grid(std::istream& in);

}  // namespace rearr
