#pragma once

// Rearrangement-invariant function norms on (0, inf): Lebesgue, Lorentz,
// weak Lorentz and Orlicz (Luxemburg).  Boyd indices and the target-space
// functionals ||t^{-k/n} (f** - f*)||_X and ||t^{-k/n} f**||_X.
//
// Text grammar (round-trips through to_string):
//   Lp:<p>                    p in [1, inf], "inf" allowed
//   Lorentz:<p>,<q>           p in (0, inf), q in (0, inf]
//   Weak:<p>                  same as Lorentz:<p>,inf
//   Orlicz:power:<p>          Phi(t) = t^p, p >= 1
//   Orlicz:power-log:<p>,<b>  Phi(t) = t^p log(e + t)^b, p >= 1, b >= 0
// Any of these may end in "@<m>" to restrict to a domain of measure m.

#include <span>
#include <string>
#include <vector>

#include "rearr/piecewise.hpp"
#include "rearr/stepfn.hpp"

namespace rearr {

struct YoungFunction {
  enum class Family { Power, PowerLog };
  Family family = Family::Power;
  double p = 1.0;
  double beta = 0.0;

  static YoungFunction power(double p);
  static YoungFunction power_log(double p, double beta);

  double operator()(double t) const;
  // Midpoint convexity on a log grid of 100 points per decade over
  // [1e-6, 1e6]; also checks Phi(0) = 0 and monotonicity.
  bool convex_on_samples() const;
};

struct RiSpaceSpec {
  enum class Kind { Lebesgue, Lorentz, Weak, Orlicz };
  Kind kind = Kind::Lebesgue;
  double p = 2.0;
  double q = 2.0;  // Lorentz only
  YoungFunction phi;
  double domain_measure;  // +inf on R^n

  RiSpaceSpec();
  static RiSpaceSpec lebesgue(double p);
  static RiSpaceSpec lorentz(double p, double q);
  static RiSpaceSpec weak(double p);
  static RiSpaceSpec orlicz(YoungFunction phi);

  static RiSpaceSpec parse(const std::string& text);
  std::string to_string() const;
};

struct BoydIndices {
  double alpha = 0.0;
  double beta = 0.0;
  bool exact = false;  // false: [alpha, beta] is an estimated bracket
};

// Norm of a decreasing step function; exact except for the Orlicz
// bisection (relative 1e-12).
double ri_norm(const RiSpaceSpec& spec, const DecreasingStep& f);

// Norm of |g| for a general piecewise function.  Lebesgue norms and the
// Lorentz functional of nonincreasing monomial data are exact; otherwise
// |g| is discretized by Gauss-Legendre nodes on a geometric refinement of
// its segments (rearranged through the nodes when it is not monotone).
double ri_norm(const RiSpaceSpec& spec, const Piecewise& g);

// Lorentz functional built on f**: (int_0^inf (t^{1/p} f**(t))^q dt/t)^{1/q}.
double lorentz_maximal_norm(double p, double q, const DecreasingStep& f);

// max over probes of ||f*(t/s)|| / ||f*||, a lower bound for the dilation
// norm.  Probes with zero norm are skipped; DomainError if none remain.
double dilation_norm_estimate(const RiSpaceSpec& spec, double s,
                              std::span<const DecreasingStep> probes);

// Indicators chi_(0, 10^j), j = -6..6, and a few staircases.
std::vector<DecreasingStep> default_boyd_probes();

BoydIndices boyd_indices(const RiSpaceSpec& spec);

struct TargetNorms {
  double oscillation = 0.0;  // ||t^{-k/n} (f** - f*)||_X
  double maximal = 0.0;      // ||t^{-k/n} f**||_X, +inf when divergent
};

// DomainError unless 1 <= k < n.  DivergenceError if the oscillation
// functional is infinite.
TargetNorms optimal_target_norm(const RiSpaceSpec& spec, int k, int n,
                                const DecreasingStep& f);

}  // namespace rearr
