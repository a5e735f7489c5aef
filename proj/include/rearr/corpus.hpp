#pragma once

// Test functions with closed-form rearrangements.
//
// Family strings: "kind:key=value,key=value".  Kinds and parameters
// (defaults in brackets):
//   cone        (1 - |x|/radius)_+ * height          radius [1] height [1]
//   ball        1 inside radius*(1-delta), linear ramp to 0 at radius
//                                                    radius [1] height [1] delta [0.1]
//   gauss       height * (exp(-|x|^2/2s^2) - exp(-radius^2/2s^2))_+ / (1 - exp(..))
//                                                    radius [1] height [1] sigma [0.4]
//   multibump   `count` disjoint cones, radii 0.5*0.8^j, heights 0.75^j
//                                                    count [3] height [1]
//   radial      f(x) = u(|x|^n), u = H_{1/n} g, g a staircase with `levels` steps
//                                                    levels [1] height [1]
//   randsmooth  smoothed seeded noise on a fixed coarse lattice
//                                                    seed [7] radius [1] height [1]
// Every kind takes n (dimension).  height = 0 gives the zero function.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rearr/gridfn.hpp"
#include "rearr/stepfn.hpp"

namespace rearr {

struct FamilySpec {
  std::string kind;
  int n = 2;
  std::vector<std::pair<std::string, double>> params;  // in the order given

  double param(const std::string& key) const;  // value or the kind's default
  void set(const std::string& key, double value);

  // "kind:n=2,key=value,..." with the keys in the order they were given.
  std::string label() const;

  static FamilySpec parse(const std::string& text, int default_n = 2);
};

// Semicolon-separated list; an item without ':' continues the previous
// family, either as key=value or as a bare value for its last key, so
// "ball:n=2,delta=0.2;0.1;0.05" names three balls.
std::vector<FamilySpec> parse_family_list(const std::string& text, int default_n = 2);

// cone, ball (delta 0.2 and 0.1), gauss, multibump, radial, randsmooth.
std::vector<FamilySpec> default_corpus(int n);

bool is_radial(const FamilySpec& spec);

// ResolutionError when the smallest feature spans fewer than 16 cells.
GridFunction generate(const FamilySpec& spec, double h);

// Exact piecewise-linear profile for cone, ball and radial kinds;
// UnsupportedError otherwise.
RadialProfile generate_profile(const FamilySpec& spec);

// f*(s) from the closed-form distribution function.  UnsupportedError for
// randsmooth.
double oracle_value(const FamilySpec& spec, double s);
double oracle_support(const FamilySpec& spec);

// f* sampled at the midpoints of `steps` equal cells of (0, support).
DecreasingStep oracle_rearrangement(const FamilySpec& spec, std::size_t steps = 4096);

// Lipschitz constant of the family member (for oracle-agreement bounds).
double lipschitz_constant(const FamilySpec& spec);

}  // namespace rearr
