#pragma once

// Registry of rearrangement inequalities and identities.  A check compares
// sampled left and right sides; the right side already carries the constant.
// For inequalities ratio = max lhs/rhs over the samples; for identities
// ratio = 1 + max |lhs - rhs| / |rhs|.  Either way pass <=> ratio <= 1 + slack.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rearr/corpus.hpp"
#include "rearr/gridfn.hpp"
#include "rearr/piecewise.hpp"
#include "rearr/spaces.hpp"
#include "rearr/stepfn.hpp"

namespace rearr {

struct CurvePoint {
  double t;
  double lhs;
  double rhs;
};

struct InequalityReport {
  std::string id;
  std::string family;
  double h = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant_used = 1.0;
  double ratio = 0.0;
  bool pass = true;
  double slack = 0.0;
  std::vector<std::pair<double, double>> refinement;  // (h, ratio), coarse first
};

struct CheckParams {
  int n = 0;  // 0: take the dimension of the input
  double p = 2.0;
  double q = 2.0;
  std::vector<double> probes;                       // empty: default_probes
  std::vector<std::pair<double, double>> pairs;     // empty: built from probes
  double probe_h = 0.0;  // spacing the default probes and pairs are built for; 0: the grid's
  RiSpaceSpec space = RiSpaceSpec::lebesgue(2.0);  // final, cincouno, balboa
  double slack = 0.05;
};

const std::vector<std::string>& check_ids();
bool is_identity_check(const std::string& id);
// Checks without a constant to gate on: gardel with p > 1, final.
bool is_gating(const std::string& id, const CheckParams& params);

// Precomputed one-dimensional data of a grid function.
class CheckContext {
 public:
  CheckContext(const GridFunction& f, CheckParams params);
  // Radial input: f = f°, so |grad f|* is the band rearrangement of u'.
  CheckContext(const RadialProfile& p, int n, CheckParams params);

  const CheckParams& params() const { return params_; }
  int n() const { return n_; }
  double h() const { return h_; }
  bool radial_input() const { return grid_ == nullptr; }
  const GridFunction* grid() const { return grid_.get(); }
  const DecreasingStep& fstar() const { return fstar_; }
  const DecreasingStep& grad_star() const { return grad_star_; }
  const Piecewise& osc() const { return osc_; }
  const std::vector<double>& probes() const { return probes_; }
  const std::vector<std::pair<double, double>>& pairs() const { return pairs_; }

 private:
  CheckParams params_;
  int n_ = 2;
  double h_ = 0.0;
  std::shared_ptr<const GridFunction> grid_;
  DecreasingStep fstar_;
  DecreasingStep grad_star_;
  Piecewise osc_;
  std::vector<double> probes_;
  std::vector<std::pair<double, double>> pairs_;
};

// 40 log-spaced points in [32 h^n, 4 |supp f|].
std::vector<double> default_probes(double h, int n, double support);

// Constant attached to a check (1 when none; gardel p = 1 -> n gamma^{-1/n}).
double check_constant(const std::string& id, int n, const CheckParams& params);

// UnknownCheckError / InputKindError as appropriate.
InequalityReport check(const std::string& id, const CheckContext& ctx);
InequalityReport check(const std::string& id, const GridFunction& f, const CheckParams& params);
InequalityReport check(const std::string& id, const RadialProfile& f, int n,
                       const CheckParams& params);

// The sampled sides of a curve-type check at the given points (for export).
// UnsupportedError for checks that are a single number.
std::vector<CurvePoint> check_curve(const std::string& id, const CheckContext& ctx,
                                    const std::vector<double>& t);

// ||t^{-a} f**||_X / ||t^{-a} (f** - f*)||_X.
double cincouno_bound(const DecreasingStep& fstar, double a, const RiSpaceSpec& space);

struct Trend {
  std::vector<std::pair<double, double>> levels;  // (h, ratio), coarse first
  double slope = 0.0;                             // least squares d ratio / d h
};

// `levels` spacings ending at `finest`, each half the previous, coarse first.
std::vector<double> level_spacings(double finest, int levels);
// Every level is probed at the points of the coarsest spacing unless
// params.probe_h says otherwise.
Trend refinement_trend(const std::string& id, const FamilySpec& family,
                       const std::vector<double>& spacings, const CheckParams& params);

struct ConstantEstimate {
  double best = 0.0;          // max over members of the h-extrapolated constants
  double extrapolated = 0.0;  // delta -> 0 for ball families, else best
  std::vector<double> members;
};

// Empirical constant lhs / (rhs / constant_used).  Per member the last two
// levels are extrapolated linearly in h (levels too coarse for a member are
// skipped); ball families with several deltas
// are extrapolated linearly to delta = 0 from the two smallest deltas.
ConstantEstimate best_constant_search(const std::string& id,
                                      const std::vector<FamilySpec>& family,
                                      const std::vector<double>& spacings,
                                      const CheckParams& params);

}  // namespace rearr
