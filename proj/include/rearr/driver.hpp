#pragma once

// Batch runs over corpora: verify, constants and export, plus their
// serialization.  Everything here is deterministic for a fixed config and
// independent of the thread count.

#include <string>
#include <vector>

#include "rearr/corpus.hpp"
#include "rearr/inequalities.hpp"
#include "rearr/spaces.hpp"

namespace rearr {

struct RunConfig {
  std::vector<std::string> checks;   // ids, already expanded from "all"
  std::vector<FamilySpec> families;
  std::string family_label;          // the family list as typed, for constants rows
  double h = 0.0;                    // finest spacing; 0 picks default_spacing(n)
  int levels = 3;
  double slack = 0.05;
  std::vector<double> p{2.0};        // gardel exponents; verify uses the first
  double q = 0.0;                    // 0: q = p
  RiSpaceSpec space = RiSpaceSpec::lebesgue(2.0);
  std::string format = "json";
};

// Expand "all" and validate the ids (UnknownCheckError).
std::vector<std::string> parse_check_list(const std::string& text);

// 1/256, 1/64, 1/32 for n = 1, 2, 3.
double default_spacing(int n);

// RK_THREADS if set and positive, else the hardware concurrency.
unsigned thread_count();

struct VerifyResult {
  std::vector<InequalityReport> reports;  // sorted by (id, family)
  bool all_pass = true;                   // over gating checks only
};

// One report per (check, family) at the finest level; the refinement field
// lists every level the family can be generated at.
VerifyResult run_verify(const RunConfig& config);

struct ConstantRow {
  std::string id;        // "gardel[p=1.5]" for gardel sweeps
  std::string family;
  double empirical = 0.0;
  double bound = 0.0;    // NaN when the check carries no constant
  double gap = 0.0;      // bound / empirical
};

std::vector<ConstantRow> run_constants(const RunConfig& config);

// Curve of the single check on the single family at 60 log-spaced points in
// [1e-3, 1e2].
std::vector<CurvePoint> run_export(const RunConfig& config);

// %.12g, with "inf", "-inf" and "nan" for the non-finite values.
std::string format_number(double x);

std::string reports_to_json(const std::vector<InequalityReport>& reports);
std::string reports_to_csv(const std::vector<InequalityReport>& reports);
std::string constants_to_csv(const std::vector<ConstantRow>& rows);
std::string constants_to_json(const std::vector<ConstantRow>& rows);
std::string curve_to_csv(const std::vector<CurvePoint>& curve);

}  // namespace rearr
