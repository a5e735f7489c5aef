// rearr: verify rearrangement inequalities over test-function corpora.
//
//   rearr verify    --checks tres,teoA2 --families cone:n=2 --h 0.02
//   rearr constants --checks gn-weak --families "ball:n=2,delta=0.2;0.1;0.05"
//   rearr export    --checks tres --families cone:n=2
//
// Exit codes: 0 all gating checks pass, 1 some check fails, 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "rearr/driver.hpp"
#include "rearr/errors.hpp"

namespace {

struct Options {
  std::string checks = "all";
  std::string families;
  int n = 0;
  std::string h;
  int levels = 3;
  double slack = 0.05;
  std::string output;
  std::string format;
  std::string space = "Lp:2";
  std::string p = "2";
  double q = 0.0;
};

double parse_real(const std::string& text, const std::string& what) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else {
      const std::string num = text.substr(0, slash);
      const std::string den = text.substr(slash + 1);
      std::size_t u1 = 0;
      std::size_t u2 = 0;
      const double a = std::stod(num, &u1);
      const double b = std::stod(den, &u2);
      if (u1 == num.size() && u2 == den.size() && b != 0.0) return a / b;
    }
  } catch (const std::exception&) {
  }
  throw rearr::ParseError("cannot read " + what + " '" + text + "'");
}

rearr::RunConfig make_config(const Options& o, const std::string& default_families) {
  rearr::RunConfig cfg;
  cfg.checks = rearr::parse_check_list(o.checks);
  const int n = o.n == 0 ? 2 : o.n;
  std::string fams = o.families.empty() ? default_families : o.families;
  if (fams == "all") {
    cfg.families = rearr::default_corpus(n);
    cfg.family_label = "all";
  } else {
    cfg.families = rearr::parse_family_list(fams, n);
    cfg.family_label = fams;
  }
  if (cfg.families.empty()) throw rearr::DomainError("empty family list");
  if (!o.h.empty()) {
    cfg.h = parse_real(o.h, "spacing");
    if (!(cfg.h > 0.0)) throw rearr::DomainError("h must be positive");
  }
  cfg.levels = o.levels;
  cfg.slack = o.slack;
  cfg.space = rearr::RiSpaceSpec::parse(o.space);
  cfg.p.clear();
  std::stringstream ss(o.p);
  std::string item;
  while (std::getline(ss, item, ',')) cfg.p.push_back(parse_real(item, "exponent"));
  if (cfg.p.empty()) throw rearr::DomainError("no exponent p given");
  cfg.q = o.q;
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw rearr::DomainError("cannot write output file '" + path + "'");
  out << text;
  out.close();
  if (!out) throw rearr::DomainError("cannot write output file '" + path + "'");
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->set_help_flag("--help", "print this help");
  cmd->add_option("--checks", o.checks, "check ids, comma separated, or all");
  cmd->add_option("--families", o.families, "family specs separated by ';', or all");
  cmd->add_option("--n", o.n, "dimension for families without n=")->check(CLI::Range(1, 3));
  cmd->add_option("--h", o.h, "finest grid spacing, e.g. 0.02 or 1/64");
  cmd->add_option("--levels", o.levels, "refinement levels")->check(CLI::PositiveNumber);
  cmd->add_option("--slack", o.slack, "relative slack for inequality checks");
  cmd->add_option("--output", o.output, "output file (default stdout)");
  cmd->add_option("--format", o.format, "json or csv");
  cmd->add_option("--space", o.space, "space for final, cincouno and balboa, e.g. Lorentz:2,1");
  cmd->add_option("--p", o.p, "gardel exponents, comma separated");
  cmd->add_option("--q", o.q, "gardel second exponent (default p)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rearrangement inequalities on test-function corpora"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  Options o;
  CLI::App* verify = app.add_subcommand("verify", "run checks and write a JSON report");
  CLI::App* constants = app.add_subcommand("constants", "empirical constants as a CSV table");
  CLI::App* exporter = app.add_subcommand("export", "CSV curve t,lhs,rhs of one check");
  add_common(verify, o);
  add_common(constants, o);
  add_common(exporter, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (CLI::App* cmd : {verify, constants, exporter})
      if (cmd->parsed() && cmd->count("--families") > 0 && o.families.empty())
        throw rearr::DomainError("empty family list");
    if (verify->parsed()) {
      const rearr::RunConfig cfg = make_config(o, "all");
      const std::string format = o.format.empty() ? "json" : o.format;
      if (format != "json" && format != "csv") throw rearr::DomainError("unknown format '" + format + "'");
      const rearr::VerifyResult res = rearr::run_verify(cfg);
      emit(format == "json" ? rearr::reports_to_json(res.reports) : rearr::reports_to_csv(res.reports),
           o.output);
      std::size_t failed = 0;
      for (const auto& r : res.reports) failed += r.pass ? 0 : 1;
      std::cerr << res.reports.size() << " reports, " << failed << " failing\n";
      return res.all_pass ? 0 : 1;
    }
    if (constants->parsed()) {
      const std::string n = std::to_string(o.n == 0 ? 2 : o.n);
      const rearr::RunConfig cfg = make_config(o, "cone:n=" + n);
      const std::string format = o.format.empty() ? "csv" : o.format;
      if (format != "json" && format != "csv") throw rearr::DomainError("unknown format '" + format + "'");
      const auto rows = rearr::run_constants(cfg);
      emit(format == "csv" ? rearr::constants_to_csv(rows) : rearr::constants_to_json(rows), o.output);
      return 0;
    }
    if (!o.format.empty() && o.format != "csv") throw rearr::DomainError("export writes csv only");
    const rearr::RunConfig cfg = make_config(o, "all");
    emit(rearr::curve_to_csv(rearr::run_export(cfg)), o.output);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
