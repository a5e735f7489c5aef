#include "rearr/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "rearr/errors.hpp"

namespace rearr {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs body(i) for i in [0, count) on up to thread_count() threads.  The
// first exception in index order is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(thread_count(), count);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

CheckParams params_for(const RunConfig& config, int n, double p) {
  CheckParams prm;
  prm.n = n;
  prm.p = p;
  prm.q = config.q > 0.0 ? config.q : p;
  prm.space = config.space;
  prm.slack = config.slack;
  return prm;
}

void validate(const RunConfig& config) {
  if (config.checks.empty()) throw DomainError("no checks given");
  if (config.families.empty()) throw DomainError("no families given");
  if (config.levels < 1) throw DomainError("levels must be >= 1");
  if (config.p.empty()) throw DomainError("no exponent p given");
  if (!(config.slack >= 0.0)) throw DomainError("slack must be >= 0");
  if (config.h < 0.0 || !std::isfinite(config.h)) throw DomainError("h must be positive");
  for (const std::string& id : config.checks) parse_check_list(id);
}

double finest_spacing(const RunConfig& config, int n) {
  return config.h > 0.0 ? config.h : default_spacing(n);
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::string> parse_check_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  const auto& ids = check_ids();
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      for (const std::string& id : ids)
        if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
      continue;
    }
    if (std::find(ids.begin(), ids.end(), item) == ids.end())
      throw UnknownCheckError("unknown check '" + item + "'");
    if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
  }
  if (out.empty()) throw DomainError("no checks given");
  return out;
}

double default_spacing(int n) {
  switch (n) {
    case 1: return 1.0 / 256.0;
    case 2: return 1.0 / 64.0;
    case 3: return 1.0 / 32.0;
    default: throw DomainError("dimension must be 1, 2 or 3");
  }
}

unsigned thread_count() {
  if (const char* env = std::getenv("RK_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

VerifyResult run_verify(const RunConfig& config) {
  validate(config);
  struct Unit {
    std::size_t family;
    std::size_t level;
    double h;
    double coarsest;
    bool finest;
  };
  std::vector<Unit> units;
  for (std::size_t f = 0; f < config.families.size(); ++f) {
    const std::vector<double> hs =
        level_spacings(finest_spacing(config, config.families[f].n), config.levels);
    for (std::size_t l = 0; l < hs.size(); ++l)
      units.push_back({f, l, hs[l], hs.front(), l + 1 == hs.size()});
  }

  std::vector<std::optional<std::vector<InequalityReport>>> results(units.size());
  parallel_for(units.size(), [&](std::size_t i) {
    const Unit& u = units[i];
    const FamilySpec& fam = config.families[u.family];
    std::optional<GridFunction> grid;
    try {
      grid.emplace(generate(fam, u.h));
    } catch (const ResolutionError&) {
      if (u.finest) throw;
      return;  // too coarse for this level; the trend uses the finer ones
    }
    CheckParams prm = params_for(config, fam.n, config.p.front());
    prm.probe_h = u.coarsest;
    const CheckContext ctx(*grid, prm);
    std::vector<InequalityReport> out;
    for (const std::string& id : config.checks) out.push_back(check(id, ctx));
    results[i] = std::move(out);
  });

  VerifyResult res;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!units[i].finest) continue;
    const FamilySpec& fam = config.families[units[i].family];
    for (std::size_t c = 0; c < config.checks.size(); ++c) {
      InequalityReport r = (*results[i])[c];
      r.family = fam.label();
      for (std::size_t j = 0; j <= i; ++j)
        if (units[j].family == units[i].family && results[j])
          r.refinement.emplace_back(units[j].h, (*results[j])[c].ratio);
      res.reports.push_back(std::move(r));
    }
  }
  std::stable_sort(res.reports.begin(), res.reports.end(),
                   [](const InequalityReport& a, const InequalityReport& b) {
                     return std::tie(a.id, a.family) < std::tie(b.id, b.family);
                   });
  const CheckParams gate = params_for(config, 2, config.p.front());
  for (const InequalityReport& r : res.reports)
    if (is_gating(r.id, gate) && !r.pass) res.all_pass = false;
  return res;
}

std::vector<ConstantRow> run_constants(const RunConfig& config) {
  validate(config);
  const int n = config.families.front().n;
  for (const FamilySpec& f : config.families)
    if (f.n != n) throw DomainError("constants needs all families in one dimension");
  const std::vector<double> hs = level_spacings(finest_spacing(config, n), config.levels);

  struct Job {
    std::string id;
    double p;
    bool sweep;
  };
  std::vector<Job> jobs;
  for (const std::string& id : config.checks) {
    if (id == "gardel") {
      for (double p : config.p) jobs.push_back({id, p, true});
    } else {
      jobs.push_back({id, config.p.front(), false});
    }
  }
  const std::string label =
      config.family_label.empty() ? config.families.front().label() : config.family_label;
  std::vector<ConstantRow> rows(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    const CheckParams prm = params_for(config, n, job.p);
    const ConstantEstimate est = best_constant_search(job.id, config.families, hs, prm);
    ConstantRow row;
    row.id = job.sweep ? job.id + "[p=" + format_number(job.p) + "]" : job.id;
    row.family = label;
    row.empirical = est.extrapolated;
    row.bound = is_gating(job.id, prm) ? check_constant(job.id, n, prm) : kNaN;
    row.gap = row.bound / row.empirical;
    rows[i] = std::move(row);
  });
  return rows;
}

std::vector<CurvePoint> run_export(const RunConfig& config) {
  validate(config);
  if (config.checks.size() != 1) throw DomainError("export takes exactly one check");
  if (config.families.size() != 1) throw DomainError("export takes exactly one family");
  const FamilySpec& fam = config.families.front();
  const CheckContext ctx(generate(fam, finest_spacing(config, fam.n)),
                         params_for(config, fam.n, config.p.front()));
  constexpr int kPoints = 60;
  std::vector<double> t(kPoints);
  for (int i = 0; i < kPoints; ++i) t[i] = std::pow(10.0, -3.0 + 5.0 * i / (kPoints - 1));
  return check_curve(config.checks.front(), ctx, t);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string reports_to_json(const std::vector<InequalityReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const InequalityReport& r : reports) {
    nlohmann::ordered_json o;
    o["id"] = r.id;
    o["family"] = r.family;
    o["h"] = round12(r.h);
    o["lhs"] = round12(r.lhs);
    o["rhs"] = round12(r.rhs);
    o["constant_used"] = round12(r.constant_used);
    o["ratio"] = round12(r.ratio);
    o["pass"] = r.pass;
    o["slack"] = round12(r.slack);
    nlohmann::ordered_json ref = nlohmann::ordered_json::array();
    for (const auto& [h, ratio] : r.refinement) ref.push_back({round12(h), round12(ratio)});
    o["refinement"] = std::move(ref);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<InequalityReport>& reports) {
  std::string out = "id,family,h,lhs,rhs,constant_used,ratio,pass,slack,refinement\n";
  for (const InequalityReport& r : reports) {
    std::string ref;
    for (const auto& [h, ratio] : r.refinement) {
      if (!ref.empty()) ref += ';';
      ref += format_number(h) + ":" + format_number(ratio);
    }
    out += csv_field(r.id) + "," + csv_field(r.family) + "," + format_number(r.h) + "," +
           format_number(r.lhs) + "," + format_number(r.rhs) + "," +
           format_number(r.constant_used) + "," + format_number(r.ratio) + "," +
           (r.pass ? "true" : "false") + "," + format_number(r.slack) + "," + ref + "\n";
  }
  return out;
}

std::string constants_to_csv(const std::vector<ConstantRow>& rows) {
  std::string out = "check,family,empirical,bound,gap\n";
  for (const ConstantRow& r : rows) {
    const bool none = std::isnan(r.bound);
    out += csv_field(r.id) + "," + csv_field(r.family) + "," + format_number(r.empirical) + "," +
           (none ? "none" : format_number(r.bound)) + "," +
           (none ? "none" : format_number(r.gap)) + "\n";
  }
  return out;
}

std::string constants_to_json(const std::vector<ConstantRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ConstantRow& r : rows) {
    nlohmann::ordered_json o;
    o["check"] = r.id;
    o["family"] = r.family;
    o["empirical"] = round12(r.empirical);
    o["bound"] = std::isnan(r.bound) ? nlohmann::ordered_json() : nlohmann::ordered_json(round12(r.bound));
    o["gap"] = std::isnan(r.bound) ? nlohmann::ordered_json() : nlohmann::ordered_json(round12(r.gap));
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "t,lhs,rhs\n";
  for (const CurvePoint& c : curve)
    out += format_number(c.t) + "," + format_number(c.lhs) + "," + format_number(c.rhs) + "\n";
  return out;
}

}  // namespace rearr
