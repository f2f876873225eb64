#include "tfu/cli/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "tfu/identity.hpp"
#include "tfu/stft.hpp"

namespace tfu::cli {

namespace {

using json = nlohmann::ordered_json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Non-finite values have no JSON encoding; keep them readable.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Neumaier {
 public:
  void add(double v) {
    const double t = sum_ + v;
    comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Lazily computed inputs shared by the checks of one scenario.
class Context {
 public:
  explicit Context(const Scenario& sc) : sc_(sc), grid_(stft_grid(sc.layout)) {}

  const Scenario& scenario() const { return sc_; }
  const TFGrid& grid() const { return grid_; }
  const SampledSignal& f() {
    if (!f_) f_ = reference::sample(sc_.f.fn, sc_.layout);
    return *f_;
  }
  const SampledSignal& g() {
    if (!g_) g_ = reference::sample(sc_.g.fn, sc_.layout);
    return *g_;
  }
  const TFArray& stft() {
    if (!stft_) stft_ = compute_stft(f(), g(), grid_);
    return *stft_;
  }
  const TFArray& exact_stft() {
    if (!exact_stft_) exact_stft_ = reference::analytic_stft(sc_.f.fn, sc_.g.fn, grid_);
    return *exact_stft_;
  }
  SampledSignal f_hat(FieldSource source) {
    if (source == FieldSource::Numeric) return discrete_fourier(f());
    return reference::sample(reference::analytic_fourier(sc_.f.fn), sc_.layout.dual());
  }

 private:
  const Scenario& sc_;
  TFGrid grid_;
  std::optional<SampledSignal> f_, g_;
  std::optional<TFArray> stft_, exact_stft_;
};

struct CheckResult {
  json report;
  std::vector<std::string> failures;
  std::vector<std::pair<std::string, std::string>> csv;  // file suffix, contents
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckResult run_isometry(Context& ctx, const IsometryCheck& c) {
  CheckResult r;
  const double d = isometry_defect(ctx.f(), ctx.g(), ctx.grid());
  const bool pass = d < c.tol;
  r.report = {{"check", "isometry"}, {"isometry_defect", number(d)}, {"tolerance", c.tol}, {"pass", pass}};
  if (!pass) r.failures.push_back("isometry defect " + fmt(d) + " >= " + fmt(c.tol));
  return r;
}

CheckResult run_oracle(Context& ctx, const OracleCheck& c) {
  CheckResult r;
  const auto numeric = ctx.stft().values();
  const auto exact = ctx.exact_stft().values();
  double err = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) err = std::max(err, std::abs(numeric[i] - exact[i]));
  const bool pass = err < c.tol;
  r.report = {{"check", "oracle"}, {"max_abs_error", number(err)}, {"tolerance", c.tol}, {"pass", pass}};
  if (!pass) r.failures.push_back("closed-form oracle error " + fmt(err) + " >= " + fmt(c.tol));
  return r;
}

CheckResult run_identity(Context& ctx, const IdentityCheck& c) {
  CheckResult r;
  json shifts = json::array();
  for (const auto& [z, zeta] : c.shifts) {
    const double d =
        identity::rotation_invariance_defect(identity::build_auxiliary(ctx.f(), ctx.g(), ctx.grid(), z, zeta));
    const bool pass = d < c.rotation_tol;
    shifts.push_back({{"z", z}, {"zeta", zeta}, {"rotation_invariance_defect", number(d)}, {"pass", pass}});
    if (!pass) r.failures.push_back("rotation defect " + fmt(d) + " at Z=(" + fmt(z) + "," + fmt(zeta) + ")");
  }
  json tuples = json::array();
  const SignalLayout& layout = ctx.scenario().layout;
  for (const IdentityTuple& t : c.tuples) {
    const double d = identity::fundamental_identity_defect(
        reference::sample(t.f1.fn, layout), reference::sample(t.f2.fn, layout), reference::sample(t.g1.fn, layout),
        reference::sample(t.g2.fn, layout), ctx.grid());
    const bool pass = d < c.tuple_tol;
    tuples.push_back({{"f1", t.f1.text},
                      {"f2", t.f2.text},
                      {"g1", t.g1.text},
                      {"g2", t.g2.text},
                      {"fundamental_identity_defect", number(d)},
                      {"pass", pass}});
    if (!pass) {
      r.failures.push_back("fundamental identity defect " + fmt(d) + " for " + t.f1.text + " | " + t.f2.text +
                           " | " + t.g1.text + " | " + t.g2.text);
    }
  }
  r.report = {{"check", "identity"},
              {"rotation_tolerance", c.rotation_tol},
              {"shifts", shifts},
              {"tuple_tolerance", c.tuple_tol},
              {"tuples", tuples}};
  return r;
}

CheckResult run_lieb(Context& ctx, const LiebCheck& c) {
  CheckResult r;
  const double fn = l2_norm(ctx.f());
  const double gn = l2_norm(ctx.g());
  json rows = json::array();
  std::string csv = "p,ratio,relation,pass\n";
  for (double p : c.p) {
    const double ratio = support::lieb_ratio(ctx.stft(), p, fn, gn);
    bool pass = true;
    std::string relation;
    if (p < 2.0) {
      relation = ">=";
      pass = ratio >= 1.0 - c.tol;
    } else if (p > 2.0) {
      relation = "<=";
      pass = ratio <= 1.0 + c.tol;
    } else {
      relation = "==";
      pass = std::abs(ratio - 1.0) <= c.tol;
    }
    if (c.extremal_tol && std::abs(ratio - 1.0) > *c.extremal_tol) pass = false;
    rows.push_back({{"p", p}, {"ratio", number(ratio)}, {"relation", relation}, {"pass", pass}});
    csv += csv_number(p) + "," + csv_number(ratio) + "," + relation + "," + (pass ? "true" : "false") + "\n";
    if (!pass) r.failures.push_back("lieb ratio " + fmt(ratio) + " at p=" + fmt(p) + " violates " + relation + " 1");
  }
  r.report = {{"check", "lieb"}, {"tolerance", c.tol}};
  if (c.extremal_tol) r.report["extremal_tolerance"] = *c.extremal_tol;
  r.report["ratios"] = rows;
  r.csv.emplace_back("lieb", csv);
  return r;
}

CheckResult run_weights(Context& ctx, const WeightsCheck& c) {
  CheckResult r;
  json scans = json::array();
  std::string csv = "scan,family,p,N,on,field,R,mass\n";
  for (std::size_t i = 0; i < c.scans.size(); ++i) {
    const WeightScan& s = c.scans[i];
    weights::GrowthReport g;
    if (s.on == ScanTarget::Stft) {
      const TFArray& field = s.field == FieldSource::Analytic ? ctx.exact_stft() : ctx.stft();
      g = weights::growth_scan(field, s.spec, c.radii);
    } else {
      g = weights::growth_scan(ctx.f(), ctx.f_hat(s.field), s.spec, c.radii);
    }
    bool pass = true;
    if (s.expect && g.verdict != *s.expect) {
      pass = false;
      r.failures.push_back("'" + s.text + "': verdict " + weights::to_string(g.verdict));
    }
    if (s.slope && !(std::abs(g.fitted_exponent - *s.slope) <= s.slope_tol)) {
      pass = false;
      r.failures.push_back("'" + s.text + "': slope " + fmt(g.fitted_exponent) + " outside " + fmt(*s.slope) +
                           " +- " + fmt(s.slope_tol));
    }
    json masses = json::array();
    for (std::size_t k = 0; k < g.masses.size(); ++k) {
      masses.push_back(number(g.masses[k]));
      csv += std::to_string(i) + "," + weights::to_string(s.spec.family) + "," + csv_number(s.spec.p) + "," +
             csv_number(s.spec.N) + "," + (s.on == ScanTarget::Stft ? "stft" : "pair") + "," +
             (s.field == FieldSource::Analytic ? "analytic" : "numeric") + "," + csv_number(g.radii[k]) + "," +
             csv_number(g.masses[k]) + "\n";
    }
    json entry = {{"scan", s.text},
                  {"family", weights::to_string(s.spec.family)},
                  {"p", s.spec.p},
                  {"N", s.spec.N},
                  {"on", s.on == ScanTarget::Stft ? "stft" : "pair"},
                  {"field", s.field == FieldSource::Analytic ? "analytic" : "numeric"},
                  {"radii", g.radii},
                  {"masses", masses},
                  {"fitted_exponent", number(g.fitted_exponent)},
                  {"tail_decay_exponent", number(g.tail_decay_exponent)},
                  {"relative_increment", number(g.relative_increment)},
                  {"verdict", weights::to_string(g.verdict)},
                  {"borderline", g.borderline}};
    if (s.expect) entry["expected_verdict"] = weights::to_string(*s.expect);
    if (s.slope) entry["expected_slope"] = {{"value", *s.slope}, {"tolerance", s.slope_tol}};
    entry["pass"] = pass;
    scans.push_back(std::move(entry));
  }
  r.report = {{"check", "weights"}, {"truncation", "square max(|x|,|xi|) <= R, cell-overlap weights"},
              {"scans", scans}};
  r.csv.emplace_back("weights", csv);
  return r;
}

CheckResult run_support(Context& ctx, const SupportCheck& c) {
  CheckResult r;
  json groups = json::array();
  std::string csv =
      "variant,p,epsilon,satisfiable,cells,measured_area,lower_bound,bound_holds,resolution_limited,threshold,"
      "total_mass\n";
  const double cell = ctx.grid().cell_measure();
  for (const SupportExpectation& group : c.groups) {
    const auto reports = support::bound_sweep(ctx.f(), ctx.g(), ctx.grid(), group.modes);
    json rows = json::array();
    for (const support::SupportReport& rep : reports) {
      const std::string label = support::to_string(rep.mode.variant) + " p=" + fmt(rep.mode.p) +
                                " eps=" + fmt(rep.mode.epsilon);
      bool pass = true;
      auto fail = [&](const std::string& why) {
        pass = false;
        r.failures.push_back(label + ": " + why);
      };
      if (!rep.error.empty()) {
        throw Error(label + ": " + rep.error);
      }
      if (rep.satisfiable && !rep.bound_holds) {
        fail("measured area " + fmt(*rep.measured_area) + " below bound " + fmt(rep.lower_bound));
      }
      if (group.satisfiable && rep.satisfiable != *group.satisfiable) {
        fail(rep.satisfiable ? "expected unsatisfiable" : "expected satisfiable");
      }
      if (group.min_area && !(rep.satisfiable && *rep.measured_area >= *group.min_area)) {
        fail("measured area below " + fmt(*group.min_area));
      }
      if (group.area &&
          !(rep.satisfiable && std::abs(*rep.measured_area - *group.area) <= group.area_tol_cells * cell)) {
        fail("measured area not within " + fmt(group.area_tol_cells) + " cells of " + fmt(*group.area));
      }
      json row = {{"variant", support::to_string(rep.mode.variant)},
                  {"p", rep.mode.p},
                  {"epsilon", rep.mode.epsilon},
                  {"satisfiable", rep.satisfiable}};
      row["measured_area"] = rep.measured_area ? json(*rep.measured_area) : json(nullptr);
      row["cells"] = rep.cells;
      row["lower_bound"] = number(rep.lower_bound);
      row["bound_holds"] = rep.bound_holds;
      row["resolution_limited"] = rep.resolution_limited;
      row["threshold"] = number(rep.threshold);
      row["total_mass"] = number(rep.total_mass);
      row["pass"] = pass;
      rows.push_back(std::move(row));
      csv += support::to_string(rep.mode.variant) + "," + csv_number(rep.mode.p) + "," +
             csv_number(rep.mode.epsilon) + "," + (rep.satisfiable ? "true" : "false") + "," +
             std::to_string(rep.cells) + "," + (rep.measured_area ? csv_number(*rep.measured_area) : "") + "," +
             csv_number(rep.lower_bound) + "," + (rep.bound_holds ? "true" : "false") + "," +
             (rep.resolution_limited ? "true" : "false") + "," + csv_number(rep.threshold) + "," +
             csv_number(rep.total_mass) + "\n";
    }
    json entry = {{"modes", group.text}, {"reports", rows}};
    if (group.satisfiable) entry["expected_satisfiable"] = *group.satisfiable;
    if (group.min_area) entry["expected_min_area"] = *group.min_area;
    if (group.area) entry["expected_area"] = {{"value", *group.area}, {"tolerance_cells", group.area_tol_cells}};
    groups.push_back(std::move(entry));
  }
  r.report = {{"check", "support"}, {"cell_measure", cell}, {"groups", groups}};
  r.csv.emplace_back("support", csv);
  return r;
}

CheckResult run_decay(Context& ctx, const DecayCheck& c) {
  CheckResult r;
  const double a = weights::decay_fit(ctx.f(), c.tail);
  const double b = weights::decay_fit(ctx.f_hat(c.field), c.tail);
  const double product = a * b;
  const bool pass = std::abs(product - 1.0) <= c.product_tol;
  r.report = {{"check", "decay"},
              {"tail_fraction", c.tail},
              {"transform", c.field == FieldSource::Analytic ? "analytic" : "numeric"},
              {"a_f", number(a)},
              {"a_f_hat", number(b)},
              {"product", number(product)},
              {"tolerance", c.product_tol},
              {"pass", pass}};
  if (!pass) r.failures.push_back("decay product " + fmt(product) + " not within " + fmt(c.product_tol) + " of 1");
  return r;
}

// Best mass of any k-subset, by exhaustive enumeration, summed in the same
// descending order and with the same compensation as the greedy prefix.
double brute_force_best(const std::vector<double>& cell_mass, const std::vector<std::size_t>& rank, int k) {
  const std::size_t n = cell_mass.size();
  double best = -1.0;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
  while (true) {
    std::vector<std::size_t> members = idx;
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
    Neumaier acc;
    for (std::size_t m : members) acc.add(cell_mass[m]);
    best = std::max(best, acc.value());
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - static_cast<std::size_t>(k - pos)) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int q = pos + 1; q < k; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
  }
  return best;
}

CheckResult run_greedy_oracle(const GreedyOracleCheck& c) {
  CheckResult r;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const TFGrid grid(1.0 / c.size, static_cast<std::size_t>(c.size));
  int mismatches = 0;
  for (int field = 0; field < c.fields; ++field) {
    std::vector<complex> values(grid.size());
    for (complex& v : values) v = {dist(rng), dist(rng)};
    const TFArray V(grid, values);
    const std::vector<double> prefix = support::prefix_masses(V, 1.0);
    const std::vector<std::size_t> order = support::greedy_order(V);
    std::vector<std::size_t> rank(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    std::vector<double> cell_mass(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) cell_mass[i] = grid.cell_measure() * std::abs(values[i]);
    for (int k = 1; k <= c.max_subset; ++k) {
      const double best = brute_force_best(cell_mass, rank, k);
      if (best != prefix[static_cast<std::size_t>(k - 1)]) {
        ++mismatches;
        r.failures.push_back("field " + std::to_string(field) + ", size " + std::to_string(k) +
                             ": greedy prefix is not the best subset");
      }
    }
  }
  r.report = {{"check", "greedy_oracle"},
              {"fields", c.fields},
              {"size", c.size},
              {"max_subset", c.max_subset},
              {"seed", c.seed},
              {"mismatches", mismatches},
              {"pass", mismatches == 0}};
  return r;
}

std::string describe_layout(const SignalLayout& layout) {
  std::ostringstream os;
  os.precision(17);
  os << layout.count << " samples, step " << layout.step;
  return os.str();
}

}  // namespace

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

std::vector<ScenarioOutcome> run_scenarios(const std::vector<Scenario>& scenarios, const RunOptions& options) {
  std::filesystem::create_directories(options.out_dir);
  std::vector<ScenarioOutcome> outcomes;
  for (const Scenario& sc : scenarios) {
    if (options.only && sc.name != *options.only) continue;
    ScenarioOutcome outcome;
    outcome.name = sc.name;
    json report;
    report["scenario"] = sc.name;
    if (options.timestamp) report["generated_at"] = utc_timestamp();
    report["f"] = sc.f.text;
    report["g"] = sc.g.text;
    report["layout"] = {{"count", sc.layout.count}, {"step", sc.layout.step}};
    json checks = json::array();
    std::vector<std::pair<std::string, std::string>> csvs;

    Context ctx(sc);
    auto run = [&](const char* name, auto&& body) {
      try {
        CheckResult r = body();
        for (auto& f : r.failures) outcome.failures.push_back(std::string(name) + ": " + f);
        r.report["failures"] = r.failures;
        checks.push_back(std::move(r.report));
        for (auto& c : r.csv) csvs.push_back(std::move(c));
      } catch (const std::exception& e) {
        outcome.errored = true;
        outcome.failures.push_back(std::string(name) + ": error: " + e.what());
        checks.push_back({{"check", name}, {"error", e.what()}});
      }
    };
    if (sc.isometry) run("isometry", [&] { return run_isometry(ctx, *sc.isometry); });
    if (sc.oracle) run("oracle", [&] { return run_oracle(ctx, *sc.oracle); });
    if (sc.identity) run("identity", [&] { return run_identity(ctx, *sc.identity); });
    if (sc.lieb) run("lieb", [&] { return run_lieb(ctx, *sc.lieb); });
    if (sc.weights) run("weights", [&] { return run_weights(ctx, *sc.weights); });
    if (sc.support) run("support", [&] { return run_support(ctx, *sc.support); });
    if (sc.decay) run("decay", [&] { return run_decay(ctx, *sc.decay); });
    if (sc.greedy_oracle) run("greedy_oracle", [&] { return run_greedy_oracle(*sc.greedy_oracle); });

    outcome.passed = outcome.failures.empty();
    report["checks"] = checks;
    report["status"] = outcome.errored ? "error" : outcome.passed ? "pass" : "fail";
    report["layout_description"] = describe_layout(sc.layout);
    write_atomically(options.out_dir / (sc.name + ".json"), report.dump(2) + "\n");
    for (const auto& [suffix, contents] : csvs) {
      write_atomically(options.out_dir / (sc.name + "." + suffix + ".csv"), contents);
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

int run_command(const std::string& config_path, const RunOptions& options, std::ostream& log, std::ostream& err) {
  std::vector<Scenario> scenarios;
  std::string source;
  try {
    const ConfigDocument doc = load_config(config_path);
    source = doc.source;
    scenarios = build_scenarios(doc);
    if (options.only) {
      const bool found = std::any_of(scenarios.begin(), scenarios.end(),
                                     [&](const Scenario& s) { return s.name == *options.only; });
      if (!found) throw Error("no scenario named '" + *options.only + "' in " + doc.source);
    }
  } catch (const std::exception& e) {
    err << "tfu: " << e.what() << "\n";
    return kExitError;
  }

  std::vector<ScenarioOutcome> outcomes;
  try {
    outcomes = run_scenarios(scenarios, options);
  } catch (const std::exception& e) {
    err << "tfu: " << e.what() << "\n";
    return kExitError;
  }

  bool errored = false;
  bool failed = false;
  json summary;
  summary["config"] = source;
  if (options.timestamp) summary["generated_at"] = utc_timestamp();
  json list = json::array();
  for (const ScenarioOutcome& o : outcomes) {
    const char* status = o.errored ? "error" : o.passed ? "pass" : "fail";
    errored = errored || o.errored;
    failed = failed || !o.passed;
    list.push_back({{"name", o.name}, {"status", status}, {"failures", o.failures}});
    log << (o.errored ? "ERROR " : o.passed ? "PASS  " : "FAIL  ") << o.name << "\n";
    for (const std::string& f : o.failures) log << "      " << f << "\n";
  }
  const int code = errored ? kExitError : failed ? kExitAssertion : kExitOk;
  summary["scenarios"] = list;
  summary["status"] = errored ? "error" : failed ? "fail" : "pass";
  summary["exit_code"] = code;
  try {
    write_atomically(options.out_dir / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "tfu: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}

}  // namespace tfu::cli
