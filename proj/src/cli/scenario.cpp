#include "tfu/cli/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tfu::cli {

namespace {

const std::set<std::string> kCheckNames = {"isometry", "oracle",  "identity", "lieb",
                                           "weights",  "support", "decay",    "greedy_oracle"};
const std::set<std::string> kRepeatable = {"identity.tuple", "weights.scan", "support.mode"};

// Error message prefix naming the key path and line.
struct Where {
  const ConfigDocument& doc;
  const ConfigSection& section;

  std::string at(const ConfigEntry& e) const {
    return doc.source + ":" + std::to_string(e.line) + ": " + section.name + "." + e.key;
  }
};

std::vector<double> parse_doubles(const std::string& value, const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split_list(value)) out.push_back(parse_double(item, what));
  if (out.empty()) throw Error(what + ": empty list");
  return out;
}

// "name=value" options following a leading positional word.
struct Options {
  std::string head;
  std::map<std::string, std::string> values;

  std::optional<std::string> take(const std::string& key) {
    auto it = values.find(key);
    if (it == values.end()) return std::nullopt;
    std::string v = it->second;
    values.erase(it);
    return v;
  }
  void finish(const std::string& what) const {
    if (!values.empty()) throw Error(what + ": unknown option '" + values.begin()->first + "'");
  }
};

Options parse_options(const std::string& value, const std::string& what) {
  Options opts;
  std::vector<std::string> words;
  std::string current;
  for (char c : value) {
    if (c == ' ' || c == '\t') {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  if (words.empty()) throw Error(what + ": empty value");
  opts.head = words.front();
  for (std::size_t i = 1; i < words.size(); ++i) {
    const auto eq = words[i].find('=');
    if (eq == std::string::npos) throw Error(what + ": expected name=value, got '" + words[i] + "'");
    if (!opts.values.emplace(words[i].substr(0, eq), words[i].substr(eq + 1)).second) {
      throw Error(what + ": option '" + words[i].substr(0, eq) + "' given twice");
    }
  }
  return opts;
}

FieldSource parse_field(const std::string& v, const std::string& what) {
  if (v == "analytic") return FieldSource::Analytic;
  if (v == "numeric") return FieldSource::Numeric;
  throw Error(what + ": field must be analytic or numeric, got '" + v + "'");
}

WeightScan parse_scan(const std::string& value, const std::string& what) {
  Options opts = parse_options(value, what);
  WeightScan scan;
  scan.text = value;
  scan.spec.family = weights::parse_family(opts.head);
  if (auto p = opts.take("p")) scan.spec.p = parse_double(*p, what);
  if (auto n = opts.take("N")) {
    if (scan.spec.family != weights::WeightFamily::BonamiDenominator &&
        scan.spec.family != weights::WeightFamily::DemangeDenominator) {
      throw Error(what + ": N applies to denominator families only");
    }
    scan.spec.N = parse_double(*n, what);
  }
  if (auto on = opts.take("on")) {
    if (*on == "stft") {
      scan.on = ScanTarget::Stft;
    } else if (*on == "pair") {
      scan.on = ScanTarget::Pair;
    } else {
      throw Error(what + ": on must be stft or pair, got '" + *on + "'");
    }
  }
  if (auto field = opts.take("field")) scan.field = parse_field(*field, what);
  if (auto expect = opts.take("expect")) {
    if (*expect == "divergent") {
      scan.expect = weights::Verdict::Divergent;
    } else if (*expect == "convergent") {
      scan.expect = weights::Verdict::Convergent;
    } else {
      throw Error(what + ": expect must be divergent or convergent, got '" + *expect + "'");
    }
  }
  if (auto slope = opts.take("slope")) scan.slope = parse_double(*slope, what);
  if (auto tol = opts.take("slope_tol")) scan.slope_tol = parse_double(*tol, what);
  opts.finish(what);
  scan.spec.validate();
  return scan;
}

SupportExpectation parse_support(const std::string& value, const std::string& what) {
  Options opts = parse_options(value, what);
  SupportExpectation group;
  group.text = value;
  const support::SupportVariant variant = support::parse_variant(opts.head);
  const auto p = opts.take("p");
  const auto eps = opts.take("eps");
  if (!p) throw Error(what + ": p is required");
  const std::vector<double> ps = parse_doubles(*p, what);
  const std::vector<double> epss = eps ? parse_doubles(*eps, what) : std::vector<double>{0.0};
  for (double pv : ps) {
    for (double ev : epss) {
      support::SupportMode mode{variant, pv, ev};
      mode.validate();
      group.modes.push_back(mode);
    }
  }
  if (auto expect = opts.take("expect")) {
    if (*expect == "satisfiable") {
      group.satisfiable = true;
    } else if (*expect == "unsatisfiable") {
      group.satisfiable = false;
    } else {
      throw Error(what + ": expect must be satisfiable or unsatisfiable, got '" + *expect + "'");
    }
  }
  if (auto v = opts.take("min_area")) group.min_area = parse_double(*v, what);
  if (auto v = opts.take("area")) group.area = parse_double(*v, what);
  if (auto v = opts.take("area_tol_cells")) group.area_tol_cells = parse_double(*v, what);
  opts.finish(what);
  return group;
}

std::pair<double, double> parse_shift(const std::string& item, const std::string& what) {
  const auto parts = split(item, ':');
  if (parts.size() != 2) throw Error(what + ": expected z:zeta, got '" + item + "'");
  return {parse_double(parts[0], what), parse_double(parts[1], what)};
}

FunctionSpec function_spec(const std::string& text, const std::string& what) {
  try {
    return {text, parse_function(text)};
  } catch (const Error& e) {
    throw Error(what + ": " + e.what());
  }
}

Scenario build_one(const ConfigDocument& doc, const ConfigSection& section) {
  const Where where{doc, section};
  Scenario sc;
  sc.name = section.name;

  std::set<std::string> checks;
  std::set<std::string> seen;
  for (const ConfigEntry& e : section.entries) {
    if (!kRepeatable.count(e.key) && !seen.insert(e.key).second) throw Error(where.at(e) + ": duplicate key");
    if (e.key == "checks") {
      for (const std::string& name : split_list(e.value)) {
        if (!kCheckNames.count(name)) throw Error(where.at(e) + ": unknown check '" + name + "'");
        checks.insert(name);
      }
    }
  }
  if (checks.count("isometry")) sc.isometry.emplace();
  if (checks.count("oracle")) sc.oracle.emplace();
  if (checks.count("identity")) sc.identity.emplace();
  if (checks.count("lieb")) sc.lieb.emplace();
  if (checks.count("weights")) sc.weights.emplace();
  if (checks.count("support")) sc.support.emplace();
  if (checks.count("decay")) sc.decay.emplace();
  if (checks.count("greedy_oracle")) sc.greedy_oracle.emplace();

  std::optional<FunctionSpec> f;
  std::optional<FunctionSpec> g;
  for (const ConfigEntry& e : section.entries) {
    const std::string what = where.at(e);
    const auto dot = e.key.find('.');
    const std::string group = dot == std::string::npos ? std::string{} : e.key.substr(0, dot);
    if (!group.empty() && group != "grid") {
      if (!kCheckNames.count(group)) throw Error(what + ": unknown key");
      if (!checks.count(group)) throw Error(what + ": check '" + group + "' is not listed in checks");
    }
    const std::string& k = e.key;
    const std::string& v = e.value;
    try {
      if (k == "checks") {
      } else if (k == "f") {
        f = function_spec(v, what);
      } else if (k == "g") {
        g = function_spec(v, what);
      } else if (k == "grid.count") {
        const long n = parse_int(v, what);
        if (n <= 0) throw Error(what + ": must be positive");
        sc.layout.count = static_cast<std::size_t>(n);
      } else if (k == "grid.step") {
        sc.layout.step = parse_double(v, what);
      } else if (k == "isometry.tol") {
        sc.isometry->tol = parse_double(v, what);
      } else if (k == "oracle.tol") {
        sc.oracle->tol = parse_double(v, what);
      } else if (k == "identity.shifts") {
        sc.identity->shifts.clear();
        for (const std::string& item : split_list(v)) sc.identity->shifts.push_back(parse_shift(item, what));
      } else if (k == "identity.rotation_tol") {
        sc.identity->rotation_tol = parse_double(v, what);
      } else if (k == "identity.tuple") {
        const auto parts = split(v, '|');
        if (parts.size() != 4) throw Error(what + ": expected f1 | f2 | g1 | g2");
        sc.identity->tuples.push_back({function_spec(parts[0], what), function_spec(parts[1], what),
                                       function_spec(parts[2], what), function_spec(parts[3], what)});
      } else if (k == "identity.tuple_tol") {
        sc.identity->tuple_tol = parse_double(v, what);
      } else if (k == "lieb.p") {
        sc.lieb->p = parse_doubles(v, what);
        for (double p : sc.lieb->p)
          if (!(p >= 1.0)) throw Error(what + ": p must be >= 1");
      } else if (k == "lieb.tol") {
        sc.lieb->tol = parse_double(v, what);
      } else if (k == "lieb.extremal_tol") {
        sc.lieb->extremal_tol = parse_double(v, what);
      } else if (k == "weights.radii") {
        sc.weights->radii = parse_doubles(v, what);
      } else if (k == "weights.scan") {
        sc.weights->scans.push_back(parse_scan(v, what));
      } else if (k == "support.mode") {
        sc.support->groups.push_back(parse_support(v, what));
      } else if (k == "decay.tail") {
        sc.decay->tail = parse_double(v, what);
      } else if (k == "decay.field") {
        sc.decay->field = parse_field(v, what);
      } else if (k == "decay.product_tol") {
        sc.decay->product_tol = parse_double(v, what);
      } else if (k == "greedy_oracle.fields") {
        sc.greedy_oracle->fields = static_cast<int>(parse_int(v, what));
      } else if (k == "greedy_oracle.size") {
        sc.greedy_oracle->size = static_cast<int>(parse_int(v, what));
      } else if (k == "greedy_oracle.max_subset") {
        sc.greedy_oracle->max_subset = static_cast<int>(parse_int(v, what));
      } else if (k == "greedy_oracle.seed") {
        sc.greedy_oracle->seed = static_cast<unsigned long>(parse_int(v, what));
      } else {
        throw Error(what + ": unknown key");
      }
    } catch (const Error& err) {
      const std::string msg = err.what();
      throw Error(msg.rfind(what, 0) == 0 ? msg : what + ": " + msg);
    }
  }

  const std::string head = doc.source + ":" + std::to_string(section.line) + ": " + section.name;
  if (checks.empty()) throw Error(head + ": no checks listed");
  const bool needs_f = checks.size() > 1 || !checks.count("greedy_oracle");
  if (needs_f && !f) throw Error(head + ": f is required");
  if (f) sc.f = *f;
  sc.g = g ? *g : sc.f;
  try {
    sc.layout.validate();
  } catch (const Error& err) {
    throw Error(head + ".grid: " + err.what());
  }
  if (sc.decay && !(sc.decay->tail > 0.0 && sc.decay->tail < 0.5)) {
    throw Error(head + ".decay.tail: must lie in (0, 0.5)");
  }
  if (sc.weights && sc.weights->radii.size() < 4) throw Error(head + ".weights.radii: needs at least 4 radii");
  if (sc.greedy_oracle) {
    const auto& go = *sc.greedy_oracle;
    if (go.fields < 1 || go.size < 2 || go.size % 2 != 0 || go.max_subset < 1 || go.max_subset > 4) {
      throw Error(head + ".greedy_oracle: needs fields >= 1, even size >= 2, 1 <= max_subset <= 4");
    }
  }
  return sc;
}

}  // namespace

std::vector<Scenario> build_scenarios(const ConfigDocument& doc) {
  std::vector<Scenario> out;
  for (const ConfigSection& section : doc.sections) out.push_back(build_one(doc, section));
  if (out.empty()) throw Error(doc.source + ": no scenarios");
  return out;
}

}  // namespace tfu::cli
