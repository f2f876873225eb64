#include "tfu/cli/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "tfu/cli/bundled_configs.hpp"

namespace tfu::cli {

using reference::AnalyticFunction;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string current;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw Error(what + ": expected a number, got '" + text + "'");
  }
  return v;
}

long parse_int(const std::string& text, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw Error(what + ": expected an integer, got '" + text + "'");
  }
  return v;
}

ConfigDocument parse_config(std::string_view text, const std::string& source) {
  ConfigDocument doc;
  doc.source = source;
  std::set<std::string> names;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);

    if (line.front() == '[') {
      if (line.back() != ']') throw Error(where + ": unterminated section header");
      const std::string header = trim(std::string_view(line).substr(1, line.size() - 2));
      const std::string prefix = "scenario ";
      if (header.rfind(prefix, 0) != 0) throw Error(where + ": unknown section '" + header + "'");
      const std::string name = trim(std::string_view(header).substr(prefix.size()));
      if (name.empty()) throw Error(where + ": scenario needs a name");
      if (!names.insert(name).second) throw Error(where + ": duplicate scenario '" + name + "'");
      doc.sections.push_back({name, line_no, {}});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(where + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw Error(where + ": empty key");
    if (doc.sections.empty()) throw Error(where + ": key '" + key + "' outside a [scenario] section");
    doc.sections.back().entries.push_back({key, value, line_no});
  }
  return doc;
}

ConfigDocument load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (path == "paper-suite") return parse_config(bundled::kPaperSuite, "paper-suite");
    throw Error("cannot open config '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

namespace {

complex parse_complex(const std::string& text, const std::string& what) {
  const auto parts = split(text, ':');
  if (parts.size() > 2) throw Error(what + ": expected RE or RE:IM, got '" + text + "'");
  return {parse_double(parts[0], what), parts.size() == 2 ? parse_double(parts[1], what) : 0.0};
}

}  // namespace

AnalyticFunction parse_function(const std::string& spec) {
  const std::string what = "function '" + spec + "'";
  const auto colon = spec.find(':');
  const std::string kind = trim(std::string_view(spec).substr(0, colon));
  std::vector<std::pair<std::string, std::string>> params;
  if (colon != std::string::npos) {
    for (const std::string& item : split(std::string_view(spec).substr(colon + 1), ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(what + ": expected name=value, got '" + item + "'");
      params.emplace_back(trim(std::string_view(item).substr(0, eq)), trim(std::string_view(item).substr(eq + 1)));
    }
  }
  auto take = [&](const std::string& name) -> std::optional<std::string> {
    for (auto it = params.begin(); it != params.end(); ++it) {
      if (it->first == name) {
        std::string v = it->second;
        params.erase(it);
        return v;
      }
    }
    return std::nullopt;
  };

  AnalyticFunction fn;
  if (kind == "gaussian") {
    const auto a = take("a");
    const auto c = take("c");
    const double width = a ? parse_double(*a, what) : 1.0;
    fn = c ? AnalyticFunction::gaussian(width, parse_complex(*c, what)) : AnalyticFunction::gaussian(width);
  } else if (kind == "hermite") {
    const auto n = take("n");
    if (!n) throw Error(what + ": hermite needs n");
    fn = AnalyticFunction::hermite(static_cast<int>(parse_int(*n, what)));
  } else if (kind == "polygauss") {
    const auto a = take("a");
    const auto coeffs = take("coeffs");
    if (!coeffs) throw Error(what + ": polygauss needs coeffs");
    std::vector<complex> c;
    for (const std::string& item : split(*coeffs, ';')) c.push_back(parse_complex(item, what));
    fn = AnalyticFunction::poly_gaussian(std::move(c), a ? parse_double(*a, what) : 1.0);
  } else {
    throw Error(what + ": unknown kind '" + kind + "'");
  }
  const auto z = take("z");
  const auto w = take("w");
  if (!params.empty()) throw Error(what + ": unknown parameter '" + params.front().first + "'");
  return fn.translated_modulated(z ? parse_double(*z, what) : 0.0, w ? parse_double(*w, what) : 0.0);
}

}  // namespace tfu::cli
