#pragma once

// Flat key = value configuration with [scenario name] sections.
//
//   # comment
//   [scenario gauss-pair]
//   f = gaussian:a=1
//   g = gaussian:a=1
//   checks = isometry, lieb
//   lieb.p = 1 1.5 2 4
//
// Keys are unique within a section except those the scenario builder declares
// repeatable (e.g. weights.scan), which keep every occurrence in order.

#include <string>
#include <string_view>
#include <vector>

#include "tfu/reference.hpp"

namespace tfu::cli {

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct ConfigSection {
  std::string name;
  int line = 0;
  std::vector<ConfigEntry> entries;
};

struct ConfigDocument {
  std::string source;  // file name or bundled-config name, for messages
  std::vector<ConfigSection> sections;
};

/// Throws Error on syntax errors, duplicate section names, or text outside a section.
ConfigDocument parse_config(std::string_view text, const std::string& source);

/// Reads a file, or a bundled config when `path` names one and no such file exists.
ConfigDocument load_config(const std::string& path);

/// Function descriptors:
///   gaussian:a=1[,c=RE[:IM]]     unit-norm amplitude unless c is given
///   hermite:n=2
///   polygauss:a=1,coeffs=RE[:IM];RE[:IM];...
/// each optionally followed by ,z=<shift>,w=<modulation>.
reference::AnalyticFunction parse_function(const std::string& spec);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
/// Splits on whitespace and commas.
std::vector<std::string> split_list(std::string_view s);
double parse_double(const std::string& text, const std::string& what);
long parse_int(const std::string& text, const std::string& what);

}  // namespace tfu::cli
