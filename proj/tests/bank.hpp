#pragma once

// Standard test bank: windows are unit-norm Gaussians of width a in
// {1/2, 1, 2}; analysed functions are the unit Gaussian, h1 and h2.

#include <string>
#include <vector>

#include "tfu/reference.hpp"

namespace tfu::testing {

struct BankPair {
  std::string name;
  reference::AnalyticFunction f;
  reference::AnalyticFunction g;
};

inline std::vector<BankPair> standard_bank() {
  using reference::AnalyticFunction;
  std::vector<BankPair> out;
  for (double a : {0.5, 1.0, 2.0}) {
    const AnalyticFunction window = AnalyticFunction::gaussian(a);
    const std::string w = "gauss(" + std::to_string(a).substr(0, 3) + ")";
    out.push_back({"gauss(1) vs " + w, AnalyticFunction::gaussian(1.0), window});
    out.push_back({"h1 vs " + w, AnalyticFunction::hermite(1), window});
    out.push_back({"h2 vs " + w, AnalyticFunction::hermite(2), window});
  }
  return out;
}

inline std::vector<reference::AnalyticFunction> single_bank() {
  using reference::AnalyticFunction;
  return {AnalyticFunction::gaussian(0.5), AnalyticFunction::gaussian(1.0), AnalyticFunction::gaussian(2.0),
          AnalyticFunction::hermite(1), AnalyticFunction::hermite(2)};
}

}  // namespace tfu::testing
