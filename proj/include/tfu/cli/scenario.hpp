#pragma once

// A scenario is one (f, g, layout) triple plus the checks to run on it.
//
// Scenario keys:
//   f, g            function descriptors (see parse_function); g defaults to f
//   grid.count      samples (even, >= 16), default 256
//   grid.step       sample step, default 1/16
//   checks          list of: isometry oracle identity lieb weights support decay greedy_oracle
//
// Per-check keys:
//   isometry.tol                     defect bound (1e-8)
//   oracle.tol                       max |numeric - closed form| (1e-8)
//   identity.shifts                  z:zeta pairs for the auxiliary field (0:0)
//   identity.rotation_tol            (1e-6)
//   identity.tuple [repeatable]      f1 | f2 | g1 | g2
//   identity.tuple_tol               (1e-6)
//   lieb.p                           exponents (1 1.25 1.5 2 3 4 6)
//   lieb.tol                         slack on the inequality (1e-6)
//   lieb.extremal_tol                when set, also require |ratio - 1| <= tol
//   weights.radii                    (1 2 3 4 5 6)
//   weights.scan [repeatable]        FAMILY [p=..] [N=..] [on=stft|pair] [field=analytic|numeric]
//                                    [expect=divergent|convergent] [slope=..] [slope_tol=..]
//   support.mode [repeatable]        VARIANT p=LIST eps=LIST [expect=satisfiable|unsatisfiable]
//                                    [min_area=..] [area=.. area_tol_cells=..]
//   decay.tail                       tail fraction (0.25)
//   decay.field                      analytic|numeric transform (analytic)
//   decay.product_tol                |a_f a_fhat - 1| bound (1e-2)
//   greedy_oracle.fields/.size/.max_subset/.seed   (20, 8, 3, 1)

#include <optional>
#include <string>
#include <vector>

#include "tfu/cli/config.hpp"
#include "tfu/reference.hpp"
#include "tfu/support.hpp"
#include "tfu/weights.hpp"

namespace tfu::cli {

struct FunctionSpec {
  std::string text;
  reference::AnalyticFunction fn;
};

struct IsometryCheck {
  double tol = 1e-8;
};

struct OracleCheck {
  double tol = 1e-8;
};

struct IdentityTuple {
  FunctionSpec f1, f2, g1, g2;
};

struct IdentityCheck {
  std::vector<std::pair<double, double>> shifts{{0.0, 0.0}};
  double rotation_tol = 1e-6;
  std::vector<IdentityTuple> tuples;
  double tuple_tol = 1e-6;
};

struct LiebCheck {
  std::vector<double> p{1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0};
  double tol = 1e-6;
  std::optional<double> extremal_tol;
};

enum class ScanTarget { Stft, Pair };
enum class FieldSource { Analytic, Numeric };

struct WeightScan {
  std::string text;
  weights::WeightSpec spec;
  ScanTarget on = ScanTarget::Stft;
  FieldSource field = FieldSource::Analytic;
  std::optional<weights::Verdict> expect;
  std::optional<double> slope;
  double slope_tol = 0.1;
};

struct WeightsCheck {
  std::vector<double> radii{1, 2, 3, 4, 5, 6};
  std::vector<WeightScan> scans;
};

struct SupportExpectation {
  std::string text;
  std::vector<support::SupportMode> modes;
  std::optional<bool> satisfiable;
  std::optional<double> min_area;
  std::optional<double> area;
  double area_tol_cells = 2.0;
};

struct SupportCheck {
  std::vector<SupportExpectation> groups;
};

struct DecayCheck {
  double tail = 0.25;
  FieldSource field = FieldSource::Analytic;
  double product_tol = 1e-2;
};

struct GreedyOracleCheck {
  int fields = 20;
  int size = 8;
  int max_subset = 3;
  unsigned long seed = 1;
};

struct Scenario {
  std::string name;
  FunctionSpec f;
  FunctionSpec g;
  SignalLayout layout;
  std::optional<IsometryCheck> isometry;
  std::optional<OracleCheck> oracle;
  std::optional<IdentityCheck> identity;
  std::optional<LiebCheck> lieb;
  std::optional<WeightsCheck> weights;
  std::optional<SupportCheck> support;
  std::optional<DecayCheck> decay;
  std::optional<GreedyOracleCheck> greedy_oracle;
};

/// Validates every key and parameter; errors name "<scenario>.<key>" and the line.
std::vector<Scenario> build_scenarios(const ConfigDocument& doc);

}  // namespace tfu::cli
