// tfu: command-line front end for the time-frequency uncertainty lab.
//
//   tfu run <config> --out <dir> [--no-timestamp] [--scenario <name>]
//   tfu export-stft --f <spec> --g <spec> --out <file> [--count N] [--step h]
//   tfu bounds --mode <variant> --p <p> --eps <eps> [--d <d>]
//
// Exit codes: 0 all assertions hold, 2 an assertion failed, 1 configuration
// or runtime error. TFU_THREADS caps worker threads.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tfu/cli/config.hpp"
#include "tfu/cli/export.hpp"
#include "tfu/cli/runner.hpp"
#include "tfu/stft.hpp"
#include "tfu/support.hpp"

namespace {

int export_stft(const std::string& f_spec, const std::string& g_spec, const std::string& out, std::size_t count,
                double step) {
  using namespace tfu;
  const SignalLayout layout{count, step};
  layout.validate();
  const SampledSignal f = reference::sample(cli::parse_function(f_spec), layout);
  const SampledSignal g = reference::sample(cli::parse_function(g_spec), layout);
  cli::export_tfarray(compute_stft(f, g, stft_grid(layout)), out);
  return cli::kExitOk;
}

int bounds(const std::string& mode_name, double p, double eps, int d) {
  using namespace tfu;
  const support::SupportMode mode{support::parse_variant(mode_name), p, eps};
  nlohmann::ordered_json out = {{"mode", mode_name}, {"p", p}, {"epsilon", eps}, {"d", d},
                                {"lower_bound", support::lower_bound(mode, d)}};
  std::cout << out.dump() << "\n";
  return cli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for time-frequency uncertainty principles"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  bool no_timestamp = false;
  std::optional<std::string> only;
  CLI::App* run = app.add_subcommand("run", "Run the scenarios of a config (or the bundled 'paper-suite')");
  run->add_option("config", config, "Config file, or the name of a bundled config")->required();
  run->add_option("--out", out_dir, "Report directory")->required();
  run->add_flag("--no-timestamp", no_timestamp, "Omit timestamps so reports are byte-reproducible");
  run->add_option("--scenario", only, "Run only the named scenario");

  std::string f_spec;
  std::string g_spec;
  std::string out_file;
  std::size_t count = 256;
  double step = 1.0 / 16.0;
  CLI::App* exp = app.add_subcommand("export-stft", "Write V_g f on the full STFT grid as CSV");
  exp->add_option("--f", f_spec, "Analysed function, e.g. gaussian:a=1")->required();
  exp->add_option("--g", g_spec, "Window, e.g. hermite:n=1")->required();
  exp->add_option("--out", out_file, "CSV path")->required();
  exp->add_option("--count", count, "Samples per axis");
  exp->add_option("--step", step, "Sample step");

  std::string mode;
  double p = 2.0;
  double eps = 0.0;
  int d = 1;
  CLI::App* bnd = app.add_subcommand("bounds", "Print the closed-form support lower bound");
  bnd->add_option("--mode", mode, "l1_fraction, lp_vs_l1p or lp_vs_energy")->required();
  bnd->add_option("--p", p, "Exponent")->required();
  bnd->add_option("--eps", eps, "Mass fraction allowed outside U")->required();
  bnd->add_option("--d", d, "Dimension");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tfu::cli::kExitError;
  }

  try {
    if (*run) {
      tfu::cli::RunOptions options;
      options.out_dir = out_dir;
      options.timestamp = !no_timestamp;
      options.only = only;
      return tfu::cli::run_command(config, options, std::cout, std::cerr);
    }
    if (*exp) return export_stft(f_spec, g_spec, out_file, count, step);
    if (*bnd) return bounds(mode, p, eps, d);
  } catch (const std::exception& e) {
    std::cerr << "tfu: " << e.what() << "\n";
    return tfu::cli::kExitError;
  }
  return tfu::cli::kExitError;
}
