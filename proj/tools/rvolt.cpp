#include "rvolt/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace rvolt;
using namespace rvolt::cli;

namespace {

ExperimentConfig configured(const std::string& file, const std::optional<std::uint64_t>& seed) {
  ExperimentConfig c = file.empty() ? ExperimentConfig{} : load_config(file);
  if (seed) c.driver.seed = *seed;
  return c;
}

int report(const CommandResult& r) {
  std::cerr << r.message << '\n';
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical solver for Volterra equations driven by Young, singular-kernel and rough signals"};
  app.require_subcommand(1);

  std::string config_file;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  int refinements = 4;
  std::string suite = "all";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_file, "Experiment config (JSON)");
    cmd->add_option("--out", out, "Output directory (overrides RVOLT_OUT_DIR and the config)");
    cmd->add_option("--seed", seed, "Overrides the fBm seed");
  };
  auto* gen = app.add_subcommand("gen", "Write the driver (and optionally its lift) to CSV");
  add_common(gen);
  auto* solve_cmd = app.add_subcommand("solve", "Solve the configured equation and write solution and report");
  add_common(solve_cmd);
  auto* rate = app.add_subcommand("rate", "Convergence study over dyadic refinements");
  add_common(rate);
  rate->add_option("--refinements", refinements, "Number of resolutions in the fit")->check(CLI::Range(3, 16));
  auto* check = app.add_subcommand("check", "Run the invariant suites and print JSON");
  check->add_option("--suite", suite, "all, algebra, young, singular, rough, signals or solver");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help requests exit 0; usage errors count as validation errors.
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (check->parsed()) {
      const auto r = cmd_check(suite);
      std::cout << r.output.dump(2) << '\n';
      return report(r);
    }
    const ExperimentConfig c = configured(config_file, seed);
    const auto dir = resolve_out_dir(c, out);
    if (gen->parsed()) return report(cmd_gen(c, dir));
    if (solve_cmd->parsed()) return report(cmd_solve(c, dir));
    const auto r = cmd_rate(c, refinements, dir);
    std::cout << r.output.dump(2) << '\n';
    return report(r);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return kExitValidation;
  }
}
