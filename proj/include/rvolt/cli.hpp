#pragma once

#include "rvolt/signals.hpp"
#include "rvolt/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvolt::cli {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitIo = 4;

constexpr int kConfigVersion = 1;

/// Environment variable that overrides the configured output directory.
constexpr const char* kOutDirVariable = "RVOLT_OUT_DIR";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficient family by name. Young and rough: zero, constant (value), identity,
/// linear (scale, offset), trigonometric (amplitude, offset, frequency), affine_kernel.
/// Singular, for psi: constant (value), linear (scale), sine (amplitude, offset).
struct CoefficientConfig {
  std::string family = "identity";
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const;
  bool operator==(const CoefficientConfig&) const = default;
};

struct DriverConfig {
  /// "builtin" (name) or "fbm" (hurst, dim, seed, method).
  std::string kind = "builtin";
  std::string name = "sine";
  double hurst = 0.75;
  Index dim = 1;
  std::uint64_t seed = 0;
  std::string method = "auto";

  bool operator==(const DriverConfig&) const = default;
};

struct ExperimentConfig {
  int version = kConfigVersion;
  std::string regime = "young";
  CoefficientConfig coefficient;
  double alpha = 0.25;
  DriverConfig driver;
  Index n_steps = 1024;
  double horizon = 1.0;
  double gamma = 0.9;
  /// Unset means the midpoint of the admissible interval.
  std::optional<double> kappa;
  std::vector<double> initial{1.0};
  /// Unset means 1e-10 for builtin drivers and 1e-8 for fBm.
  std::optional<double> tol;
  int max_iter = 60;
  Index initial_window = 0;
  /// none, exponential, power, half_square or constant.
  std::string oracle = "none";
  bool export_lift = false;
  std::string out_dir = "out";
  /// Wall-clock timing makes reports differ between runs, so it is opt-in.
  bool timing = false;

  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json to_json(const ExperimentConfig& c);
/// Throws ValidationError on unknown keys, wrong types or an unsupported version.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Resolves everything that can be checked without solving; throws ValidationError.
void validate(const ExperimentConfig& c);

double resolved_tolerance(const ExperimentConfig& c);
Coefficient make_coefficient(const ExperimentConfig& c, Index state_dim, Index noise_dim);
KernelSpec make_kernel(const ExperimentConfig& c, Index state_dim, Index noise_dim);

/// The configured driver on a grid with n steps; fBm records generator details in info.
Path make_driver(const ExperimentConfig& c, Index n_steps, FbmInfo* info = nullptr);
/// Sub-grid factor of the lift of an fBm driver in the rough regime.
constexpr Index kLiftSubgrid = 4;

struct DrivenInput {
  Path driver;
  /// Set for rough fBm runs: the piecewise-linear lift of a kLiftSubgrid-times finer sample.
  std::optional<LevyArea> lift;
};
/// Driver on the configured grid together with the lift a rough solve uses.
DrivenInput make_input(const ExperimentConfig& c, FbmInfo* info = nullptr);
/// Problem for a driver; rough problems take the given lift or the piecewise-linear one.
VolterraProblem make_problem(const ExperimentConfig& c, const Path& driver,
                             std::optional<LevyArea> lift = std::nullopt);
/// Closed-form solution named by c.oracle, if any.
std::optional<Path> oracle_solution(const ExperimentConfig& c, const Path& driver);

/// --out, then RVOLT_OUT_DIR, then the configured directory.
std::filesystem::path resolve_out_dir(const ExperimentConfig& c, const std::optional<std::string>& flag);

/// %.17g, the float format of every CSV.
std::string format_double(double v);
void write_path_csv(const std::filesystem::path& file, const Path& p, const std::string& column);
/// One row per cell k and component pair (i, j), 1-based components: i,j,k,value.
void write_lift_csv(const std::filesystem::path& file, const LevyArea& xx);
void write_json(const std::filesystem::path& file, const nlohmann::json& j);

struct CommandResult {
  int exit_code = kExitOk;
  std::string message;
  nlohmann::json output;
};

/// driver.csv, optionally lift.csv, and config.json.
CommandResult cmd_gen(const ExperimentConfig& c, const std::filesystem::path& out);
/// solution.csv, yprime.csv (rough), report.json and config.json.
CommandResult cmd_solve(const ExperimentConfig& c, const std::filesystem::path& out);

struct RateReport {
  /// "oracle" or "self".
  std::string mode;
  std::vector<Index> resolutions;
  std::vector<double> errors;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;
  /// Exponent the slope is compared with; NaN when none applies.
  double benchmark = 0.0;
  bool complete = false;
};

nlohmann::json to_json(const RateReport& r);
/// Solves at N, 2N, ...; `refinements` resolutions enter the fit (at least 3).
RateReport compute_rate(const ExperimentConfig& c, int refinements);
/// rate.csv and rate.json.
CommandResult cmd_rate(const ExperimentConfig& c, int refinements, const std::filesystem::path& out);

struct CheckOptions {
  /// Test hook: flips the sign of the cross term in the Chen reconstruction.
  bool fault_chen = false;
};

std::vector<std::string> check_suites();
/// Runs the invariant suite ("all" or a module name); output lists every check.
CommandResult cmd_check(const std::string& suite, const CheckOptions& options = {});

}  // namespace rvolt::cli
