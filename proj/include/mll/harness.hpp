#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mll/euler.hpp"
#include "mll/norms.hpp"
#include "mll/spectral.hpp"

namespace mll {

// Malformed or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Initial data that cannot be brought inside the A(tau0) <= M0 class.
class InitialDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LawConfig {
  std::string kind = "ideal_gas";  // linear_acoustics | ideal_gas | series
  double gamma = 1.4;
  double k = 1.0;
  double pbar = 1.0;
  double radius = 1.0;
  unsigned order = 40;
  std::vector<double> a;  // series only
  std::vector<double> r;

  PressureLaw build() const;
};

struct InitialDataRecipe {
  std::string kind = "general";  // general | well_prepared | file
  double m0 = 10.0;
  // When set, the random spectrum is used at this amplitude instead of being
  // rescaled to 0.9 M0.
  std::optional<double> amplitude;
  std::string file;
};

struct ExperimentConfig {
  int dim = 2;
  int n = 64;
  LawConfig law;
  std::vector<double> eps{0.1};
  InitialDataRecipe initial;
  NormParams norm;
  double delta = 0.125;
  SolverConfig solver;
  std::string output_dir = "out";
  // Write a snapshot every this many diagnostic rows (0: first and last only).
  int snapshot_every = 0;
  bool snapshots = true;
  std::uint64_t seed = 1;
  int jobs = 1;

  void validate() const;
};

// Keys not listed in the schema are rejected. Throws ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// "general": random real fields with spectral amplitudes ~ e^{-2 tau0 |k|} in the
// 2/3 band, rescaled so A(tau0) = 0.9 M0. "well_prepared": the same velocity,
// Leray-projected, p = 0, rescaled likewise. "file": read from a snapshot.
// eps is left at 1; runs set their own. Throws InitialDataError.
StateU generate_initial_data(const InitialDataRecipe& recipe, const TorusGrid& grid, std::uint64_t seed, double tau0,
                             int max_order);

struct SweepRecord {
  double eps = 0.0;
  bool ok = false;
  std::string message;
  RunSummary summary;  // valid when ok
  std::optional<DiagnosticRow> last_row;
  double wall_seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // one per configured eps, in order
  bool all_ok() const;
};

// Runs every eps (in parallel when jobs > 1) and writes, under out_dir:
//   run_<i>/diagnostics.csv, run_<i>/u_<row>.mlsf, run_<i>/inc_<row>.mlsf,
//   summary.csv (deterministic) and timing.csv (wall-clock seconds).
// A failing run is recorded and the remaining runs continue.
SweepResult run_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir);

// %.16e (17 significant digits).
std::string format_double(double value);

inline constexpr const char* kCsvSchemaLine = "# schema=1";
std::string diagnostics_header();
std::string diagnostics_csv_row(const DiagnosticRow& row);
std::string summary_header();

// Exit codes: 0 success, 1 runtime abort, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mll
