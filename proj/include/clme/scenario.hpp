#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "clme/model.hpp"
#include "clme/pde_oracle.hpp"

namespace clme {

inline constexpr const char* kToolVersion = "1.0.0";

enum class Output { Density, Char, Wigner, Spectrum, Observables, Audit, OracleCompare };

const char* to_string(Output o);

/// A fully validated run description. Built from a JSON config by
/// parse_scenario; see README.md for the schema.
struct Scenario {
  RawParams raw_params;
  ModelParams params = make_params({});
  StateSpec state;
  std::vector<double> times;
  /// Position grid; the characteristic grid uses R.reciprocal() and r.
  Axis R;
  Axis r;
  std::vector<Output> pipeline;
  int basis_cutoff = 32;

  StateSpec audit_reference = GaussianSpec{0.0, 0.0, 1.0};
  std::size_t audit_samples = 1000;
  std::uint64_t audit_seed = 20240611;

  OracleConfig oracle;
  /// Oracle grid; defaults to the characteristic grid.
  std::optional<Axis> oracle_K;
  std::optional<Axis> oracle_r;
  double oracle_tolerance = 1e-4;

  std::filesystem::path output_dir = "out";
  bool write_grids = true;

  bool wants(Output o) const;
};

/// Parses and validates a JSON config. Throws Error(ConfigError) naming the
/// offending key; parameter-validation errors (e.g. CriticalDamping) keep
/// their own code.
Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

struct RunOptions {
  bool check = false;  // oracle comparison
  bool audit = false;  // factorization audit
  std::optional<std::filesystem::path> output_dir;
};

struct RunResult {
  std::vector<std::string> files;
  std::optional<double> oracle_gap;
  std::optional<double> audit_discrepancy;
};

/// Executes the pipeline and writes artifacts plus manifest.json. Progress
/// and summaries go to `log`.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options, std::ostream& log);

/// Exit status for an exception escaping run/parse: 2 config, 3 numerical,
/// 4 I/O.
int exit_code_for(ErrorCode code);

}  // namespace clme
