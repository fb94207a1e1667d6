#pragma once

// Experiment runner binding models, operators, bounds and randomization into
// reproducible studies with CSV, SVG and manifest output.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specbound/config.hpp"
#include "specbound/csv.hpp"
#include "specbound/manifest.hpp"

namespace specbound {

/// Exit status convention of run(): 0 pass, 1 tool error, 2 bound violation.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

struct RunOptions {
  /// Output directory; overrides config.output when set.
  std::optional<std::string> out;
  /// Base seed; overrides potential.seed when set.
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  /// Treat diagnostics (non-converged norm estimates, drift flags) as violations.
  bool strict = false;
};

struct RunOutcome {
  ResultManifest manifest;
  int exit_code = kExitPass;
  std::string out_dir;
  std::vector<std::string> messages;
};

/// Executes the configured experiment and writes its files plus manifest.txt
/// into the output directory. Errors surface as exceptions; callers map them
/// to kExitError.
RunOutcome run(const ExperimentConfig& config, const RunOptions& options = {});

ModelPtr build_model(const ModelSpec& spec);

/// Potential of the configured family; `seed` replaces spec.seed. When
/// spec.norm > 0 the result is rescaled to ||V||_q = spec.norm.
PotentialField build_potential(const ModelPtr& model, const PotentialSpec& spec, double q, std::uint64_t seed);

struct ConvergenceRow {
  int size = 0;
  std::size_t modes = 0;
  double C_emp = 0.0;
  double vnorm_q = 0.0;
  cplx tracked{0.0, 0.0};
  /// |tracked - tracked of the previous rung| (NaN on the first rung).
  double drift = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  /// Relative spread of C_emp across rungs.
  double C_spread = 0.0;
  bool drift_flag = false;        // C_emp spread exceeds the tolerance
  bool non_monotone_flag = false; // tracked-eigenvalue drift fails to decrease

  CsvTable csv() const;
};

/// Enclosure fit on each rung of a model-size ladder (at least three rungs)
/// using the first configured scale.
ConvergenceTable convergence_study(const ExperimentConfig& config, std::span<const int> ladder);

/// Linear-interpolation quantile of a sample (q in [0, 1]).
double quantile(std::vector<double> values, double q);

}  // namespace specbound
