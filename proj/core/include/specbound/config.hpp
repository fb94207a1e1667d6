#pragma once

// Experiment configuration: a line-oriented "[section]" / "key = value"
// format with a strict schema. Every field has a default.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "specbound/manifolds.hpp"
#include "specbound/randomization.hpp"
#include "specbound/regions.hpp"

namespace specbound {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

enum class ExperimentKind { enclosure, resolvent_scaling, line_bounds, random_mc, region_plot };

std::string to_string(ExperimentKind kind);

struct ModelSpec {
  ManifoldKind kind = ManifoldKind::torus1;
  int size = 16;
  double halfwidth = 20.0;
  /// Mode cutoff; negative selects the model default.
  double cutoff = -1.0;
};

struct PotentialSpec {
  /// zero, constant, bandlimited, nonvanishing, square_well, complex_well, multi_well
  std::string family = "bandlimited";
  double re = 1.0;
  double im = 0.0;
  int bandwidth = 2;
  bool real_valued = false;
  /// Target ||V||_q for the base sample; <= 0 keeps the raw normalization.
  double norm = -1.0;
  std::uint64_t seed = 1;
  double width = 0.5;
  int wells = 3;
};

struct ExponentSpec {
  int d = 0;  // 0: take the model dimension
  double q = 2.0;
  double alpha = 2.0;
  Window window = Window::theorem;
};

struct EnclosureSpec {
  int samples = 20;
  std::vector<double> scales{1.0};
  /// Extra model sizes for a refinement ladder (empty: none).
  std::vector<int> ladder;
  /// Scales used on ladder rungs (empty: same as scales).
  std::vector<double> ladder_scales;
  int holdout = 0;
  double holdout_factor = 1.05;
};

struct ResolventSpec {
  int grid = 128;
  double grid_cutoff = 63.0;
  /// "inside" (ray z = -t), "outside" (fit against d(z)) or "approach".
  std::string display = "inside";
  double t_min = 10.0;
  double t_max = 1000.0;
  int points = 12;
  /// Approach target index into the sorted distinct free frequencies.
  int approach_mode = 1;
  double delta_min = 1e-3;
  double delta_max = 1e-1;
  bool calibrate = true;
  int random_starts = 8;
  int max_iterations = 500;
};

struct LineSpec {
  std::vector<double> widths{0.32, 0.16, 0.08, 0.04};
  double kappa = 2.0;
  int random_wells = 0;
  double gamma = 0.5;
};

struct RandomSpec {
  /// Cell sizes as fractions of the torus period (or of the box length).
  std::vector<double> h_fractions{0.25, 0.125, 0.0625};
  Law law = Law::bernoulli;
  int samples = 100;
  double lambda_min = 2.0;
  double lambda_max = 6.0;
  double eps_ratio = 0.1;
  /// Support radius R; <= 0 selects half the period.
  double R = -1.0;
  double quantile = 0.95;
  std::vector<double> m_factors{0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
};

struct PlotSpec {
  double radius = 60.0;
  int width = 640;
  int height = 480;
};

struct ToleranceSpec {
  double drift = 0.2;
  double slope = 0.15;
  double calibration_slope = 0.01;
  double aad_slack = 0.05;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::enclosure;
  std::string name = "experiment";
  ModelSpec model;
  PotentialSpec potential;
  ExponentSpec exponents;
  /// Enclosure constant; empty means "fit".
  std::optional<double> C;
  std::string output = "out";
  int threads = 1;
  EnclosureSpec enclosure;
  ResolventSpec resolvent;
  LineSpec line;
  RandomSpec random;
  PlotSpec plot;
  ToleranceSpec tolerances;

  /// Canonical text with every field, parseable by parse_config.
  std::string to_text() const;
};

/// Strict parse: unknown sections or keys, malformed values, and duplicate
/// keys are collected and thrown together as ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace specbound
