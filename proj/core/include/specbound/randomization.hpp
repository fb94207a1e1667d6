#pragma once

// Anderson-type randomization of a potential at cell scale h with
// counter-based, order-independent sampling.

#include <cstdint>
#include <string>
#include <vector>

#include "specbound/manifolds.hpp"

namespace specbound {

enum class Law { gaussian, bernoulli };

std::string to_string(Law law);
Law law_from_string(const std::string& name);

/// Cells are j + h [0, 1)^d anchored at the chart origin (tori) or at the
/// left end -a of the box (line).
struct AndersonConfig {
  double h = 1.0;
  Law law = Law::bernoulli;
  std::uint64_t seed = 0;
};

/// Cell layout for a model: number of cells per axis and the cell of each node.
struct CellLayout {
  int per_axis = 0;
  std::size_t count = 0;
  std::vector<std::size_t> cell_of_node;
};

/// Throws std::invalid_argument for the sphere or when h does not divide the
/// period (or box length) within 1e-12 relative.
CellLayout cell_layout(const SpectralModel& model, double h);

/// omega_j for cell j: standard normal or +-1, a pure function of (seed, j).
double anderson_weight(Law law, std::uint64_t seed, std::size_t cell);

PotentialField anderson_sample(const PotentialField& V, const AndersonConfig& cfg);

struct EnsembleMember {
  std::uint64_t seed = 0;
  double vnorm_q = 0.0;
  std::vector<cplx> spectrum;
};

/// Member i uses seed cfg.seed + i. Tori use the Galerkin Schrodinger
/// operator with fractional order alpha; the line uses the finite-difference
/// operator (alpha must be 2).
std::vector<EnsembleMember> mc_spectrum_ensemble(const ModelPtr& model, const PotentialField& V,
                                                 const AndersonConfig& cfg, double alpha, int samples, double q,
                                                 int threads = 1);

}  // namespace specbound
