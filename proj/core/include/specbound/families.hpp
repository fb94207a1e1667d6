#pragma once

// Potential families used by tests, experiments and the CLI.

#include <cstdint>
#include <functional>

#include "specbound/manifolds.hpp"

namespace specbound {

PotentialField zero_potential(const ModelPtr& model);
PotentialField constant_potential(const ModelPtr& model, cplx c);
PotentialField potential_from_function(const ModelPtr& model, const std::function<cplx(const Point&)>& f);

/// Random trigonometric polynomial (tori) or spherical-harmonic sum (sphere)
/// with frequencies up to `bandwidth` and standard complex Gaussian
/// coefficients; `real_valued` makes the coefficients conjugate-symmetric.
PotentialField random_bandlimited(const ModelPtr& model, int bandwidth, std::uint64_t seed,
                                  bool real_valued = false);

/// random_bandlimited plus a random-phase offset so that min |V| >= floor.
PotentialField random_nonvanishing(const ModelPtr& model, int bandwidth, std::uint64_t seed,
                                   double floor = 0.5);

/// V rescaled so that ||V||_q == target (V must not vanish identically).
PotentialField scaled_to_norm(const PotentialField& V, double q, double target);

/// depth * 1_{[center-a, center+a]}, averaged over each grid cell of the line
/// model so the discrete integral equals 2 a depth exactly.
PotentialField square_well(const ModelPtr& line, cplx depth, double a, double center = 0.0);

/// Sum of `wells` attractive square wells with random depth, width and position.
PotentialField random_multi_well(const ModelPtr& line, int wells, std::uint64_t seed);

}  // namespace specbound
