#pragma once

// Matrix-free resolvents acting on grid functions, for L^p -> L^p' norm estimates.

#include <vector>

#include "specbound/linalg.hpp"
#include "specbound/manifolds.hpp"

namespace specbound {

/// Uniform grid on the flat torus [0, 2 pi)^dim with modes |k|_2 <= cutoff.
struct TorusGrid {
  int dim = 2;
  int points_per_axis = 64;
  double cutoff = 31.0;

  std::size_t size() const;
  double weight() const;  // (2 pi / M)^dim
  std::vector<double> weights() const;
};

/// Grid function f -> sum_k (|k|^alpha - z)^{-1} <f, e_k> e_k via FFT.
LinearMap torus_resolvent_map(const TorusGrid& grid, double alpha, cplx z);

/// d(z) over the retained modes of the grid.
double torus_free_distance(const TorusGrid& grid, double alpha, cplx z);

/// B R B^H W on the model's nodes for the selected modes (any eigenbasis model).
LinearMap dense_resolvent_map(const SpectralModel& model, double alpha, cplx z, double cutoff = -1.0);

}  // namespace specbound
