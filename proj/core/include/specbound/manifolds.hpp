#pragma once

// Discrete spectral models of model manifolds (flat tori, round sphere) and a
// finite-difference box for the real line, plus complex potentials sampled on
// their quadrature grids.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specbound/common.hpp"

namespace specbound {

enum class ManifoldKind { torus1, torus2, sphere2, line };

std::string to_string(ManifoldKind kind);
ManifoldKind manifold_kind_from_string(const std::string& name);

/// One eigenfunction e_k of -Delta_g with -Delta_g e_k = freq^2 e_k.
/// label holds the Fourier index (k) / (k1, k2) or the harmonic (l, m).
struct Mode {
  std::size_t index = 0;
  double freq = 0.0;
  std::array<int, 2> label{0, 0};
};

using Point = std::array<double, 2>;

enum class BasisStorage { stored, omitted };

class SpectralModel {
 public:
  ManifoldKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  /// N for tori, L for the sphere, node count for the line.
  int size() const noexcept { return size_; }
  double halfwidth() const noexcept { return halfwidth_; }
  /// Grid spacing of the line model (0 otherwise).
  double spacing() const noexcept { return spacing_; }
  std::uint64_t id() const noexcept { return id_; }

  const std::vector<Mode>& modes() const noexcept { return modes_; }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double volume() const noexcept { return volume_; }

  std::size_t mode_count() const noexcept { return modes_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// True for models carrying an explicit eigenbasis (everything but the line).
  bool has_eigenbasis() const noexcept { return kind_ != ManifoldKind::line; }
  bool has_basis() const noexcept { return basis_.size() > 0; }
  /// Basis values e_k(x_m): node_count x mode_count. Throws if omitted.
  const Eigen::MatrixXcd& basis() const;

  std::vector<double> frequencies() const;
  /// Index of the chart cell grid: number of nodes per axis (tori).
  int nodes_per_axis() const noexcept { return nodes_per_axis_; }

  /// kind, size parameters and mode count as `key=value` pairs.
  std::vector<std::pair<std::string, std::string>> descriptor() const;

 private:
  friend std::shared_ptr<const SpectralModel> build_torus1(int, BasisStorage);
  friend std::shared_ptr<const SpectralModel> build_torus2(int, BasisStorage);
  friend std::shared_ptr<const SpectralModel> build_sphere2(int);
  friend std::shared_ptr<const SpectralModel> build_line(double, int);

  SpectralModel() = default;

  ManifoldKind kind_ = ManifoldKind::torus1;
  int dim_ = 1;
  int size_ = 0;
  int nodes_per_axis_ = 0;
  double halfwidth_ = 0.0;
  double spacing_ = 0.0;
  std::uint64_t id_ = 0;
  std::vector<Mode> modes_;
  std::vector<Point> nodes_;
  std::vector<double> weights_;
  double volume_ = 0.0;
  Eigen::MatrixXcd basis_;
};

using ModelPtr = std::shared_ptr<const SpectralModel>;

/// Fourier modes e^{ikx}/sqrt(2 pi), |k| <= N/2, on 2N+2 uniform nodes.
ModelPtr build_torus1(int N, BasisStorage storage = BasisStorage::stored);
/// Tensor Fourier modes e^{i k.x}/(2 pi), |k|_inf <= N, on a (2N+2)^2 grid.
ModelPtr build_torus2(int N, BasisStorage storage = BasisStorage::stored);
/// Real spherical harmonics Y_l^m, l <= L, on a Gauss-Legendre x uniform grid
/// with 2L+2 points in each direction.
ModelPtr build_sphere2(int L);
/// Interior grid x_m = -a + m h, m = 1..N, h = 2a/(N+1); Dirichlet at +-a.
/// Weights are h, so they sum to 2a - h.
ModelPtr build_line(double halfwidth, int N);

/// Max |G_jk - delta_jk| of the discrete Gram matrix.
double orthonormality_residual(const SpectralModel& model);

/// Complex potential sampled at the model's quadrature nodes.
class PotentialField {
 public:
  PotentialField(ModelPtr model, std::vector<cplx> values);
  PotentialField(const PotentialField& other);
  PotentialField& operator=(const PotentialField& other);

  const ModelPtr& model() const noexcept { return model_; }
  std::span<const cplx> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Weighted discrete L^q norm; q may be kInf. Cached per q.
  double lq_norm(double q) const;
  /// True when every |Im V| <= tol * (1 + max|V|).
  bool is_real(double tol = 1e-12) const;
  /// max(Re V, 0) and max(-Re V, 0) pointwise, so Re V = V_+ - V_-.
  std::vector<double> positive_part() const;
  std::vector<double> negative_part() const;
  /// Integral of g(values) against the weights.
  double integrate(std::span<const double> g) const;

  PotentialField scaled(cplx factor) const;

 private:
  ModelPtr model_;
  std::vector<cplx> values_;
  mutable std::mutex cache_mutex_;
  mutable std::map<double, double> norm_cache_;
};

/// Free-function form of PotentialField::lq_norm. Throws for q < 1.
double lq_norm(const PotentialField& V, double q);

}  // namespace specbound
