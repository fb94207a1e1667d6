#pragma once

// Galerkin assembly of fractional Laplacians, multiplication operators,
// Schrodinger operators, resolvents and Birman-Schwinger operators.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specbound/common.hpp"
#include "specbound/manifolds.hpp"

namespace specbound {

enum class OperatorTag { free, potential, schrodinger, birman_schwinger, resolvent };

std::string to_string(OperatorTag tag);

struct GalerkinOperator {
  Eigen::MatrixXcd matrix;
  ModelPtr model;
  OperatorTag tag = OperatorTag::free;
  double alpha = 0.0;
  cplx z{0.0, 0.0};
  /// Retained model modes (empty for grid-space operators).
  std::vector<std::size_t> modes;

  Eigen::Index dim() const { return matrix.rows(); }
};

/// Raised when a spectral parameter sits on (or too near) the free spectrum.
class NearSpectrum : public std::domain_error {
 public:
  NearSpectrum(const std::string& what, double distance) : std::domain_error(what), distance_(distance) {}
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

/// Default mode cutoff Lambda_max: N for torus2 (inscribed disc of the
/// |k|_inf <= N grid), +inf otherwise (all modes).
double default_cutoff(const SpectralModel& model);

/// Indices of modes with freq <= cutoff (cutoff < 0 selects the default).
std::vector<std::size_t> select_modes(const SpectralModel& model, double cutoff = -1.0);

GalerkinOperator assemble_fractional(const ModelPtr& model, double alpha, double cutoff = -1.0);
GalerkinOperator assemble_potential(const ModelPtr& model, const PotentialField& V, double cutoff = -1.0);
GalerkinOperator assemble_schrodinger(const ModelPtr& model, const PotentialField& V, double alpha,
                                      double cutoff = -1.0);

/// Eigenvalues of the operator matrix, sorted by (Re, Im).
std::vector<cplx> spectrum(const GalerkinOperator& op);

/// Central second differences with Dirichlet ends: diagonal entries
/// 2/h^2 + V_m, off-diagonal -1/h^2.
struct LineOperator {
  std::vector<cplx> diag;
  double off = 0.0;
  double h = 0.0;
};

LineOperator line_operator(const ModelPtr& line, const PotentialField& V);
GalerkinOperator assemble_line_schrodinger(const ModelPtr& line, const PotentialField& V);

/// Full spectrum of the line operator: symmetric tridiagonal solver for real
/// V, dense non-Hermitian solver otherwise.
std::vector<cplx> line_spectrum(const ModelPtr& line, const PotentialField& V);

struct LineStateOptions {
  /// Imaginary parts below this count as real when selecting off (0, inf).
  double imag_tol = 1e-9;
  /// Complex V: keep eigenpairs whose mass in the outer quarter of the box is below this.
  double edge_mass = 1e-3;
};

/// Eigenvalues off the positive half-line (Im z != 0 or Re z <= 0). For
/// complex V the box continuum is removed by an eigenvector localization test.
std::vector<cplx> line_bound_states(const ModelPtr& line, const PotentialField& V,
                                    const LineStateOptions& options = {});

/// d(z) = min_j |lambda_j^alpha - z| over the selected modes.
double free_distance(const SpectralModel& model, double alpha, cplx z, double cutoff = -1.0);

/// |V|^{1/2} (H0 - z)^{-1} sgn(V) |V|^{1/2} in the quadrature-grid picture,
/// (H0 - z)^{-1} = S R S^H with S = W^{1/2} B. Dimension is the node count.
/// The line model uses the finite-difference H0 instead. Throws NearSpectrum
/// when d(z) <= tol * (1 + |z|).
GalerkinOperator assemble_birman_schwinger(const ModelPtr& model, const PotentialField& V, cplx z, double alpha,
                                           double cutoff = -1.0, double tol = 1e-12);

/// Same construction for an explicit Hermitian H0 acting on grid values v.
Eigen::MatrixXcd birman_schwinger_dense(const Eigen::MatrixXcd& H0, std::span<const cplx> v, cplx z);

/// sgn(v) := v/|v|, 0 where v = 0.
cplx complex_sign(cplx v);

/// Componentwise (lambda_j^alpha - z)^{-1} f_j over all model modes.
std::vector<cplx> resolvent_apply(const SpectralModel& model, double alpha, cplx z, std::span<const cplx> f);

/// Dense resolvent in mode space, diag((lambda_j^alpha - z)^{-1}).
GalerkinOperator assemble_resolvent(const ModelPtr& model, double alpha, cplx z, double cutoff = -1.0);

/// Row-major "re,im" CSV dump of a matrix.
std::string matrix_csv(const Eigen::MatrixXcd& m);

}  // namespace specbound
