#pragma once

// Dense kernels: non-Hermitian and Hermitian eigendecompositions, singular
// values, Schatten norms, and weighted L^p -> L^p' operator-norm estimation.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specbound/common.hpp"

namespace specbound {

struct EigResult {
  Eigen::VectorXcd values;
  /// Unit-norm right eigenvectors as columns (empty unless requested).
  Eigen::MatrixXcd vectors;
};

/// All eigenvalues of a general complex matrix, sorted by (Re, Im).
/// Throws NonConvergence when the QR iteration fails and
/// std::invalid_argument on empty or non-finite input.
EigResult eig(const Eigen::MatrixXcd& A, bool want_vectors = false);

/// A^H * B through BLAS zgemm.
Eigen::MatrixXcd adjoint_times(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B);

/// max_j ||A v_j - lambda_j v_j||_2 over the pairs in `r`.
double eig_residual(const Eigen::MatrixXcd& A, const EigResult& r);

struct HermitianEig {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXcd vectors;
};

/// Eigen-decomposition of a Hermitian matrix (lower triangle referenced).
HermitianEig eigh(const Eigen::MatrixXcd& A, bool want_vectors = false);

/// Eigenvalues (ascending) of the real symmetric tridiagonal matrix with
/// diagonal `diag` and off-diagonal `off` (size n-1).
std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> off);

/// Singular values, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& A);

struct SchattenReport {
  double p = 2.0;
  double value = 0.0;
  std::vector<double> singulars;  // descending
};

/// (sum s_n^p)^{1/p}, or max s_n for p = kInf. Throws std::domain_error for p < 1.
SchattenReport schatten_norm(const Eigen::MatrixXcd& A, double p);

/// Matrix-free square or rectangular linear map with its Euclidean adjoint.
struct LinearMap {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::function<void(std::span<const cplx> x, std::span<cplx> y)> apply;
  std::function<void(std::span<const cplx> y, std::span<cplx> x)> apply_adjoint;
};

LinearMap dense_map(const Eigen::MatrixXcd& A);

struct OpNormOptions {
  int random_starts = 8;
  std::uint64_t seed = 0x5eedULL;
  int max_iterations = 500;
  double rel_tol = 1e-8;
};

struct OpNormResult {
  /// Best achieved ratio ||Ax||_{p',w} / ||x||_{p,w}: a certified lower bound.
  double value = 0.0;
  /// Achieved ratio per iteration for the start that produced `value`.
  std::vector<double> trace;
  /// Final ratio for every start (structured starts first).
  std::vector<double> start_values;
  int iterations = 0;
  bool converged = false;
  /// True when `value` came from an exact closed form (p = 1 or p' = inf).
  bool exact = false;
};

/// Weighted ||A||_{L^p -> L^p'} with ||x||_{p,w} = (sum w_m |x_m|^p)^{1/p}.
/// Requires 1 <= p <= 2 <= pprime <= inf; empty weights mean unit weights.
/// Square maps only when weights are given (one grid for domain and range).
OpNormResult opnorm_p_pprime(const LinearMap& A, double p, double pprime, std::span<const double> weights = {},
                             const OpNormOptions& options = {});
OpNormResult opnorm_p_pprime(const Eigen::MatrixXcd& A, double p, double pprime,
                             std::span<const double> weights = {}, const OpNormOptions& options = {});

/// Weighted discrete L^p norm; p may be kInf.
double weighted_norm(std::span<const cplx> x, double p, std::span<const double> weights = {});

}  // namespace specbound
