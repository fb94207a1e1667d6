#include "specbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <cblas.h>
#include <lapacke.h>

#include "specbound/rng.hpp"

namespace specbound {

namespace {

void require_finite(const Eigen::MatrixXcd& A, const char* who) {
  if (A.size() == 0) throw std::invalid_argument(std::string(who) + ": empty matrix");
  if (!A.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite entries");
}

auto* as_lapack(cplx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

}  // namespace

Eigen::MatrixXcd adjoint_times(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
  if (A.rows() != B.rows()) throw std::invalid_argument("adjoint_times: row counts differ");
  Eigen::MatrixXcd C(A.cols(), B.cols());
  if (C.size() == 0) return C;
  if (A.rows() == 0) return C.setZero();
  const cplx one(1.0, 0.0), zero(0.0, 0.0);
  cblas_zgemm(CblasColMajor, CblasConjTrans, CblasNoTrans, static_cast<int>(A.cols()), static_cast<int>(B.cols()),
              static_cast<int>(A.rows()), &one, A.data(), static_cast<int>(A.rows()), B.data(),
              static_cast<int>(B.rows()), &zero, C.data(), static_cast<int>(C.rows()));
  return C;
}

EigResult eig(const Eigen::MatrixXcd& A, bool want_vectors) {
  require_finite(A, "eig");
  if (A.rows() != A.cols()) throw std::invalid_argument("eig: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXcd work = A;
  Eigen::VectorXcd w(n);
  Eigen::MatrixXcd vr;
  if (want_vectors) vr.resize(n, n);
  const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, as_lapack(work.data()), n,
                                        as_lapack(w.data()), nullptr, 1,
                                        want_vectors ? as_lapack(vr.data()) : nullptr, want_vectors ? n : 1);
  if (info < 0) throw std::invalid_argument("eig: zgeev argument " + std::to_string(-info) + " invalid");
  if (info > 0) {
    throw NonConvergence("eig: QR iteration failed; " + std::to_string(info) + " eigenvalues did not converge (n=" +
                             std::to_string(n) + ")",
                         static_cast<int>(info));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (w[a].real() != w[b].real()) return w[a].real() < w[b].real();
    return w[a].imag() < w[b].imag();
  });
  EigResult out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = w[order[static_cast<std::size_t>(k)]];
    if (want_vectors) out.vectors.col(k) = vr.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double eig_residual(const Eigen::MatrixXcd& A, const EigResult& r) {
  if (r.vectors.size() == 0) throw std::invalid_argument("eig_residual: eigenvectors were not computed");
  double worst = 0.0;
  for (Eigen::Index k = 0; k < r.values.size(); ++k) {
    const Eigen::VectorXcd v = r.vectors.col(k);
    worst = std::max(worst, (A * v - r.values[k] * v).norm());
  }
  return worst;
}

HermitianEig eigh(const Eigen::MatrixXcd& A, bool want_vectors) {
  require_finite(A, "eigh");
  if (A.rows() != A.cols()) throw std::invalid_argument("eigh: matrix must be square");
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXcd work = A;
  HermitianEig out;
  out.values.resize(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n, as_lapack(work.data()), n, out.values.data());
  if (info > 0) throw NonConvergence("eigh: zheevd failed to converge", static_cast<int>(info));
  if (info < 0) throw std::invalid_argument("eigh: zheevd argument " + std::to_string(-info) + " invalid");
  if (want_vectors) out.vectors = std::move(work);
  return out;
}

std::vector<double> tridiagonal_eigenvalues(std::span<const double> diag, std::span<const double> off) {
  const std::size_t n = diag.size();
  if (n == 0) throw std::invalid_argument("tridiagonal_eigenvalues: empty matrix");
  if (off.size() + 1 != n) throw std::invalid_argument("tridiagonal_eigenvalues: off-diagonal must have n-1 entries");
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(off.begin(), off.end());
  e.push_back(0.0);
  const lapack_int info =
      LAPACKE_dstev(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n), d.data(), e.data(), nullptr, 1);
  if (info > 0) throw NonConvergence("tridiagonal_eigenvalues: dstev failed to converge", static_cast<int>(info));
  if (info < 0) throw std::invalid_argument("tridiagonal_eigenvalues: non-finite input");
  return d;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& A) {
  require_finite(A, "singular_values");
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  Eigen::MatrixXcd work = A;
  Eigen::VectorXd s(std::min(m, n));
  const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, as_lapack(work.data()), m, s.data(), nullptr, 1,
                                         nullptr, 1);
  if (info > 0) throw NonConvergence("singular_values: zgesdd failed to converge", static_cast<int>(info));
  if (info < 0) throw std::invalid_argument("singular_values: zgesdd argument " + std::to_string(-info) + " invalid");
  return s;
}

SchattenReport schatten_norm(const Eigen::MatrixXcd& A, double p) {
  if (std::isnan(p) || p < 1.0) throw std::domain_error("schatten_norm: p must be >= 1");
  const Eigen::VectorXd s = singular_values(A);
  SchattenReport r;
  r.p = p;
  r.singulars.assign(s.data(), s.data() + s.size());
  if (r.singulars.empty()) return r;
  const double smax = r.singulars.front();
  if (std::isinf(p) || smax == 0.0) {
    r.value = smax;
    return r;
  }
  double acc = 0.0;
  for (double x : r.singulars) acc += std::pow(x / smax, p);
  r.value = smax * std::pow(acc, 1.0 / p);
  return r;
}

LinearMap dense_map(const Eigen::MatrixXcd& A) {
  LinearMap m;
  m.rows = static_cast<std::size_t>(A.rows());
  m.cols = static_cast<std::size_t>(A.cols());
  m.apply = [A](std::span<const cplx> x, std::span<cplx> y) {
    Eigen::Map<const Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::Map<Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    yv.noalias() = A * xv;
  };
  m.apply_adjoint = [A](std::span<const cplx> y, std::span<cplx> x) {
    Eigen::Map<const Eigen::VectorXcd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    Eigen::Map<Eigen::VectorXcd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    xv.noalias() = A.adjoint() * yv;
  };
  return m;
}

double weighted_norm(std::span<const cplx> x, double p, std::span<const double> weights) {
  if (!weights.empty() && weights.size() != x.size()) throw std::invalid_argument("weighted_norm: size mismatch");
  double vmax = 0.0;
  for (const auto& v : x) vmax = std::max(vmax, std::abs(v));
  if (std::isinf(p) || vmax == 0.0) return vmax;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    acc += w * std::pow(std::abs(x[i]) / vmax, p);
  }
  return vmax * std::pow(acc, 1.0 / p);
}

namespace {

// Pointwise duality map |y|^{r-1} sgn(y), evaluated on y / max|y| to stay in range.
void duality_map(std::span<cplx> y, double r) {
  double vmax = 0.0;
  for (const auto& v : y) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) return;
  for (auto& v : y) {
    const double a = std::abs(v);
    v = a == 0.0 ? cplx(0.0, 0.0) : (v / a) * std::pow(a / vmax, r - 1.0);
  }
}

void normalize(std::span<cplx> x, double p) {
  const double n = weighted_norm(x, p);
  if (n > 0.0)
    for (auto& v : x) v /= n;
}

// Unweighted map B = W^{1/p'} A W^{-1/p}.
struct ScaledMap {
  const LinearMap& A;
  std::vector<double> out_scale, in_scale;

  void apply(std::span<const cplx> x, std::span<cplx> y, std::vector<cplx>& tmp) const {
    tmp.assign(x.begin(), x.end());
    if (!in_scale.empty())
      for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] *= in_scale[i];
    A.apply(tmp, y);
    if (!out_scale.empty())
      for (std::size_t i = 0; i < y.size(); ++i) y[i] *= out_scale[i];
  }
  void adjoint(std::span<const cplx> y, std::span<cplx> x, std::vector<cplx>& tmp) const {
    tmp.assign(y.begin(), y.end());
    if (!out_scale.empty())
      for (std::size_t i = 0; i < tmp.size(); ++i) tmp[i] *= out_scale[i];
    A.apply_adjoint(tmp, x);
    if (!in_scale.empty())
      for (std::size_t i = 0; i < x.size(); ++i) x[i] *= in_scale[i];
  }
};

void check_exponents(double p, double pprime) {
  if (!(p >= 1.0 && p <= 2.0)) throw std::domain_error("opnorm_p_pprime: need 1 <= p <= 2");
  if (!(pprime >= 2.0)) throw std::domain_error("opnorm_p_pprime: need p' >= 2");
}

}  // namespace

OpNormResult opnorm_p_pprime(const LinearMap& A, double p, double pprime, std::span<const double> weights,
                             const OpNormOptions& options) {
  check_exponents(p, pprime);
  if (!A.apply || !A.apply_adjoint) throw std::invalid_argument("opnorm_p_pprime: map lacks apply/adjoint");
  if (!weights.empty()) {
    if (A.rows != A.cols || weights.size() != A.cols)
      throw std::invalid_argument("opnorm_p_pprime: weights must match a square map");
    for (double w : weights)
      if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("opnorm_p_pprime: weights must be positive");
  }

  ScaledMap B{A, {}, {}};
  if (!weights.empty()) {
    B.out_scale.resize(weights.size());
    B.in_scale.resize(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
      B.out_scale[i] = std::isinf(pprime) ? 1.0 : std::pow(weights[i], 1.0 / pprime);
      B.in_scale[i] = std::pow(weights[i], -1.0 / p);
    }
  }

  const std::size_t n = A.cols, m = A.rows;
  std::vector<cplx> x(n), y(m), g(n), tmp;
  OpNormResult best;

  // Closed forms: the 1 -> r norm is attained at a coordinate vector, and the
  // s -> inf norm is the largest dual norm of a row.
  if (p == 1.0 || std::isinf(pprime)) {
    best.exact = true;
    best.converged = true;
    const double pstar = p == 1.0 ? kInf : p / (p - 1.0);
    const std::size_t count = p == 1.0 ? n : m;
    for (std::size_t j = 0; j < count; ++j) {
      double r = 0.0;
      if (p == 1.0) {
        std::fill(x.begin(), x.end(), cplx(0.0, 0.0));
        x[j] = 1.0;
        B.apply(x, y, tmp);
        r = weighted_norm(y, pprime);
      } else {
        std::fill(y.begin(), y.end(), cplx(0.0, 0.0));
        y[j] = 1.0;
        B.adjoint(y, g, tmp);
        r = weighted_norm(g, pstar);
      }
      if (!std::isfinite(r)) throw std::invalid_argument("opnorm_p_pprime: map produced non-finite values");
      best.start_values.push_back(r);
      best.value = std::max(best.value, r);
    }
    best.trace = {best.value};
    return best;
  }

  const double pstar = p / (p - 1.0);
  const int starts = 2 + std::max(options.random_starts, 0);
  bool first_trace = true;
  for (int s = 0; s < starts; ++s) {
    if (s == 0) {
      std::fill(x.begin(), x.end(), cplx(1.0, 0.0));
    } else if (s == 1) {
      std::fill(x.begin(), x.end(), cplx(0.0, 0.0));
      x[0] = 1.0;
    } else {
      for (std::size_t i = 0; i < n; ++i)
        x[i] = cplx(rng::normal(options.seed, static_cast<std::uint64_t>(s), 2 * i),
                    rng::normal(options.seed, static_cast<std::uint64_t>(s), 2 * i + 1));
    }
    normalize(x, p);

    std::vector<double> trace;
    double ratio = 0.0;
    bool converged = false;
    int it = 0;
    for (; it < options.max_iterations; ++it) {
      B.apply(x, y, tmp);
      const double r = weighted_norm(y, pprime);
      if (!std::isfinite(r)) throw std::invalid_argument("opnorm_p_pprime: map produced non-finite values");
      trace.push_back(r);
      if (r == 0.0) {
        converged = true;
        break;
      }
      if (it > 0 && std::abs(r - ratio) <= options.rel_tol * r) {
        ratio = std::max(ratio, r);
        converged = true;
        break;
      }
      ratio = std::max(ratio, r);
      duality_map(y, pprime);
      B.adjoint(y, g, tmp);
      duality_map(g, pstar);
      x.swap(g);
      normalize(x, p);
      if (weighted_norm(x, p) == 0.0) {
        converged = true;
        break;
      }
    }
    best.start_values.push_back(ratio);
    if (first_trace || ratio > best.value) {
      first_trace = false;
      best.value = ratio;
      best.trace = std::move(trace);
      best.iterations = it + 1;
      best.converged = converged;
    }
  }
  return best;
}

OpNormResult opnorm_p_pprime(const Eigen::MatrixXcd& A, double p, double pprime, std::span<const double> weights,
                             const OpNormOptions& options) {
  require_finite(A, "opnorm_p_pprime");
  return opnorm_p_pprime(dense_map(A), p, pprime, weights, options);
}

}  // namespace specbound
