#include "specbound/resolvent_map.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "specbound/operators.hpp"

namespace specbound {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int wrapped_index(int i, int M) { return i <= M / 2 ? i : i - M; }

class FftResolvent {
 public:
  FftResolvent(const TorusGrid& grid, double alpha, cplx z) : grid_(grid), n_(grid.size()) {
    const int M = grid.points_per_axis;
    mult_.resize(n_);
    for (std::size_t idx = 0; idx < n_; ++idx) {
      double k2 = 0.0;
      std::size_t rest = idx;
      for (int a = 0; a < grid.dim; ++a) {
        const int k = wrapped_index(static_cast<int>(rest % static_cast<std::size_t>(M)), M);
        rest /= static_cast<std::size_t>(M);
        k2 += static_cast<double>(k) * k;
      }
      const double freq = std::sqrt(k2);
      if (freq > grid.cutoff * (1.0 + 1e-12) || (M % 2 == 0 && has_nyquist(idx))) {
        mult_[idx] = 0.0;
        continue;
      }
      const double lam = freq == 0.0 ? 0.0 : std::pow(freq, alpha);
      mult_[idx] = 1.0 / (lam - z) / static_cast<double>(n_);
    }
    buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_));
    std::vector<int> dims(static_cast<std::size_t>(grid.dim), M);
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_ = fftw_plan_dft(grid.dim, dims.data(), buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft(grid.dim, dims.data(), buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~FftResolvent() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }

  FftResolvent(const FftResolvent&) = delete;
  FftResolvent& operator=(const FftResolvent&) = delete;

  void apply(std::span<const cplx> x, std::span<cplx> y, bool adjoint) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto* buf = reinterpret_cast<cplx*>(buffer_);
    std::copy(x.begin(), x.end(), buf);
    fftw_execute(forward_);
    for (std::size_t i = 0; i < n_; ++i) buf[i] *= adjoint ? std::conj(mult_[i]) : mult_[i];
    fftw_execute(backward_);
    std::copy(buf, buf + n_, y.begin());
  }

 private:
  bool has_nyquist(std::size_t idx) const {
    const int M = grid_.points_per_axis;
    for (int a = 0; a < grid_.dim; ++a) {
      if (static_cast<int>(idx % static_cast<std::size_t>(M)) == M / 2) return true;
      idx /= static_cast<std::size_t>(M);
    }
    return false;
  }

  TorusGrid grid_;
  std::size_t n_;
  std::vector<cplx> mult_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  std::mutex mutex_;
};

}  // namespace

std::size_t TorusGrid::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(points_per_axis);
  return n;
}

double TorusGrid::weight() const { return std::pow(2.0 * kPi / points_per_axis, dim); }

std::vector<double> TorusGrid::weights() const { return std::vector<double>(size(), weight()); }

LinearMap torus_resolvent_map(const TorusGrid& grid, double alpha, cplx z) {
  if (grid.dim < 1 || grid.dim > 3) throw std::invalid_argument("torus_resolvent_map: dim must be 1, 2 or 3");
  if (grid.points_per_axis < 4) throw std::invalid_argument("torus_resolvent_map: need at least 4 points per axis");
  if (!(grid.cutoff >= 0.0) || grid.cutoff >= grid.points_per_axis / 2.0)
    throw std::invalid_argument("torus_resolvent_map: cutoff must lie below the Nyquist frequency");
  const double d = torus_free_distance(grid, alpha, z);
  if (d <= 1e-12 * (1.0 + std::abs(z)))
    throw NearSpectrum("torus_resolvent_map: z lies on the free spectrum", d);
  auto impl = std::make_shared<FftResolvent>(grid, alpha, z);
  LinearMap m;
  m.rows = m.cols = grid.size();
  m.apply = [impl](std::span<const cplx> x, std::span<cplx> y) { impl->apply(x, y, false); };
  m.apply_adjoint = [impl](std::span<const cplx> y, std::span<cplx> x) { impl->apply(y, x, true); };
  return m;
}

double torus_free_distance(const TorusGrid& grid, double alpha, cplx z) {
  const int K = static_cast<int>(std::floor(grid.cutoff));
  double best = kInf;
  if (grid.dim == 1) {
    for (int k = 0; k <= K; ++k) best = std::min(best, std::abs((k == 0 ? 0.0 : std::pow(k, alpha)) - z));
    return best;
  }
  for (int a = 0; a <= K; ++a)
    for (int b = 0; b <= K; ++b) {
      const double f = std::sqrt(static_cast<double>(a * a + b * b));
      if (f > grid.cutoff * (1.0 + 1e-12)) continue;
      best = std::min(best, std::abs((f == 0.0 ? 0.0 : std::pow(f, alpha)) - z));
    }
  return best;
}

LinearMap dense_resolvent_map(const SpectralModel& model, double alpha, cplx z, double cutoff) {
  const auto modes = select_modes(model, cutoff);
  const auto& B = model.basis();
  const auto n = B.rows();
  Eigen::MatrixXcd Bs(n, static_cast<Eigen::Index>(modes.size()));
  Eigen::VectorXcd r(static_cast<Eigen::Index>(modes.size()));
  for (std::size_t j = 0; j < modes.size(); ++j) {
    Bs.col(static_cast<Eigen::Index>(j)) = B.col(static_cast<Eigen::Index>(modes[j]));
    const double f = model.modes()[modes[j]].freq;
    const cplx denom = (f == 0.0 ? 0.0 : std::pow(f, alpha)) - z;
    if (std::abs(denom) == 0.0) throw NearSpectrum("dense_resolvent_map: z is a free eigenvalue", 0.0);
    r[static_cast<Eigen::Index>(j)] = 1.0 / denom;
  }
  Eigen::VectorXd w(n);
  for (Eigen::Index m = 0; m < n; ++m) w[m] = model.weights()[static_cast<std::size_t>(m)];
  const Eigen::MatrixXcd A = Bs * r.asDiagonal() * Bs.adjoint() * w.asDiagonal();
  return dense_map(A);
}

}  // namespace specbound
