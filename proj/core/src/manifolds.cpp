#include "specbound/manifolds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace specbound {

namespace {

std::atomic<std::uint64_t> next_model_id{1};

void sort_modes(std::vector<Mode>& modes) {
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    if (a.freq != b.freq) return a.freq < b.freq;
    return a.label < b.label;
  });
  for (std::size_t i = 0; i < modes.size(); ++i) modes[i].index = i;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Orthonormal associated Legendre functions Pbar_l^m(cos theta), with
// Y_l^m = Pbar_l^m e^{i m phi} orthonormal on the unit sphere. Column-major
// table indexed [l][m], 0 <= m <= l <= L.
std::vector<std::vector<double>> normalized_legendre(int L, double x) {
  std::vector<std::vector<double>> P(L + 1, std::vector<double>(L + 1, 0.0));
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  P[0][0] = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 1; m <= L; ++m) P[m][m] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * P[m - 1][m - 1];
  for (int m = 0; m < L; ++m) P[m + 1][m] = std::sqrt(2.0 * m + 3.0) * x * P[m][m];
  for (int m = 0; m <= L; ++m) {
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      P[l][m] = a * (x * P[l - 1][m] - b * P[l - 2][m]);
    }
  }
  return P;
}

}  // namespace

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::torus1:
      return "torus1";
    case ManifoldKind::torus2:
      return "torus2";
    case ManifoldKind::sphere2:
      return "sphere2";
    case ManifoldKind::line:
      return "line";
  }
  return "?";
}

ManifoldKind manifold_kind_from_string(const std::string& name) {
  if (name == "torus1") return ManifoldKind::torus1;
  if (name == "torus2") return ManifoldKind::torus2;
  if (name == "sphere2") return ManifoldKind::sphere2;
  if (name == "line") return ManifoldKind::line;
  throw std::invalid_argument("unknown manifold kind '" + name + "'");
}

const Eigen::MatrixXcd& SpectralModel::basis() const {
  if (!has_basis()) throw std::logic_error(to_string(kind_) + " model was built without basis values");
  return basis_;
}

std::vector<double> SpectralModel::frequencies() const {
  std::vector<double> f;
  f.reserve(modes_.size());
  for (const auto& m : modes_) f.push_back(m.freq);
  return f;
}

std::vector<std::pair<std::string, std::string>> SpectralModel::descriptor() const {
  std::vector<std::pair<std::string, std::string>> d;
  d.emplace_back("kind", to_string(kind_));
  d.emplace_back("size", std::to_string(size_));
  if (kind_ == ManifoldKind::line) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", halfwidth_);
    d.emplace_back("halfwidth", buf);
  }
  d.emplace_back("modes", std::to_string(kind_ == ManifoldKind::line ? nodes_.size() : modes_.size()));
  d.emplace_back("nodes", std::to_string(nodes_.size()));
  return d;
}

ModelPtr build_torus1(int N, BasisStorage storage) {
  if (N < 4 || N % 2 != 0) throw std::invalid_argument("build_torus1: N must be even and >= 4");
  auto m = std::shared_ptr<SpectralModel>(new SpectralModel());
  m->kind_ = ManifoldKind::torus1;
  m->dim_ = 1;
  m->size_ = N;
  m->id_ = next_model_id++;
  for (int k = -N / 2; k <= N / 2; ++k) m->modes_.push_back({0, static_cast<double>(std::abs(k)), {k, 0}});
  sort_modes(m->modes_);
  const int M = 2 * N + 2;
  m->nodes_per_axis_ = M;
  const double h = 2.0 * kPi / M;
  for (int j = 0; j < M; ++j) {
    m->nodes_.push_back({h * j, 0.0});
    m->weights_.push_back(h);
  }
  m->volume_ = 2.0 * kPi;
  if (storage == BasisStorage::stored) {
    m->basis_.resize(M, static_cast<Eigen::Index>(m->modes_.size()));
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    for (std::size_t c = 0; c < m->modes_.size(); ++c) {
      const int k = m->modes_[c].label[0];
      for (int j = 0; j < M; ++j) {
        // Reduce k*j mod M so the phase is exact for large indices.
        const long r = ((static_cast<long>(k) * j) % M + M) % M;
        m->basis_(j, c) = norm * std::polar(1.0, 2.0 * kPi * r / M);
      }
    }
  }
  return m;
}

ModelPtr build_torus2(int N, BasisStorage storage) {
  if (N < 1) throw std::invalid_argument("build_torus2: N must be >= 1");
  auto m = std::shared_ptr<SpectralModel>(new SpectralModel());
  m->kind_ = ManifoldKind::torus2;
  m->dim_ = 2;
  m->size_ = N;
  m->id_ = next_model_id++;
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b) m->modes_.push_back({0, std::sqrt(double(a * a + b * b)), {a, b}});
  sort_modes(m->modes_);
  const int M = 2 * N + 2;
  m->nodes_per_axis_ = M;
  const double h = 2.0 * kPi / M;
  // Node index n = i + M j for x = (i h, j h).
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i) {
      m->nodes_.push_back({h * i, h * j});
      m->weights_.push_back(h * h);
    }
  m->volume_ = 4.0 * kPi * kPi;
  if (storage == BasisStorage::stored) {
    const auto nn = static_cast<Eigen::Index>(m->nodes_.size());
    m->basis_.resize(nn, static_cast<Eigen::Index>(m->modes_.size()));
    const double norm = 1.0 / (2.0 * kPi);
    for (std::size_t c = 0; c < m->modes_.size(); ++c) {
      const auto [a, b] = m->modes_[c].label;
      for (int j = 0; j < M; ++j)
        for (int i = 0; i < M; ++i) {
          const long r = ((static_cast<long>(a) * i + static_cast<long>(b) * j) % M + M) % M;
          m->basis_(i + M * j, c) = norm * std::polar(1.0, 2.0 * kPi * r / M);
        }
    }
  }
  return m;
}

ModelPtr build_sphere2(int L) {
  if (L < 2) throw std::invalid_argument("build_sphere2: L must be >= 2");
  auto m = std::shared_ptr<SpectralModel>(new SpectralModel());
  m->kind_ = ManifoldKind::sphere2;
  m->dim_ = 2;
  m->size_ = L;
  m->id_ = next_model_id++;
  for (int l = 0; l <= L; ++l)
    for (int mm = -l; mm <= l; ++mm) m->modes_.push_back({0, std::sqrt(double(l) * (l + 1)), {l, mm}});
  sort_modes(m->modes_);

  const int ntheta = 2 * L + 2, nphi = 2 * L + 2;
  std::vector<double> gx, gw;
  gauss_legendre(ntheta, gx, gw);
  const double dphi = 2.0 * kPi / nphi;
  m->basis_.resize(ntheta * nphi, static_cast<Eigen::Index>(m->modes_.size()));
  for (int i = 0; i < ntheta; ++i) {
    const auto P = normalized_legendre(L, gx[i]);
    const double theta = std::acos(gx[i]);
    for (int j = 0; j < nphi; ++j) {
      const double phi = dphi * j;
      const auto node = static_cast<Eigen::Index>(m->nodes_.size());
      m->nodes_.push_back({theta, phi});
      m->weights_.push_back(gw[i] * dphi);
      for (std::size_t c = 0; c < m->modes_.size(); ++c) {
        const auto [l, mm] = m->modes_[c].label;
        double y;
        if (mm == 0) y = P[l][0];
        else if (mm > 0) y = std::sqrt(2.0) * P[l][mm] * std::cos(mm * phi);
        else y = std::sqrt(2.0) * P[l][-mm] * std::sin(-mm * phi);
        m->basis_(node, static_cast<Eigen::Index>(c)) = y;
      }
    }
  }
  m->nodes_per_axis_ = nphi;
  m->volume_ = std::accumulate(m->weights_.begin(), m->weights_.end(), 0.0);
  return m;
}

ModelPtr build_line(double halfwidth, int N) {
  if (!(halfwidth > 0.0)) throw std::invalid_argument("build_line: halfwidth must be > 0");
  if (N < 16) throw std::invalid_argument("build_line: N must be >= 16");
  auto m = std::shared_ptr<SpectralModel>(new SpectralModel());
  m->kind_ = ManifoldKind::line;
  m->dim_ = 1;
  m->size_ = N;
  m->nodes_per_axis_ = N;
  m->halfwidth_ = halfwidth;
  m->id_ = next_model_id++;
  const double h = 2.0 * halfwidth / (N + 1);
  m->spacing_ = h;
  for (int j = 1; j <= N; ++j) {
    m->nodes_.push_back({-halfwidth + h * j, 0.0});
    m->weights_.push_back(h);
  }
  m->volume_ = h * N;
  return m;
}

double orthonormality_residual(const SpectralModel& model) {
  const auto& B = model.basis();
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(model.weights().data(),
                                                        static_cast<Eigen::Index>(model.node_count()));
  Eigen::MatrixXcd G = B.adjoint() * w.asDiagonal() * B;
  G -= Eigen::MatrixXcd::Identity(G.rows(), G.cols());
  return G.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

PotentialField::PotentialField(const PotentialField& other)
    : model_(other.model_), values_(other.values_) {
  std::lock_guard lock(other.cache_mutex_);
  norm_cache_ = other.norm_cache_;
}

PotentialField& PotentialField::operator=(const PotentialField& other) {
  if (this == &other) return *this;
  std::map<double, double> cache;
  {
    std::lock_guard lock(other.cache_mutex_);
    cache = other.norm_cache_;
  }
  model_ = other.model_;
  values_ = other.values_;
  std::lock_guard lock(cache_mutex_);
  norm_cache_ = std::move(cache);
  return *this;
}

PotentialField::PotentialField(ModelPtr model, std::vector<cplx> values)
    : model_(std::move(model)), values_(std::move(values)) {
  if (!model_) throw std::invalid_argument("PotentialField: null model");
  if (values_.size() != model_->node_count()) {
    throw std::invalid_argument("PotentialField: expected " + std::to_string(model_->node_count()) +
                                " node values, got " + std::to_string(values_.size()));
  }
}

double PotentialField::lq_norm(double q) const {
  if (std::isnan(q) || q < 1.0) throw std::domain_error("lq_norm requires q >= 1");
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = norm_cache_.find(q); it != norm_cache_.end()) return it->second;
  }
  double result = 0.0;
  if (std::isinf(q)) {
    for (const auto& v : values_) result = std::max(result, std::abs(v));
  } else {
    const auto w = model_->weights();
    double acc = 0.0;
    for (std::size_t m = 0; m < values_.size(); ++m) acc += w[m] * std::pow(std::abs(values_[m]), q);
    result = std::pow(acc, 1.0 / q);
  }
  std::lock_guard lock(cache_mutex_);
  norm_cache_[q] = result;
  return result;
}

bool PotentialField::is_real(double tol) const {
  double vmax = 0.0, imax = 0.0;
  for (const auto& v : values_) {
    vmax = std::max(vmax, std::abs(v));
    imax = std::max(imax, std::abs(v.imag()));
  }
  return imax <= tol * (1.0 + vmax);
}

std::vector<double> PotentialField::positive_part() const {
  std::vector<double> out(values_.size());
  for (std::size_t m = 0; m < values_.size(); ++m) out[m] = std::max(values_[m].real(), 0.0);
  return out;
}

std::vector<double> PotentialField::negative_part() const {
  std::vector<double> out(values_.size());
  for (std::size_t m = 0; m < values_.size(); ++m) out[m] = std::max(-values_[m].real(), 0.0);
  return out;
}

double PotentialField::integrate(std::span<const double> g) const {
  const auto w = model_->weights();
  double acc = 0.0;
  for (std::size_t m = 0; m < g.size(); ++m) acc += w[m] * g[m];
  return acc;
}

PotentialField PotentialField::scaled(cplx factor) const {
  std::vector<cplx> v(values_);
  for (auto& x : v) x *= factor;
  return PotentialField(model_, std::move(v));
}

double lq_norm(const PotentialField& V, double q) { return V.lq_norm(q); }

}  // namespace specbound
