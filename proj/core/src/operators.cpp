#include "specbound/operators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specbound/families.hpp"
#include "specbound/linalg.hpp"

namespace specbound {

std::string to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::free: return "free";
    case OperatorTag::potential: return "potential";
    case OperatorTag::schrodinger: return "schrodinger";
    case OperatorTag::birman_schwinger: return "birman_schwinger";
    case OperatorTag::resolvent: return "resolvent";
  }
  return "unknown";
}

namespace {

void require_eigenbasis(const SpectralModel& model, const char* who) {
  if (!model.has_eigenbasis())
    throw std::invalid_argument(std::string(who) + ": line model has no eigenbasis; use the finite-difference route");
}

void require_same_model(const ModelPtr& model, const PotentialField& V, const char* who) {
  if (V.model().get() != model.get() && V.model()->id() != model->id())
    throw std::invalid_argument(std::string(who) + ": potential lives on a different model");
}

Eigen::MatrixXcd selected_basis(const SpectralModel& model, const std::vector<std::size_t>& modes) {
  const auto& B = model.basis();
  Eigen::MatrixXcd out(B.rows(), static_cast<Eigen::Index>(modes.size()));
  for (std::size_t j = 0; j < modes.size(); ++j)
    out.col(static_cast<Eigen::Index>(j)) = B.col(static_cast<Eigen::Index>(modes[j]));
  return out;
}

double free_value(double freq, double alpha) { return freq == 0.0 ? 0.0 : std::pow(freq, alpha); }

// Dirichlet eigenvalues of the second-difference matrix on N interior points.
std::vector<double> line_free_spectrum(const SpectralModel& line) {
  const int n = static_cast<int>(line.node_count());
  const double h = line.spacing();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) out[static_cast<std::size_t>(j - 1)] = (2.0 / (h * h)) * (1.0 - std::cos(j * kPi / (n + 1)));
  return out;
}

}  // namespace

double default_cutoff(const SpectralModel& model) {
  if (model.kind() == ManifoldKind::torus2) return static_cast<double>(model.size());
  return kInf;
}

std::vector<std::size_t> select_modes(const SpectralModel& model, double cutoff) {
  require_eigenbasis(model, "select_modes");
  const double c = cutoff < 0.0 ? default_cutoff(model) : cutoff;
  std::vector<std::size_t> out;
  for (const auto& m : model.modes())
    if (m.freq <= c * (1.0 + 1e-12)) out.push_back(m.index);
  if (out.empty()) throw std::invalid_argument("select_modes: cutoff retains no modes");
  return out;
}

GalerkinOperator assemble_fractional(const ModelPtr& model, double alpha, double cutoff) {
  require_eigenbasis(*model, "assemble_fractional");
  if (!(alpha > 0.0)) throw std::domain_error("assemble_fractional: alpha must be > 0");
  GalerkinOperator op;
  op.model = model;
  op.tag = OperatorTag::free;
  op.alpha = alpha;
  op.modes = select_modes(*model, cutoff);
  const auto n = static_cast<Eigen::Index>(op.modes.size());
  op.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    op.matrix(j, j) = free_value(model->modes()[op.modes[static_cast<std::size_t>(j)]].freq, alpha);
  return op;
}

GalerkinOperator assemble_potential(const ModelPtr& model, const PotentialField& V, double cutoff) {
  require_eigenbasis(*model, "assemble_potential");
  require_same_model(model, V, "assemble_potential");
  GalerkinOperator op;
  op.model = model;
  op.tag = OperatorTag::potential;
  op.modes = select_modes(*model, cutoff);
  const Eigen::MatrixXcd B = selected_basis(*model, op.modes);
  const auto w = model->weights();
  Eigen::VectorXcd wv(B.rows());
  for (Eigen::Index m = 0; m < B.rows(); ++m) wv[m] = w[static_cast<std::size_t>(m)] * V.values()[static_cast<std::size_t>(m)];
  op.matrix = adjoint_times(B, wv.asDiagonal() * B);
  return op;
}

GalerkinOperator assemble_schrodinger(const ModelPtr& model, const PotentialField& V, double alpha, double cutoff) {
  GalerkinOperator op = assemble_potential(model, V, cutoff);
  const GalerkinOperator free = assemble_fractional(model, alpha, cutoff);
  op.matrix += free.matrix;
  op.tag = OperatorTag::schrodinger;
  op.alpha = alpha;
  return op;
}

std::vector<cplx> spectrum(const GalerkinOperator& op) {
  const auto r = eig(op.matrix);
  return {r.values.data(), r.values.data() + r.values.size()};
}

LineOperator line_operator(const ModelPtr& line, const PotentialField& V) {
  if (line->kind() != ManifoldKind::line) throw std::invalid_argument("line_operator: line model required");
  require_same_model(line, V, "line_operator");
  LineOperator op;
  op.h = line->spacing();
  const double inv = 1.0 / (op.h * op.h);
  op.off = -inv;
  op.diag.resize(line->node_count());
  for (std::size_t m = 0; m < op.diag.size(); ++m) op.diag[m] = 2.0 * inv + V.values()[m];
  return op;
}

GalerkinOperator assemble_line_schrodinger(const ModelPtr& line, const PotentialField& V) {
  const LineOperator lo = line_operator(line, V);
  const auto n = static_cast<Eigen::Index>(lo.diag.size());
  GalerkinOperator op;
  op.model = line;
  op.tag = OperatorTag::schrodinger;
  op.alpha = 2.0;
  op.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    op.matrix(m, m) = lo.diag[static_cast<std::size_t>(m)];
    if (m + 1 < n) {
      op.matrix(m, m + 1) = lo.off;
      op.matrix(m + 1, m) = lo.off;
    }
  }
  return op;
}

std::vector<cplx> line_spectrum(const ModelPtr& line, const PotentialField& V) {
  if (V.is_real()) {
    const LineOperator lo = line_operator(line, V);
    std::vector<double> d(lo.diag.size());
    for (std::size_t m = 0; m < d.size(); ++m) d[m] = lo.diag[m].real();
    const std::vector<double> e(d.size() - 1, lo.off);
    const auto ev = tridiagonal_eigenvalues(d, e);
    return {ev.begin(), ev.end()};
  }
  return spectrum(assemble_line_schrodinger(line, V));
}

std::vector<cplx> line_bound_states(const ModelPtr& line, const PotentialField& V, const LineStateOptions& options) {
  auto off_half_line = [&](cplx z) { return std::abs(z.imag()) > options.imag_tol || z.real() <= 0.0; };
  std::vector<cplx> out;
  if (V.is_real()) {
    for (const auto& z : line_spectrum(line, V))
      if (z.real() <= 0.0) out.push_back(cplx(z.real(), 0.0));
    return out;
  }
  const GalerkinOperator op = assemble_line_schrodinger(line, V);
  const EigResult r = eig(op.matrix, true);
  const double edge = 0.75 * line->halfwidth();
  for (Eigen::Index k = 0; k < r.values.size(); ++k) {
    const cplx z = r.values[k];
    if (!off_half_line(z)) continue;
    double total = 0.0, outer = 0.0;
    for (Eigen::Index m = 0; m < r.vectors.rows(); ++m) {
      const double mass = std::norm(r.vectors(m, k));
      total += mass;
      if (std::abs(line->nodes()[static_cast<std::size_t>(m)][0]) > edge) outer += mass;
    }
    if (total > 0.0 && outer / total < options.edge_mass) out.push_back(z);
  }
  return out;
}

double free_distance(const SpectralModel& model, double alpha, cplx z, double cutoff) {
  double d = kInf;
  if (model.kind() == ManifoldKind::line) {
    for (double mu : line_free_spectrum(model)) d = std::min(d, std::abs(mu - z));
    return d;
  }
  for (std::size_t j : select_modes(model, cutoff)) d = std::min(d, std::abs(free_value(model.modes()[j].freq, alpha) - z));
  return d;
}

cplx complex_sign(cplx v) {
  const double a = std::abs(v);
  return a == 0.0 ? cplx(0.0, 0.0) : v / a;
}

Eigen::MatrixXcd birman_schwinger_dense(const Eigen::MatrixXcd& H0, std::span<const cplx> v, cplx z) {
  const auto n = H0.rows();
  if (H0.cols() != n || static_cast<std::size_t>(n) != v.size())
    throw std::invalid_argument("birman_schwinger_dense: dimension mismatch");
  Eigen::VectorXcd left(n), right(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double root = std::sqrt(std::abs(v[static_cast<std::size_t>(m)]));
    left[m] = root;
    right[m] = complex_sign(v[static_cast<std::size_t>(m)]) * root;
  }
  Eigen::MatrixXcd shifted = H0;
  shifted.diagonal().array() -= z;
  Eigen::MatrixXcd rhs = right.asDiagonal() * Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd X = shifted.partialPivLu().solve(rhs);
  return left.asDiagonal() * X;
}

GalerkinOperator assemble_birman_schwinger(const ModelPtr& model, const PotentialField& V, cplx z, double alpha,
                                           double cutoff, double tol) {
  require_same_model(model, V, "assemble_birman_schwinger");
  const double d = free_distance(*model, alpha, z, cutoff);
  if (d <= tol * (1.0 + std::abs(z))) {
    std::ostringstream os;
    os << "assemble_birman_schwinger: z = " << z << " lies within " << d << " of the free spectrum";
    throw NearSpectrum(os.str(), d);
  }
  GalerkinOperator op;
  op.model = model;
  op.tag = OperatorTag::birman_schwinger;
  op.alpha = alpha;
  op.z = z;

  if (model->kind() == ManifoldKind::line) {
    const GalerkinOperator h0 = assemble_line_schrodinger(model, zero_potential(model));
    op.matrix = birman_schwinger_dense(h0.matrix, V.values(), z);
    return op;
  }

  op.modes = select_modes(*model, cutoff);
  Eigen::MatrixXcd S = selected_basis(*model, op.modes);
  const auto w = model->weights();
  const auto n = S.rows();
  Eigen::VectorXcd left(n), right(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto i = static_cast<std::size_t>(m);
    S.row(m) *= std::sqrt(w[i]);
    const double root = std::sqrt(std::abs(V.values()[i]));
    left[m] = root;
    right[m] = complex_sign(V.values()[i]) * root;
  }
  Eigen::VectorXcd r(static_cast<Eigen::Index>(op.modes.size()));
  for (std::size_t j = 0; j < op.modes.size(); ++j)
    r[static_cast<Eigen::Index>(j)] = 1.0 / (free_value(model->modes()[op.modes[j]].freq, alpha) - z);
  const Eigen::MatrixXcd LS = left.asDiagonal() * S;
  const Eigen::MatrixXcd RS = right.conjugate().asDiagonal() * S;
  op.matrix.noalias() = LS * r.asDiagonal() * RS.adjoint();
  return op;
}

std::vector<cplx> resolvent_apply(const SpectralModel& model, double alpha, cplx z, std::span<const cplx> f) {
  require_eigenbasis(model, "resolvent_apply");
  if (f.size() != model.mode_count()) throw std::invalid_argument("resolvent_apply: coefficient vector size mismatch");
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const cplx denom = free_value(model.modes()[j].freq, alpha) - z;
    if (denom == cplx(0.0, 0.0)) throw NearSpectrum("resolvent_apply: z is a free eigenvalue", 0.0);
    out[j] = f[j] / denom;
  }
  return out;
}

GalerkinOperator assemble_resolvent(const ModelPtr& model, double alpha, cplx z, double cutoff) {
  GalerkinOperator op = assemble_fractional(model, alpha, cutoff);
  for (Eigen::Index j = 0; j < op.matrix.rows(); ++j) {
    const cplx denom = op.matrix(j, j) - z;
    if (denom == cplx(0.0, 0.0)) throw NearSpectrum("assemble_resolvent: z is a free eigenvalue", 0.0);
    op.matrix(j, j) = 1.0 / denom;
  }
  op.tag = OperatorTag::resolvent;
  op.z = z;
  return op;
}

std::string matrix_csv(const Eigen::MatrixXcd& m) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j).real() << ',' << m(i, j).imag();
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace specbound
