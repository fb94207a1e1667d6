#include "specbound/randomization.hpp"

#include <cmath>
#include <stdexcept>

#include "specbound/operators.hpp"
#include "specbound/parallel.hpp"
#include "specbound/rng.hpp"

namespace specbound {

std::string to_string(Law law) { return law == Law::gaussian ? "gaussian" : "bernoulli"; }

Law law_from_string(const std::string& name) {
  if (name == "gaussian") return Law::gaussian;
  if (name == "bernoulli") return Law::bernoulli;
  throw std::invalid_argument("unknown randomization law '" + name + "' (expected gaussian or bernoulli)");
}

namespace {

constexpr std::uint64_t kAndersonStream = 0xa5de5500ULL;

int cells_dividing(double length, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("cell_layout: h must be > 0");
  const double n = std::round(length / h);
  if (n < 1.0 || std::abs(n * h - length) > 1e-12 * length)
    throw std::invalid_argument("cell_layout: h does not divide the cell domain into whole cells");
  return static_cast<int>(n);
}

}  // namespace

CellLayout cell_layout(const SpectralModel& model, double h) {
  CellLayout out;
  const auto M = static_cast<std::size_t>(model.nodes_per_axis());
  switch (model.kind()) {
    case ManifoldKind::sphere2:
      throw std::invalid_argument("cell_layout: the sphere has no cubic cell tiling");
    case ManifoldKind::torus1:
    case ManifoldKind::torus2: {
      out.per_axis = cells_dividing(2.0 * kPi, h);
      const auto n = static_cast<std::size_t>(out.per_axis);
      // Node i sits at 2 pi i / M, so its cell is floor(i n / M) exactly.
      if (model.kind() == ManifoldKind::torus1) {
        out.count = n;
        for (std::size_t i = 0; i < M; ++i) out.cell_of_node.push_back(i * n / M);
      } else {
        out.count = n * n;
        for (std::size_t j = 0; j < M; ++j)
          for (std::size_t i = 0; i < M; ++i) out.cell_of_node.push_back(i * n / M + n * (j * n / M));
      }
      break;
    }
    case ManifoldKind::line: {
      out.per_axis = cells_dividing(2.0 * model.halfwidth(), h);
      const auto n = static_cast<std::size_t>(out.per_axis);
      out.count = n;
      // Node m (1-based) sits at -a + m * 2a / (N + 1).
      for (std::size_t m = 1; m <= M; ++m) out.cell_of_node.push_back(std::min(m * n / (M + 1), n - 1));
      break;
    }
  }
  return out;
}

double anderson_weight(Law law, std::uint64_t seed, std::size_t cell) {
  return law == Law::gaussian ? rng::normal(seed, kAndersonStream, cell) : rng::sign(seed, kAndersonStream, cell);
}

PotentialField anderson_sample(const PotentialField& V, const AndersonConfig& cfg) {
  const CellLayout layout = cell_layout(*V.model(), cfg.h);
  std::vector<cplx> out(V.size());
  for (std::size_t m = 0; m < out.size(); ++m)
    out[m] = anderson_weight(cfg.law, cfg.seed, layout.cell_of_node[m]) * V.values()[m];
  return PotentialField(V.model(), std::move(out));
}

std::vector<EnsembleMember> mc_spectrum_ensemble(const ModelPtr& model, const PotentialField& V,
                                                 const AndersonConfig& cfg, double alpha, int samples, double q,
                                                 int threads) {
  if (samples < 1) throw std::invalid_argument("mc_spectrum_ensemble: samples must be >= 1");
  if (model->kind() == ManifoldKind::line && alpha != 2.0)
    throw std::invalid_argument("mc_spectrum_ensemble: the line model supports alpha = 2 only");
  cell_layout(*model, cfg.h);
  std::vector<EnsembleMember> out(static_cast<std::size_t>(samples));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    AndersonConfig c = cfg;
    c.seed = cfg.seed + i;
    const PotentialField Vw = anderson_sample(V, c);
    EnsembleMember& e = out[i];
    e.seed = c.seed;
    e.vnorm_q = Vw.lq_norm(q);
    e.spectrum = model->kind() == ManifoldKind::line ? line_spectrum(model, Vw)
                                                     : spectrum(assemble_schrodinger(model, Vw, alpha));
  });
  return out;
}

}  // namespace specbound
