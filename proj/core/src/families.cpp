#include "specbound/families.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "specbound/rng.hpp"

namespace specbound {

PotentialField zero_potential(const ModelPtr& model) {
  return PotentialField(model, std::vector<cplx>(model->node_count(), cplx(0.0, 0.0)));
}

PotentialField constant_potential(const ModelPtr& model, cplx c) {
  return PotentialField(model, std::vector<cplx>(model->node_count(), c));
}

PotentialField potential_from_function(const ModelPtr& model, const std::function<cplx(const Point&)>& f) {
  std::vector<cplx> v;
  v.reserve(model->node_count());
  for (const auto& x : model->nodes()) v.push_back(f(x));
  return PotentialField(model, std::move(v));
}

PotentialField random_bandlimited(const ModelPtr& model, int bandwidth, std::uint64_t seed, bool real_valued) {
  if (bandwidth < 0) throw std::invalid_argument("random_bandlimited: bandwidth must be >= 0");
  std::vector<cplx> v(model->node_count(), cplx(0.0, 0.0));
  std::uint64_t counter = 0;
  auto gauss = [&] {
    const std::uint64_t c = counter++;
    return cplx(rng::normal(seed, 1, c), rng::normal(seed, 2, c));
  };
  const auto& nodes = model->nodes();
  switch (model->kind()) {
    case ManifoldKind::torus1: {
      for (int m = 0; m <= bandwidth; ++m) {
        const cplx cp = gauss(), cm = gauss();
        for (std::size_t j = 0; j < nodes.size(); ++j) {
          const double x = nodes[j][0];
          if (m == 0) {
            v[j] += real_valued ? cplx(cp.real(), 0.0) : cp;
          } else if (real_valued) {
            v[j] += 2.0 * (cp * std::polar(1.0, m * x)).real();
          } else {
            v[j] += cp * std::polar(1.0, m * x) + cm * std::polar(1.0, -m * x);
          }
        }
      }
      break;
    }
    case ManifoldKind::torus2: {
      for (int a = -bandwidth; a <= bandwidth; ++a)
        for (int b = -bandwidth; b <= bandwidth; ++b) {
          const cplx c = gauss();
          // For real potentials keep one representative of each +-(a, b) pair.
          if (real_valued && (a < 0 || (a == 0 && b < 0))) continue;
          for (std::size_t j = 0; j < nodes.size(); ++j) {
            const cplx e = std::polar(1.0, a * nodes[j][0] + b * nodes[j][1]);
            if (!real_valued) v[j] += c * e;
            else if (a == 0 && b == 0) v[j] += c.real();
            else v[j] += 2.0 * (c * e).real();
          }
        }
      break;
    }
    case ManifoldKind::sphere2: {
      const auto& B = model->basis();
      for (std::size_t k = 0; k < model->mode_count(); ++k) {
        if (model->modes()[k].label[0] > bandwidth) break;
        cplx c = gauss();
        if (real_valued) c = c.real();
        for (std::size_t j = 0; j < nodes.size(); ++j) v[j] += c * B(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      }
      break;
    }
    case ManifoldKind::line:
      throw std::invalid_argument("random_bandlimited: not defined on the line model");
  }
  return PotentialField(model, std::move(v));
}

PotentialField random_nonvanishing(const ModelPtr& model, int bandwidth, std::uint64_t seed, double floor) {
  auto base = random_bandlimited(model, bandwidth, seed);
  double vmax = 0.0;
  for (const auto& x : base.values()) vmax = std::max(vmax, std::abs(x));
  const double phase = 2.0 * kPi * rng::uniform(seed, 3, 0);
  const cplx offset = std::polar(vmax + floor, phase);
  std::vector<cplx> v(base.values().begin(), base.values().end());
  for (auto& x : v) x += offset;
  return PotentialField(model, std::move(v));
}

PotentialField scaled_to_norm(const PotentialField& V, double q, double target) {
  const double n = V.lq_norm(q);
  if (n == 0.0) throw std::invalid_argument("scaled_to_norm: potential vanishes identically");
  return V.scaled(target / n);
}

PotentialField square_well(const ModelPtr& line, cplx depth, double a, double center) {
  if (line->kind() != ManifoldKind::line) throw std::invalid_argument("square_well: line model required");
  if (!(a > 0.0)) throw std::invalid_argument("square_well: half-width must be > 0");
  const double h = line->spacing();
  std::vector<cplx> v(line->node_count());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double x = line->nodes()[j][0];
    const double lo = std::max(x - 0.5 * h, center - a);
    const double hi = std::min(x + 0.5 * h, center + a);
    v[j] = depth * (std::max(hi - lo, 0.0) / h);
  }
  return PotentialField(line, std::move(v));
}

PotentialField random_multi_well(const ModelPtr& line, int wells, std::uint64_t seed) {
  if (wells < 1) throw std::invalid_argument("random_multi_well: need at least one well");
  std::vector<cplx> v(line->node_count(), cplx(0.0, 0.0));
  const double span = 0.5 * line->halfwidth();
  for (int w = 0; w < wells; ++w) {
    const double depth = 0.5 + 4.5 * rng::uniform(seed, 10, w);
    const double a = 0.05 + 0.95 * rng::uniform(seed, 11, w);
    const double c = -span + 2.0 * span * rng::uniform(seed, 12, w);
    const auto well = square_well(line, cplx(-depth, 0.0), a, c);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += well.values()[j];
  }
  return PotentialField(line, std::move(v));
}

}  // namespace specbound
