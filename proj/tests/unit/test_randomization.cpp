#include <doctest.h>

#include <cmath>

#include "specbound/families.hpp"
#include "specbound/operators.hpp"
#include "specbound/randomization.hpp"
#include "specbound/rng.hpp"

using namespace specbound;

TEST_CASE("counter rng") {
  CHECK(rng::hash(1, 2, 3) == rng::hash(1, 2, 3));
  CHECK(rng::hash(1, 2, 3) != rng::hash(1, 2, 4));
  CHECK(rng::hash(1, 2, 3) != rng::hash(2, 2, 3));
  double mean = 0.0, var = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng::uniform(9, 1, i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    const double g = rng::normal(9, 2, i);
    mean += g / n;
    var += g * g / n;
  }
  CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("cell layouts") {
  const auto t1 = build_torus1(16);
  const auto lay = cell_layout(*t1, 2 * kPi / 4);
  CHECK(lay.count == 4);
  for (std::size_t i = 1; i < lay.cell_of_node.size(); ++i) CHECK(lay.cell_of_node[i] >= lay.cell_of_node[i - 1]);
  CHECK(lay.cell_of_node.back() == 3);
  CHECK_THROWS(cell_layout(*t1, 1.0));
  CHECK_THROWS(cell_layout(*build_sphere2(4), 1.0));
  const auto t2 = build_torus2(6);
  CHECK(cell_layout(*t2, 2 * kPi / 2).count == 4);
}

TEST_CASE("bernoulli keeps moduli") {
  const auto t2 = build_torus2(8);
  const auto V = random_bandlimited(t2, 2, 3);
  const auto W = anderson_sample(V, {2 * kPi / 6, Law::bernoulli, 17});
  for (std::size_t i = 0; i < V.size(); ++i) CHECK(std::abs(W.values()[i]) == std::abs(V.values()[i]));
  const auto Z = anderson_sample(zero_potential(t2), {2 * kPi / 6, Law::bernoulli, 17});
  for (const auto& v : Z.values()) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("gaussian cells") {
  const auto line = build_line(5000.0, 40000);
  const auto V = constant_potential(line, cplx(2.0, 0.0));
  const AndersonConfig cfg{1.0, Law::gaussian, 5};
  const auto W = anderson_sample(V, cfg);
  const auto lay = cell_layout(*line, 1.0);
  REQUIRE(lay.count == 10000);
  std::vector<double> ratio(lay.count, std::nan(""));
  for (std::size_t m = 0; m < W.size(); ++m) {
    const double r = W.values()[m].real() / 2.0;
    double& slot = ratio[lay.cell_of_node[m]];
    if (std::isnan(slot)) slot = r;
    else CHECK(slot == r);
  }
  double mean = 0.0;
  for (std::size_t c = 0; c < lay.count; ++c) mean += anderson_weight(Law::gaussian, 5, c) / lay.count;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(10000.0));
}

TEST_CASE("ensembles") {
  const auto t1 = build_torus1(8);
  const auto V = random_bandlimited(t1, 2, 1);
  const AndersonConfig cfg{2 * kPi / 4, Law::bernoulli, 100};
  const auto one = mc_spectrum_ensemble(t1, V, cfg, 2.0, 1, 2.0);
  const auto direct = spectrum(assemble_schrodinger(t1, anderson_sample(V, cfg), 2.0));
  REQUIRE(one.size() == 1);
  REQUIRE(one[0].spectrum.size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(one[0].spectrum[i] == direct[i]);

  const auto a = mc_spectrum_ensemble(t1, V, cfg, 2.0, 4, 2.0, 2);
  const auto b = mc_spectrum_ensemble(t1, V, cfg, 2.0, 4, 2.0, 1);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t i = 0; i < a[s].spectrum.size(); ++i) CHECK(a[s].spectrum[i] == b[s].spectrum[i]);

  // One cell: each sample is the free spectrum shifted by +c or -c.
  const cplx c(0.5, 0.25);
  const auto C = constant_potential(t1, c);
  const auto free = spectrum(assemble_fractional(t1, 2.0));
  for (const auto& m : mc_spectrum_ensemble(t1, C, {2 * kPi, Law::bernoulli, 3}, 2.0, 6, 2.0)) {
    const cplx shift = m.spectrum.front() - free.front();
    CHECK((std::abs(shift - c) < 1e-10 || std::abs(shift + c) < 1e-10));
    for (std::size_t i = 0; i < free.size(); ++i) CHECK(std::abs(m.spectrum[i] - (free[i] + shift)) < 1e-10);
  }
}
