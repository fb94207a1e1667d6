#include <doctest.h>

#include <cmath>
#include <map>

#include "specbound/families.hpp"
#include "specbound/manifolds.hpp"

using namespace specbound;

TEST_CASE("torus1 frequencies and quadrature") {
  const auto m = build_torus1(8);
  const std::vector<double> expect{0, 1, 1, 2, 2, 3, 3, 4, 4};
  REQUIRE(m->mode_count() >= expect.size());
  for (std::size_t k = 0; k < expect.size(); ++k) CHECK(m->modes()[k].freq == expect[k]);
  CHECK(m->volume() == doctest::Approx(2 * kPi).epsilon(1e-14));
  CHECK(orthonormality_residual(*m) < 1e-12);
  CHECK(m->kind() == ManifoldKind::torus1);
}

TEST_CASE("torus2") {
  const auto m1 = build_torus2(1);
  const std::vector<double> expect{0, 1, 1, 1, 1, std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0), std::sqrt(2.0)};
  REQUIRE(m1->mode_count() == 9);
  for (std::size_t k = 0; k < 9; ++k) CHECK(m1->modes()[k].freq == doctest::Approx(expect[k]));
  for (int N : {3, 6}) {
    const auto m = build_torus2(N);
    CHECK(m->mode_count() == static_cast<std::size_t>((2 * N + 1) * (2 * N + 1)));
    CHECK(orthonormality_residual(*m) < 1e-12);
    CHECK(m->volume() == doctest::Approx(4 * kPi * kPi));
    for (std::size_t k = 1; k < m->mode_count(); ++k) CHECK(m->modes()[k].freq >= m->modes()[k - 1].freq);
  }
}

TEST_CASE("sphere2") {
  const int L = 6;
  const auto m = build_sphere2(L);
  CHECK(m->mode_count() == static_cast<std::size_t>((L + 1) * (L + 1)));
  CHECK(orthonormality_residual(*m) < 1e-10);
  CHECK(m->volume() == doctest::Approx(4 * kPi).epsilon(1e-12));
  std::map<int, int> mult;
  for (const auto& mode : m->modes()) {
    const double l = 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * mode.freq * mode.freq));
    mult[static_cast<int>(std::lround(l))] += 1;
  }
  for (int l = 0; l <= L; ++l) CHECK(mult[l] == 2 * l + 1);
  const auto& B = m->basis();
  for (Eigen::Index i = 0; i < B.rows(); ++i) CHECK(std::abs(B(i, 0) - 1.0 / std::sqrt(4 * kPi)) < 1e-12);
}

TEST_CASE("line grid") {
  const auto m = build_line(20.0, 16);
  CHECK(m->kind() == ManifoldKind::line);
  const double h = 40.0 / 17.0;
  CHECK(m->spacing() == doctest::Approx(h));
  double sum = 0.0;
  for (double w : m->weights()) sum += w;
  CHECK(sum == doctest::Approx(40.0 - h));
  for (std::size_t i = 1; i < m->node_count(); ++i) CHECK(m->nodes()[i][0] > m->nodes()[i - 1][0]);
  CHECK_FALSE(m->has_eigenbasis());
}

TEST_CASE("builders reject bad sizes") {
  CHECK_THROWS(build_torus1(0));
  CHECK_THROWS(build_torus2(0));
  CHECK_THROWS(build_line(-1.0, 10));
}

TEST_CASE("lq norms") {
  const auto m = build_torus1(8);
  const cplx c(1.0, 2.0);
  const auto V = constant_potential(m, c);
  for (double q : {1.0, 1.5, 2.0, 4.0})
    CHECK(V.lq_norm(q) == doctest::Approx(std::abs(c) * std::pow(2 * kPi, 1.0 / q)).epsilon(1e-13));
  const auto W = random_bandlimited(m, 3, 42);
  double mx = 0.0;
  for (const auto& v : W.values()) mx = std::max(mx, std::abs(v));
  CHECK(W.lq_norm(kInf) == mx);
  CHECK(W.lq_norm(1.0) <= W.lq_norm(2.0) * std::sqrt(m->volume()) * (1 + 1e-12));
  CHECK_THROWS(W.lq_norm(0.5));
}

TEST_CASE("potential parts") {
  const auto m = build_torus1(8);
  const auto V = random_bandlimited(m, 3, 9, true);
  REQUIRE(V.is_real());
  const auto pos = V.positive_part(), neg = V.negative_part();
  for (std::size_t i = 0; i < V.size(); ++i) {
    CHECK(pos[i] >= 0.0);
    CHECK(neg[i] >= 0.0);
    CHECK(pos[i] - neg[i] == doctest::Approx(V.values()[i].real()));
  }
}

TEST_CASE("families") {
  const auto m = build_torus2(6);
  const auto V = random_bandlimited(m, 2, 1);
  const auto W = random_bandlimited(m, 2, 1);
  for (std::size_t i = 0; i < V.size(); ++i) CHECK(V.values()[i] == W.values()[i]);
  const auto S = scaled_to_norm(V, 1.5, 3.0);
  CHECK(S.lq_norm(1.5) == doctest::Approx(3.0).epsilon(1e-13));
  const auto N = random_nonvanishing(m, 2, 4);
  for (const auto& v : N.values()) CHECK(std::abs(v) > 0.25);

  const auto line = build_line(20.0, 4000);
  const double a = 0.16, c = 2.0 / (2 * a);
  const auto well = square_well(line, cplx(-c, 0.0), a);
  CHECK(well.lq_norm(1.0) == doctest::Approx(2 * a * c).epsilon(1e-12));
}
