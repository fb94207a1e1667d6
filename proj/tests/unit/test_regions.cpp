#include <doctest.h>

#include <cmath>
#include <random>

#include "specbound/regions.hpp"

using namespace specbound;

namespace {

// Polar description of Xi: z = w^alpha with Im w >= 1 on the principal branch.
bool polar_inside(cplx z, double alpha) {
  const double r = std::abs(z);
  if (r == 0.0) return false;
  const double theta = std::abs(std::arg(z));
  return std::pow(r, 1.0 / alpha) * std::sin(theta / alpha) >= 1.0;
}

bool parabola_inside(cplx z) { return z.real() <= 0.25 * z.imag() * z.imag() - 1.0; }

}  // namespace

TEST_CASE("sigma branches") {
  CHECK(sigma_exponent(2, 1.5, 2.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(sigma_exponent(2, 3.0, 2.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(sigma_exponent(2, 100.0, 2.0) == doctest::Approx(0.0025).epsilon(1e-15));
  for (int d = 2; d <= 6; ++d) {
    const double q = 0.5 * (d + 1);
    const double left = (d - q) / (2.0 * q);
    const double right = (d - 1) / (4.0 * q);
    CHECK(left == right);
    CHECK(sigma_exponent(d, q, d) == right);
  }
}

TEST_CASE("admissibility window") {
  CHECK_THROWS_AS(sigma_exponent(2, 1.2, 1.5), std::domain_error);   // q must exceed d/alpha
  CHECK_THROWS_AS(sigma_exponent(2, 9.0, 1.5), std::domain_error);   // q above 2d/(d-alpha)
  CHECK_NOTHROW(sigma_exponent(2, 1.0, 2.0));
  CHECK_THROWS_AS(sigma_exponent(2, 2.0, 1.2), std::domain_error);   // alpha below 2d/(d+1)
  CHECK_THROWS_AS(sigma_exponent(2, 2.0, 2.5), std::domain_error);   // alpha above d
  CHECK_THROWS_AS(sigma_exponent(1, 2.0, 1.0), std::domain_error);
  CHECK_NOTHROW(sigma_exponent(1, 2.0, 2.0, Window::laplacian));
  CHECK(sigma_exponent(1, 2.0, 2.0, Window::laplacian) == 0.0);
}

TEST_CASE("lebesgue pair") {
  auto a = lebesgue_pair(2.0);
  CHECK(a.p == doctest::Approx(4.0 / 3.0));
  CHECK(a.pprime == doctest::Approx(4.0));
  auto b = lebesgue_pair(3.0);
  CHECK(b.p == doctest::Approx(1.5));
  CHECK(b.pprime == doctest::Approx(3.0));
  for (double q : {1.1, 1.5, 2.5, 7.0}) {
    auto e = Exponents::make(2, q, 2.0);
    CHECK(1.0 / e.p + 1.0 / e.pprime == doctest::Approx(1.0));
    CHECK(1.0 / e.q == doctest::Approx(1.0 / e.p - 1.0 / e.pprime));
    CHECK(e.nu == e.sigma);
  }
  auto near1 = lebesgue_pair(1.0 + 1e-9);
  CHECK(near1.p == doctest::Approx(1.0));
  CHECK(near1.pprime > 1e9);
}

TEST_CASE("z_star and gamma") {
  CHECK(z_star(2.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(z_star(3.0) == doctest::Approx(-1.5396007178390020).epsilon(1e-12));
  for (double alpha : {1.5, 2.0, 3.0, 5.0, 7.0}) {
    const double s = std::sin(kPi / alpha);
    const cplx w(std::cos(kPi / alpha) / s, 1.0);
    CHECK(std::abs(std::pow(w, alpha) + std::pow(s, -alpha)) < 1e-12 * std::pow(s, -alpha));
    const double lmin = XiRegion(alpha).lambda_min();
    CHECK(std::abs(gamma_point(lmin, Branch::upper, alpha) - z_star(alpha)) < 1e-11 * (1 + std::abs(z_star(alpha))));
    for (double lam : {lmin + 0.3, lmin + 2.0, lmin + 40.0})
      CHECK(std::abs(gamma_point(lam, Branch::lower, alpha) - std::conj(gamma_point(lam, Branch::upper, alpha))) <
            1e-12 * std::abs(gamma_point(lam, Branch::upper, alpha)));
  }
  CHECK(std::abs(gamma_point(1.0, Branch::upper, 2.0) - cplx(0, 2)) < 1e-14);
  CHECK(std::abs(gamma_point(2.0, Branch::lower, 2.0) - cplx(3, -4)) < 1e-14);
  CHECK(std::abs(gamma_point(1.0 / std::sqrt(3.0), Branch::upper, 3.0) - z_star(3.0)) < 1e-12);
  CHECK_THROWS_AS(gamma_point(0.0, Branch::upper, 3.0), std::domain_error);
}

TEST_CASE("xi_contains spot values") {
  CHECK(xi_contains({-10.0, 0.0}, 2.0) == XiMembership::inside);
  CHECK(xi_contains({0.5, 2.0}, 2.0) == XiMembership::outside);
  CHECK(xi_contains({-0.5, 2.0}, 2.0) == XiMembership::inside);
  CHECK(xi_contains({0.0, 2.0}, 2.0) == XiMembership::boundary);
  CHECK(xi_contains({-1.0, 0.0}, 2.0) == XiMembership::boundary);
  CHECK(xi_contains({5.0, 0.0}, 3.0) == XiMembership::outside);
}

TEST_CASE("xi_contains matches the parabola on a grid") {
  const XiRegion xi(2.0);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      const cplx z(-5.0 + 10.0 * i / 199.0, -5.0 + 10.0 * j / 199.0);
      const double gap = std::abs(z.real() - (0.25 * z.imag() * z.imag() - 1.0));
      if (gap < 1e-9) continue;
      const bool in = xi.contains(z) != XiMembership::outside;
      mismatches += in != parabola_inside(z);
    }
  CHECK(mismatches == 0);
}

TEST_CASE("xi_contains matches the polar oracle for other alpha") {
  std::mt19937_64 rng(7);
  for (double alpha : {1.5, 3.0, 5.0, 7.0}) {
    const XiRegion xi(alpha);
    const double scale = 3.0 * std::abs(xi.zstar()) + 5.0;
    std::uniform_real_distribution<double> u(-scale, scale);
    int mismatches = 0;
    for (int k = 0; k < 400; ++k) {
      const cplx z(u(rng), u(rng));
      const auto m = xi.contains(z);
      if (m == XiMembership::boundary) continue;
      mismatches += (m == XiMembership::inside) != polar_inside(z, alpha);
    }
    CHECK_MESSAGE(mismatches == 0, "alpha = " << alpha);
  }
}

TEST_CASE("xi is symmetric under conjugation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  const XiRegion xi(5.0);
  for (int k = 0; k < 100; ++k) {
    const cplx z(u(rng), u(rng));
    CHECK(xi.contains(z) == xi.contains(std::conj(z)));
  }
}

TEST_CASE("arc polyline") {
  const XiRegion xi(5.0);
  const auto up = xi.arc_polyline(Branch::upper, 60.0, 50);
  const auto lo = xi.arc_polyline(Branch::lower, 60.0, 50);
  REQUIRE(up.size() == 50);
  CHECK(up.front() == cplx(xi.zstar(), 0.0));
  CHECK(lo.front() == up.front());
  for (std::size_t i = 0; i < up.size(); ++i) CHECK(std::abs(up[i] - std::conj(lo[i])) < 1e-12 * (1 + std::abs(up[i])));
}

TEST_CASE("enclosure region geometry") {
  const auto ex = Exponents::make(2, 1.5, 2.0);
  const std::vector<double> freqs{0.0, 1.0, 1.0, std::sqrt(2.0), 2.0};
  const auto r = EnclosureRegion::make(freqs, 0.5, 2.0, ex);
  REQUIRE(r.freqs.size() == 4);
  for (std::size_t k = 0; k < r.freqs.size(); ++k) {
    CHECK(r.radii[k] == doctest::Approx(0.5 * 2.0 * std::pow(1.0 + r.freqs[k], 2.0 * ex.sigma)));
    CHECK(std::pow(r.centers[k].real(), 1.0 / ex.alpha) == doctest::Approx(r.freqs[k]));
  }
  const auto at_center = enclosure_contains(r.centers[2], r);
  CHECK(at_center.enclosed);
  CHECK(at_center.min_c == 0.0);

  // Central predicate alone, C * ||V|| = 1, z = 1.
  const auto bare = EnclosureRegion::make({}, 1.0, 1.0, ex);
  CHECK(bare.central_value({1.0, 0.0}) == doctest::Approx(std::pow(2.0, -1.0 / 6.0)));
  CHECK(enclosure_contains({1.0, 0.0}, bare).enclosed);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int k = 0; k < 20; ++k) {
    const cplx z(u(rng), u(rng));
    const double direct = std::sqrt(std::abs(z)) * std::pow(1.0 + std::abs(z), -ex.sigma);
    CHECK(bare.central_value(z) == doctest::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("minimal C is a threshold") {
  const auto ex = Exponents::make(2, 2.0, 1.5);
  const std::vector<double> freqs{0.0, 1.0, 2.0, 3.0};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int k = 0; k < 50; ++k) {
    const cplx z(u(rng), u(rng));
    const double c = enclosure_contains(z, EnclosureRegion::make(freqs, 1.0, 0.7, ex)).min_c;
    CHECK(enclosure_contains(z, EnclosureRegion::make(freqs, c * (1 + 1e-9), 0.7, ex)).enclosed);
    CHECK_FALSE(enclosure_contains(z, EnclosureRegion::make(freqs, c * (1 - 1e-6), 0.7, ex)).enclosed);
  }
}
