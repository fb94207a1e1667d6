#include <doctest.h>

#include <cmath>
#include <random>

#include "specbound/linalg.hpp"

using namespace specbound;

namespace {

Eigen::MatrixXcd random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = cplx(g(rng), g(rng));
  return A;
}

// Brute-force 1 -> inf norm over a fine sweep of the unit sphere in R^2 (real case).
double brute_p_pprime(const Eigen::Matrix2d& A, double p, double pp) {
  double best = 0.0;
  for (int k = 0; k < 200000; ++k) {
    const double t = 2 * kPi * k / 200000.0;
    Eigen::Vector2d x(std::cos(t), std::sin(t));
    const double nx = std::pow(std::pow(std::abs(x[0]), p) + std::pow(std::abs(x[1]), p), 1.0 / p);
    const Eigen::Vector2d y = A * x;
    const double ny = std::isinf(pp) ? y.cwiseAbs().maxCoeff()
                                     : std::pow(std::pow(std::abs(y[0]), pp) + std::pow(std::abs(y[1]), pp), 1.0 / pp);
    best = std::max(best, ny / nx);
  }
  return best;
}

}  // namespace

TEST_CASE("eig small cases") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
  D(0, 0) = 1.0;
  D(1, 1) = cplx(0, 2);
  D(2, 2) = -3.0;
  const auto r = eig(D);
  REQUIRE(r.values.size() == 3);
  CHECK(std::abs(r.values[0] - cplx(-3, 0)) < 1e-14);
  CHECK(std::abs(r.values[1] - cplx(0, 2)) < 1e-14);
  CHECK(std::abs(r.values[2] - cplx(1, 0)) < 1e-14);

  Eigen::MatrixXcd C(2, 2);
  C << 0.0, 1.0, 1.0, 0.0;
  const auto c = eig(C);
  CHECK(std::abs(c.values[0] + 1.0) < 1e-14);
  CHECK(std::abs(c.values[1] - 1.0) < 1e-14);
}

TEST_CASE("eig residual contract") {
  const auto A = random_matrix(50, 1);
  const auto r = eig(A, true);
  CHECK(eig_residual(A, r) < 1e-10);
  cplx trace = 0.0;
  for (Eigen::Index i = 0; i < r.values.size(); ++i) trace += r.values[i];
  CHECK(std::abs(trace - A.trace()) < 1e-9 * A.norm());
}

TEST_CASE("hermitian and tridiagonal") {
  const auto A = random_matrix(20, 2);
  const Eigen::MatrixXcd H = A + A.adjoint();
  const auto h = eigh(H, true);
  for (Eigen::Index i = 1; i < h.values.size(); ++i) CHECK(h.values[i] >= h.values[i - 1]);
  CHECK((H * h.vectors - h.vectors * h.values.asDiagonal()).norm() < 1e-10 * H.norm());

  const int n = 30;
  std::vector<double> diag(n, 2.0), off(n - 1, -1.0);
  const auto ev = tridiagonal_eigenvalues(diag, off);
  for (int j = 1; j <= n; ++j) CHECK(ev[j - 1] == doctest::Approx(2.0 - 2.0 * std::cos(j * kPi / (n + 1))).epsilon(1e-12));
}

TEST_CASE("schatten norms") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
  D(0, 0) = 3.0;
  D(1, 1) = 4.0;
  CHECK(schatten_norm(D, 1.0).value == doctest::Approx(7.0));
  CHECK(schatten_norm(D, 2.0).value == doctest::Approx(5.0));
  CHECK(schatten_norm(D, kInf).value == doctest::Approx(4.0));
  CHECK_THROWS_AS(schatten_norm(D, 0.5), std::domain_error);

  const auto A = random_matrix(8, 3);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  const Eigen::MatrixXcd Q = qr.householderQ();
  for (double p : {1.0, 2.0, 3.0}) CHECK(schatten_norm(Q, p).value == doctest::Approx(std::pow(8.0, 1.0 / p)));

  for (std::uint64_t s = 10; s < 15; ++s) {
    const auto B = random_matrix(10, s);
    double prev = kInf;
    for (double p : {1.0, 1.5, 2.0, 4.0, kInf}) {
      const double v = schatten_norm(B, p).value;
      CHECK(v <= prev * (1 + 1e-12));
      prev = v;
    }
  }
}

TEST_CASE("opnorm exact cases") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 2.0;
  const auto r = opnorm_p_pprime(D, 2.0, 2.0);
  CHECK(r.value == doctest::Approx(singular_values(D)[0]).epsilon(1e-8));

  Eigen::MatrixXcd A(2, 2);
  A << 1.0, 3.0, 2.0, 1.0;
  const auto e = opnorm_p_pprime(A, 1.0, kInf);
  CHECK(e.value == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(e.exact);
}

TEST_CASE("opnorm against brute force") {
  Eigen::Matrix2d A;
  A << 1.0, -0.5, 2.0, 0.7;
  const Eigen::MatrixXcd Ac = A.cast<cplx>();
  for (auto [p, pp] : {std::pair{4.0 / 3.0, 4.0}, std::pair{1.5, 3.0}, std::pair{2.0, 2.0}, std::pair{1.2, 6.0}}) {
    const double est = opnorm_p_pprime(Ac, p, pp).value;
    const double brute = brute_p_pprime(A, p, pp);
    // Complex inputs can only do at least as well as real ones.
    CHECK(est >= brute * (1 - 1e-6));
    CHECK(est <= brute * (1 + 0.05));
  }
}

TEST_CASE("opnorm trace is monotone and weighted norms scale") {
  const auto A = random_matrix(40, 5);
  std::vector<double> w(40);
  for (int i = 0; i < 40; ++i) w[i] = 0.5 + 0.01 * i;
  const auto r = opnorm_p_pprime(A, 1.5, 3.0, w);
  REQUIRE(!r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1]);
  CHECK(r.value == r.trace.back());
  CHECK(r.start_values.size() == 10);

  std::vector<cplx> x(40, cplx(1.0, 0.0));
  double sw = 0.0;
  for (double v : w) sw += v;
  CHECK(weighted_norm(x, 2.0, w) == doctest::Approx(std::sqrt(sw)));
  CHECK(weighted_norm(x, kInf, w) == 1.0);
  CHECK_THROWS(opnorm_p_pprime(A, 3.0, 1.5));
}

TEST_CASE("dense map applies A and its adjoint") {
  const auto A = random_matrix(6, 8);
  const auto m = dense_map(A);
  std::vector<cplx> x(6), y(6), z(6);
  for (int i = 0; i < 6; ++i) x[i] = cplx(i, 1 - i);
  m.apply(x, y);
  m.apply_adjoint(x, z);
  const Eigen::Map<const Eigen::VectorXcd> xv(x.data(), 6);
  CHECK((Eigen::Map<Eigen::VectorXcd>(y.data(), 6) - A * xv).norm() < 1e-12);
  CHECK((Eigen::Map<Eigen::VectorXcd>(z.data(), 6) - A.adjoint() * xv).norm() < 1e-12);
}
