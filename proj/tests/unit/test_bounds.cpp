#include <doctest.h>

#include <cmath>

#include "specbound/bounds.hpp"
#include "specbound/families.hpp"
#include "specbound/operators.hpp"

using namespace specbound;

namespace {

// Even ground state of a square well of half-width a and depth c:
// k tan(k a) = kappa with k^2 = c + E and kappa^2 = -E.
double square_well_ground_state(double a, double c) {
  double lo = -c * (1 - 1e-15), hi = -1e-300;
  auto f = [&](double E) { return std::sqrt(c + E) * std::tan(std::sqrt(c + E) * a) - std::sqrt(-E); };
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::abs(lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) > 0) == (f(hi) > 0) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> negatives(const std::vector<cplx>& spec) {
  std::vector<double> out;
  for (const auto& z : spec)
    if (z.real() < 0.0) out.push_back(z.real());
  return out;
}

}  // namespace

TEST_CASE("keller delta limit via the transcendental oracle") {
  const auto line = build_line(20.0, 4000);
  double prev = 0.0;
  for (double a : {0.1, 0.01, 0.001}) {
    const double c = 1.0 / a;  // kappa = 2ac = 2
    const double E = square_well_ground_state(a, c);
    const auto r = keller_check(E, square_well(line, cplx(-c, 0.0), 0.32), 1.0);
    CHECK(r.rhs_factor == doctest::Approx(std::pow(2 * 0.32 / a, 2)).epsilon(1e-10));
    const double ratio = std::abs(E) / 4.0;
    CHECK(ratio > prev);
    prev = ratio;
  }
  CHECK(prev == doctest::Approx(0.25).epsilon(0.01));
  CHECK(square_well_ground_state(1e-4, 1e4) == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("keller inapplicable and scale invariant") {
  const auto line = build_line(10.0, 2000);
  const auto pos = square_well(line, cplx(2.0, 0.0), 0.5);
  CHECK(keller_check(0.1, pos, 1.0).verdict == Verdict::inapplicable);

  std::vector<double> ratios;
  for (double s : {1.0, 2.0, 4.0}) {
    const auto fine = build_line(10.0 / s, 2000);
    const auto V = square_well(fine, cplx(-1.0 * s * s, 0.0), 0.5 / s);
    const auto spec = line_spectrum(fine, V);
    ratios.push_back(keller_check(spec.front().real(), V, 1.0).ratio);
  }
  CHECK(std::abs(std::log(ratios.back() / ratios.front()) / std::log(4.0)) < 0.05);
}

TEST_CASE("aad") {
  const auto line = build_line(20.0, 4000);
  CHECK(aad_check(line_spectrum(line, zero_potential(line)), zero_potential(line)).verdict == Verdict::inapplicable);
  const double a = 0.16, c = 2.0 / (2 * a);
  const auto V = square_well(line, cplx(-c, 0.0), a);
  const auto r = aad_check(line_spectrum(line, V), V, 0.05);
  CHECK(r.rhs_factor == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(std::sqrt(-square_well_ground_state(a, c))).epsilon(5e-3));
  CHECK(r.verdict == Verdict::pass);

  const auto small = build_line(15.0, 1500);
  const auto W = square_well(small, cplx(-1.0, -1.0), 0.5);
  const auto rc = aad_check(line_bound_states(small, W), W, 0.05);
  CHECK(rc.ratio <= 1.05);
  CHECK(rc.verdict == Verdict::pass);
}

TEST_CASE("lieb-thirring") {
  const auto line = build_line(20.0, 2000);
  const auto V = square_well(line, cplx(-1.0, 0.0), 1.0);
  const std::vector<double> eigs{-4.0, -1.0};
  const auto r = lieb_thirring_check(eigs, V, 0.5, 1);
  CHECK(r.lhs == doctest::Approx(3.0));
  CHECK(r.rhs_factor == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS(lieb_thirring_check(eigs, V, 0.25, 1));

  // Two well-separated wells: the sum over bound states doubles.
  const auto one = square_well(line, cplx(-2.0, 0.0), 0.5, -6.0);
  std::vector<cplx> both(one.values().begin(), one.values().end());
  const auto other = square_well(line, cplx(-2.0, 0.0), 0.5, 6.0);
  for (std::size_t i = 0; i < both.size(); ++i) both[i] += other.values()[i];
  const PotentialField two(line, both);
  const double l1 = lieb_thirring_check(negatives(line_spectrum(line, one)), one, 0.5, 1).lhs;
  const double l2 = lieb_thirring_check(negatives(line_spectrum(line, two)), two, 0.5, 1).lhs;
  CHECK(std::abs(l2 - 2 * l1) < 1e-3);
}

TEST_CASE("frank and cex functionals") {
  const auto r = frank_check(cplx(0, 4), 2.0, 1.5, 2);
  CHECK(r.lhs == doctest::Approx(2.0));
  CHECK(r.rhs_factor == doctest::Approx(std::pow(2.0, 1.5)));
  CHECK(r.ratio == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(frank_check(0.0, 2.0, 1.5, 2).lhs == 0.0);
  CHECK_THROWS(frank_check(1.0, 2.0, 3.0, 2));

  // (z, V) -> (s^2 z, s^2 V(s .)) with ||s^2 V(s .)||_q^q = s^{2q-d} ||V||_q^q.
  const double q = 1.3, d = 2;
  for (double s : {0.5, 3.0}) {
    const cplx z(2.0, 1.0);
    const double vq = 1.7;
    const double scaled = std::pow(std::pow(s, 2 * q - d) * std::pow(vq, q), 1.0 / q);
    CHECK(frank_check(s * s * z, scaled, q, 2).ratio == doctest::Approx(frank_check(z, vq, q, 2).ratio));
  }

  CHECK(dist_to_positive_axis(cplx(1, 1)) == 1.0);
  CHECK(dist_to_positive_axis(cplx(-1, 0)) == 1.0);
  CHECK(cex_ratio(cplx(1, 0.01), std::sqrt(0.001), 2.0, 2) == doctest::Approx(1000.05).epsilon(1e-5));
  CHECK(cex_distance_ratio(cplx(-4, 0), 1.0, 1.5, 2) == doctest::Approx(2.0));
}

TEST_CASE("random bound") {
  CHECK(japanese_bracket(1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(random_bound_lhs(10.0, 0.1, 1.0, 2.0, 1) == doctest::Approx(1.425).epsilon(1e-3));
  // Near zero the log factor vanishes like (lambda R)^2 / 2, so the ratio grows like lambda^{2 - d/q - 7}.
  const double tiny = random_bound_lhs(1e-3, 0.1, 1.0, 2.0, 1);
  CHECK(tiny == doctest::Approx(std::pow(1e-3, 1.5) / std::pow(0.5e-6, 3.5)).epsilon(1e-3));
  double prev = 0.0;
  for (double lam = 20.0; lam <= 2000.0; lam += 5.0) {
    const double v = random_bound_lhs(lam, 0.05, 1.0, 2.0, 1);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("manifold enclosure check") {
  const auto t1 = build_torus1(16);
  const cplx c(1.0, 2.0);
  const auto V = constant_potential(t1, c);
  const auto spec = spectrum(assemble_schrodinger(t1, V, 2.0));
  const auto chk = manifold_enclosure_check(spec, *t1, V, 2.0, 2.0, 1.0, Window::laplacian);
  CHECK(chk.min_c == doctest::Approx(std::pow(2 * kPi, -0.5)).epsilon(1e-8));
  CHECK(chk.all_enclosed);

  const auto Z = zero_potential(t1);
  const auto zchk = manifold_enclosure_check(spectrum(assemble_schrodinger(t1, Z, 2.0)), *t1, Z, 2.0, 2.0, 1.0,
                                             Window::laplacian);
  CHECK(zchk.min_c == 0.0);

  const auto t2 = build_torus2(8);
  const auto W = scaled_to_norm(random_bandlimited(t2, 2, 4), 1.5, 1.0);
  const auto wspec = spectrum(assemble_schrodinger(t2, W, 2.0));
  const auto fit = manifold_enclosure_check(wspec, *t2, W, 1.5, 2.0, 1.0);
  const auto at = manifold_enclosure_check(wspec, *t2, W, 1.5, 2.0, fit.min_c * (1 + 1e-12));
  CHECK(at.all_enclosed);
}

TEST_CASE("fit bookkeeping") {
  FitResult f;
  for (double c : {0.2, 0.5, 0.3}) f.add_sample(c);
  CHECK(f.C_emp == 0.5);
  CHECK(FitResult::spread({{1, 1.0}, {2, 1.1}}) == doctest::Approx(0.1));
  const auto x = logspace(10.0, 1000.0, 3);
  CHECK(x[1] == doctest::Approx(100.0));
  const std::vector<double> xs{1, 2, 4, 8}, ys{3, 12, 48, 192};
  const auto s = log_log_fit(xs, ys);
  CHECK(s.slope == doctest::Approx(2.0));
  CHECK(std::exp(s.intercept) == doctest::Approx(3.0));
}
