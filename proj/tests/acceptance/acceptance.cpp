// End-to-end acceptance checks. Prints one PASS or FAIL line per criterion
// and exits nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "specbound/bounds.hpp"
#include "specbound/experiments.hpp"
#include "specbound/families.hpp"
#include "specbound/linalg.hpp"
#include "specbound/operators.hpp"
#include "specbound/randomization.hpp"
#include "specbound/regions.hpp"

using namespace specbound;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "specbound_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double result(const RunOutcome& r, const std::string& key) { return std::stod(r.manifest.results.at(key)); }

Outcome zstar_identity() {
  double worst = 0.0;
  for (double alpha : {1.5, 2.0, 3.0, 5.0, 7.0}) {
    const double s = std::sin(kPi / alpha);
    const cplx w(std::cos(kPi / alpha) / s, 1.0);
    worst = std::max(worst, std::abs(std::pow(w, alpha) + std::pow(s, -alpha)));
    worst = std::max(worst, std::abs(z_star(alpha) + std::pow(s, -alpha)));
  }
  return {worst < 1e-12, "max residual " + num(worst)};
}

Outcome sigma_continuity() {
  int equal = 0;
  for (int d = 2; d <= 6; ++d) {
    const double q = 0.5 * (d + 1);
    const double left = (d - q) / (2.0 * q);
    const double right = (d - 1) / (4.0 * q);
    equal += left == right && sigma_exponent(d, q, d) == left;
  }
  return {equal == 5, std::to_string(equal) + "/5 dimensions agree exactly"};
}

Outcome xi_grid() {
  const XiRegion xi(2.0);
  int mismatches = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      const cplx z(-5.0 + 10.0 * i / 199.0, -5.0 + 10.0 * j / 199.0);
      const double edge = 0.25 * z.imag() * z.imag() - 1.0;
      if (std::abs(z.real() - edge) < 1e-9) continue;
      const bool in = xi.contains(z) != XiMembership::outside;
      mismatches += in != (z.real() <= edge);
    }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {mismatches == 0 && secs < 1.0, std::to_string(mismatches) + " mismatches in " + num(secs) + " s"};
}

Outcome shift_exactness() {
  const auto t1 = build_torus1(16);
  const cplx c(1.0, 2.0);
  const auto V = constant_potential(t1, c);
  const auto H = assemble_schrodinger(t1, V, 2.0);
  const auto spec = spectrum(H);
  double worst = 0.0;
  std::vector<double> expect;
  for (int k = -8; k <= 8; ++k) expect.push_back(k * k);
  std::sort(expect.begin(), expect.end());
  for (std::size_t i = 0; i < spec.size(); ++i) worst = std::max(worst, std::abs(spec[i] - (expect[i] + c)));
  const auto chk = manifold_enclosure_check(spec, *t1, V, 2.0, 2.0, 1.0, Window::laplacian);
  const double cerr = std::abs(chk.min_c - std::pow(2 * kPi, -0.5));
  return {spec.size() == expect.size() && worst < 1e-10 && cerr < 1e-8,
          "eigenvalue error " + num(worst) + ", C error " + num(cerr)};
}

Outcome birman_schwinger() {
  const auto t1 = build_torus1(16);
  double worst = 0.0;
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto V = random_nonvanishing(t1, 3, seed);
    for (const auto& z : spectrum(assemble_schrodinger(t1, V, 2.0))) {
      if (free_distance(*t1, 2.0, z) <= 1e-6) continue;
      const auto ev = eig(assemble_birman_schwinger(t1, V, z, 2.0).matrix).values;
      double best = kInf;
      for (Eigen::Index i = 0; i < ev.size(); ++i) best = std::min(best, std::abs(ev[i] + 1.0));
      worst = std::max(worst, best);
      ++checked;
    }
  }
  return {checked > 0 && worst < 1e-6, std::to_string(checked) + " eigenvalues, worst " + num(worst)};
}

ExperimentConfig line_config() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::line_bounds;
  cfg.name = "acceptance_line";
  cfg.model.kind = ManifoldKind::line;
  cfg.model.halfwidth = 20.0;
  cfg.model.size = 8000;
  cfg.line.widths = {0.32, 0.16, 0.08, 0.04};
  cfg.line.kappa = 2.0;
  cfg.line.random_wells = 50;
  cfg.potential.family = "multi_well";
  cfg.potential.wells = 3;
  return cfg;
}

struct LineRun {
  RunOutcome outcome;
  std::vector<double> keller;
};

LineRun line_run() {
  static LineRun cached = [] {
    LineRun lr;
    lr.outcome = run(line_config(), RunOptions{scratch("line").string()});
    std::istringstream in(slurp(fs::path(lr.outcome.out_dir) / "line_bounds.csv"));
    std::string row;
    std::getline(in, row);
    while (std::getline(in, row))
      if (row.rfind("keller,", 0) == 0) {
        std::vector<std::string> cells;
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ',')) cells.push_back(cell);
        lr.keller.push_back(std::stod(cells[3]));
      }
    return lr;
  }();
  return cached;
}

Outcome aad_family() {
  const auto lr = line_run();
  const double final_ratio = result(lr.outcome, "aad_final");
  const bool increasing = lr.outcome.manifest.results.at("aad_increasing") == "true";
  return {increasing && final_ratio >= 0.95 && final_ratio <= 1.01,
          "final ratio " + num(final_ratio) + (increasing ? ", increasing" : ", not increasing")};
}

Outcome keller_limit() {
  const auto lr = line_run();
  const double raw = result(lr.outcome, "keller_final");
  const double extrap = result(lr.outcome, "keller_extrapolated");
  bool monotone = lr.keller.size() >= 2;
  for (std::size_t i = 1; i < lr.keller.size(); ++i) monotone = monotone && lr.keller[i] > lr.keller[i - 1];
  const bool close = std::abs(extrap - 0.25) <= 0.05 * 0.25;
  return {monotone && close, "final " + num(raw) + ", extrapolated limit " + num(extrap)};
}

Outcome lieb_thirring() {
  const double worst = result(line_run().outcome, "lieb_thirring_max");
  return {worst <= 0.5 * 1.05, "max ratio " + num(worst)};
}

Outcome enclosure_stability() {
  std::string detail;
  bool ok = true;
  for (const auto& [alpha, q] : {std::pair{1.5, 3.0}, std::pair{2.0, 6.0}}) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::enclosure;
    cfg.name = "acceptance_enclosure";
    cfg.model.kind = ManifoldKind::torus2;
    cfg.model.size = 12;
    cfg.potential.family = "bandlimited";
    cfg.potential.bandwidth = 3;
    cfg.exponents.q = q;
    cfg.exponents.alpha = alpha;
    cfg.enclosure.samples = 50;
    cfg.enclosure.scales = {0.1, 1.0, 10.0};
    cfg.enclosure.ladder = {16};
    cfg.enclosure.ladder_scales = {1.0};
    cfg.enclosure.holdout = 20;
    cfg.enclosure.holdout_factor = 1.05;
    const auto out = run(cfg, RunOptions{scratch("enclosure_" + num(alpha)).string()});
    const double scale_spread = result(out, "scale_spread");
    const double refine_spread = result(out, "refinement_spread");
    const double held = result(out, "holdout_enclosed"), total = result(out, "holdout_total");
    const bool pass = out.exit_code == kExitPass && scale_spread < 0.2 && refine_spread < 0.2 && held == total;
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += "alpha " + num(alpha) + ", q " + num(q) + ": C_emp " + num(result(out, "C_emp")) + ", scale spread " + num(scale_spread) +
              ", N spread " + num(refine_spread) + ", holdout " + num(held) + "/" + num(total);
  }
  return {ok, detail};
}

ExperimentConfig resolvent_config(const std::string& display) {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::resolvent_scaling;
  cfg.name = "acceptance_resolvent";
  cfg.model.kind = ManifoldKind::torus2;
  cfg.exponents.d = 2;
  cfg.exponents.q = 1.5;
  cfg.exponents.alpha = 2.0;
  cfg.resolvent.display = display;
  cfg.resolvent.grid = 128;
  cfg.resolvent.grid_cutoff = 63.0;
  cfg.resolvent.points = 12;
  return cfg;
}

Outcome resolvent_inside() {
  const auto out = run(resolvent_config("inside"), RunOptions{scratch("resolvent").string()});
  const double slope = result(out, "slope"), calib = result(out, "calibration_slope");
  const bool ok = std::abs(slope + 1.0 / 3.0) <= 0.15 && std::abs(calib + 1.0) <= 0.01;
  return {ok, "slope " + num(slope) + ", 2->2 slope " + num(calib)};
}

Outcome resolvent_approach() {
  auto cfg = resolvent_config("approach");
  cfg.resolvent.calibrate = false;
  const auto out = run(cfg, RunOptions{scratch("approach").string()});
  const double slope = result(out, "slope");
  return {std::abs(slope - 1.0) <= 0.1, "slope " + num(slope)};
}

Outcome anderson_sampler() {
  const auto t2 = build_torus2(8);
  const auto V = random_bandlimited(t2, 2, 3);
  const auto W = anderson_sample(V, {2 * kPi / 6, Law::bernoulli, 17});
  bool moduli = true;
  for (std::size_t i = 0; i < V.size(); ++i) moduli = moduli && std::abs(W.values()[i]) == std::abs(V.values()[i]);

  const auto line = build_line(5000.0, 40000);
  const auto C = constant_potential(line, cplx(1.0, 0.0));
  const AndersonConfig gcfg{1.0, Law::gaussian, 5};
  const auto G = anderson_sample(C, gcfg);
  const auto lay = cell_layout(*line, 1.0);
  std::vector<double> cell(lay.count, std::nan(""));
  bool constant_in_cell = true;
  for (std::size_t m = 0; m < G.size(); ++m) {
    double& slot = cell[lay.cell_of_node[m]];
    if (std::isnan(slot)) slot = G.values()[m].real();
    else constant_in_cell = constant_in_cell && slot == G.values()[m].real();
  }
  double mean = 0.0;
  std::size_t seen = 0;
  for (double x : cell)
    if (!std::isnan(x)) {
      mean += x;
      ++seen;
    }
  mean /= static_cast<double>(seen);
  const double z = mean * std::sqrt(static_cast<double>(seen));

  const auto again = anderson_sample(C, gcfg);
  const bool same = again.values().size() == G.values().size() &&
                    std::equal(again.values().begin(), again.values().end(), G.values().begin());
  const bool ok = moduli && constant_in_cell && seen >= 10000 && std::abs(z) < 4.0 && same;
  return {ok, std::string(moduli ? "moduli kept" : "moduli changed") + ", " + std::to_string(seen) +
                  " cells, mean z-score " + num(z) + (same ? ", reproducible" : ", not reproducible")};
}

Outcome random_bound() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::random_mc;
  cfg.name = "acceptance_random";
  cfg.model.kind = ManifoldKind::torus1;
  cfg.model.size = 16;
  cfg.potential.family = "bandlimited";
  cfg.potential.bandwidth = 2;
  cfg.exponents.q = 2.0;
  cfg.exponents.alpha = 2.0;
  cfg.random.samples = 500;
  cfg.random.h_fractions = {0.25, 0.125, 0.0625};
  const auto out = run(cfg, RunOptions{scratch("random").string()});
  const auto& r = out.manifest.results;
  const bool q_ok = r.at("quantile_nonincreasing") == "true";
  const bool v_ok = r.at("violation_decreasing") == "true";
  std::string quantiles;
  std::istringstream in(slurp(fs::path(out.out_dir) / "random_summary.csv"));
  std::string row;
  std::getline(in, row);
  while (std::getline(in, row)) {
    std::stringstream rs(row);
    std::string h, q;
    std::getline(rs, h, ',');
    std::getline(rs, q, ',');
    quantiles += (quantiles.empty() ? "" : " ") + num(std::stod(q));
  }
  return {q_ok && v_ok, "95% quantiles " + quantiles + (q_ok ? " nonincreasing" : " not nonincreasing") +
                            (v_ok ? ", violations decreasing" : ", violations not decreasing")};
}

Outcome figure() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::region_plot;
  cfg.name = "region_alpha5";
  cfg.exponents.alpha = 5.0;
  const auto out = run(cfg, RunOptions{scratch("figure").string()});
  const std::string svg = slurp(fs::path(out.out_dir) / "region.svg");
  const std::string golden = slurp(fs::path(SPECBOUND_GOLDEN_DIR) / "region_alpha5.svg");
  const bool meet = out.manifest.results.at("arcs_meet_at_zstar") == "true";
  const bool conj = out.manifest.results.at("arcs_conjugate") == "true";
  const double zs = result(out, "zstar");
  const bool ok = !golden.empty() && svg == golden && meet && conj && zs < 0.0;
  return {ok, std::string(svg == golden ? "golden match" : "golden mismatch") + ", z_star " + num(zs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"zstar_identity", zstar_identity},
      {"sigma_continuity", sigma_continuity},
      {"xi_parabola_grid", xi_grid},
      {"constant_shift_exactness", shift_exactness},
      {"birman_schwinger_equivalence", birman_schwinger},
      {"aad_square_wells", aad_family},
      {"keller_delta_limit", keller_limit},
      {"lieb_thirring_half", lieb_thirring},
      {"enclosure_stability", enclosure_stability},
      {"resolvent_inside_ray", resolvent_inside},
      {"resolvent_approach", resolvent_approach},
      {"anderson_sampler", anderson_sampler},
      {"random_bound_exploration", random_bound},
      {"region_figure", figure},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
