#include "specbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "specbound/operators.hpp"
#include "specbound/parallel.hpp"

namespace specbound {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inapplicable: return "inapplicable";
  }
  return "unknown";
}

Verdict BoundReport::judge(double C) const {
  if (verdict == Verdict::inapplicable && std::isnan(ratio)) return Verdict::inapplicable;
  if (std::isnan(C)) return Verdict::inapplicable;
  return lhs <= C * rhs_factor ? Verdict::pass : Verdict::fail;
}

namespace {

void finish(BoundReport& r, double C) {
  if (r.rhs_factor > 0.0) r.ratio = r.lhs / r.rhs_factor;
  else r.ratio = r.lhs > 0.0 ? kInf : std::nan("");
  r.verdict = std::isnan(C) ? Verdict::inapplicable : (r.lhs <= C * r.rhs_factor ? Verdict::pass : Verdict::fail);
  if (!std::isnan(C)) r.params["C"] = C;
}

void require_real(const PotentialField& V, const char* who) {
  if (!V.is_real()) throw std::invalid_argument(std::string(who) + ": real potential required");
}

}  // namespace

BoundReport keller_check(double lowest_eig, const PotentialField& V, double p, double C) {
  if (!(p >= 1.0)) throw std::domain_error("keller_check: p must be >= 1");
  require_real(V, "keller_check");
  BoundReport r;
  r.name = "keller";
  r.params["p"] = p;
  r.params["lambda_1"] = lowest_eig;
  if (!(lowest_eig < 0.0)) {
    r.note = "no negative eigenvalue";
    return r;
  }
  const auto neg = V.negative_part();
  std::vector<cplx> vneg(neg.begin(), neg.end());
  const PotentialField Vm(V.model(), std::move(vneg));
  r.lhs = std::abs(lowest_eig);
  r.rhs_factor = std::pow(Vm.lq_norm(p), 2.0 * p / (2.0 * p - 1.0));
  finish(r, C);
  return r;
}

BoundReport aad_check(std::span<const cplx> spectrum, const PotentialField& V, double slack, double imag_tol) {
  BoundReport r;
  r.name = "aad";
  r.params["slack"] = slack;
  std::size_t selected = 0;
  for (const auto& z : spectrum) {
    if (std::abs(z.imag()) > imag_tol || z.real() <= 0.0) {
      r.lhs = std::max(r.lhs, std::sqrt(std::abs(z)));
      ++selected;
    }
  }
  r.params["selected"] = static_cast<double>(selected);
  r.rhs_factor = 0.5 * V.lq_norm(1.0);
  if (selected == 0) {
    r.note = "no eigenvalue off the positive half-line";
    return r;
  }
  finish(r, 1.0 + slack);
  return r;
}

BoundReport lieb_thirring_check(std::span<const double> negative_eigs, const PotentialField& V, double gamma, int d,
                                double C) {
  if (d < 1) throw std::domain_error("lieb_thirring_check: d must be >= 1");
  if (d == 1 && !(gamma >= 0.5)) throw std::domain_error("lieb_thirring_check: need gamma >= 1/2 when d = 1");
  if (d == 2 && !(gamma > 0.0)) throw std::domain_error("lieb_thirring_check: need gamma > 0 when d = 2");
  if (d >= 3 && !(gamma >= 0.0)) throw std::domain_error("lieb_thirring_check: need gamma >= 0 when d >= 3");
  require_real(V, "lieb_thirring_check");
  BoundReport r;
  r.name = "lieb_thirring";
  r.params["gamma"] = gamma;
  r.params["d"] = d;
  for (double e : negative_eigs) {
    if (e >= 0.0) throw std::invalid_argument("lieb_thirring_check: eigenvalues must be negative");
    r.lhs += gamma == 0.0 ? 1.0 : std::pow(-e, gamma);
  }
  r.params["count"] = static_cast<double>(negative_eigs.size());
  const auto neg = V.negative_part();
  std::vector<double> g(neg.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::pow(neg[i], gamma + 0.5 * d);
  r.rhs_factor = V.integrate(g);
  if (negative_eigs.empty() && r.rhs_factor == 0.0) {
    r.note = "no negative eigenvalue";
    return r;
  }
  finish(r, C);
  return r;
}

BoundReport frank_check(cplx z, double vnorm_q, double q, int d, double C, bool allow_out_of_range) {
  if (d < 2) throw std::domain_error("frank_check: d must be >= 2");
  const bool in_range = q > 0.5 * d && q <= 0.5 * (d + 1);
  if (!in_range && !allow_out_of_range) throw std::domain_error("frank_check: need d/2 < q <= (d+1)/2");
  BoundReport r;
  r.name = "frank";
  r.params["q"] = q;
  r.params["d"] = d;
  r.params["in_range"] = in_range ? 1.0 : 0.0;
  r.lhs = std::abs(z) == 0.0 ? 0.0 : std::pow(std::abs(z), q - 0.5 * d);
  r.rhs_factor = std::pow(vnorm_q, q);
  finish(r, C);
  return r;
}

BoundReport frank_check(cplx z, const PotentialField& V, double q, int d, double C, bool allow_out_of_range) {
  return frank_check(z, V.lq_norm(q), q, d, C, allow_out_of_range);
}

double dist_to_positive_axis(cplx z) { return z.real() >= 0.0 ? std::abs(z.imag()) : std::abs(z); }

double cex_ratio(cplx z, double vnorm_q, double q, int d) {
  if (d < 2) throw std::domain_error("cex_ratio: d must be >= 2");
  const double num = std::abs(z) == 0.0 ? 0.0 : std::pow(std::abs(z), q - 0.5 * d);
  const double den = std::pow(vnorm_q, q);
  return den == 0.0 ? (num == 0.0 ? std::nan("") : kInf) : num / den;
}

double cex_ratio(cplx z, const PotentialField& V, double q, int d) { return cex_ratio(z, V.lq_norm(q), q, d); }

double cex_distance_ratio(cplx z, double vnorm_q, double q, int d) {
  if (d < 2) throw std::domain_error("cex_distance_ratio: d must be >= 2");
  const double dist = dist_to_positive_axis(z);
  const double e = q - 0.5 * (d + 1);
  double num;
  if (dist == 0.0) num = e < 0.0 ? kInf : (e == 0.0 ? 1.0 : 0.0);
  else num = std::pow(dist, e);
  num *= std::sqrt(std::abs(z));
  const double den = std::pow(vnorm_q, q);
  return den == 0.0 ? kInf : num / den;
}

double cex_distance_ratio(cplx z, const PotentialField& V, double q, int d) {
  return cex_distance_ratio(z, V.lq_norm(q), q, d);
}

void FitResult::add_sample(double c) {
  per_sample.push_back(c);
  C_emp = std::max(C_emp, c);
}

double FitResult::spread(const std::vector<std::pair<double, double>>& trace) {
  if (trace.empty()) return 0.0;
  double lo = kInf, hi = 0.0;
  for (const auto& [x, c] : trace) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return lo > 0.0 ? (hi - lo) / lo : (hi > 0.0 ? kInf : 0.0);
}

EnclosureCheck manifold_enclosure_check(std::span<const cplx> spectrum, const SpectralModel& model,
                                        const PotentialField& V, double q, double alpha, double C, Window window,
                                        double cutoff) {
  const Exponents ex = Exponents::make(model.dim(), q, alpha, window);
  std::vector<double> freqs;
  for (std::size_t j : select_modes(model, cutoff)) freqs.push_back(model.modes()[j].freq);
  EnclosureCheck out;
  out.region = EnclosureRegion::make(freqs, C, V.lq_norm(q), ex);
  out.eigenvalues.assign(spectrum.begin(), spectrum.end());
  for (const auto& z : spectrum) {
    out.members.push_back(enclosure_contains(z, out.region));
    out.min_c = std::max(out.min_c, out.members.back().min_c);
    out.all_enclosed = out.all_enclosed && out.members.back().enclosed;
  }
  return out;
}

double japanese_bracket(double x) { return std::sqrt(1.0 + x * x); }

double random_bound_lhs(double lambda, double h, double R, double q, int d) {
  if (!(lambda > 0.0) || !(h > 0.0) || !(R > 0.0)) throw std::domain_error("random_bound_lhs: need lambda, h, R > 0");
  if (!(h < R)) throw std::domain_error("random_bound_lhs: need h < R");
  if (!(q >= 1.0) || d < 1) throw std::domain_error("random_bound_lhs: need q >= 1 and d >= 1");
  const double num = std::pow(lambda, 2.0 - d / q);
  const double den = std::pow(japanese_bracket(lambda * h), 0.5 * d) * std::pow(std::log(japanese_bracket(lambda * R)), 3.5);
  return num / den;
}

SlopeFit log_log_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("log_log_fit: need two or more paired points");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("log_log_fit: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::domain_error("log_log_fit: abscissae coincide");
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (f.intercept + f.slope * lx[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  f.points = n;
  return f;
}

double resolvent_exponent_target(int d, double q, double alpha, Window window) {
  return (2.0 * sigma_exponent(d, q, alpha, window) + 1.0) / alpha - 1.0;
}

namespace {

void estimate_norms(const TorusGrid& grid, double alpha, double p, double pprime, RayFit& out,
                    const OpNormOptions& options, int threads) {
  const std::size_t n = out.z.size();
  out.norms.assign(n, 0.0);
  out.distances.assign(n, 0.0);
  out.details.assign(n, OpNormResult{});
  const auto w = grid.weights();
  parallel_for(n, threads, [&](std::size_t i) {
    const LinearMap R = torus_resolvent_map(grid, alpha, out.z[i]);
    out.details[i] = opnorm_p_pprime(R, p, pprime, w, options);
    out.norms[i] = out.details[i].value;
    out.distances[i] = torus_free_distance(grid, alpha, out.z[i]);
  });
}

}  // namespace

RayFit resolvent_exponent_fit(const TorusGrid& grid, double alpha, double p, double pprime,
                              std::span<const cplx> ray, ResolventDisplay display, const OpNormOptions& options,
                              int threads) {
  if (ray.size() < 2) throw std::invalid_argument("resolvent_exponent_fit: need at least two ray points");
  const XiRegion xi(alpha);
  for (const auto& z : ray) {
    const auto m = xi.contains(z);
    const bool ok = display == ResolventDisplay::inside_xi ? m != XiMembership::outside : m == XiMembership::outside;
    if (!ok) {
      std::ostringstream os;
      os << "resolvent_exponent_fit: ray point " << z << " is " << to_string(m)
         << " Xi, so the ray crosses Gamma for this display";
      throw std::invalid_argument(os.str());
    }
  }
  RayFit out;
  out.z.assign(ray.begin(), ray.end());
  estimate_norms(grid, alpha, p, pprime, out, options, threads);
  std::vector<double> xs(out.z.size()), ys(out.z.size());
  for (std::size_t i = 0; i < out.z.size(); ++i) {
    if (display == ResolventDisplay::inside_xi) {
      xs[i] = std::abs(out.z[i]);
      ys[i] = out.norms[i];
    } else {
      xs[i] = 1.0 + std::abs(out.z[i]);
      ys[i] = out.norms[i] * out.distances[i];
    }
  }
  out.fit = log_log_fit(xs, ys);
  return out;
}

RayFit resolvent_approach_fit(const TorusGrid& grid, double alpha, double p, double pprime, double mu,
                              std::span<const double> deltas, const OpNormOptions& options, int threads) {
  if (deltas.size() < 2) throw std::invalid_argument("resolvent_approach_fit: need at least two offsets");
  const XiRegion xi(alpha);
  RayFit out;
  for (double d : deltas) {
    if (!(d > 0.0)) throw std::domain_error("resolvent_approach_fit: offsets must be > 0");
    const cplx z(mu + d, 0.0);
    if (xi.contains(z) != XiMembership::outside)
      throw std::invalid_argument("resolvent_approach_fit: approach point lies in Xi");
    out.z.push_back(z);
  }
  estimate_norms(grid, alpha, p, pprime, out, options, threads);
  std::vector<double> inv(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) inv[i] = 1.0 / deltas[i];
  out.fit = log_log_fit(inv, out.norms);
  return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t count) {
  if (count < 2 || !(lo > 0.0) || !(hi > 0.0)) throw std::invalid_argument("logspace: need count >= 2 and positive ends");
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * static_cast<double>(i) / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace specbound
