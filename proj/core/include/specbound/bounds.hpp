#pragma once

// Eigenvalue bounds and diagnostic functionals as evaluable predicates, plus
// empirical constant fitting for bounds with non-explicit constants.

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "specbound/common.hpp"
#include "specbound/linalg.hpp"
#include "specbound/manifolds.hpp"
#include "specbound/regions.hpp"
#include "specbound/resolvent_map.hpp"

namespace specbound {

enum class Verdict { pass, fail, inapplicable };

std::string to_string(Verdict v);

struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs_factor = 0.0;
  double ratio = std::nan("");
  std::map<std::string, double> params;
  Verdict verdict = Verdict::inapplicable;
  std::string note;

  /// pass iff lhs <= C * rhs_factor; inapplicable reports stay inapplicable.
  Verdict judge(double C) const;
};

/// |lambda_1| <= C ||V_-||_p^{2p/(2p-1)}. Inapplicable when lowest_eig >= 0.
BoundReport keller_check(double lowest_eig, const PotentialField& V, double p, double C = std::nan(""));

/// sup |z|^{1/2} <= (1/2) ||V||_1 over eigenvalues off (0, inf). rhs_factor
/// already includes the 1/2, so the verdict is ratio <= 1 + slack.
BoundReport aad_check(std::span<const cplx> spectrum, const PotentialField& V, double slack = 0.0,
                      double imag_tol = 1e-9);

/// sum |lambda_j|^gamma against int V_-^{gamma + d/2}. Throws std::domain_error
/// for an inadmissible (gamma, d).
BoundReport lieb_thirring_check(std::span<const double> negative_eigs, const PotentialField& V, double gamma, int d,
                                double C = std::nan(""));

/// |z|^{q - d/2} against ||V||_q^q. Throws std::domain_error outside
/// d/2 < q <= (d+1)/2 unless allow_out_of_range is set.
BoundReport frank_check(cplx z, double vnorm_q, double q, int d, double C = std::nan(""),
                        bool allow_out_of_range = false);
BoundReport frank_check(cplx z, const PotentialField& V, double q, int d, double C = std::nan(""),
                        bool allow_out_of_range = false);

/// dist(z, [0, inf)): |Im z| when Re z >= 0, |z| otherwise.
double dist_to_positive_axis(cplx z);

/// |z|^{q - d/2} / ||V||_q^q
double cex_ratio(cplx z, double vnorm_q, double q, int d);
double cex_ratio(cplx z, const PotentialField& V, double q, int d);
/// dist(z, R_+)^{q - (d+1)/2} |z|^{1/2} / ||V||_q^q; +inf when the distance is 0
/// and the exponent is negative.
double cex_distance_ratio(cplx z, double vnorm_q, double q, int d);
double cex_distance_ratio(cplx z, const PotentialField& V, double q, int d);

struct FitResult {
  double C_emp = 0.0;
  std::vector<double> per_sample;
  /// (model size, C_emp) pairs.
  std::vector<std::pair<double, double>> refinement_trace;
  /// (||V||_q, C_emp) pairs.
  std::vector<std::pair<double, double>> scale_trace;

  void add_sample(double c);
  /// max relative spread (max - min) / min of a trace's C values.
  static double spread(const std::vector<std::pair<double, double>>& trace);
};

struct EnclosureCheck {
  EnclosureRegion region;
  std::vector<cplx> eigenvalues;
  std::vector<MembershipReport> members;
  /// Smallest C enclosing every eigenvalue (max over eigenvalues of min_c).
  double min_c = 0.0;
  bool all_enclosed = true;
};

/// Membership of each eigenvalue in the enclosure built from the model's
/// retained free frequencies. `window` selects the admissibility check.
EnclosureCheck manifold_enclosure_check(std::span<const cplx> spectrum, const SpectralModel& model,
                                        const PotentialField& V, double q, double alpha, double C,
                                        Window window = Window::theorem, double cutoff = -1.0);

/// <x> = (1 + x^2)^{1/2}
double japanese_bracket(double x);

/// lambda^{2 - d/q} / (<lambda h>^{d/2} (log <lambda R>)^{7/2}).
double random_bound_lhs(double lambda, double h, double R, double q, int d);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit.
  double residual = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through (log x, log y).
SlopeFit log_log_fit(std::span<const double> x, std::span<const double> y);

/// (2 sigma(q) + 1) / alpha - 1.
double resolvent_exponent_target(int d, double q, double alpha, Window window = Window::theorem);

enum class ResolventDisplay {
  /// norm ~ |z|^{(2 nu + 1)/alpha - 1} for z in Xi: fit log norm vs log |z|.
  inside_xi,
  /// norm ~ d(z)^{-1} (1 + |z|)^{2 nu / alpha} off Xi: fit log(norm d(z)) vs log(1 + |z|).
  outside_xi,
};

struct RayFit {
  SlopeFit fit;
  std::vector<cplx> z;
  std::vector<double> norms;
  std::vector<double> distances;
  std::vector<OpNormResult> details;
};

/// Estimate ||(A - z)^{-1}||_{p -> p'} along `ray` on a torus grid and fit the
/// exponent of the chosen display. Throws std::invalid_argument when the ray
/// points do not all lie on the display's side of Gamma.
RayFit resolvent_exponent_fit(const TorusGrid& grid, double alpha, double p, double pprime,
                              std::span<const cplx> ray, ResolventDisplay display,
                              const OpNormOptions& options = {}, int threads = 1);

/// Approach to a free eigenvalue: z = mu + delta for each delta; fit
/// log norm vs log(1/delta). Points inside Xi are rejected.
RayFit resolvent_approach_fit(const TorusGrid& grid, double alpha, double p, double pprime, double mu,
                              std::span<const double> deltas, const OpNormOptions& options = {}, int threads = 1);

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> logspace(double lo, double hi, std::size_t count);

}  // namespace specbound
