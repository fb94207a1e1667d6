#pragma once

// Exponent bookkeeping and complex-plane geometry for spectral enclosures:
// disc unions around the free eigenvalues, the central region, and the
// contour Gamma / exterior region Xi used for resolvent estimates.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "specbound/common.hpp"

namespace specbound {

/// Which admissibility window to enforce for (d, q, alpha).
enum class Window {
  /// Fractional theorem: d >= 2, 2d/(d+1) <= alpha <= d, and
  /// d/alpha < q <= 2d/(d-alpha) (d > alpha) or 1 <= q < inf (d == alpha).
  theorem,
  /// Laplacian case alpha == 2 with the relaxed lower edge q >= d/2.
  laplacian,
  /// No window check; only q >= 1 and alpha > 0.
  unchecked,
};

/// Throws std::domain_error naming the violated inequality.
void check_admissible(int d, double q, double alpha, Window window);

/// Piecewise exponent: d/(2q) - 1/2 below the breakpoint q = (d+1)/2,
/// (d-1)/(4q) above it. q may be +inf.
double sigma_exponent(int d, double q, double alpha, Window window = Window::theorem);

struct LebesguePair {
  double p;
  double pprime;
};

/// Dual pair with 1/p + 1/p' = 1 and 1/q = 1/p - 1/p'. Requires q > 1.
LebesguePair lebesgue_pair(double q);

struct Exponents {
  int d = 2;
  double q = 2.0;
  double alpha = 2.0;
  double sigma = 0.0;
  double p = 1.0;
  double pprime = kInf;
  double nu = 0.0;
  Window window = Window::theorem;

  static Exponents make(int d, double q, double alpha, Window window = Window::theorem);
};

/// Complex power through the principal logarithm, Arg in (-pi, pi].
cplx principal_pow(cplx w, double alpha);

/// Meeting point of the two arcs of Gamma: -sin(pi/alpha)^(-alpha).
/// Cross-checked against (cot(pi/alpha) + i)^alpha; throws std::logic_error
/// if the two disagree beyond 1e-12 relative.
double z_star(double alpha);

enum class Branch { upper, lower };

/// (lambda + i)^alpha (upper) or (lambda - i)^alpha (lower), lambda >= cot(pi/alpha).
cplx gamma_point(double lambda, Branch branch, double alpha);

enum class XiMembership { inside, boundary, outside };

std::string to_string(XiMembership m);

/// Region Xi = Xi_0 u Gamma for one alpha > 1. Holds a cached coarse
/// discretization of Gamma; membership queries refine it locally.
class XiRegion {
 public:
  explicit XiRegion(double alpha);

  double alpha() const noexcept { return alpha_; }
  double lambda_min() const noexcept { return lambda_min_; }
  double zstar() const noexcept { return zstar_; }
  double truncation() const noexcept { return truncation_; }

  /// Even-odd crossing classification. tol < 0 selects 1e-9 * (1 + |z|).
  /// Throws std::domain_error for non-finite z, Indeterminate when the
  /// crossing parity cannot be stabilized.
  XiMembership contains(cplx z, double tol = -1.0) const;

  /// Point of Gamma at signed curve parameter s in [-S, S]: s = 0 is z_star,
  /// s > 0 runs out along the upper arc, s < 0 along the lower arc. The arc
  /// angle is arg(Gamma(s)) = pi - |s|.
  cplx curve(double s) const;

  /// Curve parameter range S needed so that |Gamma(+-S)| >= radius.
  double parameter_extent(double radius) const;

  /// Polyline of one arc from z_star outward until |z| >= radius.
  std::vector<cplx> arc_polyline(Branch branch, double radius, std::size_t points) const;

  /// Number of curve pieces examined by the last classification on this thread.
  static std::size_t last_piece_count();

 private:
  struct Piece {
    double s0, s1;
    cplx p0, p1;
    double margin;
    double reach = 0.0;  // distance from the origin to the chord
  };
  Piece make_piece(double s0, double s1, cplx p0, cplx p1) const;
  void ensure_extent(double extent, std::vector<Piece>& pieces) const;

  double alpha_;
  double lambda_min_;
  double zstar_;
  double truncation_;
  std::vector<Piece> coarse_;
  double coarse_extent_;
};

/// Convenience wrapper building a temporary XiRegion.
XiMembership xi_contains(cplx z, double alpha, double tol = -1.0);

struct Disc {
  cplx center;
  double radius = 0.0;
  bool contains(cplx z) const { return std::abs(z - center) <= radius; }
};

/// Union of discs D(lambda_k^alpha, C r_k) with r_k = ||V||_q (1 + lambda_k)^{2 sigma},
/// plus the central region |z|^{1-1/alpha} (1+|z|)^{-2 sigma/alpha} <= C ||V||_q.
struct EnclosureRegion {
  std::vector<double> freqs;   // lambda_k >= 0, distinct, ascending
  std::vector<cplx> centers;   // lambda_k^alpha
  std::vector<double> radii;   // C * r_k
  double C = 1.0;
  double vnorm = 0.0;
  Exponents exp;

  static EnclosureRegion make(std::span<const double> freqs, double C, double vnorm,
                              const Exponents& exp);

  std::vector<Disc> discs() const;
  /// |z|^{1-1/alpha} (1+|z|)^{-2 sigma/alpha}
  double central_value(cplx z) const;
  bool central_contains(cplx z) const { return central_value(z) <= C * vnorm; }
  /// Radii |z| where central_value(|z|) == C * vnorm, for plotting (ascending).
  std::vector<double> central_boundary_radii(double r_max) const;
};

struct MembershipReport {
  std::vector<std::size_t> discs;  // indices of discs containing z
  bool central = false;
  bool enclosed = false;
  std::size_t nearest_disc = 0;  // disc index achieving min_c_disc
  double min_c_disc = kInf;      // smallest C placing z in some disc
  double min_c_central = kInf;   // smallest C placing z in the central region
  double min_c = kInf;           // min of the two mechanisms
};

MembershipReport enclosure_contains(cplx z, const EnclosureRegion& region);

}  // namespace specbound
