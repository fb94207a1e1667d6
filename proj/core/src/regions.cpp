#include "specbound/regions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace specbound {

namespace {

[[noreturn]] void reject(const std::string& msg) { throw std::domain_error(msg); }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double orient(cplx a, cplx b, cplx c) { return cross(b - a, c - a); }

double point_segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

bool segments_intersect(cplx a, cplx b, cplx c, cplx d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 &&
         o3 != 0 && o4 != 0;
}

double segment_segment_distance(cplx a, cplx b, cplx c, cplx d) {
  if (segments_intersect(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

thread_local std::size_t tls_piece_count = 0;

constexpr std::size_t kCoarsePieces = 64;
constexpr double kCoarseRadius = 1e6;
constexpr int kMaxDepth = 90;

}  // namespace

void check_admissible(int d, double q, double alpha, Window window) {
  if (d < 1) reject("dimension d must be >= 1, got " + std::to_string(d));
  if (!(alpha > 0.0)) reject("alpha must be > 0, got " + fmt(alpha));
  if (std::isnan(q) || q < 1.0) reject("q >= 1 violated: q = " + fmt(q));
  switch (window) {
    case Window::unchecked:
      return;
    case Window::laplacian:
      if (alpha != 2.0) reject("laplacian window requires alpha == 2, got " + fmt(alpha));
      if (q < 0.5 * d) reject("q >= d/2 violated: q = " + fmt(q) + ", d/2 = " + fmt(0.5 * d));
      return;
    case Window::theorem: {
      if (d < 2) reject("theorem window requires d >= 2, got d = " + std::to_string(d));
      const double lo = 2.0 * d / (d + 1.0);
      if (alpha < lo) reject("2d/(d+1) <= alpha violated: alpha = " + fmt(alpha));
      if (alpha > d) reject("alpha <= d violated: alpha = " + fmt(alpha));
      if (alpha == static_cast<double>(d)) {
        if (!std::isfinite(q)) reject("q < inf violated for d == alpha");
        return;
      }
      const double qlo = d / alpha;
      const double qhi = 2.0 * d / (d - alpha);
      if (!(q > qlo)) reject("d/alpha < q violated: q = " + fmt(q) + ", d/alpha = " + fmt(qlo));
      if (q > qhi) reject("q <= 2d/(d-alpha) violated: q = " + fmt(q) + ", bound = " + fmt(qhi));
      return;
    }
  }
}

double sigma_exponent(int d, double q, double alpha, Window window) {
  check_admissible(d, q, alpha, window);
  const double breakpoint = 0.5 * (d + 1);
  if (q <= breakpoint) return (d - q) / (2.0 * q);
  if (!std::isfinite(q)) return 0.0;
  return (d - 1) / (4.0 * q);
}

LebesguePair lebesgue_pair(double q) {
  if (!(q > 1.0)) reject("lebesgue_pair requires q > 1, got " + fmt(q));
  if (!std::isfinite(q)) return {2.0, 2.0};
  return {2.0 * q / (q + 1.0), 2.0 * q / (q - 1.0)};
}

Exponents Exponents::make(int d, double q, double alpha, Window window) {
  Exponents e;
  e.d = d;
  e.q = q;
  e.alpha = alpha;
  e.window = window;
  e.sigma = sigma_exponent(d, q, alpha, window);
  if (q > 1.0) {
    const auto pair = lebesgue_pair(q);
    e.p = pair.p;
    e.pprime = pair.pprime;
  } else {
    e.p = 1.0;
    e.pprime = kInf;
  }
  e.nu = e.sigma;
  return e;
}

cplx principal_pow(cplx w, double alpha) {
  if (w == cplx(0.0, 0.0)) return alpha > 0 ? cplx(0.0, 0.0) : cplx(kInf, 0.0);
  return std::exp(alpha * std::log(w));
}

double z_star(double alpha) {
  if (!(alpha > 1.0)) reject("z_star requires alpha > 1, got " + fmt(alpha));
  const double angle = kPi / alpha;
  const double closed = -std::pow(std::sin(angle), -alpha);
  const cplx direct = principal_pow(cplx(std::cos(angle) / std::sin(angle), 1.0), alpha);
  if (std::abs(direct - closed) > 1e-12 * std::abs(closed)) {
    throw std::logic_error("z_star cross-check failed for alpha = " + fmt(alpha));
  }
  return closed;
}

cplx gamma_point(double lambda, Branch branch, double alpha) {
  if (!(alpha > 1.0)) reject("gamma_point requires alpha > 1, got " + fmt(alpha));
  const double lmin = std::cos(kPi / alpha) / std::sin(kPi / alpha);
  if (lambda < lmin - 1e-12 * (1.0 + std::abs(lmin))) {
    reject("gamma_point requires lambda >= cot(pi/alpha) = " + fmt(lmin) + ", got " + fmt(lambda));
  }
  const double im = branch == Branch::upper ? 1.0 : -1.0;
  return principal_pow(cplx(lambda, im), alpha);
}

std::string to_string(XiMembership m) {
  switch (m) {
    case XiMembership::inside:
      return "inside";
    case XiMembership::boundary:
      return "boundary";
    case XiMembership::outside:
      return "outside";
  }
  return "?";
}

// ---------------------------------------------------------------------------

XiRegion::XiRegion(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0)) reject("XiRegion requires alpha > 1, got " + fmt(alpha));
  lambda_min_ = std::cos(kPi / alpha) / std::sin(kPi / alpha);
  zstar_ = z_star(alpha);
  coarse_extent_ = parameter_extent(kCoarseRadius);
  ensure_extent(coarse_extent_, coarse_);
  const double theta = kPi - coarse_extent_;
  truncation_ = std::cos(theta / alpha_) / std::sin(theta / alpha_);
}

cplx XiRegion::curve(double s) const {
  if (s == 0.0) return {zstar_, 0.0};
  const double theta = kPi - std::abs(s);  // argument of the curve point
  const double lambda = std::cos(theta / alpha_) / std::sin(theta / alpha_);
  return gamma_point(std::max(lambda, lambda_min_), s > 0 ? Branch::upper : Branch::lower, alpha_);
}

double XiRegion::parameter_extent(double radius) const {
  double lambda = std::max(1.0, lambda_min_ + 1.0);
  if (radius > 0.0) {
    const double need = std::pow(radius, 2.0 / alpha_) - 1.0;
    if (need > 0.0) lambda = std::max(lambda, std::sqrt(need));
  }
  return kPi - alpha_ * std::atan2(1.0, lambda);
}

void XiRegion::ensure_extent(double extent, std::vector<Piece>& pieces) const {
  pieces.clear();
  const double ds = 2.0 * extent / kCoarsePieces;
  std::vector<double> s(kCoarsePieces + 1);
  for (std::size_t i = 0; i <= kCoarsePieces; ++i) s[i] = -extent + ds * static_cast<double>(i);
  s[kCoarsePieces / 2] = 0.0;
  // Split pieces whose chord is long relative to their distance from the origin,
  // so capsules stay thin near the truncation ends.
  std::vector<Piece> work;
  for (std::size_t i = 0; i < kCoarsePieces; ++i) work.push_back({s[i], s[i + 1], curve(s[i]), curve(s[i + 1]), 0.0});
  while (!work.empty()) {
    Piece pc = work.back();
    work.pop_back();
    const double scale = std::min(std::abs(pc.p0), std::abs(pc.p1));
    if (std::abs(pc.p1 - pc.p0) > 0.05 * (1.0 + scale) && pc.s1 - pc.s0 > 1e-9) {
      const double mid = 0.5 * (pc.s0 + pc.s1);
      const cplx pm = curve(mid);
      work.push_back({mid, pc.s1, pm, pc.p1, 0.0});
      work.push_back({pc.s0, mid, pc.p0, pm, 0.0});
    } else {
      pieces.push_back(make_piece(pc.s0, pc.s1, pc.p0, pc.p1));
    }
  }
  // Nearest pieces first, so a query can stop once the rest are out of reach.
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.reach - a.margin < b.reach - b.margin; });
}

std::size_t XiRegion::last_piece_count() { return tls_piece_count; }

XiRegion::Piece XiRegion::make_piece(double s0, double s1, cplx p0, cplx p1) const {
  // Margin bounds the arc's deviation from its chord: twice the largest
  // deviation seen at the quarter points, plus a rounding floor.
  double dev = 0.0;
  for (double f : {0.25, 0.5, 0.75}) {
    dev = std::max(dev, point_segment_distance(curve(s0 + f * (s1 - s0)), p0, p1));
  }
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(p0) + std::abs(p1));
  return {s0, s1, p0, p1, 2.0 * dev + floor, point_segment_distance(cplx(0.0, 0.0), p0, p1)};
}

namespace {

struct CrossingState {
  cplx z, anchor;
  double tol;
  bool boundary = false;
  std::size_t pieces = 0;
};

}  // namespace

XiMembership XiRegion::contains(cplx z, double tol) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) reject("xi_contains: non-finite z");
  if (tol < 0.0) tol = 1e-9 * (1.0 + std::abs(z));

  const double anchor = std::min(2.0 * zstar_, zstar_ - 1.0);
  const double extent = parameter_extent(10.0 * (std::abs(z) + std::abs(anchor)));

  std::vector<Piece> local;
  const std::vector<Piece>* pieces = &coarse_;
  if (extent > coarse_extent_) {
    ensure_extent(extent, local);
    pieces = &local;
  }

  CrossingState st{z, cplx(anchor, 0.0), tol};
  const double seg_reach = std::max(std::abs(z), std::abs(anchor));

  // Parity of crossings of [z, anchor] with the arc of one piece.
  auto count = [&](auto&& self, const Piece& pc, int depth) -> int {
    ++st.pieces;
    if (std::min(std::abs(pc.p0), std::abs(pc.p1)) > 4.0 * seg_reach + 1.0 &&
        point_segment_distance(cplx(0.0, 0.0), pc.p0, pc.p1) > 2.0 * seg_reach + 1.0) {
      // Pieces are short relative to their modulus; far pieces cannot reach the segment.
      return 0;
    }
    if (segment_segment_distance(pc.p0, pc.p1, st.z, st.anchor) > pc.margin) return 0;
    const double dz = point_segment_distance(st.z, pc.p0, pc.p1);
    const double da = point_segment_distance(st.anchor, pc.p0, pc.p1);
    if (dz > pc.margin && da > pc.margin) {
      // Half-open rule on the segment's supporting line keeps shared vertices consistent.
      const bool straddle =
          (orient(st.z, st.anchor, pc.p0) > 0) != (orient(st.z, st.anchor, pc.p1) > 0);
      if (!straddle) return 0;
      const double o3 = orient(pc.p0, pc.p1, st.z), o4 = orient(pc.p0, pc.p1, st.anchor);
      return ((o3 > 0) != (o4 > 0)) ? 1 : 0;
    }
    if (dz + pc.margin <= st.tol) {
      st.boundary = true;
      return 0;
    }
    if (depth >= kMaxDepth) {
      throw Indeterminate("xi_contains: crossing parity did not stabilize near z = (" +
                          fmt(st.z.real()) + ", " + fmt(st.z.imag()) + ")");
    }
    const double mid = 0.5 * (pc.s0 + pc.s1);
    const cplx pm = curve(mid);
    return self(self, make_piece(pc.s0, mid, pc.p0, pm), depth + 1) +
           self(self, make_piece(mid, pc.s1, pm, pc.p1), depth + 1);
  };

  int crossings = 0;
  for (const auto& pc : *pieces) {
    if (pc.reach - pc.margin > seg_reach) break;
    crossings += count(count, pc, 0);
    if (st.boundary) break;
  }
  tls_piece_count = st.pieces;
  if (st.boundary) return XiMembership::boundary;
  return (crossings % 2 == 0) ? XiMembership::inside : XiMembership::outside;
}

std::vector<cplx> XiRegion::arc_polyline(Branch branch, double radius, std::size_t points) const {
  if (points < 2) points = 2;
  const double extent = parameter_extent(radius);
  const double theta = kPi - extent;
  const double lmax = std::cos(theta / alpha_) / std::sin(theta / alpha_);
  std::vector<cplx> out;
  out.reserve(points);
  out.emplace_back(zstar_, 0.0);
  for (std::size_t i = 1; i < points; ++i) {
    const double lam = lambda_min_ + (lmax - lambda_min_) * static_cast<double>(i) / (points - 1);
    out.push_back(gamma_point(lam, branch, alpha_));
  }
  return out;
}

XiMembership xi_contains(cplx z, double alpha, double tol) { return XiRegion(alpha).contains(z, tol); }

// ---------------------------------------------------------------------------

EnclosureRegion EnclosureRegion::make(std::span<const double> freqs, double C, double vnorm,
                                      const Exponents& exp) {
  if (!(C >= 0.0)) reject("EnclosureRegion: C must be >= 0");
  if (!(vnorm >= 0.0)) reject("EnclosureRegion: vnorm must be >= 0");
  EnclosureRegion r;
  r.C = C;
  r.vnorm = vnorm;
  r.exp = exp;
  std::vector<double> f(freqs.begin(), freqs.end());
  std::sort(f.begin(), f.end());
  for (double x : f) {
    if (x < 0.0) reject("EnclosureRegion: negative frequency");
    if (r.freqs.empty() || x - r.freqs.back() > 1e-12 * (1.0 + x)) r.freqs.push_back(x);
  }
  for (double lam : r.freqs) {
    r.centers.emplace_back(lam == 0.0 ? 0.0 : std::pow(lam, exp.alpha), 0.0);
    r.radii.push_back(C * vnorm * std::pow(1.0 + lam, 2.0 * exp.sigma));
  }
  return r;
}

std::vector<Disc> EnclosureRegion::discs() const {
  std::vector<Disc> out;
  for (std::size_t k = 0; k < centers.size(); ++k) out.push_back({centers[k], radii[k]});
  return out;
}

double EnclosureRegion::central_value(cplx z) const {
  const double r = std::abs(z);
  if (r == 0.0) return 0.0;
  return std::pow(r, 1.0 - 1.0 / exp.alpha) * std::pow(1.0 + r, -2.0 * exp.sigma / exp.alpha);
}

std::vector<double> EnclosureRegion::central_boundary_radii(double r_max) const {
  std::vector<double> out;
  const double level = C * vnorm;
  auto g = [&](double r) { return central_value(cplx(r, 0.0)) - level; };
  const int n = 2000;
  double prev_r = 0.0, prev_g = g(0.0);
  for (int i = 1; i <= n; ++i) {
    const double r = r_max * std::pow(static_cast<double>(i) / n, 3.0);
    const double gr = g(r);
    if ((prev_g <= 0.0) != (gr <= 0.0)) {
      double lo = prev_r, hi = r;
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((g(mid) <= 0.0) == (prev_g <= 0.0)) lo = mid; else hi = mid;
      }
      out.push_back(0.5 * (lo + hi));
    }
    prev_r = r;
    prev_g = gr;
  }
  return out;
}

MembershipReport enclosure_contains(cplx z, const EnclosureRegion& region) {
  MembershipReport rep;
  for (std::size_t k = 0; k < region.centers.size(); ++k) {
    const double dist = std::abs(z - region.centers[k]);
    const double unit = region.vnorm * std::pow(1.0 + region.freqs[k], 2.0 * region.exp.sigma);
    double ck;
    if (dist == 0.0) ck = 0.0;
    else if (unit == 0.0) ck = kInf;
    else ck = dist / unit;
    if (ck < rep.min_c_disc) {
      rep.min_c_disc = ck;
      rep.nearest_disc = k;
    }
    if (dist <= region.radii[k]) rep.discs.push_back(k);
  }
  const double cv = region.central_value(z);
  if (cv == 0.0) rep.min_c_central = 0.0;
  else if (region.vnorm == 0.0) rep.min_c_central = kInf;
  else rep.min_c_central = cv / region.vnorm;
  rep.central = region.central_contains(z);
  rep.min_c = std::min(rep.min_c_disc, rep.min_c_central);
  rep.enclosed = rep.central || !rep.discs.empty();
  return rep;
}

}  // namespace specbound
