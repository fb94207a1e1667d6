#include "specbound/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace specbound {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

struct Canvas {
  const PlotFrame& f;
  std::string body;

  double px(double x) const { return (x - f.xmin) / (f.xmax - f.xmin) * f.width; }
  double py(double y) const { return (f.ymax - y) / (f.ymax - f.ymin) * f.height; }
  double sx(double r) const { return r / (f.xmax - f.xmin) * f.width; }
  double sy(double r) const { return r / (f.ymax - f.ymin) * f.height; }

  std::string point_list(const std::vector<cplx>& pts) const {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += ' ';
      s += num(px(pts[i].real())) + "," + num(py(pts[i].imag()));
    }
    return s;
  }

  void header() {
    body += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(f.width) + "\" height=\"" +
            std::to_string(f.height) + "\" viewBox=\"0 0 " + std::to_string(f.width) + " " +
            std::to_string(f.height) + "\">\n";
    body += "<defs><clipPath id=\"frame\"><rect x=\"0\" y=\"0\" width=\"" + std::to_string(f.width) +
            "\" height=\"" + std::to_string(f.height) + "\"/></clipPath></defs>\n";
    body += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + std::to_string(f.width) + "\" height=\"" +
            std::to_string(f.height) + "\" fill=\"white\"/>\n";
    body += "<g clip-path=\"url(#frame)\">\n";
  }

  void axes() {
    if (f.ymin <= 0.0 && f.ymax >= 0.0)
      body += "<line class=\"axis\" x1=\"0.00\" y1=\"" + num(py(0.0)) + "\" x2=\"" + num(static_cast<double>(f.width)) +
              "\" y2=\"" + num(py(0.0)) + "\" stroke=\"#888888\" stroke-width=\"0.8\"/>\n";
    if (f.xmin <= 0.0 && f.xmax >= 0.0)
      body += "<line class=\"axis\" x1=\"" + num(px(0.0)) + "\" y1=\"0.00\" x2=\"" + num(px(0.0)) + "\" y2=\"" +
              num(static_cast<double>(f.height)) + "\" stroke=\"#888888\" stroke-width=\"0.8\"/>\n";
  }

  void footer(const std::string& caption) {
    body += "</g>\n";
    body += "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">" + caption + "</text>\n";
    body += "</svg>\n";
  }
};

// Arc of Gamma extended far enough that the Xi polygon closes outside the frame.
std::vector<cplx> long_arc(const XiRegion& xi, Branch branch, const PlotFrame& f) {
  const double diag = std::hypot(std::max(std::abs(f.xmin), std::abs(f.xmax)), std::max(std::abs(f.ymin), std::abs(f.ymax)));
  const double alpha = xi.alpha();
  const double lam45 = 1.0 / std::tan(kPi / (4.0 * alpha));
  const double r45 = std::pow(lam45 * lam45 + 1.0, 0.5 * alpha);
  const double radius = std::max({2.0 * diag, r45, 2.0 * std::abs(xi.zstar())});
  return xi.arc_polyline(branch, radius, 6000);
}

void draw_xi(Canvas& c, const XiRegion& xi) {
  const auto upper = long_arc(xi, Branch::upper, c.f);
  const auto lower = long_arc(xi, Branch::lower, c.f);
  const double big = 2.0 * std::max(std::abs(upper.back()), std::abs(lower.back()));
  std::vector<cplx> poly(upper.begin(), upper.end());
  poly.emplace_back(big, big);
  poly.emplace_back(-big, big);
  poly.emplace_back(-big, -big);
  poly.emplace_back(big, -big);
  for (auto it = lower.rbegin(); it != lower.rend(); ++it) poly.push_back(*it);
  c.body += "<polygon class=\"xi\" points=\"" + c.point_list(poly) + "\" fill=\"#dfe8f5\" stroke=\"none\"/>\n";
  c.body += "<polyline class=\"gamma-upper\" points=\"" + c.point_list(upper) +
            "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.6\"/>\n";
  c.body += "<polyline class=\"gamma-lower\" points=\"" + c.point_list(lower) +
            "\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.6\"/>\n";
  c.body += "<circle class=\"zstar\" cx=\"" + num(c.px(xi.zstar())) + "\" cy=\"" + num(c.py(0.0)) +
            "\" r=\"3.00\" fill=\"#b22222\"/>\n";
}

}  // namespace

PlotFrame centered_frame(double radius, int width, int height) {
  PlotFrame f;
  f.width = width;
  f.height = height;
  f.xmin = -radius;
  f.xmax = radius;
  f.ymax = radius * static_cast<double>(height) / width;
  f.ymin = -f.ymax;
  return f;
}

PlotFrame frame_for(std::span<const cplx> points, const EnclosureRegion* region, int width, int height) {
  double xmin = 0.0, xmax = 1.0, ymax = 1.0;
  for (const auto& z : points) {
    xmin = std::min(xmin, z.real());
    xmax = std::max(xmax, z.real());
    ymax = std::max(ymax, std::abs(z.imag()));
  }
  if (region && !points.empty()) {
    for (std::size_t k = 0; k < region->centers.size(); ++k)
      if (region->centers[k].real() <= xmax) ymax = std::max(ymax, std::min(region->radii[k], xmax - xmin));
  }
  const double pad = 0.08 * (xmax - xmin);
  PlotFrame f;
  f.width = width;
  f.height = height;
  f.xmin = xmin - pad;
  f.xmax = xmax + pad;
  f.ymax = 1.1 * ymax;
  f.ymin = -f.ymax;
  return f;
}

std::string plot_spectrum_region(std::span<const cplx> spectrum, const EnclosureRegion* region,
                                 const XiRegion* xi, const PlotFrame& frame) {
  Canvas c{frame, {}};
  c.header();
  if (xi) draw_xi(c, *xi);
  c.axes();
  if (region) {
    for (std::size_t k = 0; k < region->centers.size(); ++k) {
      const cplx ctr = region->centers[k];
      if (ctr.real() < frame.xmin || ctr.real() > frame.xmax) continue;
      c.body += "<ellipse class=\"disc\" cx=\"" + num(c.px(ctr.real())) + "\" cy=\"" + num(c.py(ctr.imag())) +
                "\" rx=\"" + num(c.sx(region->radii[k])) + "\" ry=\"" + num(c.sy(region->radii[k])) +
                "\" fill=\"#f4d6a0\" fill-opacity=\"0.45\" stroke=\"#c07a00\" stroke-width=\"0.8\"/>\n";
    }
    const double rmax = std::hypot(std::max(std::abs(frame.xmin), std::abs(frame.xmax)),
                                   std::max(std::abs(frame.ymin), std::abs(frame.ymax)));
    for (double r : region->central_boundary_radii(rmax))
      c.body += "<ellipse class=\"central\" cx=\"" + num(c.px(0.0)) + "\" cy=\"" + num(c.py(0.0)) + "\" rx=\"" +
                num(c.sx(r)) + "\" ry=\"" + num(c.sy(r)) +
                "\" fill=\"none\" stroke=\"#2e7d32\" stroke-width=\"1.2\" stroke-dasharray=\"5,3\"/>\n";
  }
  for (const auto& z : spectrum)
    c.body += "<circle class=\"eig\" cx=\"" + num(c.px(z.real())) + "\" cy=\"" + num(c.py(z.imag())) +
              "\" r=\"2.50\" fill=\"black\"/>\n";
  std::string caption = "spectrum: " + std::to_string(spectrum.size()) + " eigenvalues";
  if (region) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ", C = %.6g", region->C);
    caption += buf;
  }
  c.footer(caption);
  return c.body;
}

std::string plot_xi_region(const XiRegion& xi, const PlotFrame& frame) {
  Canvas c{frame, {}};
  c.header();
  draw_xi(c, xi);
  c.axes();
  char buf[96];
  std::snprintf(buf, sizeof buf, "Region Xi and boundary Gamma, alpha = %g, z* = %.4f", xi.alpha(), xi.zstar());
  c.footer(buf);
  return c.body;
}

}  // namespace specbound
