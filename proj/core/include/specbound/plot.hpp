#pragma once

// Self-contained SVG renderings of spectra, enclosure regions and the region
// Xi. Output depends only on the inputs and the frame, never on wall-clock
// state, so identical inputs give byte-identical files.

#include <span>
#include <string>

#include "specbound/regions.hpp"

namespace specbound {

struct PlotFrame {
  double xmin = -10.0;
  double xmax = 10.0;
  double ymin = -7.5;
  double ymax = 7.5;
  int width = 640;
  int height = 480;
};

/// Frame centered on the origin with x in [-radius, radius] and the y range
/// matching the pixel aspect ratio.
PlotFrame centered_frame(double radius, int width = 640, int height = 480);

/// Frame enclosing the points and disc centers with a margin, symmetric
/// about the real axis.
PlotFrame frame_for(std::span<const cplx> points, const EnclosureRegion* region, int width = 640,
                    int height = 480);

/// Eigenvalues as points, discs whose centers fall inside the frame as
/// ellipses (class "disc"), central region boundaries (class "central"), and
/// optionally Gamma with Xi shaded.
std::string plot_spectrum_region(std::span<const cplx> spectrum, const EnclosureRegion* region,
                                 const XiRegion* xi, const PlotFrame& frame);

/// Region Xi (shaded), its boundary arcs Gamma and the meeting point z_star.
std::string plot_xi_region(const XiRegion& xi, const PlotFrame& frame);

}  // namespace specbound
