#include "qaegap/lattice.hpp"

#include <cmath>
#include <numbers>

namespace qaegap {

double angle(int site, int other, const LatticeGeometry& geom) {
  if (site == other) return 0.0;
  auto [x0, y0] = geom.coords(site);
  auto [x1, y1] = geom.coords(other);
  const double dx = static_cast<double>(x0 - x1);
  const double dy = static_cast<double>(y0 - y1);
  double phi = std::atan2(dy, dx);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  // atan2 can return exactly 2*pi after the shift when rounding up from -0.
  if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
  return phi;
}

}  // namespace qaegap
