#pragma once

#include <utility>

#include "qaegap/errors.hpp"

namespace qaegap {

/// 2D lattice with unit spacing and row-major site indexing:
/// site_index(x, y) = y*cols + x, x along e1, y along e2.
struct LatticeGeometry {
  int rows = 1;
  int cols = 1;

  int sites() const { return rows * cols; }

  int site_index(int x, int y) const { return y * cols + x; }

  std::pair<int, int> coords(int site) const {
    return {site % cols, site / cols};
  }

  bool contains(int x, int y) const {
    return x >= 0 && x < cols && y >= 0 && y < rows;
  }

  void validate() const {
    if (rows < 1 || cols < 1)
      throw InvalidArgument("lattice geometry requires rows >= 1 and cols >= 1");
  }

  bool operator==(const LatticeGeometry&) const = default;
};

/// Angle of (r - rp) measured from e1, branch [0, 2*pi).
/// angle(r, r) = 0 by convention.
double angle(int site, int other, const LatticeGeometry& geom);

}  // namespace qaegap
