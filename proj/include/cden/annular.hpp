/*
  Per-bin centroid/radius geometry and the N-ring annular distribution.

  Ring j of N collects the bin's pixels whose distance d to the centroid
  satisfies (j-1) * r/N < d <= j * r/N, with d == 0 assigned to ring 1.
  Rings are disjoint, so the counts normalize to a probability vector.
*/

#pragma once

#include <vector>

#include "cden/image.hpp"

namespace cden {

// Centroid (coordinate mean, pixel centers at integer x,y) and radius
// (max Euclidean distance from the centroid to any pixel of the bin).
struct BinGeometry {
  int bin = 0;
  double centroid_x = 0.0;
  double centroid_y = 0.0;
  double radius = 0.0;
};

// Throws EmptyBinError when the bin has no pixels.
BinGeometry bin_geometry(const BinMap& b, int bin);

// Normalized ring occupancy for g.bin with `circles` rings.
// A degenerate radius (all pixels coincident) puts all mass in ring 1.
// Throws std::invalid_argument for circles < 1, EmptyBinError for an
// empty bin.
std::vector<double> annular_distribution(const BinMap& b, const BinGeometry& g,
                                         int circles);

}  // namespace cden
