#include "cden/annular.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cden/error.hpp"

namespace cden {

BinGeometry bin_geometry(const BinMap& b, int bin) {
  if (bin < 0 || bin >= kBinCount) {
    throw std::invalid_argument("bin_geometry: bin out of range");
  }

  double sum_x = 0.0;
  double sum_y = 0.0;
  std::int64_t count = 0;
  for (int y = 0; y < b.height; ++y) {
    for (int x = 0; x < b.width; ++x) {
      if (b.at(x, y) == bin) {
        sum_x += x;
        sum_y += y;
        ++count;
      }
    }
  }
  if (count == 0) {
    throw EmptyBinError("bin_geometry: bin has no pixels");
  }

  BinGeometry g;
  g.bin = bin;
  g.centroid_x = sum_x / static_cast<double>(count);
  g.centroid_y = sum_y / static_cast<double>(count);

  double max_d2 = 0.0;
  for (int y = 0; y < b.height; ++y) {
    for (int x = 0; x < b.width; ++x) {
      if (b.at(x, y) == bin) {
        const double dx = x - g.centroid_x;
        const double dy = y - g.centroid_y;
        max_d2 = std::max(max_d2, dx * dx + dy * dy);
      }
    }
  }
  g.radius = std::sqrt(max_d2);
  return g;
}

std::vector<double> annular_distribution(const BinMap& b, const BinGeometry& g,
                                         int circles) {
  if (circles < 1) {
    throw std::invalid_argument("annular_distribution: circles must be >= 1");
  }

  std::vector<std::int64_t> ring_counts(circles, 0);
  std::int64_t total = 0;
  for (int y = 0; y < b.height; ++y) {
    for (int x = 0; x < b.width; ++x) {
      if (b.at(x, y) != g.bin) continue;
      const double dx = x - g.centroid_x;
      const double dy = y - g.centroid_y;
      const double d = std::sqrt(dx * dx + dy * dy);
      int ring = 1;
      if (d > 0.0 && g.radius > 0.0) {
        ring = static_cast<int>(std::ceil(d / g.radius * circles));
        ring = std::clamp(ring, 1, circles);
      }
      ++ring_counts[ring - 1];
      ++total;
    }
  }
  if (total == 0) {
    throw EmptyBinError("annular_distribution: bin has no pixels");
  }

  std::vector<double> probs(circles);
  for (int j = 0; j < circles; ++j) {
    probs[j] = static_cast<double>(ring_counts[j]) / static_cast<double>(total);
  }
  return probs;
}

}  // namespace cden
