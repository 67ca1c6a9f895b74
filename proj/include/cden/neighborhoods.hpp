/*
  Connected-neighborhood extraction per color bin.

  A neighborhood is a maximal set of same-bin pixels connected under the
  scan adjacencies {W, NW, N} (undirected: {E, W, N, S, NW, SE}; the
  NE/SW diagonal does not connect). Extraction is a single raster scan
  with union-find merging.
*/

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cden/image.hpp"

namespace cden {

// Canonical component labels, one per pixel. Labels are dense, assigned
// 0..K-1 in order of each component's first pixel in scan order. Every
// component lies entirely inside one color bin.
struct LabelMap {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;

  std::int32_t at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
};

// Per-bin census of component pixel counts, in scan order of each
// component's first appearance.
struct ComponentTable {
  std::array<std::vector<std::int64_t>, kBinCount> sizes;

  // nb_i: number of neighborhoods of the bin.
  int neighborhood_count(int bin) const {
    return static_cast<int>(sizes[bin].size());
  }
  // |A'_i|: total pixels of the bin.
  std::int64_t bin_total(int bin) const;
  // Sum of nb_i over all bins.
  std::int64_t total_components() const;
};

struct LabelResult {
  LabelMap label_map;
  ComponentTable table;
};

// Labels all components of every bin in one scan pass.
LabelResult label_components(const BinMap& b);

// Per-bin neighborhood size distribution: sizes / bin total.
// Throws EmptyBinError for bins with no pixels.
std::vector<double> neighborhood_distribution(const ComponentTable& t, int bin);

// Neighborhood counts normalized by the total component count.
// Throws std::invalid_argument when every bin is empty.
std::array<double, kBinCount> normalized_counts(const ComponentTable& t);

}  // namespace cden
