/*
  Single-pass component labeling with union-find merging.

  The raster is scanned row by row, left to right. For each pixel the
  already-visited neighbors W, NW and N are examined. No same-bin
  neighbor: the pixel starts a new provisional component. One or more:
  the pixel joins them, and distinct provisional components among them
  are merged. A second pass canonicalizes labels to dense ids in
  first-appearance order and fills the per-bin size table.
*/

#include "cden/neighborhoods.hpp"

#include <numeric>
#include <stdexcept>

#include "cden/error.hpp"

namespace cden {

namespace {

// Union-find with path halving and union by size.
class UnionFind {
 public:
  std::int32_t make() {
    parent_.push_back(static_cast<std::int32_t>(parent_.size()));
    size_.push_back(1);
    return parent_.back();
  }

  std::int32_t find(std::int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::int32_t a, std::int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::int32_t> parent_;
  std::vector<std::int32_t> size_;
};

}  // namespace

std::int64_t ComponentTable::bin_total(int bin) const {
  const auto& s = sizes[bin];
  return std::accumulate(s.begin(), s.end(), std::int64_t{0});
}

std::int64_t ComponentTable::total_components() const {
  std::int64_t n = 0;
  for (const auto& s : sizes) n += static_cast<std::int64_t>(s.size());
  return n;
}

LabelResult label_components(const BinMap& b) {
  const int w = b.width;
  const int h = b.height;
  if (w < 1 || h < 1 ||
      static_cast<std::size_t>(w) * h != b.bins.size()) {
    throw std::invalid_argument("label_components: malformed BinMap");
  }
  for (std::uint8_t bin : b.bins) {
    if (bin >= kBinCount) {
      throw std::invalid_argument("label_components: bin index out of range");
    }
  }

  std::vector<std::int32_t> provisional(b.bins.size());
  UnionFind uf;

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      const std::uint8_t bin = b.bins[idx];

      std::int32_t found[3];
      int n = 0;
      if (x > 0 && b.bins[idx - 1] == bin) {
        found[n++] = provisional[idx - 1];  // W
      }
      if (y > 0) {
        if (x > 0 && b.bins[idx - w - 1] == bin) {
          found[n++] = provisional[idx - w - 1];  // NW
        }
        if (b.bins[idx - w] == bin) {
          found[n++] = provisional[idx - w];  // N
        }
      }

      if (n == 0) {
        provisional[idx] = uf.make();
      } else {
        for (int i = 1; i < n; ++i) uf.unite(found[0], found[i]);
        provisional[idx] = uf.find(found[0]);
      }
    }
  }

  // Canonicalize: dense labels in scan order of each root's first pixel.
  LabelResult result;
  result.label_map.width = w;
  result.label_map.height = h;
  result.label_map.labels.resize(b.bins.size());

  std::vector<std::int32_t> canonical(b.bins.size(), -1);
  // For each dense label, where its size counter lives: (bin, slot).
  std::vector<std::pair<std::uint8_t, std::size_t>> slot_of;

  for (std::size_t idx = 0; idx < b.bins.size(); ++idx) {
    const std::int32_t root = uf.find(provisional[idx]);
    std::int32_t dense = canonical[root];
    if (dense < 0) {
      dense = static_cast<std::int32_t>(slot_of.size());
      canonical[root] = dense;
      const std::uint8_t bin = b.bins[idx];
      slot_of.emplace_back(bin, result.table.sizes[bin].size());
      result.table.sizes[bin].push_back(0);
    }
    result.label_map.labels[idx] = dense;
    const auto& [bin, slot] = slot_of[dense];
    ++result.table.sizes[bin][slot];
  }
  return result;
}

std::vector<double> neighborhood_distribution(const ComponentTable& t, int bin) {
  if (bin < 0 || bin >= kBinCount) {
    throw std::invalid_argument("neighborhood_distribution: bin out of range");
  }
  const auto& sizes = t.sizes[bin];
  if (sizes.empty()) {
    throw EmptyBinError("neighborhood_distribution: bin has no pixels");
  }
  const double total = static_cast<double>(t.bin_total(bin));
  std::vector<double> probs(sizes.size());
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    probs[j] = static_cast<double>(sizes[j]) / total;
  }
  return probs;
}

std::array<double, kBinCount> normalized_counts(const ComponentTable& t) {
  const std::int64_t total = t.total_components();
  if (total == 0) {
    throw std::invalid_argument("normalized_counts: all bins empty");
  }
  std::array<double, kBinCount> values{};
  for (int bin = 0; bin < kBinCount; ++bin) {
    values[bin] = static_cast<double>(t.sizes[bin].size()) / static_cast<double>(total);
  }
  return values;
}

}  // namespace cden
