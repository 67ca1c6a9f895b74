#include "flood_fill.hpp"

#include <algorithm>
#include <queue>
#include <utility>

namespace cden::testing {

std::array<std::vector<std::int64_t>, kBinCount> flood_fill_component_sizes(
    const BinMap& b) {
  std::array<std::vector<std::int64_t>, kBinCount> out;
  const int w = b.width;
  const int h = b.height;
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  // Undirected closure of {W, NW, N} from the scan order.
  static constexpr int kOffsets[6][2] = {
      {1, 0}, {-1, 0}, {0, -1}, {0, 1}, {-1, -1}, {1, 1}};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t start = static_cast<std::size_t>(y) * w + x;
      if (seen[start]) continue;
      const int bin = b.at(x, y);
      std::int64_t size = 0;
      std::queue<std::pair<int, int>> q;
      q.emplace(x, y);
      seen[start] = 1;
      while (!q.empty()) {
        auto [cx, cy] = q.front();
        q.pop();
        ++size;
        for (const auto& off : kOffsets) {
          const int nx = cx + off[0];
          const int ny = cy + off[1];
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
          if (seen[ni] || b.at(nx, ny) != bin) continue;
          seen[ni] = 1;
          q.emplace(nx, ny);
        }
      }
      out[static_cast<std::size_t>(bin)].push_back(size);
    }
  }
  for (auto& sizes : out) std::sort(sizes.begin(), sizes.end());
  return out;
}

}  // namespace cden::testing
