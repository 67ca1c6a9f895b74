#include "cden/descriptors.hpp"

#include <cmath>
#include <stdexcept>

#include "cden/annular.hpp"
#include "cden/neighborhoods.hpp"

namespace cden {

namespace {

constexpr double kNormTolerance = 1e-9;

void check_distribution(std::span<const double> p) {
  if (p.empty()) {
    throw std::invalid_argument("entropy: empty distribution");
  }
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument("entropy: negative probability");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    throw std::invalid_argument("entropy: distribution does not sum to 1");
  }
}

}  // namespace

const char* kind_token(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::Hist:
      return "HIST";
    case DescriptorKind::Cde:
      return "CDE";
    case DescriptorKind::Icde:
      return "ICDE";
    case DescriptorKind::Dcden:
      return "DCDEN";
  }
  return "?";
}

std::optional<DescriptorKind> kind_from_token(std::string_view token) {
  if (token == "HIST") return DescriptorKind::Hist;
  if (token == "CDE") return DescriptorKind::Cde;
  if (token == "ICDE") return DescriptorKind::Icde;
  if (token == "DCDEN") return DescriptorKind::Dcden;
  return std::nullopt;
}

bool kind_uses_circles(DescriptorKind kind) {
  return kind == DescriptorKind::Cde || kind == DescriptorKind::Icde;
}

double shannon_entropy(std::span<const double> p) {
  check_distribution(p);
  double e = 0.0;
  for (double v : p) {
    if (v > 0.0) e -= v * std::log2(v);
  }
  return e;
}

double improved_entropy(std::span<const double> p, int circles) {
  check_distribution(p);
  if (circles != static_cast<int>(p.size())) {
    throw std::invalid_argument("improved_entropy: circles must equal len(p)");
  }
  const double n = static_cast<double>(circles);

  double area = 0.0;  // A(p) = sum j * p_j
  for (std::size_t j = 0; j < p.size(); ++j) {
    area += p[j] * static_cast<double>(j + 1);
  }
  const double g = 1.0 + area / n;

  double weighted = 0.0;  // sum f(j) p_j log2 p_j
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) {
      const double f = 1.0 + static_cast<double>(j + 1) / n;
      weighted += f * p[j] * std::log2(p[j]);
    }
  }
  return -g * weighted;
}

DescriptorRecord extract_descriptor(const BinMap& b, DescriptorKind kind,
                                    int circles) {
  if (kind_uses_circles(kind) && circles < 1) {
    throw std::invalid_argument("extract_descriptor: circle count required");
  }
  if (b.pixel_count() == 0) {
    throw std::invalid_argument("extract_descriptor: empty BinMap");
  }

  DescriptorRecord rec;
  rec.kind = kind;

  std::array<std::int64_t, kBinCount> counts{};
  for (std::uint8_t bin : b.bins) {
    if (bin >= kBinCount) {
      throw std::invalid_argument("extract_descriptor: bin index out of range");
    }
    ++counts[bin];
  }
  const double total = static_cast<double>(b.pixel_count());
  for (int i = 0; i < kBinCount; ++i) {
    rec.h[i] = static_cast<double>(counts[i]) / total;
  }

  switch (kind) {
    case DescriptorKind::Hist:
      break;
    case DescriptorKind::Cde:
    case DescriptorKind::Icde:
      for (int i = 0; i < kBinCount; ++i) {
        if (counts[i] == 0) continue;
        const BinGeometry g = bin_geometry(b, i);
        const std::vector<double> rings = annular_distribution(b, g, circles);
        rec.entropy[i] = kind == DescriptorKind::Cde
                             ? shannon_entropy(rings)
                             : improved_entropy(rings, circles);
      }
      break;
    case DescriptorKind::Dcden: {
      const LabelResult labeled = label_components(b);
      for (int i = 0; i < kBinCount; ++i) {
        if (counts[i] == 0) continue;
        rec.entropy[i] = shannon_entropy(neighborhood_distribution(labeled.table, i));
        rec.nb[i] = labeled.table.neighborhood_count(i);
      }
      break;
    }
  }
  return rec;
}

int choose_circle_count(std::span<const BinMap> corpus) {
  if (corpus.empty()) {
    throw std::invalid_argument("choose_circle_count: empty corpus");
  }
  double sum_of_means = 0.0;
  for (const BinMap& b : corpus) {
    const LabelResult labeled = label_components(b);
    std::int64_t components = 0;
    int non_empty = 0;
    for (int i = 0; i < kBinCount; ++i) {
      const int nb = labeled.table.neighborhood_count(i);
      if (nb > 0) {
        components += nb;
        ++non_empty;
      }
    }
    // A non-empty image always has at least one non-empty bin.
    sum_of_means += static_cast<double>(components) / non_empty;
  }
  const double mean = sum_of_means / static_cast<double>(corpus.size());
  const int n = static_cast<int>(std::floor(mean + 0.5));  // round half-up
  return std::max(1, n);
}

}  // namespace cden
