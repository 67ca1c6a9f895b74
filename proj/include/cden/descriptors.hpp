/*
  Entropy descriptors over the 32-bin color space.

  Four descriptor kinds share one record layout:
    HIST   normalized histogram only
    CDE    Shannon entropy of each bin's annular distribution
    ICDE   position- and area-weighted entropy of the annular distribution
    DCDEN  Shannon entropy of each bin's neighborhood-size distribution,
           plus the per-bin neighborhood counts
*/

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "cden/image.hpp"

namespace cden {

enum class DescriptorKind { Hist, Cde, Icde, Dcden };

// Uppercase token used in the index file format.
const char* kind_token(DescriptorKind kind);
std::optional<DescriptorKind> kind_from_token(std::string_view token);
bool kind_uses_circles(DescriptorKind kind);

struct DescriptorRecord {
  DescriptorKind kind = DescriptorKind::Hist;
  std::array<double, kBinCount> h{};         // normalized histogram, sums to 1
  std::array<double, kBinCount> entropy{};   // E, 0 for empty bins and for HIST
  std::array<std::int64_t, kBinCount> nb{};  // neighborhood counts, DCDEN only

  bool operator==(const DescriptorRecord&) const = default;
};

// -sum p_j log2 p_j with 0 log2 0 := 0.
// Throws std::invalid_argument unless p is non-negative and sums to 1
// within 1e-9.
double shannon_entropy(std::span<const double> p);

// Weighted entropy -g(p) * sum f(j) p_j log2 p_j with f(j) = 1 + j/N,
// g(p) = 1 + A(p)/N and A(p) = sum j * p_j (j = 1..N). Position weights
// make this sensitive to which ring holds the mass, unlike
// shannon_entropy. Requires circles == len(p).
double improved_entropy(std::span<const double> p, int circles);

// Builds the full record for one image. `circles` is required (>= 1) for
// CDE and ICDE and ignored otherwise. Empty bins get h = 0, entropy = 0,
// nb = 0.
DescriptorRecord extract_descriptor(const BinMap& b, DescriptorKind kind,
                                    int circles = 0);

// Corpus-level circle count: the per-image mean of nb_i over non-empty
// bins, averaged over all images, rounded half-up and clamped to >= 1.
// Throws std::invalid_argument on an empty corpus.
int choose_circle_count(std::span<const BinMap> corpus);

}  // namespace cden
