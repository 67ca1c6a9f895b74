/*
  (Dis)similarity measures between descriptor records.

  legacy  sum_i min(h_i) * min(E_i)/max(E_i), a similarity in [0, 1]
  d1      2 - (cos h + cos E), for CDE/ICDE records, in [0, 2]
  d2      3 - (cos h + cos E + cos Nb), for DCDEN records, in [0, 3]

  Nb is derived from the stored nb counts at comparison time.
*/

#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "cden/descriptors.hpp"

namespace cden {

enum class Metric { Legacy, D1, D2 };

const char* metric_token(Metric m);
std::optional<Metric> metric_from_token(std::string_view token);

// Whether larger values mean more similar (true only for legacy).
bool metric_is_similarity(Metric m);

// Which descriptor kinds a metric can rank.
bool metric_compatible(Metric m, DescriptorKind kind);

struct Dissimilarity {
  double value = 0.0;
  Metric metric = Metric::D2;
};

// Cosine of the angle between two non-negative vectors, in [0, 1].
// Conventions: both vectors zero -> 1, exactly one zero -> 0.
// Throws std::invalid_argument on length mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

// Min-ratio similarity over histogram and entropy pairs. Both records
// must be CDE or ICDE and share the kind. A bin where both entropies are
// 0 contributes ratio 1; exactly one 0 contributes ratio 0.
Dissimilarity legacy_similarity(const DescriptorRecord& q, const DescriptorRecord& t);

// d1 = 2 - (cos h + cos E) over CDE or ICDE records.
Dissimilarity dissimilarity_icde(const DescriptorRecord& q, const DescriptorRecord& t);

// d2 = 3 - (cos h + cos E + cos Nb) over DCDEN records.
Dissimilarity dissimilarity_dcden(const DescriptorRecord& q, const DescriptorRecord& t);

// Dispatches to the measure selected by `m`.
Dissimilarity compare_records(const DescriptorRecord& q, const DescriptorRecord& t, Metric m);

}  // namespace cden
