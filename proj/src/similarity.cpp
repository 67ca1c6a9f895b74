#include "cden/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cden {

namespace {

void require_kinds(const DescriptorRecord& q, const DescriptorRecord& t,
                   bool (*accepts)(DescriptorKind), const char* measure) {
  if (q.kind != t.kind || !accepts(q.kind)) {
    throw std::invalid_argument(std::string(measure) + ": incompatible descriptor kinds");
  }
}

bool is_entropy_kind(DescriptorKind k) {
  return k == DescriptorKind::Cde || k == DescriptorKind::Icde;
}

bool is_dcden_kind(DescriptorKind k) { return k == DescriptorKind::Dcden; }

}  // namespace

const char* metric_token(Metric m) {
  switch (m) {
    case Metric::Legacy:
      return "legacy";
    case Metric::D1:
      return "d1";
    case Metric::D2:
      return "d2";
  }
  return "?";
}

std::optional<Metric> metric_from_token(std::string_view token) {
  if (token == "legacy") return Metric::Legacy;
  if (token == "d1") return Metric::D1;
  if (token == "d2") return Metric::D2;
  return std::nullopt;
}

bool metric_is_similarity(Metric m) { return m == Metric::Legacy; }

bool metric_compatible(Metric m, DescriptorKind kind) {
  switch (m) {
    case Metric::Legacy:
    case Metric::D1:
      return is_entropy_kind(kind);
    case Metric::D2:
      return is_dcden_kind(kind);
  }
  return false;
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("cosine: length mismatch");
  }
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 && vv == 0.0) return 1.0;
  if (uu == 0.0 || vv == 0.0) return 0.0;
  const double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, 0.0, 1.0);
}

Dissimilarity legacy_similarity(const DescriptorRecord& q, const DescriptorRecord& t) {
  require_kinds(q, t, is_entropy_kind, "legacy_similarity");
  double sim = 0.0;
  for (int i = 0; i < kBinCount; ++i) {
    const double eq = q.entropy[i];
    const double et = t.entropy[i];
    double ratio;
    if (eq == 0.0 && et == 0.0) {
      ratio = 1.0;
    } else if (eq == 0.0 || et == 0.0) {
      ratio = 0.0;
    } else {
      ratio = std::min(eq, et) / std::max(eq, et);
    }
    sim += std::min(q.h[i], t.h[i]) * ratio;
  }
  return {sim, Metric::Legacy};
}

Dissimilarity dissimilarity_icde(const DescriptorRecord& q, const DescriptorRecord& t) {
  require_kinds(q, t, is_entropy_kind, "dissimilarity_icde");
  const double cos_h = cosine(q.h, t.h);
  const double cos_e = cosine(q.entropy, t.entropy);
  return {2.0 - cos_h - cos_e, Metric::D1};
}

Dissimilarity dissimilarity_dcden(const DescriptorRecord& q, const DescriptorRecord& t) {
  require_kinds(q, t, is_dcden_kind, "dissimilarity_dcden");

  // Nb_i = nb_i / sum_j nb_j, derived from the persisted counts.
  auto normalized = [](const DescriptorRecord& r) {
    std::array<double, kBinCount> nb{};
    std::int64_t total = 0;
    for (std::int64_t n : r.nb) total += n;
    if (total > 0) {
      for (int i = 0; i < kBinCount; ++i) {
        nb[i] = static_cast<double>(r.nb[i]) / static_cast<double>(total);
      }
    }
    return nb;
  };
  const auto nb_q = normalized(q);
  const auto nb_t = normalized(t);

  const double cos_h = cosine(q.h, t.h);
  const double cos_e = cosine(q.entropy, t.entropy);
  const double cos_n = cosine(nb_q, nb_t);
  return {3.0 - cos_h - cos_e - cos_n, Metric::D2};
}

Dissimilarity compare_records(const DescriptorRecord& q, const DescriptorRecord& t, Metric m) {
  switch (m) {
    case Metric::Legacy:
      return legacy_similarity(q, t);
    case Metric::D1:
      return dissimilarity_icde(q, t);
    case Metric::D2:
      return dissimilarity_dcden(q, t);
  }
  throw std::invalid_argument("compare_records: unknown metric");
}

}  // namespace cden
