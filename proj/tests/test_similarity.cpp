/*
  Measure tests: cosine conventions, the legacy min-ratio similarity, the
  two cosine dissimilarities, metric/kind compatibility, and symmetry /
  range / identity properties on random records.

  Frozen expectations:
    legacy example                       = 0.45
    d1 with cos(h)=1, cos(E)=1/sqrt(2)   = 0.29289321881345254
*/

#include <doctest.h>

#include <random>
#include <stdexcept>

#include "cden/similarity.hpp"
#include "synthetic.hpp"

using namespace cden;
using cden::testing::random_record;

namespace {

DescriptorRecord two_bin_record(DescriptorKind kind, double h0, double h1,
                                double e0, double e1) {
  DescriptorRecord rec;
  rec.kind = kind;
  rec.h[0] = h0;
  rec.h[1] = h1;
  rec.entropy[0] = e0;
  rec.entropy[1] = e1;
  if (kind == DescriptorKind::Dcden) {
    rec.nb[0] = 1;
    rec.nb[1] = 1;
  }
  return rec;
}

}  // namespace

TEST_CASE("cosine follows the zero-vector conventions") {
  const double a[] = {1.0, 2.0, 3.0};
  const double b[] = {2.0, 4.0, 6.0};
  CHECK(cosine(a, b) == doctest::Approx(1.0).epsilon(1e-12));

  const double x[] = {1.0, 0.0};
  const double y[] = {0.0, 1.0};
  CHECK(cosine(x, y) == 0.0);

  const double zero[] = {0.0, 0.0};
  CHECK(cosine(zero, zero) == 1.0);
  CHECK(cosine(zero, x) == 0.0);
  CHECK(cosine(x, zero) == 0.0);

  CHECK(cosine(a, a) <= 1.0);  // clamped against rounding drift

  const double shorter[] = {1.0};
  CHECK_THROWS_AS(cosine(a, shorter), std::invalid_argument);
}

TEST_CASE("legacy similarity matches the worked example") {
  // sum min(h) * min(E)/max(E) = 0.4 * 0.5 + 0.5 * 0.5 = 0.45
  const auto q = two_bin_record(DescriptorKind::Cde, 0.5, 0.5, 1.0, 2.0);
  const auto t = two_bin_record(DescriptorKind::Cde, 0.4, 0.6, 2.0, 1.0);
  const Dissimilarity s = legacy_similarity(q, t);
  CHECK(s.metric == Metric::Legacy);
  CHECK(s.value == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(legacy_similarity(t, q).value == s.value);
}

TEST_CASE("legacy similarity entropy-ratio conventions") {
  SUBCASE("both entropies zero counts fully") {
    const auto q = two_bin_record(DescriptorKind::Icde, 0.5, 0.5, 0.0, 0.0);
    const auto t = two_bin_record(DescriptorKind::Icde, 0.5, 0.5, 0.0, 0.0);
    CHECK(legacy_similarity(q, t).value == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("exactly one zero entropy contributes nothing") {
    const auto q = two_bin_record(DescriptorKind::Cde, 0.5, 0.5, 0.0, 2.0);
    const auto t = two_bin_record(DescriptorKind::Cde, 0.5, 0.5, 1.0, 2.0);
    // Bin 0 drops out; bin 1 contributes min(h)=0.5 with ratio 1.
    CHECK(legacy_similarity(q, t).value == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("legacy similarity of a record with itself is 1") {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    const auto q = random_record(rng, DescriptorKind::Cde);
    CHECK(legacy_similarity(q, q).value == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("legacy similarity rejects unsuitable kinds") {
  const auto cde = two_bin_record(DescriptorKind::Cde, 0.5, 0.5, 1.0, 1.0);
  const auto icde = two_bin_record(DescriptorKind::Icde, 0.5, 0.5, 1.0, 1.0);
  const auto hist = two_bin_record(DescriptorKind::Hist, 0.5, 0.5, 0.0, 0.0);
  const auto dcden = two_bin_record(DescriptorKind::Dcden, 0.5, 0.5, 1.0, 1.0);

  CHECK_THROWS_AS(legacy_similarity(cde, icde), std::invalid_argument);
  CHECK_THROWS_AS(legacy_similarity(hist, hist), std::invalid_argument);
  CHECK_THROWS_AS(legacy_similarity(dcden, dcden), std::invalid_argument);
}

TEST_CASE("d1 matches the frozen example") {
  // Identical histograms, E = (1,0) vs (1,1): d1 = 2 - 1 - 1/sqrt(2).
  const auto q = two_bin_record(DescriptorKind::Icde, 0.5, 0.5, 1.0, 0.0);
  const auto t = two_bin_record(DescriptorKind::Icde, 0.5, 0.5, 1.0, 1.0);
  const Dissimilarity d = dissimilarity_icde(q, t);
  CHECK(d.metric == Metric::D1);
  CHECK(d.value == doctest::Approx(0.29289321881345254).epsilon(1e-12));
}

TEST_CASE("d2 separates neighborhood structure") {
  // Same histograms and entropies; only the neighborhood counts differ.
  auto q = two_bin_record(DescriptorKind::Dcden, 0.5, 0.5, 1.0, 1.0);
  auto t = q;
  q.nb = {};
  t.nb = {};
  q.nb[0] = 1;
  q.nb[1] = 4;
  t.nb[0] = 1;
  t.nb[1] = 2;
  const Dissimilarity d = dissimilarity_dcden(q, t);
  CHECK(d.metric == Metric::D2);
  // cos h = cos E = 1; cos Nb = (1/5*1/3 + 4/5*2/3) / (|..||..|)
  const double cos_nb =
      (0.2 * (1.0 / 3.0) + 0.8 * (2.0 / 3.0)) /
      (std::hypot(0.2, 0.8) * std::hypot(1.0 / 3.0, 2.0 / 3.0));
  CHECK(d.value == doctest::Approx(3.0 - 2.0 - cos_nb).epsilon(1e-12));
}

TEST_CASE("disjoint supports are maximally distant") {
  DescriptorRecord q;
  q.kind = DescriptorKind::Dcden;
  q.h[0] = 1.0;
  q.entropy[0] = 2.0;
  q.nb[0] = 3;
  DescriptorRecord t;
  t.kind = DescriptorKind::Dcden;
  t.h[1] = 1.0;
  t.entropy[1] = 2.0;
  t.nb[1] = 3;
  CHECK(dissimilarity_dcden(q, t).value == doctest::Approx(3.0).epsilon(1e-12));

  DescriptorRecord qe = q;
  qe.kind = DescriptorKind::Cde;
  DescriptorRecord te = t;
  te.kind = DescriptorKind::Cde;
  CHECK(dissimilarity_icde(qe, te).value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dissimilarities reject incompatible kinds") {
  const auto cde = two_bin_record(DescriptorKind::Cde, 0.5, 0.5, 1.0, 1.0);
  const auto icde = two_bin_record(DescriptorKind::Icde, 0.5, 0.5, 1.0, 1.0);
  const auto hist = two_bin_record(DescriptorKind::Hist, 0.5, 0.5, 0.0, 0.0);
  const auto dcden = two_bin_record(DescriptorKind::Dcden, 0.5, 0.5, 1.0, 1.0);

  CHECK_THROWS_AS(dissimilarity_icde(cde, icde), std::invalid_argument);
  CHECK_THROWS_AS(dissimilarity_icde(hist, hist), std::invalid_argument);
  CHECK_THROWS_AS(dissimilarity_icde(dcden, dcden), std::invalid_argument);
  CHECK_THROWS_AS(dissimilarity_dcden(cde, cde), std::invalid_argument);
  CHECK_THROWS_AS(dissimilarity_dcden(hist, dcden), std::invalid_argument);
}

TEST_CASE("metric dispatch and tokens") {
  const auto q = two_bin_record(DescriptorKind::Cde, 0.5, 0.5, 1.0, 2.0);
  const auto t = two_bin_record(DescriptorKind::Cde, 0.4, 0.6, 2.0, 1.0);
  CHECK(compare_records(q, t, Metric::Legacy).value ==
        legacy_similarity(q, t).value);
  CHECK(compare_records(q, t, Metric::D1).value == dissimilarity_icde(q, t).value);

  CHECK(metric_from_token("legacy") == Metric::Legacy);
  CHECK(metric_from_token("d1") == Metric::D1);
  CHECK(metric_from_token("d2") == Metric::D2);
  CHECK(!metric_from_token("d3"));
  for (Metric m : {Metric::Legacy, Metric::D1, Metric::D2}) {
    CHECK(metric_from_token(metric_token(m)) == m);
  }
  CHECK(metric_is_similarity(Metric::Legacy));
  CHECK(!metric_is_similarity(Metric::D1));
  CHECK(!metric_is_similarity(Metric::D2));
}

TEST_CASE("metric compatibility matrix") {
  const DescriptorKind kinds[] = {DescriptorKind::Hist, DescriptorKind::Cde,
                                  DescriptorKind::Icde, DescriptorKind::Dcden};
  for (DescriptorKind kind : kinds) {
    const bool entropy_kind =
        kind == DescriptorKind::Cde || kind == DescriptorKind::Icde;
    CHECK(metric_compatible(Metric::Legacy, kind) == entropy_kind);
    CHECK(metric_compatible(Metric::D1, kind) == entropy_kind);
    CHECK(metric_compatible(Metric::D2, kind) == (kind == DescriptorKind::Dcden));
  }
}

TEST_CASE("measures are symmetric, bounded, and zero on identity") {
  std::mt19937 rng(77);
  for (int i = 0; i < 500; ++i) {
    const auto q = random_record(rng, DescriptorKind::Icde);
    const auto t = random_record(rng, DescriptorKind::Icde);
    const double qt = dissimilarity_icde(q, t).value;
    CHECK(qt == dissimilarity_icde(t, q).value);  // exact symmetry
    CHECK(qt >= 0.0);
    CHECK(qt <= 2.0);
    CHECK(dissimilarity_icde(q, q).value <= 1e-12);

    const double lv = legacy_similarity(q, t).value;
    CHECK(lv == legacy_similarity(t, q).value);
    CHECK(lv >= 0.0);
    CHECK(lv <= 1.0 + 1e-12);
  }
  for (int i = 0; i < 500; ++i) {
    const auto q = random_record(rng, DescriptorKind::Dcden);
    const auto t = random_record(rng, DescriptorKind::Dcden);
    const double qt = dissimilarity_dcden(q, t).value;
    CHECK(qt == dissimilarity_dcden(t, q).value);
    CHECK(qt >= 0.0);
    CHECK(qt <= 3.0);
    CHECK(dissimilarity_dcden(q, q).value <= 1e-12);
  }
}
