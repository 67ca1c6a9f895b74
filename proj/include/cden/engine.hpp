/*
  Corpus indexing, persistence, ranked querying and precision/recall
  evaluation.

  Index file format (UTF-8, LF):
    line 1:  CDEN-IDX 1 <kind> <circles|-> 32
    records: <image_id> TAB h0,..,h31 TAB E0,..,E31 TAB nb0,..,nb31
  Floats are written with 17 significant digits so a save/load round trip
  is bit-exact.
*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cden/descriptors.hpp"
#include "cden/similarity.hpp"

namespace cden {

struct IndexRecord {
  std::string image_id;  // path relative to the indexed directory
  DescriptorRecord record;

  bool operator==(const IndexRecord&) const = default;
};

struct IndexFile {
  DescriptorKind kind = DescriptorKind::Dcden;
  std::optional<int> circle_count;  // present for CDE/ICDE only
  QuantizationConfig quantization;
  std::vector<IndexRecord> records;  // sorted by image_id, ids unique
};

struct BuildResult {
  IndexFile index;
  std::size_t skipped_files = 0;  // undecodable entries in the directory
};

// Scans `image_dir` recursively, decodes every regular file it can, and
// extracts one record per image. `circles` empty means the corpus-wide
// automatic choice (choose_circle_count) for CDE/ICDE; it is ignored for
// HIST/DCDEN. Undecodable files are skipped and counted.
// Throws EmptyCorpusError when nothing decodes.
BuildResult build_index(const std::filesystem::path& image_dir, DescriptorKind kind,
                        std::optional<int> circles = std::nullopt);

void save_index(const IndexFile& ix, const std::filesystem::path& path);

// Throws IndexFormatError / IndexVersionError / IndexKindError; malformed
// record messages name the offending line.
IndexFile load_index(const std::filesystem::path& path);

// Extracts a query descriptor compatible with the index (same kind,
// quantization and circle count).
DescriptorRecord describe_image_file(const std::filesystem::path& image,
                                     const IndexFile& ix);

struct RankedEntry {
  std::string image_id;
  double score;  // metric value: distance for d1/d2, similarity for legacy
};

// Linear scan of the whole index. Entries are sorted ascending for d1/d2
// and descending for legacy, ties broken by ascending image_id; at most
// min(k, corpus size) entries are returned.
// Throws std::invalid_argument when the metric cannot rank ix.kind.
std::vector<RankedEntry> query_topk(const IndexFile& ix, const DescriptorRecord& query,
                                    std::size_t k, Metric metric);

struct PrPoint {
  std::size_t cutoff = 0;  // Nr
  double precision = 0.0;  // r / Nr
  double recall = 0.0;     // r / Ni
};

// One point per cutoff 1..len(ranked).
// Throws std::invalid_argument when ni == 0 or relevant is empty.
std::vector<PrPoint> precision_recall(const std::vector<RankedEntry>& ranked,
                                      const std::set<std::string>& relevant,
                                      std::size_t ni);

struct QueryCurve {
  std::string query_id;
  std::vector<PrPoint> points;
};

struct EvalReport {
  std::vector<QueryCurve> queries;
  // Aggregate curve: interpolated mean precision on a fixed recall grid,
  // identical across runs so reports are directly comparable.
  std::vector<double> recall_levels;
  std::vector<double> mean_precision;
};

// Per-category query protocol: for each query, relevant = all other
// images of the query's category; the query itself is excluded from both
// candidates and Ni. Every query must be present in the index and the
// label table and must have at least one relevant target.
EvalReport evaluate_protocol(const IndexFile& ix,
                             const std::map<std::string, std::string>& labels,
                             const std::vector<std::string>& queries, Metric metric);

// Mean over queries of precision at one cutoff (every protocol query
// ranks the same number of candidates).
double mean_precision_at_cutoff(const EvalReport& report, std::size_t cutoff);

// CSV with header image_id,category.
std::map<std::string, std::string> load_labels_csv(const std::filesystem::path& path);

// Per-query points followed by the aggregate recall_level,mean_precision
// section.
void write_eval_csv(const EvalReport& report, const std::filesystem::path& path);

// Both aggregate curves side by side on the shared recall grid, followed
// by mean precision per cutoff for both methods.
void write_compare_csv(const EvalReport& dcden_report, const EvalReport& icde_report,
                       const std::filesystem::path& path);

}  // namespace cden
