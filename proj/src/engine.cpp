#include "cden/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "cden/error.hpp"
#include "cden/neighborhoods.hpp"

namespace cden {

namespace fs = std::filesystem;

namespace {

constexpr const char* kHeaderTag = "CDEN-IDX";
constexpr int kFormatVersion = 1;

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path.string());
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

// Runs fn(i) for i in [0, n), split across hardware threads. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for_n(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::thread::hardware_concurrency();
  workers = std::min(std::max<std::size_t>(workers, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += workers) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

double parse_double_or_throw(std::string_view s, int line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw IndexFormatError("malformed record at line " + std::to_string(line_no) +
                           ": bad float value");
  }
  return v;
}

std::int64_t parse_int_or_throw(std::string_view s, int line_no) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
    throw IndexFormatError("malformed record at line " + std::to_string(line_no) +
                           ": bad integer value");
  }
  return v;
}

// Scores every record against `query`, skipping `exclude` when given.
// Orders ascending for distances, descending for the legacy similarity,
// ties by ascending image_id.
std::vector<RankedEntry> rank_records(const IndexFile& ix, const DescriptorRecord& query,
                                      Metric metric, const std::string* exclude) {
  if (!metric_compatible(metric, ix.kind)) {
    throw std::invalid_argument(std::string("metric ") + metric_token(metric) +
                                " cannot rank a " + kind_token(ix.kind) + " index");
  }
  std::vector<RankedEntry> entries;
  entries.reserve(ix.records.size());
  for (const IndexRecord& r : ix.records) {
    if (exclude && r.image_id == *exclude) continue;
    entries.push_back({r.image_id, compare_records(query, r.record, metric).value});
  }
  const bool descending = metric_is_similarity(metric);
  std::sort(entries.begin(), entries.end(),
            [descending](const RankedEntry& a, const RankedEntry& b) {
              if (a.score != b.score) {
                return descending ? a.score > b.score : a.score < b.score;
              }
              return a.image_id < b.image_id;
            });
  return entries;
}

}  // namespace

BuildResult build_index(const fs::path& image_dir, DescriptorKind kind,
                        std::optional<int> circles) {
  if (circles && *circles < 1) {
    throw std::invalid_argument("build_index: circle count must be >= 1");
  }
  if (!fs::is_directory(image_dir)) {
    throw std::invalid_argument("build_index: not a directory: " + image_dir.string());
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(image_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  // Decode everything up front; CDE/ICDE with automatic circles needs the
  // whole corpus before any descriptor can be extracted.
  std::vector<std::optional<BinMap>> maps(files.size());
  parallel_for_n(files.size(), [&](std::size_t i) {
    try {
      const auto bytes = read_file_bytes(files[i]);
      maps[i] = quantize_image(decode_and_resize(bytes), QuantizationConfig{});
    } catch (const DecodeError&) {
      maps[i] = std::nullopt;
    } catch (const std::runtime_error&) {
      maps[i] = std::nullopt;  // unreadable file
    }
  });

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i]) kept.push_back(i);
  }
  if (kept.empty()) {
    throw EmptyCorpusError("build_index: no decodable images in " + image_dir.string());
  }

  BuildResult result;
  result.skipped_files = files.size() - kept.size();
  result.index.kind = kind;

  int circle_count = 0;
  if (kind_uses_circles(kind)) {
    if (circles) {
      circle_count = *circles;
    } else {
      std::vector<BinMap> corpus;
      corpus.reserve(kept.size());
      for (std::size_t i : kept) corpus.push_back(*maps[i]);
      circle_count = choose_circle_count(corpus);
    }
    result.index.circle_count = circle_count;
  }

  result.index.records.resize(kept.size());
  parallel_for_n(kept.size(), [&](std::size_t j) {
    const std::size_t i = kept[j];
    IndexRecord& rec = result.index.records[j];
    rec.image_id = files[i].lexically_relative(image_dir).generic_string();
    rec.record = extract_descriptor(*maps[i], kind, circle_count);
  });

  std::sort(result.index.records.begin(), result.index.records.end(),
            [](const IndexRecord& a, const IndexRecord& b) {
              return a.image_id < b.image_id;
            });
  return result;
}

DescriptorRecord describe_image_file(const fs::path& image, const IndexFile& ix) {
  const auto bytes = read_file_bytes(image);
  const BinMap map = quantize_image(decode_and_resize(bytes), ix.quantization);
  return extract_descriptor(map, ix.kind, ix.circle_count.value_or(0));
}

void save_index(const IndexFile& ix, const fs::path& path) {
  if (ix.quantization.total_bins() != kBinCount) {
    throw std::invalid_argument("save_index: index must use the 32-bin quantization");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("save_index: cannot open for writing: " + path.string());
  }

  out << kHeaderTag << ' ' << kFormatVersion << ' ' << kind_token(ix.kind) << ' ';
  if (ix.circle_count) {
    out << *ix.circle_count;
  } else {
    out << '-';
  }
  out << ' ' << kBinCount << '\n';

  for (const IndexRecord& r : ix.records) {
    if (r.image_id.empty() ||
        r.image_id.find_first_of("\t\n\r") != std::string::npos) {
      throw std::invalid_argument("save_index: image_id must be non-empty and "
                                  "free of tabs and line breaks: " + r.image_id);
    }
    out << r.image_id << '\t';
    for (int i = 0; i < kBinCount; ++i) {
      out << (i ? "," : "") << format_double(r.record.h[i]);
    }
    out << '\t';
    for (int i = 0; i < kBinCount; ++i) {
      out << (i ? "," : "") << format_double(r.record.entropy[i]);
    }
    out << '\t';
    for (int i = 0; i < kBinCount; ++i) {
      out << (i ? "," : "") << r.record.nb[i];
    }
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("save_index: write failed: " + path.string());
  }
}

IndexFile load_index(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_index: cannot open: " + path.string());
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw IndexFormatError("load_index: empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split(line, ' ');
  if (header.size() != 5 || header[0] != kHeaderTag) {
    throw IndexFormatError("load_index: bad header tag");
  }
  if (header[1] != std::to_string(kFormatVersion)) {
    throw IndexVersionError("load_index: unsupported format version '" +
                            std::string(header[1]) + "'");
  }
  const auto kind = kind_from_token(header[2]);
  if (!kind) {
    throw IndexKindError("load_index: unknown descriptor kind '" +
                         std::string(header[2]) + "'");
  }
  if (header[4] != "32") {
    throw IndexFormatError("load_index: unsupported bin count '" +
                           std::string(header[4]) + "'");
  }

  IndexFile ix;
  ix.kind = *kind;
  if (header[3] == "-") {
    if (kind_uses_circles(*kind)) {
      throw IndexFormatError("load_index: " + std::string(header[2]) +
                             " index requires a circle count");
    }
  } else {
    if (!kind_uses_circles(*kind)) {
      throw IndexFormatError("load_index: " + std::string(header[2]) +
                             " index must not carry a circle count");
    }
    const std::int64_t circles = parse_int_or_throw(header[3], 1);
    if (circles < 1) {
      throw IndexFormatError("load_index: circle count must be positive");
    }
    ix.circle_count = static_cast<int>(circles);
  }

  std::unordered_set<std::string> seen_ids;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto fields = split(line, '\t');
    if (fields.size() != 4 || fields[0].empty()) {
      throw IndexFormatError("malformed record at line " + std::to_string(line_no) +
                             ": expected 4 tab-separated fields");
    }

    IndexRecord rec;
    rec.image_id = std::string(fields[0]);
    rec.record.kind = *kind;

    const auto parse_vec = [&](std::string_view field, auto& dst, auto parse) {
      const auto parts = split(field, ',');
      if (parts.size() != static_cast<std::size_t>(kBinCount)) {
        throw IndexFormatError("malformed record at line " + std::to_string(line_no) +
                               ": expected " + std::to_string(kBinCount) +
                               " values, got " + std::to_string(parts.size()));
      }
      for (int i = 0; i < kBinCount; ++i) {
        dst[i] = parse(parts[i], line_no);
      }
    };
    parse_vec(fields[1], rec.record.h, parse_double_or_throw);
    parse_vec(fields[2], rec.record.entropy, parse_double_or_throw);
    parse_vec(fields[3], rec.record.nb, parse_int_or_throw);

    if (!seen_ids.insert(rec.image_id).second) {
      throw IndexFormatError("malformed record at line " + std::to_string(line_no) +
                             ": duplicate image_id '" + rec.image_id + "'");
    }
    ix.records.push_back(std::move(rec));
  }

  std::sort(ix.records.begin(), ix.records.end(),
            [](const IndexRecord& a, const IndexRecord& b) {
              return a.image_id < b.image_id;
            });
  return ix;
}

std::vector<RankedEntry> query_topk(const IndexFile& ix, const DescriptorRecord& query,
                                    std::size_t k, Metric metric) {
  std::vector<RankedEntry> entries = rank_records(ix, query, metric, nullptr);
  if (entries.size() > k) entries.resize(k);
  return entries;
}

std::vector<PrPoint> precision_recall(const std::vector<RankedEntry>& ranked,
                                      const std::set<std::string>& relevant,
                                      std::size_t ni) {
  if (ni == 0) {
    throw std::invalid_argument("precision_recall: Ni must be >= 1");
  }
  if (relevant.empty()) {
    throw std::invalid_argument("precision_recall: relevant set is empty");
  }
  std::vector<PrPoint> points;
  points.reserve(ranked.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (relevant.count(ranked[i].image_id)) ++r;
    const std::size_t nr = i + 1;
    points.push_back({nr, static_cast<double>(r) / static_cast<double>(nr),
                      static_cast<double>(r) / static_cast<double>(ni)});
  }
  return points;
}

EvalReport evaluate_protocol(const IndexFile& ix,
                             const std::map<std::string, std::string>& labels,
                             const std::vector<std::string>& queries, Metric metric) {
  if (queries.empty()) {
    throw std::invalid_argument("evaluate_protocol: no queries");
  }

  EvalReport report;
  report.queries.resize(queries.size());

  parallel_for_n(queries.size(), [&](std::size_t qi) {
    const std::string& query_id = queries[qi];
    const auto rec_it =
        std::find_if(ix.records.begin(), ix.records.end(),
                     [&](const IndexRecord& r) { return r.image_id == query_id; });
    if (rec_it == ix.records.end()) {
      throw std::invalid_argument("evaluate_protocol: query not in index: " + query_id);
    }
    const auto label_it = labels.find(query_id);
    if (label_it == labels.end()) {
      throw std::invalid_argument("evaluate_protocol: query has no label: " + query_id);
    }

    // Relevant = other images of the query's category present in the index.
    std::set<std::string> relevant;
    for (const IndexRecord& r : ix.records) {
      if (r.image_id == query_id) continue;
      const auto it = labels.find(r.image_id);
      if (it != labels.end() && it->second == label_it->second) {
        relevant.insert(r.image_id);
      }
    }
    if (relevant.empty()) {
      throw std::invalid_argument(
          "evaluate_protocol: no relevant targets for query " + query_id +
          " after self-exclusion");
    }

    const auto ranked = rank_records(ix, rec_it->record, metric, &query_id);
    report.queries[qi] = {query_id, precision_recall(ranked, relevant, relevant.size())};
  });

  // Aggregate: interpolated precision on a fixed 11-point recall grid.
  for (int level = 0; level <= 10; ++level) {
    report.recall_levels.push_back(level / 10.0);
  }
  report.mean_precision.assign(report.recall_levels.size(), 0.0);
  for (const QueryCurve& curve : report.queries) {
    for (std::size_t li = 0; li < report.recall_levels.size(); ++li) {
      double best = 0.0;
      for (const PrPoint& p : curve.points) {
        if (p.recall >= report.recall_levels[li] - 1e-12) {
          best = std::max(best, p.precision);
        }
      }
      report.mean_precision[li] += best;
    }
  }
  for (double& v : report.mean_precision) {
    v /= static_cast<double>(report.queries.size());
  }
  return report;
}

double mean_precision_at_cutoff(const EvalReport& report, std::size_t cutoff) {
  if (cutoff == 0 || report.queries.empty()) {
    throw std::invalid_argument("mean_precision_at_cutoff: bad arguments");
  }
  double sum = 0.0;
  for (const QueryCurve& curve : report.queries) {
    if (cutoff > curve.points.size()) {
      throw std::invalid_argument("mean_precision_at_cutoff: cutoff beyond curve for " +
                                  curve.query_id);
    }
    sum += curve.points[cutoff - 1].precision;
  }
  return sum / static_cast<double>(report.queries.size());
}

std::map<std::string, std::string> load_labels_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_labels_csv: cannot open: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("load_labels_csv: empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "image_id,category") {
    throw std::invalid_argument("load_labels_csv: expected header image_id,category");
  }

  std::map<std::string, std::string> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 >= line.size()) {
      throw std::invalid_argument("load_labels_csv: malformed row at line " +
                                  std::to_string(line_no));
    }
    labels[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return labels;
}

void write_eval_csv(const EvalReport& report, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_eval_csv: cannot open for writing: " + path.string());
  }
  out << "query_id,cutoff,precision,recall\n";
  for (const QueryCurve& curve : report.queries) {
    for (const PrPoint& p : curve.points) {
      out << curve.query_id << ',' << p.cutoff << ',' << format_short(p.precision)
          << ',' << format_short(p.recall) << '\n';
    }
  }
  out << "recall_level,mean_precision\n";
  for (std::size_t i = 0; i < report.recall_levels.size(); ++i) {
    out << format_short(report.recall_levels[i]) << ','
        << format_short(report.mean_precision[i]) << '\n';
  }
}

void write_compare_csv(const EvalReport& dcden_report, const EvalReport& icde_report,
                       const fs::path& path) {
  if (dcden_report.recall_levels != icde_report.recall_levels) {
    throw std::invalid_argument("write_compare_csv: recall grids differ");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_compare_csv: cannot open for writing: " +
                             path.string());
  }
  out << "recall_level,mean_precision_dcden_d2,mean_precision_icde_d1\n";
  for (std::size_t i = 0; i < dcden_report.recall_levels.size(); ++i) {
    out << format_short(dcden_report.recall_levels[i]) << ','
        << format_short(dcden_report.mean_precision[i]) << ','
        << format_short(icde_report.mean_precision[i]) << '\n';
  }

  // Per-cutoff means; both protocols rank the same corpus, so the curves
  // have equal length.
  std::size_t cutoffs = 0;
  if (!dcden_report.queries.empty()) {
    cutoffs = dcden_report.queries.front().points.size();
  }
  out << "cutoff,mean_precision_dcden_d2,mean_precision_icde_d1\n";
  for (std::size_t c = 1; c <= cutoffs; ++c) {
    out << c << ',' << format_short(mean_precision_at_cutoff(dcden_report, c)) << ','
        << format_short(mean_precision_at_cutoff(icde_report, c)) << '\n';
  }
}

}  // namespace cden
