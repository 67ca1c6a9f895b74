/*
  cden: build, query and evaluate spatial color descriptor indexes.

  Subcommands:
    index    extract descriptors for a directory of images and save them
    query    rank indexed images against a query image
    eval     run the per-category precision/recall protocol
    compare  evaluate DCDEN/d2 against ICDE/d1 on one corpus

  Exit codes: 0 success, 1 engine/data error, 2 usage error.
*/

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cden/engine.hpp"
#include "cden/error.hpp"

namespace {

struct Options {
  std::string images;
  std::string out;
  std::string kind = "dcden";
  std::string circles = "auto";
  std::string index;
  std::string image;
  std::string labels;
  std::string queries = "all";
  std::string metric;
  std::size_t top = 0;
};

std::optional<int> parse_circles(const std::string& s) {
  if (s == "auto") return std::nullopt;
  return std::stoi(s);  // validated by the CLI layer
}

cden::DescriptorKind parse_kind(const std::string& s) {
  if (s == "hist") return cden::DescriptorKind::Hist;
  if (s == "cde") return cden::DescriptorKind::Cde;
  if (s == "icde") return cden::DescriptorKind::Icde;
  return cden::DescriptorKind::Dcden;
}

cden::Metric parse_metric(const std::string& s) {
  return *cden::metric_from_token(s);  // validated by the CLI layer
}

// Query ids: every labeled image present in the index, or the ids listed
// one per line in a file.
std::vector<std::string> resolve_queries(const std::string& selector,
                                         const cden::IndexFile& ix,
                                         const std::map<std::string, std::string>& labels) {
  std::vector<std::string> queries;
  if (selector == "all") {
    for (const auto& rec : ix.records) {
      if (labels.count(rec.image_id)) queries.push_back(rec.image_id);
    }
  } else {
    std::ifstream in(selector);
    if (!in) {
      throw std::runtime_error("cannot open queries file: " + selector);
    }
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) queries.push_back(line);
    }
  }
  if (queries.empty()) {
    throw std::runtime_error("no query images selected");
  }
  return queries;
}

int run_index(const Options& opt) {
  const auto result = cden::build_index(opt.images, parse_kind(opt.kind),
                                        parse_circles(opt.circles));
  cden::save_index(result.index, opt.out);
  std::cout << "indexed " << result.index.records.size() << " images";
  if (result.index.circle_count) {
    std::cout << " (circles " << *result.index.circle_count << ")";
  }
  if (result.skipped_files > 0) {
    std::cout << "; warning: skipped " << result.skipped_files << " undecodable files";
  }
  std::cout << " -> " << opt.out << "\n";
  return 0;
}

int run_query(const Options& opt) {
  const cden::IndexFile ix = cden::load_index(opt.index);
  const cden::DescriptorRecord query = cden::describe_image_file(opt.image, ix);
  const auto ranked = cden::query_topk(ix, query, opt.top, parse_metric(opt.metric));
  std::cout << "rank\timage_id\tdistance\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    char score[40];
    std::snprintf(score, sizeof(score), "%.12g", ranked[i].score);
    std::cout << (i + 1) << '\t' << ranked[i].image_id << '\t' << score << '\n';
  }
  return 0;
}

int run_eval(const Options& opt) {
  const cden::IndexFile ix = cden::load_index(opt.index);
  const auto labels = cden::load_labels_csv(opt.labels);
  const auto queries = resolve_queries(opt.queries, ix, labels);
  const auto report =
      cden::evaluate_protocol(ix, labels, queries, parse_metric(opt.metric));
  cden::write_eval_csv(report, opt.out);
  std::cout << "evaluated " << report.queries.size() << " queries -> " << opt.out << "\n";
  return 0;
}

int run_compare(const Options& opt) {
  const auto labels = cden::load_labels_csv(opt.labels);

  const auto dcden = cden::build_index(opt.images, cden::DescriptorKind::Dcden);
  const auto icde = cden::build_index(opt.images, cden::DescriptorKind::Icde);

  const auto queries = resolve_queries("all", dcden.index, labels);
  const auto dcden_report =
      cden::evaluate_protocol(dcden.index, labels, queries, cden::Metric::D2);
  const auto icde_report =
      cden::evaluate_protocol(icde.index, labels, queries, cden::Metric::D1);

  cden::write_compare_csv(dcden_report, icde_report, opt.out);
  std::cout << "compared dcden/d2 vs icde/d1 over " << queries.size() << " queries";
  if (icde.index.circle_count) {
    std::cout << " (icde circles " << *icde.index.circle_count << ")";
  }
  std::cout << " -> " << opt.out << "\n";
  return 0;
}

const std::string kCirclesDesc = "auto|<N>";

std::string validate_circles(std::string& s) {
  if (s == "auto") return {};
  try {
    if (std::stoi(s) >= 1) return {};
  } catch (...) {
  }
  return "must be 'auto' or a positive integer";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatial color descriptor retrieval engine"};
  app.require_subcommand(1);
  Options opt;

  auto* index = app.add_subcommand("index", "build and save a descriptor index");
  index->add_option("--images", opt.images, "image directory")->required();
  index->add_option("--out", opt.out, "output index file")->required();
  index->add_option("--kind", opt.kind, "descriptor kind")
      ->check(CLI::IsMember({"hist", "cde", "icde", "dcden"}))
      ->required();
  index->add_option("--circles", opt.circles,
                    "ring count for cde/icde: " + kCirclesDesc)
      ->check(CLI::Validator(validate_circles, "CIRCLES"));

  auto* query = app.add_subcommand("query", "rank indexed images against a query image");
  query->add_option("--index", opt.index, "index file")->required();
  query->add_option("--image", opt.image, "query image")->required();
  query->add_option("--top", opt.top, "number of results")
      ->check(CLI::PositiveNumber)
      ->required();
  query->add_option("--metric", opt.metric, "legacy|d1|d2")
      ->check(CLI::IsMember({"legacy", "d1", "d2"}))
      ->required();

  auto* eval = app.add_subcommand("eval", "per-category precision/recall evaluation");
  eval->add_option("--index", opt.index, "index file")->required();
  eval->add_option("--labels", opt.labels, "labels CSV (image_id,category)")->required();
  eval->add_option("--queries", opt.queries, "all | file with one image_id per line");
  eval->add_option("--metric", opt.metric, "legacy|d1|d2")
      ->check(CLI::IsMember({"legacy", "d1", "d2"}))
      ->required();
  eval->add_option("--out", opt.out, "output CSV")->required();

  auto* compare = app.add_subcommand("compare", "evaluate dcden/d2 vs icde/d1");
  compare->add_option("--images", opt.images, "image directory")->required();
  compare->add_option("--labels", opt.labels, "labels CSV (image_id,category)")->required();
  compare->add_option("--out", opt.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(index)) return run_index(opt);
    if (app.got_subcommand(query)) return run_query(opt);
    if (app.got_subcommand(eval)) return run_eval(opt);
    if (app.got_subcommand(compare)) return run_compare(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
