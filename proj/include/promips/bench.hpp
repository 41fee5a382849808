#pragma once

// Benchmark harness: query sampling, search runs, metric aggregation and
// CSV/JSON reports.

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "promips/dataset_io.hpp"
#include "promips/idistance.hpp"
#include "promips/search.hpp"
#include "promips/synthetic.hpp"

namespace promips {

struct BenchConfig {
  // Either a dataset file or a synthetic mixture (input empty).
  std::string input;
  DataFormat format = DataFormat::fvecs;
  MixtureSpec synthetic;

  std::size_t queries = 100;
  std::uint64_t query_seed = 1;
  std::vector<std::size_t> ks{10};
  std::vector<double> cs{0.9};
  std::vector<double> ps{0.5};
  std::vector<std::uint64_t> seeds{42};  // projection / index seeds
  std::vector<SearchVariant> variants{SearchVariant::quick_probe};
  IndexConfig index;
  std::size_t threads = 1;
  std::string output;  // report prefix; empty skips writing files

  void validate() const;
};

// key=value lines; '#' starts a comment; lists are comma-separated.
// Keys: input, format, synthetic_n, synthetic_d, synthetic_clusters,
// synthetic_spread, synthetic_seed, queries, query_seed, k, c, p, seed,
// variant, m, kp, nkey, ksp, epsilon, page_size, threads, output.
BenchConfig parse_bench_config(std::istream& in);
BenchConfig load_bench_config(const std::string& path);
// Applies a single key=value override on top of an existing config.
void apply_bench_setting(BenchConfig& config, const std::string& key, const std::string& value);

SearchVariant parse_variant(const std::string& name);
std::string variant_name(SearchVariant variant);

struct QueryRow {
  SearchVariant variant = SearchVariant::quick_probe;
  std::size_t k = 0;
  double c = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::size_t query_id = 0;  // id in the source dataset
  std::optional<double> overall_ratio;
  double recall = 0.0;
  std::size_t pages = 0;
  std::size_t candidates = 0;
  double cpu_us = 0.0;
  double total_us = 0.0;
  Termination reason = Termination::exhausted;
};

struct AggregateRow {
  SearchVariant variant = SearchVariant::quick_probe;
  std::size_t k = 0;
  double c = 0.0;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::size_t queries = 0;
  std::size_t undefined_ratio = 0;  // queries excluded from overall_ratio
  double overall_ratio = 0.0;
  double recall = 0.0;
  double pages = 0.0;
  double candidates = 0.0;
  double cpu_us = 0.0;
  double total_us = 0.0;
};

struct MetricReport {
  BenchConfig config;
  std::size_t n = 0;  // indexed points
  std::size_t d = 0;
  std::map<std::uint64_t, std::size_t> m_by_seed;
  std::vector<QueryRow> rows;
  std::vector<AggregateRow> aggregates;
};

// Splits `source` into an indexed set and `count` held-out queries, sampled
// without replacement from `seed`. Returned ids index into `source`.
struct QuerySplit {
  Dataset indexed;
  std::vector<PointId> indexed_ids;
  Dataset queries;
  std::vector<PointId> query_ids;
};
QuerySplit split_queries(const Dataset& source, std::size_t count, std::uint64_t seed);

MetricReport run_bench(const BenchConfig& config);
// Runs on an already prepared split; used by run_bench and the tests.
MetricReport run_bench(const BenchConfig& config, const QuerySplit& split);

std::vector<AggregateRow> aggregate(const std::vector<QueryRow>& rows);

// Column order: k,c,p,seed,query_id,overall_ratio,recall,pages,candidates,cpu_us,total_us
void write_csv(const std::vector<QueryRow>& rows, const std::string& path);
void write_json(const MetricReport& report, const std::string& path);
// Writes <prefix>_<variant>.csv per variant plus <prefix>.json.
void write_reports(const MetricReport& report, const std::string& prefix);

}  // namespace promips
