#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "promips/bench.hpp"
#include "test_support.hpp"

using namespace promips;
namespace fs = std::filesystem;

TEST_CASE("config parsing") {
  std::istringstream in(
      "# comment\n"
      "synthetic_n = 500\n"
      "synthetic_d=20\n"
      "queries=10\n"
      "k=1,5\n"
      "c=0.8, 0.9\n"
      "p=0.5\n"
      "variant=i,ii\n"
      "m=auto\n"
      "epsilon=0.02\n"
      "threads=2\n");
  const BenchConfig cfg = parse_bench_config(in);
  CHECK(cfg.synthetic.n == 500);
  CHECK(cfg.synthetic.d == 20);
  CHECK(cfg.ks == std::vector<std::size_t>{1, 5});
  CHECK(cfg.cs == std::vector<double>{0.8, 0.9});
  CHECK(cfg.variants.size() == 2);
  CHECK(cfg.index.m == 0);
  CHECK(cfg.index.epsilon == 0.02);
  CHECK(cfg.threads == 2);

  BenchConfig copy = cfg;
  apply_bench_setting(copy, "epsilon", "auto");
  CHECK_FALSE(copy.index.epsilon.has_value());
  CHECK_THROWS_AS(apply_bench_setting(copy, "nonsense", "1"), InvalidArgument);
  CHECK_THROWS_AS(apply_bench_setting(copy, "k", "x"), InvalidArgument);
  std::istringstream bad("k\n");
  CHECK_THROWS_AS(parse_bench_config(bad), FormatError);
  CHECK(variant_name(parse_variant("i")) == "i");
  CHECK_THROWS_AS(parse_variant("iii"), InvalidArgument);
}

TEST_CASE("query split") {
  std::mt19937_64 rng(1);
  const Dataset ds = testing::random_dataset(rng, 100, 4);
  const QuerySplit s = split_queries(ds, 10, 3);
  CHECK(s.queries.size() == 10);
  CHECK(s.indexed.size() == 90);
  std::set<PointId> all(s.indexed_ids.begin(), s.indexed_ids.end());
  all.insert(s.query_ids.begin(), s.query_ids.end());
  CHECK(all.size() == 100);
  CHECK(split_queries(ds, 10, 3).query_ids == s.query_ids);
  CHECK_THROWS_AS(split_queries(ds, 101, 3), InvalidArgument);
}

TEST_CASE("run_bench end to end") {
  BenchConfig cfg;
  cfg.synthetic.n = 1500;
  cfg.synthetic.d = 24;
  cfg.queries = 12;
  cfg.ks = {1, 5};
  cfg.cs = {0.9};
  cfg.ps = {0.5};
  cfg.variants = {SearchVariant::incremental, SearchVariant::quick_probe};
  cfg.threads = 3;
  const fs::path dir = fs::temp_directory_path() / "promips_test_bench";
  fs::create_directories(dir);
  cfg.output = (dir / "run").string();

  const MetricReport report = run_bench(cfg);
  CHECK(report.n == 1488);
  CHECK(report.rows.size() == 2 * 2 * 12);
  CHECK(report.aggregates.size() == 4);
  for (const auto& a : report.aggregates) {
    CHECK(a.queries == 12);
    CHECK(a.recall >= 0.0);
    CHECK(a.pages > 0.0);
  }
  CHECK(fs::exists(dir / "run_i.csv"));
  CHECK(fs::exists(dir / "run_ii.csv"));
  std::ifstream js(dir / "run.json");
  const auto doc = nlohmann::json::parse(js);
  CHECK(doc.contains("aggregates"));

  std::ifstream csv(dir / "run_ii.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k,c,p,seed,query_id,overall_ratio,recall,pages,candidates,cpu_us,total_us");

  // Deterministic apart from timings, regardless of thread count.
  BenchConfig single = cfg;
  single.threads = 1;
  single.output.clear();
  const MetricReport again = run_bench(single);
  REQUIRE(again.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < again.rows.size(); ++i) {
    CHECK(again.rows[i].query_id == report.rows[i].query_id);
    CHECK(again.rows[i].pages == report.rows[i].pages);
    CHECK(again.rows[i].candidates == report.rows[i].candidates);
    CHECK(again.rows[i].recall == report.rows[i].recall);
  }

  BenchConfig too_many = single;
  too_many.queries = 5000;
  CHECK_THROWS_AS(run_bench(too_many), InvalidArgument);
}
