// promips: build, query and benchmark c-AMIP indexes from the command line.
//
// Exit codes: 0 ok, 1 usage / invalid argument, 2 format error,
// 3 contract violation.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "promips/promips.hpp"

namespace {

using namespace promips;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFormat = 2;
constexpr int kExitContract = 3;

DataFormat format_for(const std::string& path, const std::string& explicit_format) {
  if (!explicit_format.empty()) return parse_data_format(explicit_format);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return DataFormat::csv;
  return DataFormat::fvecs;
}

struct BuildArgs {
  std::string input;
  std::string format;
  std::string m = "auto";
  std::size_t kp = 5;
  std::size_t nkey = 40;
  std::size_t ksp = 10;
  std::string epsilon = "auto";
  std::size_t page_size = 4096;
  std::uint64_t seed = 42;
  std::string out;
};

int run_build(const BuildArgs& args) {
  const Dataset data = ingest(args.input, format_for(args.input, args.format));
  IndexConfig cfg;
  cfg.k_p = args.kp;
  cfg.n_key = args.nkey;
  cfg.k_sp = args.ksp;
  cfg.page_size = args.page_size;
  cfg.seed = args.seed;
  BenchConfig scratch;
  apply_bench_setting(scratch, "m", args.m);
  apply_bench_setting(scratch, "epsilon", args.epsilon);
  cfg.m = scratch.index.m;
  cfg.epsilon = scratch.index.epsilon;

  const IDistanceIndex index = build_index(data, cfg);
  save_index(index, args.out);
  std::cout << "built index: n=" << index.size() << " d=" << index.d() << " m=" << index.m()
            << " partitions=" << index.partitions().size()
            << " keys=" << index.key_map().size()
            << " sub_partitions=" << index.sub_partitions().size()
            << " epsilon=" << index.epsilon()
            << " pages=" << index.point_store().page_count() << "+"
            << index.vector_store().page_count() << "\n"
            << "wrote " << args.out << " and " << sidecar_path(args.out) << "\n";
  return kExitOk;
}

struct QueryArgs {
  std::string index;
  std::string queries;
  std::string format;
  std::size_t k = 10;
  double c = 0.9;
  double p = 0.5;
  std::string variant = "ii";
  std::string report;
};

int run_query(const QueryArgs& args) {
  const IDistanceIndex index = load_index(args.index);
  const Dataset queries = ingest(args.queries, format_for(args.queries, args.format));
  const SearchVariant variant = parse_variant(args.variant);
  if (queries.dim() != index.d()) {
    throw ContractViolation("queries have dimension " + std::to_string(queries.dim()) +
                            " but the index was built for dimension " + std::to_string(index.d()));
  }

  std::ofstream report;
  if (!args.report.empty()) {
    report.open(args.report, std::ios::trunc);
    if (!report) throw InvalidArgument("cannot write " + args.report);
    report << "query_id,rank,id,ip,pages,candidates,cpu_us,total_us,termination\n";
  }
  double pages = 0.0;
  double candidates = 0.0;
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const QueryContext ctx =
        make_query_context(index, queries.point(static_cast<PointId>(qi)), args.c, args.p, args.k);
    const QueryResult result = search(index, ctx, variant);
    pages += static_cast<double>(result.pages);
    candidates += static_cast<double>(result.candidates);
    if (report) {
      for (std::size_t rank = 0; rank < result.top.size(); ++rank) {
        report << qi << ',' << rank + 1 << ',' << result.top[rank].id << ','
               << result.top[rank].ip << ',' << result.pages << ',' << result.candidates << ','
               << result.cpu_us << ',' << result.wall_us << ',' << to_string(result.reason)
               << '\n';
      }
    } else {
      std::cout << "query " << qi << " [" << to_string(result.reason) << ", pages=" << result.pages
                << ", candidates=" << result.candidates << "]:";
      for (const auto& nb : result.top) std::cout << ' ' << nb.id << ':' << nb.ip;
      std::cout << '\n';
    }
  }
  const auto nq = static_cast<double>(queries.size());
  std::cout << "queries=" << queries.size() << " mean_pages=" << pages / nq
            << " mean_candidates=" << candidates / nq << "\n";
  return kExitOk;
}

struct BenchArgs {
  std::string config;
  std::vector<std::string> overrides;
};

int run_bench_cmd(const BenchArgs& args) {
  BenchConfig cfg = args.config.empty() ? BenchConfig{} : load_bench_config(args.config);
  for (const auto& item : args.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + item + "'");
    apply_bench_setting(cfg, item.substr(0, eq), item.substr(eq + 1));
  }
  const MetricReport report = run_bench(cfg);
  std::cout << "variant,k,c,p,seed,queries,overall_ratio,recall,pages,candidates,cpu_us,total_us\n";
  for (const auto& a : report.aggregates) {
    std::cout << variant_name(a.variant) << ',' << a.k << ',' << a.c << ',' << a.p << ','
              << a.seed << ',' << a.queries << ',' << a.overall_ratio << ',' << a.recall << ','
              << a.pages << ',' << a.candidates << ',' << a.cpu_us << ',' << a.total_us << '\n';
  }
  if (!cfg.output.empty()) std::cout << "reports written with prefix " << cfg.output << "\n";
  return kExitOk;
}

struct OracleArgs {
  std::string input;
  std::string queries;
  std::string format;
  std::size_t k = 10;
  std::string out;
};

int run_oracle(const OracleArgs& args) {
  const Dataset data = ingest(args.input, format_for(args.input, args.format));
  const Dataset queries = ingest(args.queries, format_for(args.queries, args.format));
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out, std::ios::trunc);
    if (!file) throw InvalidArgument("cannot write " + args.out);
  }
  std::ostream& out = args.out.empty() ? std::cout : file;
  out << "query_id,rank,id,ip\n";
  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    const QueryResult exact = brute_force_mip(data, queries.point(static_cast<PointId>(qi)), args.k);
    for (std::size_t rank = 0; rank < exact.top.size(); ++rank) {
      out << qi << ',' << rank + 1 << ',' << exact.top[rank].id << ',' << exact.top[rank].ip << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"promips: probability-guaranteed c-approximate maximum inner product search"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build an index from a dataset file");
  build_cmd->add_option("--input", build.input, "Dataset file")->required();
  build_cmd->add_option("--format", build.format, "fvecs or csv (default: by extension)");
  build_cmd->add_option("--m", build.m, "Projected dimension or 'auto'");
  build_cmd->add_option("--kp", build.kp, "Partition count");
  build_cmd->add_option("--nkey", build.nkey, "Keys (rings) per partition");
  build_cmd->add_option("--ksp", build.ksp, "Sub-partitions per ring");
  build_cmd->add_option("--epsilon", build.epsilon, "Ring width or 'auto'");
  build_cmd->add_option("--page-size", build.page_size, "Page size in bytes");
  build_cmd->add_option("--seed", build.seed, "Projection and clustering seed");
  build_cmd->add_option("--out", build.out, "Index output path")->required();

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Run c-k-AMIP queries against an index");
  query_cmd->add_option("--index", query.index, "Index path")->required();
  query_cmd->add_option("--queries", query.queries, "Query file")->required();
  query_cmd->add_option("--format", query.format, "fvecs or csv (default: by extension)");
  query_cmd->add_option("--k", query.k, "Results per query");
  query_cmd->add_option("--c", query.c, "Approximation ratio in (0,1)");
  query_cmd->add_option("--p", query.p, "Guaranteed probability in (0,1)");
  query_cmd->add_option("--variant", query.variant, "i (incremental) or ii (quick-probe)");
  query_cmd->add_option("--report", query.report, "CSV report path");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark described by a config file");
  bench_cmd->add_option("--config", bench.config, "key=value config file");
  bench_cmd->add_option("--set", bench.overrides, "Override a config key (key=value)");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact top-k by brute force");
  oracle_cmd->add_option("--input", oracle.input, "Dataset file")->required();
  oracle_cmd->add_option("--queries", oracle.queries, "Query file")->required();
  oracle_cmd->add_option("--format", oracle.format, "fvecs or csv (default: by extension)");
  oracle_cmd->add_option("--k", oracle.k, "Results per query");
  oracle_cmd->add_option("--out", oracle.out, "CSV output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build_cmd) return run_build(build);
    if (*query_cmd) return run_query(query);
    if (*bench_cmd) return run_bench_cmd(bench);
    if (*oracle_cmd) return run_oracle(oracle);
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return kExitContract;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
