#include "promips/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "promips/metrics.hpp"

namespace promips {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw InvalidArgument("empty list value");
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_numbers(const std::string& key, const std::string& value) {
  std::vector<T> out;
  for (const auto& item : split_list(value)) out.push_back(parse_number<T>(key, item));
  return out;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  // Rejection sampling keeps the draw unbiased and platform independent.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = 0;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

SearchVariant parse_variant(const std::string& name) {
  if (name == "i" || name == "I" || name == "incremental") return SearchVariant::incremental;
  if (name == "ii" || name == "II" || name == "quick_probe") return SearchVariant::quick_probe;
  throw InvalidArgument("unknown search variant '" + name + "' (expected i or ii)");
}

std::string variant_name(SearchVariant variant) {
  return variant == SearchVariant::incremental ? "i" : "ii";
}

void BenchConfig::validate() const {
  index.validate();
  if (queries == 0) throw InvalidArgument("bench: queries must be >= 1");
  if (ks.empty() || cs.empty() || ps.empty() || seeds.empty() || variants.empty()) {
    throw InvalidArgument("bench: k, c, p, seed and variant lists must be non-empty");
  }
  for (auto k : ks) {
    if (k == 0) throw InvalidArgument("bench: k must be >= 1");
  }
  for (double c : cs) {
    if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("bench: c must lie in (0, 1)");
  }
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("bench: p must lie in (0, 1)");
  }
  if (threads == 0) throw InvalidArgument("bench: threads must be >= 1");
}

void apply_bench_setting(BenchConfig& config, const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "input") {
    config.input = value;
  } else if (key == "format") {
    config.format = parse_data_format(value);
  } else if (key == "synthetic_n") {
    config.synthetic.n = parse_number<std::size_t>(key, value);
  } else if (key == "synthetic_d") {
    config.synthetic.d = parse_number<std::size_t>(key, value);
  } else if (key == "synthetic_clusters") {
    config.synthetic.clusters = parse_number<std::size_t>(key, value);
  } else if (key == "synthetic_spread") {
    config.synthetic.spread = parse_number<double>(key, value);
  } else if (key == "synthetic_seed") {
    config.synthetic.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "queries") {
    config.queries = parse_number<std::size_t>(key, value);
  } else if (key == "query_seed") {
    config.query_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "k") {
    config.ks = parse_numbers<std::size_t>(key, value);
  } else if (key == "c") {
    config.cs = parse_numbers<double>(key, value);
  } else if (key == "p") {
    config.ps = parse_numbers<double>(key, value);
  } else if (key == "seed") {
    config.seeds = parse_numbers<std::uint64_t>(key, value);
  } else if (key == "variant") {
    config.variants.clear();
    for (const auto& item : split_list(value)) config.variants.push_back(parse_variant(item));
  } else if (key == "m") {
    config.index.m = value == "auto" ? 0 : parse_number<std::size_t>(key, value);
  } else if (key == "kp") {
    config.index.k_p = parse_number<std::size_t>(key, value);
  } else if (key == "nkey") {
    config.index.n_key = parse_number<std::size_t>(key, value);
  } else if (key == "ksp") {
    config.index.k_sp = parse_number<std::size_t>(key, value);
  } else if (key == "epsilon") {
    if (value == "auto") {
      config.index.epsilon.reset();
    } else {
      config.index.epsilon = parse_number<double>(key, value);
    }
  } else if (key == "page_size") {
    config.index.page_size = parse_number<std::size_t>(key, value);
  } else if (key == "threads") {
    config.threads = parse_number<std::size_t>(key, value);
  } else if (key == "output") {
    config.output = value;
  } else {
    throw InvalidArgument("unknown config key '" + key + "'");
  }
}

BenchConfig parse_bench_config(std::istream& in) {
  BenchConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_bench_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path);
  return parse_bench_config(in);
}

QuerySplit split_queries(const Dataset& source, std::size_t count, std::uint64_t seed) {
  const std::size_t n = source.size();
  if (count >= n) {
    throw InvalidArgument("query count " + std::to_string(count) +
                          " must be smaller than the dataset size " + std::to_string(n));
  }
  std::vector<PointId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<PointId>(i);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `count` slots become the queries.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + draw(rng, n - i);
    std::swap(order[i], order[j]);
  }

  QuerySplit split;
  split.query_ids.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  split.indexed_ids.assign(order.begin() + static_cast<std::ptrdiff_t>(count), order.end());
  std::sort(split.indexed_ids.begin(), split.indexed_ids.end());

  auto gather = [&](const std::vector<PointId>& ids) {
    std::vector<double> coords;
    coords.reserve(ids.size() * source.dim());
    for (PointId id : ids) {
      const VectorView p = source.point(id);
      coords.insert(coords.end(), p.begin(), p.end());
    }
    return Dataset(source.dim(), std::move(coords));
  };
  split.indexed = gather(split.indexed_ids);
  split.queries = gather(split.query_ids);
  return split;
}

MetricReport run_bench(const BenchConfig& config) {
  config.validate();
  const Dataset source = config.input.empty() ? gaussian_mixture(config.synthetic)
                                              : ingest(config.input, config.format);
  return run_bench(config, split_queries(source, config.queries, config.query_seed));
}

MetricReport run_bench(const BenchConfig& config, const QuerySplit& split) {
  config.validate();
  MetricReport report;
  report.config = config;
  report.n = split.indexed.size();
  report.d = split.indexed.dim();

  const std::size_t nq = split.queries.size();
  const std::size_t max_k = *std::max_element(config.ks.begin(), config.ks.end());
  std::vector<QueryResult> exact(nq);
  for (std::size_t qi = 0; qi < nq; ++qi) {
    exact[qi] = brute_force_mip(split.indexed, split.queries.point(static_cast<PointId>(qi)), max_k);
  }

  for (std::uint64_t seed : config.seeds) {
    IndexConfig icfg = config.index;
    icfg.seed = seed;
    const IDistanceIndex index = build_index(split.indexed, icfg);
    report.m_by_seed[seed] = index.m();

    for (SearchVariant variant : config.variants) {
      for (double c : config.cs) {
        for (double p : config.ps) {
          for (std::size_t k : config.ks) {
            std::vector<QueryRow> rows(nq);
            std::atomic<std::size_t> next{0};
            auto worker = [&] {
              for (std::size_t qi = next++; qi < nq; qi = next++) {
                const VectorView q = split.queries.point(static_cast<PointId>(qi));
                const QueryContext ctx = make_query_context(index, q, c, p, k);
                const QueryResult got = search(index, ctx, variant);

                QueryResult truth = exact[qi];
                truth.top.resize(std::min(k, truth.top.size()));

                QueryRow& row = rows[qi];
                row.variant = variant;
                row.k = k;
                row.c = c;
                row.p = p;
                row.seed = seed;
                row.query_id = split.query_ids[qi];
                row.overall_ratio = overall_ratio(got, truth);
                row.recall = recall(got, truth);
                row.pages = got.pages;
                row.candidates = got.candidates;
                row.cpu_us = got.cpu_us;
                row.total_us = got.wall_us;
                row.reason = got.reason;
              }
            };
            const std::size_t workers = std::min(config.threads, nq);
            if (workers <= 1) {
              worker();
            } else {
              std::vector<std::jthread> pool;
              for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
            }
            report.rows.insert(report.rows.end(), rows.begin(), rows.end());
          }
        }
      }
    }
  }
  report.aggregates = aggregate(report.rows);
  if (!config.output.empty()) write_reports(report, config.output);
  return report;
}

std::vector<AggregateRow> aggregate(const std::vector<QueryRow>& rows) {
  using Key = std::tuple<int, std::size_t, double, double, std::uint64_t>;
  std::map<Key, AggregateRow> groups;
  std::vector<Key> order;
  for (const auto& row : rows) {
    const Key key{static_cast<int>(row.variant), row.k, row.c, row.p, row.seed};
    auto [it, inserted] = groups.try_emplace(key);
    AggregateRow& agg = it->second;
    if (inserted) {
      order.push_back(key);
      agg.variant = row.variant;
      agg.k = row.k;
      agg.c = row.c;
      agg.p = row.p;
      agg.seed = row.seed;
    }
    ++agg.queries;
    if (row.overall_ratio) {
      agg.overall_ratio += *row.overall_ratio;
    } else {
      ++agg.undefined_ratio;
    }
    agg.recall += row.recall;
    agg.pages += static_cast<double>(row.pages);
    agg.candidates += static_cast<double>(row.candidates);
    agg.cpu_us += row.cpu_us;
    agg.total_us += row.total_us;
  }

  std::vector<AggregateRow> out;
  for (const auto& key : order) {
    AggregateRow agg = groups[key];
    const auto q = static_cast<double>(agg.queries);
    const auto defined = static_cast<double>(agg.queries - agg.undefined_ratio);
    agg.overall_ratio = defined > 0 ? agg.overall_ratio / defined : NAN;
    agg.recall /= q;
    agg.pages /= q;
    agg.candidates /= q;
    agg.cpu_us /= q;
    agg.total_us /= q;
    out.push_back(agg);
  }
  return out;
}

void write_csv(const std::vector<QueryRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << "k,c,p,seed,query_id,overall_ratio,recall,pages,candidates,cpu_us,total_us\n";
  for (const auto& row : rows) {
    out << row.k << ',' << format_double(row.c) << ',' << format_double(row.p) << ','
        << row.seed << ',' << row.query_id << ','
        << (row.overall_ratio ? format_double(*row.overall_ratio) : std::string("nan")) << ','
        << format_double(row.recall) << ',' << row.pages << ',' << row.candidates << ','
        << std::fixed << std::setprecision(1) << row.cpu_us << ',' << row.total_us
        << std::defaultfloat << '\n';
  }
}

void write_json(const MetricReport& report, const std::string& path) {
  using nlohmann::json;
  const BenchConfig& cfg = report.config;
  json j;
  json& conf = j["config"];
  conf["input"] = cfg.input.empty() ? "synthetic" : cfg.input;
  if (cfg.input.empty()) {
    conf["synthetic"] = {{"n", cfg.synthetic.n},
                         {"d", cfg.synthetic.d},
                         {"clusters", cfg.synthetic.clusters},
                         {"spread", cfg.synthetic.spread},
                         {"seed", cfg.synthetic.seed}};
  }
  conf["queries"] = cfg.queries;
  conf["query_seed"] = cfg.query_seed;
  conf["k"] = cfg.ks;
  conf["c"] = cfg.cs;
  conf["p"] = cfg.ps;
  conf["seeds"] = cfg.seeds;
  json variants = json::array();
  for (auto v : cfg.variants) variants.push_back(variant_name(v));
  conf["variants"] = variants;
  conf["index"] = {{"kp", cfg.index.k_p},
                   {"nkey", cfg.index.n_key},
                   {"ksp", cfg.index.k_sp},
                   {"page_size", cfg.index.page_size},
                   {"selectivity", cfg.index.selectivity()}};
  conf["index"]["epsilon"] = cfg.index.epsilon ? json(*cfg.index.epsilon) : json("auto");
  json m_by_seed = json::object();
  for (const auto& [seed, m] : report.m_by_seed) m_by_seed[std::to_string(seed)] = m;
  conf["m"] = m_by_seed;
  j["n"] = report.n;
  j["d"] = report.d;

  json aggs = json::array();
  for (const auto& a : report.aggregates) {
    aggs.push_back({{"variant", variant_name(a.variant)},
                    {"k", a.k},
                    {"c", a.c},
                    {"p", a.p},
                    {"seed", a.seed},
                    {"queries", a.queries},
                    {"undefined_ratio", a.undefined_ratio},
                    {"overall_ratio", std::isnan(a.overall_ratio) ? json(nullptr) : json(a.overall_ratio)},
                    {"recall", a.recall},
                    {"pages", a.pages},
                    {"candidates", a.candidates},
                    {"cpu_us", a.cpu_us},
                    {"total_us", a.total_us}});
  }
  j["aggregates"] = aggs;

  json per_query = json::array();
  for (const auto& r : report.rows) {
    per_query.push_back({{"variant", variant_name(r.variant)},
                         {"k", r.k},
                         {"c", r.c},
                         {"p", r.p},
                         {"seed", r.seed},
                         {"query_id", r.query_id},
                         {"overall_ratio", r.overall_ratio ? json(*r.overall_ratio) : json(nullptr)},
                         {"recall", r.recall},
                         {"pages", r.pages},
                         {"candidates", r.candidates},
                         {"cpu_us", r.cpu_us},
                         {"total_us", r.total_us},
                         {"termination", to_string(r.reason)}});
  }
  j["queries"] = per_query;

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << j.dump(2) << '\n';
}

void write_reports(const MetricReport& report, const std::string& prefix) {
  for (SearchVariant variant : report.config.variants) {
    std::vector<QueryRow> rows;
    std::copy_if(report.rows.begin(), report.rows.end(), std::back_inserter(rows),
                 [&](const QueryRow& r) { return r.variant == variant; });
    write_csv(rows, prefix + "_" + variant_name(variant) + ".csv");
  }
  write_json(report, prefix + ".json");
}

}  // namespace promips
