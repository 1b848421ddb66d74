// degcli: build, query and benchmark DEG indexes from the command line.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "deg/error.hpp"
#include "deg/eval.hpp"
#include "deg/index.hpp"
#include "deg/search.hpp"
#include "deg/synth.hpp"
#include "deg/vector_io.hpp"
#include "deg/verify.hpp"

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sha256_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw deg::Error("cannot open '" + path + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw deg::Error("sha256 init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0)
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

json file_hashes(const std::vector<std::string> &paths) {
  json out = json::object();
  for (const auto &p : paths)
    out[p] = sha256_file(p);
  return out;
}

/// Writes the RunRecord sidecar next to `out_path`.
void write_run_record(const std::string &out_path, const std::string &command,
                      json parameters, json inputs, json outputs,
                      double seconds, json metrics) {
  json rec;
  rec["command"] = command;
  rec["parameters"] = std::move(parameters);
  rec["inputs"] = std::move(inputs);
  rec["outputs"] = std::move(outputs);
  rec["seconds"] = seconds;
  rec["metrics"] = std::move(metrics);
  std::ofstream f(out_path + ".run.json");
  if (!f)
    throw deg::Error("cannot write run record for '" + out_path + "'");
  f << rec.dump(2) << "\n";
}

deg::DiameterEstimator parse_norm(const std::string &norm, std::size_t n) {
  if (norm == "auto")
    return deg::default_estimator(n);
  if (norm == "exact")
    return deg::ExactDiameter{};
  if (norm == "sample")
    return deg::SampledDiameter{};
  throw deg::Error("unknown --norm '" + norm + "'");
}

std::optional<std::uint64_t> parse_order(const std::string &order) {
  if (order == "dataset")
    return std::nullopt;
  const std::string prefix = "shuffle:";
  if (order.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      auto seed = std::stoull(order.substr(prefix.size()), &used);
      if (used == order.size() - prefix.size())
        return seed;
    } catch (const std::exception &) {
    }
  }
  throw deg::Error("malformed --order '" + order + "'");
}

struct Sweep {
  std::size_t lo, hi, step;
};

Sweep parse_sweep(const std::string &text) {
  Sweep s{};
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> s.lo >> c1 >> s.hi >> c2 >> s.step) || c1 != ':' || c2 != ':' ||
      !in.eof() || s.step == 0 || s.lo == 0 || s.lo > s.hi)
    throw deg::Error("malformed --ef-search-sweep '" + text + "'");
  return s;
}

std::optional<double> parse_baseline(const std::string &text) {
  if (text == "none")
    return std::nullopt;
  const std::string prefix = "fusion:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      double a = std::stod(text.substr(prefix.size()), &used);
      if (used == text.size() - prefix.size() && a >= 0.0 && a <= 1.0)
        return a;
    } catch (const std::exception &) {
    }
  }
  throw deg::Error("malformed --baseline '" + text + "'");
}

deg::SynthDistribution parse_distribution(const std::string &text) {
  if (text == "uniform")
    return deg::UniformCube{};
  if (text == "clusters")
    return deg::GaussianClusters{};
  deg::GaussianClusters g;
  char c1 = 0, c2 = 0;
  std::string head = text.substr(0, 9);
  std::istringstream in(text.size() > 9 ? text.substr(8) : "");
  if (head == "clusters:" && in >> c1 >> g.clusters >> c2 >> g.sigma &&
      c1 == ':' && c2 == ':' && in.eof())
    return g;
  throw deg::Error("malformed --dist '" + text + "'");
}

/// Dataset normalized with the factors stored in `index`.
deg::HybridDataset dataset_for(const deg::DegIndex &index, deg::VectorSet e,
                               deg::VectorSet s) {
  deg::HybridDataset data(std::move(e), std::move(s), index.meta().e_max,
                          index.meta().s_max, index.meta().norm_eps);
  index.check_compatible(data);
  return data;
}

// ---- synth ----

struct SynthOpts {
  deg::SynthSpec spec;
  std::string dist = "clusters";
  std::string alpha = "interval:0:1";
  std::size_t k = 10;
  std::string prefix;
};

int cmd_synth(const SynthOpts &o) {
  auto t0 = Clock::now();
  deg::SynthSpec spec = o.spec;
  spec.distribution = parse_distribution(o.dist);
  auto scheme = deg::parse_alpha_scheme(o.alpha);
  auto data = deg::generate(spec);
  auto queries = deg::make_query_set(data.query_e, data.query_s, scheme, o.k);

  const std::string e_path = o.prefix + ".e.hvec";
  const std::string s_path = o.prefix + ".s.hvec";
  const std::string q_path = o.prefix + ".queries.hqry";
  deg::write_hvec(e_path, data.base_e);
  deg::write_hvec(s_path, data.base_s);
  deg::write_hqry(q_path, queries);

  json params = {{"n", spec.n},         {"e_dim", spec.e_dim},
                 {"s_dim", spec.s_dim}, {"dist", o.dist},
                 {"rho", spec.rho},     {"query_count", spec.query_count},
                 {"alpha", o.alpha},    {"k", o.k},
                 {"seed", spec.seed}};
  write_run_record(o.prefix, "synth", params, json::object(),
                   file_hashes({e_path, s_path, q_path}), seconds_since(t0),
                   json::object());
  std::cout << json{{"e", e_path}, {"s", s_path}, {"queries", q_path}}.dump()
            << "\n";
  return 0;
}

// ---- build ----

struct BuildOpts {
  std::string e, s, out;
  deg::BuildParams params;
  std::string norm = "auto";
  std::string order = "dataset";
};

int cmd_build(const BuildOpts &o) {
  auto t0 = Clock::now();
  auto e = deg::read_hvec(o.e);
  auto s = deg::read_hvec(o.s);
  auto est = parse_norm(o.norm, e.size());
  auto data = deg::normalize_dataset(std::move(e), std::move(s), est);
  deg::BuildParams params = o.params;
  params.shuffle_seed = parse_order(o.order);

  deg::BuildStats stats;
  auto index = deg::build(data, params, &stats);
  double build_seconds = seconds_since(t0);
  deg::save(index, o.out);

  json metrics = {{"build_seconds", build_seconds},
                  {"edges", index.edge_count()},
                  {"seeds", index.seeds().size()},
                  {"e_max", index.meta().e_max},
                  {"s_max", index.meta().s_max},
                  {"gps_expansions", stats.gps.expansions},
                  {"drng_distance_evals", stats.drng.distance_evals},
                  {"reverse_updates", stats.reverse_updates}};
  json reach = json::array();
  for (int g = 0; g <= 20; ++g)
    reach.push_back(deg::reachable_fraction(index, g / 20.0));
  metrics["reachable_fraction_by_alpha"] = reach;
  json params_json = {{"M", params.max_degree},
                      {"ef_construction", params.ef_construction},
                      {"th", params.min_active},
                      {"norm", o.norm},
                      {"order", o.order}};
  write_run_record(o.out, "build", params_json, file_hashes({o.e, o.s}),
                   file_hashes({o.out}), seconds_since(t0), metrics);
  std::cout << metrics.dump() << "\n";
  return 0;
}

// ---- gt ----

struct GtOpts {
  std::string e, s, queries, out, index, norm = "auto";
  std::size_t k_prime = 10;
};

int cmd_gt(const GtOpts &o) {
  auto t0 = Clock::now();
  auto e = deg::read_hvec(o.e);
  auto s = deg::read_hvec(o.s);
  auto queries = deg::read_hqry(o.queries);
  std::optional<deg::HybridDataset> data;
  if (!o.index.empty()) {
    auto index = deg::load(o.index);
    data.emplace(dataset_for(index, std::move(e), std::move(s)));
  } else {
    auto est = parse_norm(o.norm, e.size());
    data.emplace(deg::normalize_dataset(std::move(e), std::move(s), est));
  }
  auto gt = deg::brute_force_ground_truth(*data, queries, o.k_prime);
  deg::write_hgt(o.out, gt);

  std::vector<std::string> inputs = {o.e, o.s, o.queries};
  if (!o.index.empty())
    inputs.push_back(o.index);
  write_run_record(o.out, "gt", {{"k_prime", o.k_prime}, {"norm", o.norm}},
                   file_hashes(inputs), file_hashes({o.out}), seconds_since(t0),
                   {{"queries", queries.size()}});
  return 0;
}

// ---- search ----

struct SearchOpts {
  std::string index, e, s, queries;
  std::size_t k = 0;
  std::size_t ef_search = 100;
  bool no_early_stop = false;
  bool stats = false;
};

int cmd_search(const SearchOpts &o) {
  auto index = deg::load(o.index);
  auto data = dataset_for(index, deg::read_hvec(o.e), deg::read_hvec(o.s));
  auto queries = deg::read_hqry(o.queries);
  deg::SearchParams sp;
  sp.ef_search = o.ef_search;
  sp.early_stop = !o.no_early_stop;
  sp.collect_stats = o.stats;

  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto q = queries[i];
    if (o.k > 0)
      q.k = o.k;
    auto r = deg::search(index, data, q, sp);
    json row = {{"query", i}, {"alpha", q.alpha}};
    json ids = json::array(), dists = json::array();
    for (const auto &nb : r.neighbors) {
      ids.push_back(nb.id);
      dists.push_back(nb.dist);
    }
    row["ids"] = ids;
    row["dists"] = dists;
    if (r.underfilled)
      row["underfilled"] = true;
    if (o.stats)
      row["stats"] = {{"full_evals", r.stats.distance_evals_full},
                      {"partial_evals", r.stats.distance_evals_partial},
                      {"nodes_popped", r.stats.nodes_popped},
                      {"edges_skipped", r.stats.edges_skipped_by_range}};
    std::cout << row.dump() << "\n";
  }
  return 0;
}

// ---- bench ----

struct BenchOpts {
  std::string index, e, s, queries, gt, out;
  std::size_t k = 10;
  std::string sweep = "10:200:10";
  std::string baseline = "none";
  std::size_t threads = 1;
};

struct BenchRow {
  double alpha_lo, alpha_hi;
  std::size_t ef_search;
  double recall, qps;
  deg::SearchStats stats;
  std::size_t queries;
};

template <typename SearchFn>
std::vector<BenchRow> run_sweep(const std::vector<deg::HybridQuery> &queries,
                                const deg::GroundTruth &gt, std::size_t k,
                                const Sweep &sweep, std::size_t threads,
                                SearchFn &&search_one) {
  std::map<std::size_t, std::vector<std::size_t>> bands;
  for (std::size_t i = 0; i < queries.size(); ++i)
    bands[deg::alpha_band(queries[i].alpha)].push_back(i);

  std::vector<BenchRow> rows;
  for (const auto &[band, members] : bands) {
    for (std::size_t ef = sweep.lo; ef <= sweep.hi; ef += sweep.step) {
      deg::SearchParams sp;
      sp.ef_search = std::max(ef, k);
      std::vector<double> recall(members.size());
      std::vector<deg::SearchStats> stats(threads);
      auto worker = [&](std::size_t t) {
        for (std::size_t j = t; j < members.size(); j += threads) {
          auto q = queries[members[j]];
          q.k = k;
          auto r = search_one(q, sp);
          recall[j] = deg::recall_at_k(r.neighbors, gt.rows[members[j]], k);
          stats[t] += r.stats;
        }
      };
      auto t0 = Clock::now();
      if (threads == 1) {
        worker(0);
      } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t)
          pool.emplace_back(worker, t);
        for (auto &th : pool)
          th.join();
      }
      double secs = seconds_since(t0) * static_cast<double>(threads);
      BenchRow row{deg::kAlphaBands[band], deg::kAlphaBands[band + 1], ef, 0.0,
                   deg::qps(members.size(), secs), {}, members.size()};
      for (double r : recall)
        row.recall += r;
      row.recall /= static_cast<double>(members.size());
      for (const auto &s : stats)
        row.stats += s;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_csv(std::ostream &out, const std::vector<BenchRow> &rows) {
  out << "alpha_lo,alpha_hi,ef_search,recall_at_k,qps,full_evals,"
         "partial_evals,nodes_popped,edges_skipped\n";
  for (const auto &r : rows) {
    double n = static_cast<double>(r.queries);
    out << r.alpha_lo << "," << r.alpha_hi << "," << r.ef_search << ","
        << std::setprecision(6) << r.recall << "," << r.qps << ","
        << r.stats.distance_evals_full / n << ","
        << r.stats.distance_evals_partial / n << ","
        << r.stats.nodes_popped / n << ","
        << r.stats.edges_skipped_by_range / n << "\n";
  }
}

void emit_csv(const std::string &path, const std::vector<BenchRow> &rows) {
  if (path.empty()) {
    write_csv(std::cout, rows);
    return;
  }
  std::ofstream f(path);
  if (!f)
    throw deg::Error("cannot write '" + path + "'");
  write_csv(f, rows);
}

int cmd_bench(const BenchOpts &o) {
  auto t0 = Clock::now();
  if (o.threads == 0)
    throw deg::Error("--threads must be positive");
  auto sweep = parse_sweep(o.sweep);
  auto baseline = parse_baseline(o.baseline);
  auto index = deg::load(o.index);
  auto data = dataset_for(index, deg::read_hvec(o.e), deg::read_hvec(o.s));
  auto queries = deg::read_hqry(o.queries);
  auto gt = deg::read_hgt(o.gt);
  if (gt.rows.size() != queries.size())
    throw deg::Error("ground truth has " + std::to_string(gt.rows.size()) +
                     " rows for " + std::to_string(queries.size()) + " queries");
  if (gt.k < o.k)
    throw deg::Error("ground truth k is smaller than --k");

  auto rows = run_sweep(queries, gt, o.k, sweep, o.threads,
                        [&](const deg::HybridQuery &q, const deg::SearchParams &sp) {
                          return deg::search(index, data, q, sp);
                        });
  emit_csv(o.out, rows);

  json outputs = json::object();
  if (!o.out.empty())
    outputs[o.out] = sha256_file(o.out);
  json metrics = {{"rows", rows.size()}};
  if (baseline) {
    auto fusion = deg::build_fusion_baseline(data, *baseline,
                                             index.meta().max_degree,
                                             index.meta().ef_construction);
    auto base_rows = run_sweep(
        queries, gt, o.k, sweep, o.threads,
        [&](const deg::HybridQuery &q, const deg::SearchParams &sp) {
          return deg::search_fixed_graph(fusion, data, q, sp);
        });
    std::string base_path = o.out.empty() ? "" : o.out + ".fusion.csv";
    if (base_path.empty())
      std::cout << "\n";
    emit_csv(base_path, base_rows);
    if (!base_path.empty())
      outputs[base_path] = sha256_file(base_path);
    metrics["baseline_rows"] = base_rows.size();
  }
  if (!o.out.empty())
    write_run_record(o.out, "bench",
                     {{"k", o.k},
                      {"ef_search_sweep", o.sweep},
                      {"baseline", o.baseline},
                      {"threads", o.threads}},
                     file_hashes({o.index, o.e, o.s, o.queries, o.gt}), outputs,
                     seconds_since(t0), metrics);
  return 0;
}

// ---- verify ----

int cmd_verify(const std::string &suite, std::size_t n, std::uint64_t seed) {
  auto reports = deg::run_verify(suite, n, seed);
  bool ok = true;
  for (const auto &r : reports) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.suite << " checks="
              << r.checks << " failures=" << r.failures;
    if (!r.detail.empty())
      std::cout << " " << r.detail;
    std::cout << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 2;
}

void fail(const std::string &kind, const std::string &message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"DEG hybrid vector index tool"};
  app.require_subcommand(1);

  SynthOpts synth;
  auto *c_synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  c_synth->add_option("--n", synth.spec.n, "Base objects");
  c_synth->add_option("--e-dim", synth.spec.e_dim, "e-vector dimension");
  c_synth->add_option("--s-dim", synth.spec.s_dim, "s-vector dimension");
  c_synth->add_option("--dist", synth.dist,
                      "uniform | clusters | clusters:C:SIGMA");
  c_synth->add_option("--rho", synth.spec.rho, "Modality correlation")
      ->check(CLI::Range(-1.0, 1.0));
  c_synth->add_option("--queries", synth.spec.query_count, "Query count");
  c_synth->add_option("--alpha", synth.alpha,
                      "fixed:A | interval:LO:HI[:SEED] | grid[:P]");
  c_synth->add_option("--k", synth.k, "k stored with each query");
  c_synth->add_option("--seed", synth.spec.seed, "RNG seed");
  c_synth->add_option("--out", synth.prefix, "Output path prefix")->required();

  BuildOpts build;
  auto *c_build = app.add_subcommand("build", "Build a DEG index");
  c_build->add_option("--e", build.e, "e-vectors (HVEC)")->required();
  c_build->add_option("--s", build.s, "s-vectors (HVEC)")->required();
  c_build->add_option("--M", build.params.max_degree, "Max out-degree");
  c_build->add_option("--ef-construction", build.params.ef_construction,
                      "Candidate pool bound");
  c_build->add_option("--th", build.params.min_active,
                      "Minimum active-range measure");
  c_build->add_option("--norm", build.norm, "auto | exact | sample");
  c_build->add_option("--order", build.order, "dataset | shuffle:SEED");
  c_build->add_option("--out", build.out, "Index path (DEG1)")->required();

  GtOpts gt;
  auto *c_gt = app.add_subcommand("gt", "Compute exact ground truth");
  c_gt->add_option("--e", gt.e, "e-vectors (HVEC)")->required();
  c_gt->add_option("--s", gt.s, "s-vectors (HVEC)")->required();
  c_gt->add_option("--queries", gt.queries, "Queries (HQRY)")->required();
  c_gt->add_option("--k-prime", gt.k_prime, "Neighbors per query");
  c_gt->add_option("--index", gt.index,
                   "Take normalization factors from this index");
  c_gt->add_option("--norm", gt.norm, "auto | exact | sample");
  c_gt->add_option("--out", gt.out, "Output (HGT1)")->required();

  SearchOpts search;
  auto *c_search = app.add_subcommand("search", "Query an index");
  c_search->add_option("--index", search.index, "Index (DEG1)")->required();
  c_search->add_option("--e", search.e, "e-vectors (HVEC)")->required();
  c_search->add_option("--s", search.s, "s-vectors (HVEC)")->required();
  c_search->add_option("--queries", search.queries, "Queries (HQRY)")->required();
  c_search->add_option("--k", search.k, "Override per-query k");
  c_search->add_option("--ef-search", search.ef_search, "Result heap bound");
  c_search->add_flag("--no-early-stop", search.no_early_stop,
                     "Always evaluate both modalities");
  c_search->add_flag("--stats", search.stats, "Print per-query counters");

  BenchOpts bench;
  auto *c_bench = app.add_subcommand("bench", "Recall/QPS sweep");
  c_bench->add_option("--index", bench.index, "Index (DEG1)")->required();
  c_bench->add_option("--e", bench.e, "e-vectors (HVEC)")->required();
  c_bench->add_option("--s", bench.s, "s-vectors (HVEC)")->required();
  c_bench->add_option("--queries", bench.queries, "Queries (HQRY)")->required();
  c_bench->add_option("--gt", bench.gt, "Ground truth (HGT1)")->required();
  c_bench->add_option("--k", bench.k, "Recall depth");
  c_bench->add_option("--ef-search-sweep", bench.sweep, "LO:HI:STEP");
  c_bench->add_option("--baseline", bench.baseline, "none | fusion:ALPHA");
  c_bench->add_option("--threads", bench.threads, "Search threads");
  c_bench->add_option("--out", bench.out, "CSV path (stdout if empty)");

  std::string suite = "all";
  std::size_t verify_n = 0;
  std::uint64_t verify_seed = 1;
  auto *c_verify = app.add_subcommand("verify", "Run oracle suites");
  c_verify->add_option("--suite", suite, "Suite name or all");
  c_verify->add_option("--n", verify_n, "Problem size (0 = suite default)");
  c_verify->add_option("--seed", verify_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    fail("usage", e.what());
    return 64;
  }

  try {
    if (*c_synth)
      return cmd_synth(synth);
    if (*c_build)
      return cmd_build(build);
    if (*c_gt)
      return cmd_gt(gt);
    if (*c_search)
      return cmd_search(search);
    if (*c_bench)
      return cmd_bench(bench);
    if (*c_verify)
      return cmd_verify(suite, verify_n, verify_seed);
  } catch (const deg::Error &e) {
    fail("deg", e.what());
    return 1;
  } catch (const std::exception &e) {
    fail("internal", e.what());
    return 1;
  }
  return 0;
}
