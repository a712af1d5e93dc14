#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "kcore/bench.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "kcore/oracle.hpp"

namespace kcore {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

std::string graph_name(const std::string& path) {
  std::string name = fs::path(path).filename().string();
  for (std::string_view ext : {".gz", ".txt"})
    if (name.size() > ext.size() && name.ends_with(ext)) name.resize(name.size() - ext.size());
  return name;
}

Graph load_logged(const std::string& path, std::ostream& log) {
  auto start = Clock::now();
  Graph g = load_edge_list_file(path);
  log << "loaded " << path << ": " << g.node_count() << " nodes, " << g.edge_count()
      << " edges (" << fmt(seconds_since(start), 2) << " s)\n";
  return g;
}

CorenessResult oracle_logged(const Graph& g, std::ostream& log) {
  auto start = Clock::now();
  CorenessResult truth = peel_coreness(g);
  log << "oracle: kMax " << truth.k_max << ", kAvg " << fmt(truth.k_avg, 2) << " ("
      << fmt(seconds_since(start), 2) << " s)\n";
  return truth;
}

void dump_coreness_csv(const Graph& g, const CorenessResult& r, const std::string& path,
                       std::ostream& log) {
  std::ofstream out(path);
  if (!out) {
    log << "error: cannot write " << path << "\n";
    return;
  }
  out << "node,coreness\n";
  for (NodeId u = 0; u < g.node_count(); ++u)
    out << g.original_id(u) << ',' << r.coreness[u] << '\n';
  log << "coreness written to " << path << "\n";
}

// Writes node-by-node diffs and returns the path, empty on I/O failure.
std::string write_mismatch_report(const Graph& g, const std::vector<Mismatch>& bad,
                                  const std::string& path, std::ostream& log) {
  std::ofstream out(path);
  if (!out) {
    log << "error: cannot write mismatch report " << path << "\n";
    return {};
  }
  out << "node,original_id,candidate,truth\n";
  for (const Mismatch& m : bad)
    out << m.node << ',' << g.original_id(m.node) << ',' << m.candidate << ',' << m.truth << '\n';
  log << bad.size() << " mismatches written to " << path << "\n";
  return path;
}

}  // namespace

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::Oracle: return "oracle";
    case Algo::SequentialK: return "sequentialk";
    case Algo::ParallelK: return "parallelk";
    case Algo::FastK: return "fastk";
  }
  return "?";
}

std::optional<Algo> parse_algo(std::string_view name) {
  for (Algo a : {Algo::Oracle, Algo::SequentialK, Algo::ParallelK, Algo::FastK})
    if (name == algo_name(a)) return a;
  return std::nullopt;
}

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::DataParallelLoop: return "data-parallel";
    case Strategy::TaskPool: return "task-pool";
    case Strategy::DedicatedWorkers: return "dedicated";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  for (Strategy s :
       {Strategy::DataParallelLoop, Strategy::TaskPool, Strategy::DedicatedWorkers})
    if (name == strategy_name(s)) return s;
  return std::nullopt;
}

TimedRun run_engine_once(const Graph& g, const BenchConfig& cfg, const Instrumentation* instr) {
  TimedRun out;
  auto start = Clock::now();
  switch (cfg.algo) {
    case Algo::Oracle:
      out.engine.result = peel_coreness(g);
      break;
    case Algo::SequentialK:
      out.engine = sequentialk_run(g, {.sorted_neighbors = cfg.sorted_neighbors}, instr);
      break;
    case Algo::ParallelK:
      out.engine = parallelk_run(g,
                                 {.strategy = cfg.strategy,
                                  .threads = cfg.threads,
                                  .batch = cfg.batch,
                                  .sorted_neighbors = cfg.sorted_neighbors,
                                  .single_round = cfg.single_round,
                                  .selective_send = cfg.selective_send},
                                 instr);
      break;
    case Algo::FastK:
      out.engine = fastk_run(g,
                             {.threads = cfg.threads,
                              .batch = cfg.batch,
                              .extended_notify = cfg.extended_notify,
                              .hybrid_tail = cfg.hybrid_tail},
                             instr);
      break;
  }
  out.seconds = seconds_since(start);
  return out;
}

void write_csv_header(std::ostream& out) {
  out << "graph,algo,strategy,threads,batch,sorted_neighbors,single_round,selective_send,"
         "extended_notify,hybrid_tail,instrumented,rep,seconds,iterations,messages_sent,"
         "messages_drained,tail_pops,kmax,verified,speedup\n";
}

void write_csv_row(std::ostream& out, const BenchConfig& cfg, std::string_view graph,
                   std::string_view rep, double seconds, const RunReport& report,
                   std::uint32_t k_max, std::string_view verified, double speedup) {
  const bool instrumented = cfg.trace_convergence || cfg.count_messages;
  out << graph << ',' << algo_name(cfg.algo) << ','
      << (cfg.algo == Algo::ParallelK ? strategy_name(cfg.strategy) : "-") << ','
      << cfg.threads << ',' << cfg.batch << ',' << int(cfg.sorted_neighbors) << ','
      << int(cfg.single_round) << ',' << int(cfg.selective_send) << ','
      << int(cfg.extended_notify) << ',' << int(cfg.hybrid_tail) << ',' << int(instrumented)
      << ',' << rep << ',' << fmt(seconds, 6) << ',' << report.iterations << ',';
  if (cfg.count_messages)
    out << report.messages_sent << ',' << report.messages_drained << ',' << report.tail_pops;
  else
    out << ",,";
  out << ',' << k_max << ',' << verified << ',';
  if (speedup > 0.0) out << fmt(speedup, 3);
  out << '\n';
}

namespace {

struct PreparedRun {
  Graph graph;
  std::string name;
  CorenessResult truth;
  bool have_truth = false;
};

PreparedRun prepare(const BenchConfig& cfg, std::ostream& log, bool need_truth) {
  PreparedRun p;
  p.graph = load_logged(cfg.input, log);
  p.name = graph_name(cfg.input);
  if (need_truth) {
    p.truth = oracle_logged(p.graph, log);
    p.have_truth = true;
  }
  return p;
}

struct RepSummary {
  std::vector<double> times;
  RunReport last_report;
  std::uint32_t last_kmax = 0;
};

// Shared by run/sweep/trace: R repetitions of one config over a loaded graph.
// Appends rows; returns 0 or 3.
int repetitions(const PreparedRun& p, const BenchConfig& cfg, std::ostream& csv,
                std::ostream& log, RepSummary* summary) {
  Instrumentation instr;
  instr.truth = p.have_truth ? &p.truth : nullptr;
  instr.trace_convergence = cfg.trace_convergence;
  const Instrumentation* ip = cfg.trace_convergence ? &instr : nullptr;

  int code = 0;
  for (unsigned rep = 0; rep < cfg.reps; ++rep) {
    TimedRun tr = run_engine_once(p.graph, cfg, ip);
    std::string verified = "skip";
    if (cfg.verify && p.have_truth) {
      auto bad = verify(tr.engine.result, p.truth);
      if (bad.empty()) {
        verified = "yes";
      } else {
        verified = "no";
        code = 3;
        std::string path = cfg.mismatch_report.empty() ? p.name + ".mismatches.csv"
                                                       : cfg.mismatch_report;
        write_mismatch_report(p.graph, bad, path, log);
      }
    }
    write_csv_row(csv, cfg, p.name, std::to_string(rep), tr.seconds, tr.engine.report,
                  tr.engine.result.k_max, verified, 0.0);
    if (summary) {
      summary->times.push_back(tr.seconds);
      summary->last_report = tr.engine.report;
      summary->last_kmax = tr.engine.result.k_max;
    }
    if (cfg.trace_convergence && rep == 0) {
      std::string path = p.name + "-" + std::string(algo_name(cfg.algo)) + ".trace.csv";
      std::ofstream tout(path);
      if (tout) {
        tout << "iteration,mean_error,active_fraction\n";
        for (std::size_t i = 0; i < tr.engine.report.trace.size(); ++i)
          tout << i << ',' << fmt(tr.engine.report.trace[i].mean_error, 6) << ','
               << fmt(tr.engine.report.trace[i].active_fraction, 6) << '\n';
        log << "trace written to " << path << "\n";
      } else {
        log << "error: cannot write trace " << path << "\n";
      }
    }
    if (!cfg.dump_coreness.empty() && rep == cfg.reps - 1)
      dump_coreness_csv(p.graph, tr.engine.result, cfg.dump_coreness, log);
  }
  return code;
}

}  // namespace

int cmd_run(const BenchConfig& cfg, std::ostream& csv, std::ostream& log) {
  try {
    PreparedRun p = prepare(cfg, log, cfg.verify || cfg.trace_convergence);
    write_csv_header(csv);
    return repetitions(p, cfg, csv, log, nullptr);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_sweep(const BenchConfig& cfg, const std::string& axis,
              std::span<const std::uint64_t> values, std::ostream& csv, std::ostream& log) {
  if (values.empty()) {
    log << "error: empty axis value list\n";
    return 2;
  }
  try {
    PreparedRun p = prepare(cfg, log, cfg.verify || cfg.trace_convergence);
    write_csv_header(csv);

    struct Point {
      BenchConfig cfg;
      double mean = 0.0;
      RepSummary summary;
      int code = 0;
      bool failed = false;
    };
    std::vector<Point> points;
    int worst = 0;
    for (std::uint64_t v : values) {
      Point pt;
      pt.cfg = cfg;
      if (axis == "threads")
        pt.cfg.threads = static_cast<unsigned>(v);
      else
        pt.cfg.batch = static_cast<std::uint32_t>(v);
      // Sweep emits aggregate rows only; per-rep rows go to a scratch stream.
      std::ostringstream rep_rows;
      try {
        pt.code = repetitions(p, pt.cfg, rep_rows, log, &pt.summary);
      } catch (const std::exception& e) {
        log << "error: axis point " << v << ": " << e.what() << "\n";
        pt.failed = true;
        worst = std::max(worst, 2);
        points.push_back(std::move(pt));
        continue;
      }
      for (double t : pt.summary.times) pt.mean += t;
      pt.mean /= static_cast<double>(pt.summary.times.size());
      worst = std::max(worst, pt.code);
      points.push_back(std::move(pt));
    }

    // Speedup against the T=1 point when present, else the first healthy one.
    double base = 0.0;
    if (axis == "threads") {
      for (const Point& pt : points)
        if (!pt.failed && base == 0.0) base = pt.mean;
      for (const Point& pt : points)
        if (!pt.failed && pt.cfg.threads == 1) base = pt.mean;
    }
    for (const Point& pt : points) {
      if (pt.failed) continue;
      double speedup = axis == "threads" && pt.mean > 0.0 ? base / pt.mean : 0.0;
      write_csv_row(csv, pt.cfg, p.name, "mean", pt.mean, pt.summary.last_report,
                    pt.summary.last_kmax, pt.code == 3 ? "no" : (cfg.verify ? "yes" : "skip"),
                    speedup);
    }
    return worst;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_trace(const BenchConfig& cfg, std::ostream& trace_csv, std::ostream& log) {
  BenchConfig c = cfg;
  c.trace_convergence = true;
  c.reps = 1;
  try {
    PreparedRun p = prepare(c, log, true);
    Instrumentation instr;
    instr.truth = &p.truth;
    instr.trace_convergence = true;
    TimedRun tr = run_engine_once(p.graph, c, &instr);
    trace_csv << "iteration,mean_error,active_fraction\n";
    for (std::size_t i = 0; i < tr.engine.report.trace.size(); ++i)
      trace_csv << i << ',' << fmt(tr.engine.report.trace[i].mean_error, 6) << ','
                << fmt(tr.engine.report.trace[i].active_fraction, 6) << '\n';
    log << "trace: " << tr.engine.report.trace.size() << " rows, " << tr.engine.report.iterations
        << " iterations, " << fmt(tr.seconds, 3) << " s\n";
    if (c.verify) {
      auto bad = verify(tr.engine.result, p.truth);
      if (!bad.empty()) {
        write_mismatch_report(p.graph, bad, p.name + ".mismatches.csv", log);
        return 3;
      }
    }
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

int cmd_verify(const BenchConfig& cfg, std::ostream& log) {
  try {
    PreparedRun p = prepare(cfg, log, true);
    TimedRun tr = run_engine_once(p.graph, cfg, nullptr);
    auto bad = verify(tr.engine.result, p.truth);
    if (!cfg.dump_coreness.empty())
      dump_coreness_csv(p.graph, tr.engine.result, cfg.dump_coreness, log);
    if (bad.empty()) {
      log << "verify: " << algo_name(cfg.algo) << " matches the oracle on " << p.graph.node_count()
          << " nodes (kMax " << tr.engine.result.k_max << ")\n";
      return 0;
    }
    for (std::size_t i = 0; i < bad.size() && i < 10; ++i)
      log << "  node " << bad[i].node << " (source id " << p.graph.original_id(bad[i].node)
          << "): got " << bad[i].candidate << ", want " << bad[i].truth << "\n";
    write_mismatch_report(p.graph, bad, p.name + ".mismatches.csv", log);
    return 3;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  }
}

std::span<const DatasetSpec> dataset_manifest() {
  static const DatasetSpec table[] = {
      {"roadNet-PA", "roadNet-PA.txt.gz", 1088092, 1541898, 3, false},
      {"roadNet-TX", "roadNet-TX.txt.gz", 1379917, 1921660, 3, false},
      {"roadNet-CA", "roadNet-CA.txt.gz", 1965206, 2766607, 3, false},
      {"web-NotreDame", "web-NotreDame.txt.gz", 325729, 1497134, 155, true},
      {"web-Stanford", "web-Stanford.txt.gz", 281903, 2312497, 71, true},
      {"web-Google", "web-Google.txt.gz", 875713, 5105039, 44, false},
      {"wiki-Talk", "wiki-Talk.txt.gz", 2394385, 5021410, 131, false},
      {"web-BerkStan", "web-BerkStan.txt.gz", 685230, 7600595, 201, true},
      {"soc-Pokec", "soc-pokec-relationships.txt.gz", 1632803, 30622564, 47, false},
      {"soc-LiveJournal", "soc-LiveJournal1.txt.gz", 4847571, 68993773, 372, false},
  };
  return table;
}

const DatasetSpec* find_dataset(std::string_view name) {
  for (const DatasetSpec& d : dataset_manifest())
    if (d.name == name) return &d;
  return nullptr;
}

std::string dataset_path(const std::string& data_dir, const DatasetSpec& d) {
  return (fs::path(data_dir) / d.archive).string();
}

namespace {

bool download(const DatasetSpec& d, const std::string& path, std::ostream& log) {
  const std::string tmp = path + ".part";
  std::ofstream out(tmp, std::ios::binary);
  if (!out) {
    log << "error: cannot write " << tmp << "\n";
    return false;
  }
  httplib::SSLClient cli("snap.stanford.edu");
  cli.set_follow_location(true);
  cli.set_connection_timeout(30, 0);
  cli.set_read_timeout(600, 0);
  log << "fetching https://snap.stanford.edu/data/" << d.archive << " ...\n";
  auto res = cli.Get(("/data/" + std::string(d.archive)).c_str(),
                     [&](const char* data, size_t len) {
                       out.write(data, static_cast<std::streamsize>(len));
                       return static_cast<bool>(out);
                     });
  out.close();
  if (!res || res->status != 200) {
    log << "error: download failed for " << d.name << " ("
        << (res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error()))
        << ")\n";
    std::error_code ec;
    fs::remove(tmp, ec);
    return false;
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    log << "error: cannot move " << tmp << " into place: " << ec.message() << "\n";
    return false;
  }
  return true;
}

// Published counts are the source's raw numbers; directed sources publish arc
// counts, so the simplified undirected edge count legitimately differs. Both
// values are printed and mismatches stay warnings.
void check_counts(const DatasetSpec& d, const std::string& path, std::ostream& log) {
  Graph g = load_edge_list_file(path);
  log << "  " << d.name << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
  if (g.node_count() != d.nodes)
    log << "  warning: node count " << g.node_count() << " differs from published " << d.nodes
        << "\n";
  if (g.edge_count() != d.edges)
    log << "  warning: edge count " << g.edge_count() << " differs from published " << d.edges
        << " (published counts are raw arc counts for directed sources)\n";
}

}  // namespace

int cmd_fetch(std::span<const std::string> names, const std::string& data_dir, bool skip_check,
              std::ostream& log) {
  if (names.empty()) {  // no-op: list status only
    for (const DatasetSpec& d : dataset_manifest()) {
      bool present = fs::exists(dataset_path(data_dir, d));
      log << d.name << ": " << (present ? "present" : "absent") << "\n";
    }
    return 0;
  }

  std::error_code ec;
  fs::create_directories(data_dir, ec);
  int failures = 0;
  for (const std::string& name : names) {
    const DatasetSpec* d = find_dataset(name);
    if (d == nullptr) {
      log << "error: unknown dataset '" << name << "'\n";
      ++failures;
      continue;
    }
    const std::string path = dataset_path(data_dir, *d);
    if (fs::exists(path)) {
      log << d->name << ": already present\n";
    } else if (!download(*d, path, log)) {
      ++failures;
      continue;
    }
    if (skip_check) continue;
    try {
      check_counts(*d, path, log);
    } catch (const std::exception& e) {
      log << "error: " << d->name << ": " << e.what() << "\n";
      ++failures;
    }
  }
  if (failures > 0) log << failures << " dataset(s) failed\n";
  return failures > 0 ? 2 : 0;
}

}  // namespace kcore
