#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kcore/bench.hpp"
#include "kcore/oracle.hpp"
#include "test_support.hpp"

using namespace kcore;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

constexpr std::string_view kHeader =
    "graph,algo,strategy,threads,batch,sorted_neighbors,single_round,selective_send,"
    "extended_notify,hybrid_tail,instrumented,rep,seconds,iterations,messages_sent,"
    "messages_drained,tail_pops,kmax,verified,speedup\n";

}  // namespace

TEST_CASE("algorithm and strategy names round-trip") {
  for (Algo a : {Algo::Oracle, Algo::SequentialK, Algo::ParallelK, Algo::FastK})
    CHECK(parse_algo(algo_name(a)) == a);
  for (Strategy s :
       {Strategy::DataParallelLoop, Strategy::TaskPool, Strategy::DedicatedWorkers})
    CHECK(parse_strategy(strategy_name(s)) == s);
  CHECK(algo_name(Algo::FastK) == "fastk");
  CHECK(strategy_name(Strategy::TaskPool) == "task-pool");
  CHECK_FALSE(parse_algo("FASTK").has_value());
  CHECK_FALSE(parse_algo("").has_value());
  CHECK_FALSE(parse_strategy("dedicated-workers").has_value());
}

TEST_CASE("csv header") {
  std::ostringstream out;
  write_csv_header(out);
  CHECK(out.str() == kHeader);
}

TEST_CASE("csv row formatting") {
  BenchConfig cfg;
  cfg.algo = Algo::FastK;
  cfg.threads = 2;
  cfg.batch = 64;
  std::ostringstream out;

  SUBCASE("defaults, no message counters, no speedup") {
    RunReport rep;
    rep.iterations = 5;
    write_csv_row(out, cfg, "g1", "0", 0.123456789, rep, 7, "yes", 0.0);
    CHECK(out.str() == "g1,fastk,-,2,64,1,0,0,1,1,0,0,0.123457,5,,,,7,yes,\n");
  }

  SUBCASE("message counters and speedup") {
    cfg.algo = Algo::ParallelK;
    cfg.strategy = Strategy::TaskPool;
    cfg.threads = 8;
    cfg.batch = 256;
    cfg.sorted_neighbors = false;
    cfg.single_round = true;
    cfg.selective_send = true;
    cfg.count_messages = true;
    RunReport rep;
    rep.iterations = 10;
    rep.messages_sent = 120;
    rep.messages_drained = 120;
    rep.tail_pops = 0;
    write_csv_row(out, cfg, "g2", "mean", 1.5, rep, 3, "skip", 2.0);
    CHECK(out.str() == "g2,parallelk,task-pool,8,256,0,1,1,1,1,1,mean,1.500000,10,120,120,0,3,skip,2.000\n");
  }

  SUBCASE("strategy column only filled for the mailbox parallel engine") {
    RunReport rep;
    cfg.algo = Algo::SequentialK;
    write_csv_row(out, cfg, "g3", "1", 0.25, rep, 2, "yes", 0.0);
    CHECK(out.str().find(",sequentialk,-,") != std::string::npos);
  }
}

TEST_CASE("run_engine_once dispatches on the algorithm") {
  Graph g = kctest::triangle();
  for (Algo a : {Algo::Oracle, Algo::SequentialK, Algo::ParallelK, Algo::FastK}) {
    BenchConfig cfg;
    cfg.algo = a;
    cfg.threads = 2;
    cfg.batch = 4;
    TimedRun tr = run_engine_once(g, cfg, nullptr);
    INFO("algo ", algo_name(a));
    CHECK(tr.engine.result.coreness == std::vector<std::uint32_t>{2, 2, 2});
    CHECK(tr.engine.result.k_max == 2);
    CHECK(tr.seconds >= 0.0);
  }
}

TEST_CASE("run command produces one row per repetition") {
  std::string input = write_temp("kcb_graph.txt", "0 1\n1 2\n2 0\n2 3\n");
  BenchConfig cfg;
  cfg.input = input;
  cfg.algo = Algo::SequentialK;
  cfg.reps = 2;
  cfg.count_messages = true;
  std::ostringstream csv, log;
  CHECK(cmd_run(cfg, csv, log) == 0);

  std::string text = csv.str();
  CHECK(text.substr(0, kHeader.size()) == kHeader);
  CHECK(count_lines(text) == 3);  // header + two repetitions
  CHECK(text.find("kcb_graph,sequentialk,-,") != std::string::npos);
  CHECK(text.find(",yes,") != std::string::npos);
  CHECK(text.find(",0,0.") != std::string::npos);  // rep column then seconds
  CHECK(log.str().find("loaded") != std::string::npos);
  CHECK(log.str().find("oracle: kMax 2") != std::string::npos);
  fs::remove(input);
}

TEST_CASE("run command fails cleanly on a missing input") {
  BenchConfig cfg;
  cfg.input = "/nonexistent/kcb-missing.txt";
  std::ostringstream csv, log;
  CHECK(cmd_run(cfg, csv, log) == 2);
  CHECK(log.str().find("error") != std::string::npos);
}

TEST_CASE("trace command emits the convergence table") {
  std::string input = write_temp("kcb_star.txt", "0 1\n0 2\n0 3\n0 4\n");
  BenchConfig cfg;
  cfg.input = input;

  SUBCASE("single-threaded engine") {
    cfg.algo = Algo::SequentialK;
    std::ostringstream trace, log;
    CHECK(cmd_trace(cfg, trace, log) == 0);
    CHECK(trace.str() ==
          "iteration,mean_error,active_fraction\n"
          "0,0.600000,1.000000\n"
          "1,0.000000,0.800000\n"
          "2,0.000000,0.000000\n");
    CHECK(log.str().find("trace: 3 rows, 2 iterations") != std::string::npos);
  }

  SUBCASE("flat-state engine with the queue tail") {
    cfg.algo = Algo::FastK;
    cfg.threads = 4;
    std::ostringstream trace, log;
    CHECK(cmd_trace(cfg, trace, log) == 0);
    CHECK(trace.str() ==
          "iteration,mean_error,active_fraction\n"
          "0,0.600000,1.000000\n"
          "1,0.000000,0.000000\n"
          "2,0.000000,0.000000\n");
  }
  fs::remove(input);
}

TEST_CASE("verify command") {
  std::string input = write_temp("kcb_verify.txt", "10 20\n20 30\n");
  BenchConfig cfg;
  cfg.input = input;
  cfg.algo = Algo::FastK;
  cfg.threads = 2;

  std::string dump = write_temp("kcb_dump.csv", "");
  cfg.dump_coreness = dump;
  std::ostringstream log;
  CHECK(cmd_verify(cfg, log) == 0);
  CHECK(log.str().find("matches the oracle on 3 nodes") != std::string::npos);
  CHECK(slurp(dump) == "node,coreness\n10,1\n20,1\n30,1\n");  // source ids, not dense ids
  fs::remove(input);
  fs::remove(dump);

  BenchConfig missing;
  missing.input = "/nonexistent/kcb-missing.txt";
  std::ostringstream mlog;
  CHECK(cmd_verify(missing, mlog) == 2);
}

TEST_CASE("sweep command aggregates over the axis") {
  std::string input = write_temp("kcb_sweep.txt", "0 1\n1 2\n2 0\n2 3\n3 4\n");
  BenchConfig cfg;
  cfg.input = input;
  cfg.algo = Algo::ParallelK;
  cfg.reps = 2;
  cfg.batch = 4;

  SUBCASE("threads axis reports speedups against one thread") {
    std::uint64_t values[] = {1, 2};
    std::ostringstream csv, log;
    CHECK(cmd_sweep(cfg, "threads", values, csv, log) == 0);
    std::string text = csv.str();
    CHECK(count_lines(text) == 3);  // header + one mean row per point
    CHECK(text.find(",mean,") != std::string::npos);
    // The one-thread row is its own baseline.
    std::size_t t1 = text.find("parallelk,dedicated,1,");
    REQUIRE(t1 != std::string::npos);
    std::string row = text.substr(t1, text.find('\n', t1) - t1);
    CHECK(row.substr(row.size() - 6) == ",1.000");
  }

  SUBCASE("batch axis leaves the speedup column empty") {
    std::uint64_t values[] = {1, 64};
    std::ostringstream csv, log;
    CHECK(cmd_sweep(cfg, "batch", values, csv, log) == 0);
    for (std::string_view line : {",mean,"}) CHECK(csv.str().find(line) != std::string::npos);
    std::string text = csv.str();
    std::size_t pos = text.find('\n');  // skip header
    while ((pos = text.find('\n', pos + 1)) != std::string::npos)
      CHECK(text[pos - 1] == ',');  // trailing empty speedup field
  }

  SUBCASE("empty value list is a usage-level failure") {
    std::ostringstream csv, log;
    CHECK(cmd_sweep(cfg, "threads", {}, csv, log) == 2);
  }
  fs::remove(input);
}

TEST_CASE("dataset manifest") {
  auto manifest = dataset_manifest();
  REQUIRE(manifest.size() == 10);

  std::size_t ci = 0;
  for (const DatasetSpec& d : manifest)
    if (d.ci) ++ci;
  CHECK(ci == 3);

  const DatasetSpec* pa = find_dataset("roadNet-PA");
  REQUIRE(pa != nullptr);
  CHECK(pa->nodes == 1088092);
  CHECK(pa->edges == 1541898);
  CHECK(pa->k_max == 3);
  CHECK_FALSE(pa->ci);

  const DatasetSpec* nd = find_dataset("web-NotreDame");
  REQUIRE(nd != nullptr);
  CHECK(nd->k_max == 155);
  CHECK(nd->ci);

  const DatasetSpec* lj = find_dataset("soc-LiveJournal");
  REQUIRE(lj != nullptr);
  CHECK(lj->nodes == 4847571);
  CHECK(lj->edges == 68993773);
  CHECK(lj->k_max == 372);

  const DatasetSpec* pokec = find_dataset("soc-Pokec");
  REQUIRE(pokec != nullptr);
  CHECK(pokec->archive == "soc-pokec-relationships.txt.gz");  // archive name differs

  CHECK(find_dataset("no-such-dataset") == nullptr);
  CHECK(dataset_path("data", *pa) == "data/roadNet-PA.txt.gz");
}

TEST_CASE("fetch command") {
  fs::path dir = fs::temp_directory_path() / "kcb_fetch_dir";
  fs::create_directories(dir);

  SUBCASE("no names lists status without touching the network") {
    std::ostringstream log;
    std::vector<std::string> none;
    CHECK(cmd_fetch(none, dir.string(), false, log) == 0);
    CHECK(count_lines(log.str()) == 10);
    CHECK(log.str().find("roadNet-PA: absent") != std::string::npos);
  }

  SUBCASE("unknown dataset name fails") {
    std::ostringstream log;
    std::vector<std::string> names = {"no-such-dataset"};
    CHECK(cmd_fetch(names, dir.string(), true, log) == 2);
    CHECK(log.str().find("unknown dataset") != std::string::npos);
  }

  SUBCASE("present file is not re-downloaded") {
    std::ofstream(dir / "web-NotreDame.txt.gz") << "0 1\n";
    std::ostringstream log;
    std::vector<std::string> names = {"web-NotreDame"};
    CHECK(cmd_fetch(names, dir.string(), true, log) == 0);
    CHECK(log.str().find("already present") != std::string::npos);

    std::ostringstream status;
    std::vector<std::string> none;
    CHECK(cmd_fetch(none, dir.string(), false, status) == 0);
    CHECK(status.str().find("web-NotreDame: present") != std::string::npos);
  }

  fs::remove_all(dir);
}
