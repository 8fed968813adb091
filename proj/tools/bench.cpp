// Benchmark comparing the serial reference pipeline against the OpenMP path
// on a synthetic corpus, verifying that both produce identical files.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nercheck/backend.hpp"
#include "nercheck/json_io.hpp"
#include "nercheck/oracles.hpp"
#include "nercheck/pipeline.hpp"

using namespace nercheck;

namespace {

struct Synthetic {
  std::vector<Sentence> corpus;
  std::map<std::string, std::string> lexicon;
  std::vector<FaultRule> faults;
};

Synthetic make_corpus(int n_sentences, std::uint64_t seed) {
  Synthetic s;
  const std::vector<std::string> people = {"Alice Carter", "Bob Reyes",   "Carol Ngu",
                                           "David Brook",  "Erin Walsh",  "Frank Moss",
                                           "Grace Lindt",  "Henry Stone"};
  const std::vector<std::string> orgs = {"Acme Corp",    "Borealis Ltd", "Cobalt Labs",
                                         "Delta Media",  "Equinox Bank", "Futura PLC"};
  const std::vector<std::string> places = {"Ruritania", "Valdoria", "Meridia", "Northglen"};
  for (const auto& p : people) s.lexicon[p] = "PER";
  for (const auto& o : orgs) s.lexicon[o] = "ORG";
  for (const auto& l : places) s.lexicon[l] = "LOC";

  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::string>& pool) { return pool[rng() % pool.size()]; };
  for (int i = 0; i < n_sentences; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "b%05d", i);
    std::string text;
    switch (i % 4) {
      case 0:
        text = pick(people) + ", " + pick(people) + ", and " + pick(people) +
               " visited the new office of " + pick(orgs) + " in " + pick(places) + ".";
        break;
      case 1:
        text = pick(orgs) + " announced a major deal with " + pick(orgs) + " in " +
               pick(places) + ".";
        break;
      case 2:
        text = pick(people) + " said the recent report remained active in " + pick(places) + ".";
        break;
      default:
        text = "The investigation was the obvious solution for " + pick(orgs) + " and " +
               pick(orgs) + ".";
        break;
    }
    s.corpus.push_back(tokenize(text, id));
  }

  // A mutant-only trigger so the repair stage has issues to chew on.
  s.faults.push_back(FaultRule{{FaultTrigger::Kind::Suffix, "?"},
                               {FaultEffect::Kind::DropEntity, "Acme Corp", "", {}}});
  return s;
}

template <typename F>
double timed_ms(F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  int n_sentences = argc > 1 ? std::atoi(argv[1]) : 600;
  int threads = 0;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  if (argc > 2) threads = std::atoi(argv[2]);
  if (threads < 2) threads = 2;

  Synthetic data = make_corpus(n_sentences, 7);
  OracleSuite oracles = builtin_oracle_suite(7);

  PipelineConfig config;
  RunOptions options;
  options.seed = 7;

  std::string serial_issues, parallel_issues, serial_repairs, parallel_repairs;

  auto run = [&](ExecutionMode mode, int parallelism, std::string* issues_out,
                 std::string* repairs_out) {
    auto backend = dictionary_mock_backend(data.lexicon, data.faults, "bench");
    ResponseCache cache;
    PipelineConfig cfg = config;
    cfg.parallelism = parallelism;
    RunOptions opts = options;
    opts.mode = mode;
    TestStageResult test = run_test_stage(data.corpus, *backend, &cache, oracles, cfg, opts);
    RepairStageResult repair =
        run_repair_stage(test.issues, *backend, &cache, oracles, cfg, opts);
    *issues_out = io::issues_to_jsonl(test.issues);
    *repairs_out = io::repairs_to_jsonl(repair.repairs);
    return test.issues.size();
  };

  std::size_t n_issues = 0;
  double t_serial = timed_ms(
      [&] { n_issues = run(ExecutionMode::Serial, 1, &serial_issues, &serial_repairs); });
  double t_parallel = timed_ms(
      [&] { run(ExecutionMode::Parallel, threads, &parallel_issues, &parallel_repairs); });

  bool identical = serial_issues == parallel_issues && serial_repairs == parallel_repairs;

  std::cout << "sentences:        " << n_sentences << '\n'
            << "issues:           " << n_issues << '\n'
            << "threads:          " << threads << '\n'
            << "serial (ms):      " << t_serial << '\n'
            << "parallel (ms):    " << t_parallel << '\n'
            << "speedup:          " << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << '\n'
            << "outputs identical: " << (identical ? "yes" : "NO") << '\n';
#ifndef _OPENMP
  std::cout << "(built without OpenMP: parallel path falls back to serial)\n";
#endif
  return identical ? 0 : 1;
}
