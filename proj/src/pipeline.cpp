#include "nercheck/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "nercheck/json_io.hpp"

namespace nercheck {

namespace {

long long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

bool scheme_enabled(const RunOptions& options, MutationKind kind) {
  return std::find(options.schemes.begin(), options.schemes.end(), kind) !=
         options.schemes.end();
}

struct SentenceWork {
  std::vector<MutantPair> kept;
  std::vector<RejectedPair> rejected;
  std::vector<SuspiciousIssue> issues;
  std::vector<SentenceLog> warnings;
  long generated = 0;
  long tested = 0;
};

SentenceWork process_sentence(const Sentence& sentence, const NerBackend& backend,
                              ResponseCache* cache, const OracleSuite& oracles,
                              const PipelineConfig& config, const RunOptions& options) {
  SentenceWork work;
  NerOutput output;
  try {
    output = predict(backend, sentence, cache);
  } catch (const std::exception& e) {
    work.warnings.push_back({sentence.id, std::string("prediction failed: ") + e.what()});
    return work;
  }

  std::vector<MutantPair> mutants;
  auto run_scheme = [&](MutationKind kind, auto&& generate) {
    if (!scheme_enabled(options, kind)) return;
    try {
      std::vector<MutantPair> batch = generate();
      mutants.insert(mutants.end(), std::make_move_iterator(batch.begin()),
                     std::make_move_iterator(batch.end()));
    } catch (const std::exception& e) {
      work.warnings.push_back(
          {sentence.id, std::string(kind_name(kind)) + " generation failed: " + e.what()});
    }
  };

  std::optional<ConstituencyTree> tree;
  if (scheme_enabled(options, MutationKind::PhraseSubst) ||
      scheme_enabled(options, MutationKind::Structural)) {
    try {
      tree = oracles.parser->parse(sentence);
    } catch (const std::exception& e) {
      work.warnings.push_back({sentence.id, std::string("parse failed: ") + e.what()});
    }
  }

  run_scheme(MutationKind::TokenSubst,
             [&] { return token_level_mutants(sentence, output, oracles, config); });
  if (tree) {
    run_scheme(MutationKind::PhraseSubst,
               [&] { return phrase_level_mutants(sentence, output, *tree, oracles, config); });
    run_scheme(MutationKind::Structural,
               [&] { return structural_mutants(sentence, output, *tree); });
  }
  run_scheme(MutationKind::EntityShuffle, [&] {
    return entity_shuffle_mutants(sentence, output, sentence_seed(options.seed, sentence.id),
                                  config);
  });

  if (options.max_mutants_per_sentence > 0 &&
      static_cast<int>(mutants.size()) > options.max_mutants_per_sentence)
    mutants.resize(static_cast<std::size_t>(options.max_mutants_per_sentence));
  work.generated = static_cast<long>(mutants.size());

  auto [kept, rejected] = apply_filters(mutants, oracles, config);
  work.rejected = std::move(rejected);
  work.kept = std::move(kept);

  for (const MutantPair& pair : work.kept) {
    try {
      NerOutput mutant_output = predict(backend, pair.mutant, cache);
      NerOutput original_output = output;
      original_output.sentence_id = pair.original.id;
      TestInput input =
          make_test_input(pair, std::move(original_output), std::move(mutant_output));
      ++work.tested;
      std::optional<SuspiciousIssue> issue;
      if (pair.kind == MutationKind::TokenSubst || pair.kind == MutationKind::PhraseSubst)
        issue = check_mr1(input);
      else
        issue = check_mr2(input);
      if (issue) work.issues.push_back(std::move(*issue));
    } catch (const std::exception& e) {
      work.warnings.push_back(
          {pair.mutant.id, std::string("mutant check failed: ") + e.what()});
    }
  }
  return work;
}

bool use_parallel(const RunOptions& options, const PipelineConfig& config,
                  const OracleSuite& oracles) {
  if (options.mode != ExecutionMode::Parallel) return false;
  if (config.parallelism <= 1) return false;
  // An oracle that demands serialized access funnels everything through one
  // worker; running the stage single-threaded is that funnel.
  if (oracles.requires_serialization) return false;
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace

std::uint64_t sentence_seed(std::uint64_t root_seed, const std::string& sentence_id) {
  return fnv1a(sentence_id, fnv1a(std::string_view(reinterpret_cast<const char*>(&root_seed),
                                                   sizeof(root_seed))));
}

std::string corpus_digest(const std::vector<Sentence>& corpus) {
  std::uint64_t h = 14695981039346656037ull;
  for (const Sentence& s : corpus) {
    h = fnv1a(s.id, h);
    h = fnv1a("\x1F", h);
    h = fnv1a(s.text, h);
    h = fnv1a("\n", h);
  }
  return hex64(h);
}

TestStageResult run_test_stage(const std::vector<Sentence>& corpus, const NerBackend& backend,
                               ResponseCache* cache, const OracleSuite& oracles,
                               const PipelineConfig& config, const RunOptions& options) {
  oracles.validate();
  config.validate();

  TestStageResult result;
  result.manifest.started_at_ms = now_ms();

  std::vector<SentenceWork> slots(corpus.size());
  const std::int64_t n = static_cast<std::int64_t>(corpus.size());
  auto kernel = [&](std::int64_t i) {
    try {
      slots[static_cast<std::size_t>(i)] = process_sentence(
          corpus[static_cast<std::size_t>(i)], backend, cache, oracles, config, options);
    } catch (...) {
      slots[static_cast<std::size_t>(i)].warnings.push_back(
          {corpus[static_cast<std::size_t>(i)].id, "sentence skipped: unexpected error"});
    }
  };

  if (use_parallel(options, config, oracles)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(config.parallelism)
    for (std::int64_t i = 0; i < n; ++i) kernel(i);
#endif
  } else {
    for (std::int64_t i = 0; i < n; ++i) kernel(i);
  }

  // Single-writer merge in corpus order keeps files deterministic.
  StageCheckpoints& cp = result.manifest.checkpoints;
  cp.sentences = n;
  for (SentenceWork& w : slots) {
    cp.generated += w.generated;
    cp.kept += static_cast<long>(w.kept.size());
    cp.rejected += static_cast<long>(w.rejected.size());
    cp.tested += w.tested;
    cp.issues += static_cast<long>(w.issues.size());
    std::move(w.issues.begin(), w.issues.end(), std::back_inserter(result.issues));
    std::move(w.kept.begin(), w.kept.end(), std::back_inserter(result.kept));
    std::move(w.rejected.begin(), w.rejected.end(), std::back_inserter(result.rejected));
    std::move(w.warnings.begin(), w.warnings.end(), std::back_inserter(result.warnings));
  }

  RunManifest& m = result.manifest;
  m.backend_name = backend.name();
  m.backend_version = backend.version();
  m.corpus_digest = corpus_digest(corpus);
  m.seed = options.seed;
  for (MutationKind k : options.schemes) m.schemes.push_back(std::string(kind_name(k)));
  m.config = config;
  m.run_id = hex64(fnv1a(m.corpus_digest + m.backend_name + std::to_string(m.seed)));
  m.finished_at_ms = now_ms();
  return result;
}

RepairStageResult run_repair_stage(const std::vector<SuspiciousIssue>& issues,
                                   const NerBackend& backend, ResponseCache* cache,
                                   const OracleSuite& oracles, const PipelineConfig& config,
                                   const RunOptions& options) {
  oracles.validate();
  config.validate();

  struct Slot {
    std::optional<IssueRepair> repair;
    std::vector<SentenceLog> warnings;
  };
  std::vector<Slot> slots(issues.size());
  const std::int64_t n = static_cast<std::int64_t>(issues.size());
  auto kernel = [&](std::int64_t i) {
    const SuspiciousIssue& issue = issues[static_cast<std::size_t>(i)];
    try {
      slots[static_cast<std::size_t>(i)].repair =
          repair_issue(issue, backend, oracles, config, cache);
    } catch (const std::exception& e) {
      slots[static_cast<std::size_t>(i)].warnings.push_back(
          {issue.input.pair.mutant.id, std::string("repair failed: ") + e.what()});
    } catch (...) {
      slots[static_cast<std::size_t>(i)].warnings.push_back(
          {issue.input.pair.mutant.id, "repair failed: unexpected error"});
    }
  };

  if (use_parallel(options, config, oracles)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(config.parallelism)
    for (std::int64_t i = 0; i < n; ++i) kernel(i);
#endif
  } else {
    for (std::int64_t i = 0; i < n; ++i) kernel(i);
  }

  RepairStageResult result;
  for (Slot& s : slots) {
    if (s.repair) result.repairs.push_back(std::move(*s.repair));
    std::move(s.warnings.begin(), s.warnings.end(), std::back_inserter(result.warnings));
  }
  return result;
}

void save_manifest(const std::filesystem::path& path, const RunManifest& m) {
  nlohmann::ordered_json j;
  j["run_id"] = m.run_id;
  j["backend"] = {{"name", m.backend_name}, {"version", m.backend_version}};
  j["corpus_digest"] = m.corpus_digest;
  j["seed"] = m.seed;
  j["schemes"] = m.schemes;
  nlohmann::ordered_json cfg;
  cfg["s_threshold_testing"] = m.config.s_threshold_testing;
  for (MutationKind k : kAllMutationKinds)
    cfg["syn_threshold." + std::string(kind_name(k))] =
        m.config.syn_threshold[static_cast<std::size_t>(k)];
  cfg["p_threshold"] = m.config.p_threshold;
  cfg["s_threshold_repair"] = m.config.s_threshold_repair;
  cfg["k_balance"] = m.config.k_balance;
  cfg["alpha"] = m.config.alpha;
  cfg["lambda"] = m.config.lambda;
  cfg["top_k_testing"] = m.config.top_k_testing;
  cfg["top_k_repair"] = m.config.top_k_repair;
  cfg["shuffle_attempts"] = m.config.shuffle_attempts;
  cfg["parallelism"] = m.config.parallelism;
  j["config"] = std::move(cfg);
  j["checkpoints"] = {{"sentences", m.checkpoints.sentences},
                      {"generated", m.checkpoints.generated},
                      {"kept", m.checkpoints.kept},
                      {"rejected", m.checkpoints.rejected},
                      {"tested", m.checkpoints.tested},
                      {"issues", m.checkpoints.issues},
                      {"repaired", m.checkpoints.repaired}};
  j["started_at_ms"] = m.started_at_ms;
  j["finished_at_ms"] = m.finished_at_ms;
  io::write_text_file(path, j.dump(2) + "\n");
}

PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view v(line);
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r'))
      v.remove_suffix(1);
    if (v.empty() || v.front() == '#' || v.front() == '[') continue;
    auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("config line " + std::to_string(lineno) + " is not key = value");
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return std::string(s);
    };
    std::string key = trim(v.substr(0, eq));
    std::string value = trim(v.substr(eq + 1));

    auto as_double = [&] { return std::stod(value); };
    auto as_int = [&] { return std::stoi(value); };
    if (key == "s_threshold_testing") base.s_threshold_testing = as_double();
    else if (key == "p_threshold") base.p_threshold = as_double();
    else if (key == "s_threshold_repair") base.s_threshold_repair = as_double();
    else if (key == "k_balance") base.k_balance = as_double();
    else if (key == "alpha") base.alpha = as_double();
    else if (key == "lambda") base.lambda = as_double();
    else if (key == "top_k_testing") base.top_k_testing = as_int();
    else if (key == "top_k_repair") base.top_k_repair = as_int();
    else if (key == "shuffle_attempts") base.shuffle_attempts = as_int();
    else if (key == "parallelism") base.parallelism = as_int();
    else if (key.rfind("syn_threshold.", 0) == 0) {
      auto kind = kind_from_name(key.substr(14));
      if (!kind) throw ValidationError("unknown syn_threshold kind in config: " + key);
      base.syn_threshold[static_cast<std::size_t>(*kind)] = as_double();
    } else {
      throw ValidationError("unknown config key '" + key + "' at line " + std::to_string(lineno));
    }
  }
  base.validate();
  return base;
}

namespace {

struct PrecisionCell {
  long erroneous = 0;
  long total = 0;
};

nlohmann::ordered_json precision_cell_json(const PrecisionCell& c) {
  nlohmann::ordered_json j;
  j["erroneous"] = c.erroneous;
  j["total"] = c.total;
  if (c.total > 0)
    j["precision"] = static_cast<double>(c.erroneous) / static_cast<double>(c.total);
  else
    j["precision"] = nullptr;
  return j;
}

}  // namespace

std::string metrics_report_from_verdicts(const std::vector<IssueRepair>& repairs,
                                         const std::vector<HumanVerdict>& verdicts) {
  std::map<std::string, const IssueRepair*> by_id;
  for (const IssueRepair& r : repairs) by_id[r.issue_id] = &r;

  std::vector<std::string> unmatched;
  for (const HumanVerdict& v : verdicts)
    if (!by_id.count(v.issue_id)) unmatched.push_back(v.issue_id);
  if (!unmatched.empty()) {
    std::string ids;
    for (const std::string& id : unmatched) ids += (ids.empty() ? "" : ", ") + id;
    throw IdMismatchError("verdict ids not found in repairs: " + ids);
  }

  PrecisionCell overall;
  std::map<std::string, PrecisionCell> per_scheme;
  std::map<std::string, long> categories;
  for (const HumanVerdict& v : verdicts) {
    const IssueRepair& r = *by_id.at(v.issue_id);
    PrecisionCell& cell = per_scheme[std::string(kind_name(r.kind))];
    ++cell.total;
    ++overall.total;
    if (v.is_erroneous) {
      ++cell.erroneous;
      ++overall.erroneous;
      ++categories[std::string(error_category_name(*v.error_category))];
    }
  }

  nlohmann::ordered_json j;
  nlohmann::ordered_json schemes;
  for (MutationKind k : kAllMutationKinds) {
    auto it = per_scheme.find(std::string(kind_name(k)));
    if (it != per_scheme.end()) schemes[it->first] = precision_cell_json(it->second);
  }
  j["precision"] = {{"per_scheme", std::move(schemes)}, {"overall", precision_cell_json(overall)}};
  nlohmann::ordered_json cats;
  long total_errors = 0;
  for (const auto& [name, count] : categories) total_errors += count;
  for (const auto& [name, count] : categories) {
    cats[name] = {{"count", count},
                  {"share", total_errors > 0 ? nlohmann::ordered_json(
                                                   static_cast<double>(count) /
                                                   static_cast<double>(total_errors))
                                             : nlohmann::ordered_json(nullptr)}};
  }
  j["error_categories"] = std::move(cats);
  j["source"] = "human_verdicts";
  return j.dump(2) + "\n";
}

std::string metrics_report_from_ground_truth(const std::vector<IssueRepair>& repairs,
                                             const std::map<std::string, std::string>& lexicon) {
  auto expected_labels = [&](const std::string& text, const std::string& surface) {
    std::vector<std::string> labels;
    for (const NerPrediction& p : lexicon_scan(text, lexicon))
      if (p.surface == surface) labels.push_back(p.category.label);
    std::sort(labels.begin(), labels.end());
    return labels;
  };
  auto actual_labels = [](const NerOutput& out, const std::string& surface) {
    std::vector<std::string> labels;
    for (const NerPrediction& p : out.predictions)
      if (p.surface == surface) labels.push_back(p.category.label);
    std::sort(labels.begin(), labels.end());
    return labels;
  };
  auto output_correct = [&](const Sentence& s, const NerOutput& out) {
    return predictions_multiset(out) ==
           predictions_multiset(NerOutput{s.id, lexicon_scan(s.text, lexicon)});
  };

  PrecisionCell oracle_precision;
  ConfusionCounts counts;
  for (const IssueRepair& r : repairs) {
    ++oracle_precision.total;
    if (!output_correct(r.original, r.original_side.before) ||
        !output_correct(r.mutant, r.mutant_side.before))
      ++oracle_precision.erroneous;

    auto tally = [&](const Sentence& s, const SideRepair& side) {
      for (const RepairOutcome& o : side.outcomes) {
        std::vector<std::string> truth = expected_labels(s.text, o.entity.surface);
        bool before_ok = actual_labels(side.before, o.entity.surface) == truth;
        bool after_ok = actual_labels(side.after, o.entity.surface) == truth;
        if (before_ok && after_ok) ++counts.tt;
        else if (before_ok && !after_ok) ++counts.tf;
        else if (!before_ok && after_ok) ++counts.ft;
        else ++counts.ff;
      }
    };
    tally(r.original, r.original_side);
    tally(r.mutant, r.mutant_side);
  }

  nlohmann::ordered_json j;
  j["oracle_precision"] = precision_cell_json(oracle_precision);
  j["repair"] = {{"tt", counts.tt}, {"tf", counts.tf}, {"ft", counts.ft}, {"ff", counts.ff},
                 {"num_error", counts.num_error()}, {"num_correct", counts.num_correct()}};
  if (counts.num_error() > 0) {
    j["repair"]["err2cor"] =
        static_cast<double>(counts.ft) / static_cast<double>(counts.num_error());
    j["repair"]["error_reduce"] =
        static_cast<double>(counts.ft - counts.tf) / static_cast<double>(counts.num_error());
  } else {
    j["repair"]["err2cor"] = nullptr;
    j["repair"]["error_reduce"] = nullptr;
  }
  if (counts.num_correct() > 0)
    j["repair"]["cor2err"] =
        static_cast<double>(counts.tf) / static_cast<double>(counts.num_correct());
  else
    j["repair"]["cor2err"] = nullptr;
  j["source"] = "ground_truth";
  return j.dump(2) + "\n";
}

}  // namespace nercheck
