#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nercheck/backend.hpp"
#include "nercheck/core.hpp"
#include "nercheck/eval.hpp"
#include "nercheck/filters.hpp"
#include "nercheck/mr_check.hpp"
#include "nercheck/mutation.hpp"
#include "nercheck/oracles.hpp"
#include "nercheck/repair.hpp"

namespace nercheck {

// The sentence/issue kernels are data-parallel; Parallel runs them under
// OpenMP with results collected into per-index slots and merged in corpus
// order, so both modes produce byte-identical files. Serial is the reference
// implementation used for testing and as the fallback without OpenMP.
enum class ExecutionMode { Serial, Parallel };

struct RunOptions {
  std::vector<MutationKind> schemes = {MutationKind::TokenSubst, MutationKind::PhraseSubst,
                                       MutationKind::Structural, MutationKind::EntityShuffle};
  std::uint64_t seed = 0;
  int max_mutants_per_sentence = 0;  // 0 = unlimited
  ExecutionMode mode = ExecutionMode::Parallel;
};

struct StageCheckpoints {
  long sentences = 0;
  long generated = 0;
  long kept = 0;
  long rejected = 0;
  long tested = 0;
  long issues = 0;
  long repaired = 0;
};

struct RunManifest {
  std::string run_id;
  std::string backend_name;
  std::string backend_version;
  std::string corpus_digest;
  std::uint64_t seed = 0;
  std::vector<std::string> schemes;
  PipelineConfig config;
  StageCheckpoints checkpoints;
  long long started_at_ms = 0;
  long long finished_at_ms = 0;
};

void save_manifest(const std::filesystem::path& path, const RunManifest& manifest);

struct SentenceLog {
  std::string sentence_id;
  std::string message;
};

struct TestStageResult {
  std::vector<SuspiciousIssue> issues;
  std::vector<MutantPair> kept;
  std::vector<RejectedPair> rejected;
  std::vector<SentenceLog> warnings;
  RunManifest manifest;
};

// Per sentence: predict, generate mutants under the enabled schemes, filter,
// predict mutants, check metamorphic relations. Per-sentence failures are
// logged and skipped, never fatal.
TestStageResult run_test_stage(const std::vector<Sentence>& corpus, const NerBackend& backend,
                               ResponseCache* cache, const OracleSuite& oracles,
                               const PipelineConfig& config, const RunOptions& options);

struct RepairStageResult {
  std::vector<IssueRepair> repairs;
  std::vector<SentenceLog> warnings;
};

RepairStageResult run_repair_stage(const std::vector<SuspiciousIssue>& issues,
                                   const NerBackend& backend, ResponseCache* cache,
                                   const OracleSuite& oracles, const PipelineConfig& config,
                                   const RunOptions& options);

// Per-sentence seed derived from the root seed, so parallel scheduling cannot
// perturb shuffle outputs.
std::uint64_t sentence_seed(std::uint64_t root_seed, const std::string& sentence_id);

std::string corpus_digest(const std::vector<Sentence>& corpus);

// Flat key=value config with optional [section] headers; unknown keys are
// errors. Values override `base`.
PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base);

// Metrics report (single JSON document, serialized): per-scheme and overall
// precision from human verdicts joined by issue_id, plus error-category
// distribution. Unknown verdict ids raise IdMismatchError.
std::string metrics_report_from_verdicts(const std::vector<IssueRepair>& repairs,
                                         const std::vector<HumanVerdict>& verdicts);

// Metrics judged against a lexicon ground truth: oracle precision over the
// issues plus repair transition counts and ratios.
std::string metrics_report_from_ground_truth(const std::vector<IssueRepair>& repairs,
                                             const std::map<std::string, std::string>& lexicon);

}  // namespace nercheck
