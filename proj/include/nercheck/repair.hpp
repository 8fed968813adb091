#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nercheck/backend.hpp"
#include "nercheck/core.hpp"
#include "nercheck/mr_check.hpp"
#include "nercheck/oracles.hpp"

namespace nercheck {

// A surface present in both sentences of an issue whose predictions disagree
// (absence on one side counts as disagreeing). The repair unit.
struct SuspiciousEntity {
  std::string surface;
  std::optional<EntityCategory> label_in_original;  // nullopt = unlabeled
  std::optional<EntityCategory> label_in_mutant;
  std::vector<std::pair<int, int>> occurrences_original;
  std::vector<std::pair<int, int>> occurrences_mutant;
};

// Accumulated vote per category, including the synthetic NULL category.
struct ScoreTable {
  std::map<EntityCategory, double> entries;
  std::map<EntityCategory, double> logit_totals;  // argmax tie-break
};

enum class RepairStatus { Relabeled, Abstained, DeprecatedByConflict };

std::string_view repair_status_name(RepairStatus status);

struct ContributingCandidate {
  std::string unit;           // masked word/subword of the entity
  std::string candidate;      // replacement word
  std::string mutant_entity;  // resulting entity surface
  EntityCategory label;       // backend prediction for it, may be NULL
  double logit = 0.0;
  double sim = 0.0;
  double f = 0.0;
};

struct RepairOutcome {
  SuspiciousEntity entity;
  EntityCategory relabeled;  // meaningful when status != Abstained
  double p_score = 0.0;
  std::vector<ContributingCandidate> contributing;
  RepairStatus status = RepairStatus::Abstained;
  std::vector<std::pair<int, int>> spans;  // occurrences in the repaired sentence
  std::vector<std::string> warnings;       // per-candidate skip log
};

std::vector<SuspiciousEntity> locate_suspicious_entities(const SuspiciousIssue& issue);

// Scoring function for one mutant-entity vote:
//   base = logit * exp(k * sim), scaled by alpha when the backend saw no
//   entity (NULL) and by lambda when the masked unit was a subword.
double evaluate_F(double logit, double sim, bool is_null, bool is_subword,
                  const PipelineConfig& config);

// Masks each unit of the suspicious entity in turn, queries candidates,
// filters (format consistency, logit, similarity), votes each surviving
// mutant entity's backend prediction, and returns the argmax category with
// its score. An empty score table abstains.
RepairOutcome relabel(const Sentence& sentence, const SuspiciousEntity& entity,
                      const NerBackend& backend, const OracleSuite& oracles,
                      const PipelineConfig& config, ResponseCache* cache = nullptr);

// Deprecates the lower-p_score outcome of every overlapping pair (ties go to
// the longer span). Surviving relabeled spans are pairwise non-overlapping.
std::vector<RepairOutcome> resolve_range_conflicts(std::vector<RepairOutcome> outcomes,
                                                   const Sentence& within);

struct SideRepair {
  NerOutput before;
  NerOutput after;
  std::vector<RepairOutcome> outcomes;
  bool attempted = false;  // multiset of predictions changed
  std::vector<std::string> warnings;
};

struct IssueRepair {
  std::string issue_id;
  MutationKind kind = MutationKind::TokenSubst;
  Sentence original;
  Sentence mutant;
  SideRepair original_side;
  SideRepair mutant_side;
};

// Repairs both sentences of the issue independently and merges the surviving
// relabels into fixed outputs R(s), R(s').
IssueRepair repair_issue(const SuspiciousIssue& issue, const NerBackend& backend,
                         const OracleSuite& oracles, const PipelineConfig& config,
                         ResponseCache* cache = nullptr);

// Format consistency between a masked unit and a candidate: first-letter case
// and all-caps-ness must match and the candidate must not introduce
// whitespace. Exposed for tests.
bool format_consistent(const std::string& unit, const std::string& candidate);

}  // namespace nercheck
