#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nercheck/core.hpp"
#include "nercheck/mutation.hpp"
#include "nercheck/oracles.hpp"

namespace nercheck {

enum class FilterReason { Ok, SemanticBelow, SyntacticAbove, NotApplicable };

std::string_view filter_reason_name(FilterReason reason);

struct FilterVerdict {
  bool passed = true;
  std::optional<double> semantic_sim;
  std::optional<double> syntactic_delta;
  FilterReason reason = FilterReason::Ok;
};

// Cosine similarity between the replaced span embedded in the original
// sentence and the replacement span embedded in the mutant. Passes iff
// sim >= s_threshold_testing (equality passes). Non-substitution kinds pass
// with no similarity recorded.
FilterVerdict semantic_filter(const MutantPair& pair, const OracleSuite& oracles,
                              const PipelineConfig& config);

// epsilon = SynEval(original) - SynEval(mutant); passes iff epsilon is at most
// the per-kind threshold (equality passes). Applies to every kind.
FilterVerdict syntactic_filter(const MutantPair& pair, const OracleSuite& oracles,
                               const PipelineConfig& config);

struct RejectedPair {
  MutantPair pair;
  FilterVerdict verdict;
};

// Partition into (kept, rejected), original order preserved on both sides.
std::pair<std::vector<MutantPair>, std::vector<RejectedPair>> apply_filters(
    const std::vector<MutantPair>& pairs, const OracleSuite& oracles,
    const PipelineConfig& config);

}  // namespace nercheck
