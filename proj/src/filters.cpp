#include "nercheck/filters.hpp"

#include "nercheck/utf8.hpp"

namespace nercheck {

std::string_view filter_reason_name(FilterReason reason) {
  switch (reason) {
    case FilterReason::Ok: return "OK";
    case FilterReason::SemanticBelow: return "SEMANTIC_BELOW";
    case FilterReason::SyntacticAbove: return "SYNTACTIC_ABOVE";
    case FilterReason::NotApplicable: return "NOT_APPLICABLE";
  }
  return "unknown";
}

FilterVerdict semantic_filter(const MutantPair& pair, const OracleSuite& oracles,
                              const PipelineConfig& config) {
  FilterVerdict verdict;
  if (pair.kind != MutationKind::TokenSubst && pair.kind != MutationKind::PhraseSubst)
    return verdict;  // not a substitution: passes with no similarity recorded

  EmbeddingVector original_side =
      phrase_embedding(pair.original, pair.edit.begin, pair.edit.end, *oracles.embedder);
  int repl_end =
      pair.edit.begin + static_cast<int>(utf8::length(pair.edit.replacement_text));
  EmbeddingVector mutant_side =
      phrase_embedding(pair.mutant, pair.edit.begin, repl_end, *oracles.embedder);

  verdict.semantic_sim = cosine_similarity(original_side, mutant_side);
  if (*verdict.semantic_sim < config.s_threshold_testing) {
    verdict.passed = false;
    verdict.reason = FilterReason::SemanticBelow;
  }
  return verdict;
}

FilterVerdict syntactic_filter(const MutantPair& pair, const OracleSuite& oracles,
                               const PipelineConfig& config) {
  FilterVerdict verdict;
  double epsilon = oracles.naturalness->score(pair.original.text) -
                   oracles.naturalness->score(pair.mutant.text);
  verdict.syntactic_delta = epsilon;
  if (epsilon > config.syn_threshold[static_cast<std::size_t>(pair.kind)]) {
    verdict.passed = false;
    verdict.reason = FilterReason::SyntacticAbove;
  }
  return verdict;
}

std::pair<std::vector<MutantPair>, std::vector<RejectedPair>> apply_filters(
    const std::vector<MutantPair>& pairs, const OracleSuite& oracles,
    const PipelineConfig& config) {
  std::vector<MutantPair> kept;
  std::vector<RejectedPair> rejected;
  for (const MutantPair& pair : pairs) {
    FilterVerdict sem = semantic_filter(pair, oracles, config);
    if (!sem.passed) {
      rejected.push_back(RejectedPair{pair, sem});
      continue;
    }
    FilterVerdict syn = syntactic_filter(pair, oracles, config);
    syn.semantic_sim = sem.semantic_sim;
    if (!syn.passed) {
      rejected.push_back(RejectedPair{pair, syn});
      continue;
    }
    kept.push_back(pair);
  }
  return {std::move(kept), std::move(rejected)};
}

}  // namespace nercheck
