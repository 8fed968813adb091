#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nercheck/core.hpp"
#include "nercheck/oracles.hpp"
#include "nercheck/syntax.hpp"

namespace nercheck {

// For TOKEN_SUBST / PHRASE_SUBST: [begin, end) is the replaced span in the
// original. For STRUCTURAL / ENTITY_SHUFFLE the span is unset and `note`
// describes the rewrite rule or the per-category permutation.
struct MutantEdit {
  int begin = -1;
  int end = -1;
  std::string original_text;
  std::string replacement_text;
  std::string note;
};

struct MutantPair {
  Sentence original;
  Sentence mutant;
  MutationKind kind = MutationKind::TokenSubst;
  MutantEdit edit;
  std::optional<double> candidate_logit;  // provenance, where applicable
};

// Stable digest for audit logs, over (kind, original text, mutant text).
std::string pair_digest(const MutantPair& pair);

// Masks each verb/adjective token outside predicted entities in turn and
// substitutes in-context candidates that keep the coarse POS class.
std::vector<MutantPair> token_level_mutants(const Sentence& sentence, const NerOutput& ner_output,
                                            const OracleSuite& oracles,
                                            const PipelineConfig& config);

// Replaces each minimal NP that does not overlap a predicted entity with a
// similar phrase, one NP per mutant.
std::vector<MutantPair> phrase_level_mutants(const Sentence& sentence, const NerOutput& ner_output,
                                             const ConstituencyTree& tree,
                                             const OracleSuite& oracles,
                                             const PipelineConfig& config);

// Declarative -> interrogative rewrite; at most one mutant.
std::vector<MutantPair> structural_mutants(const Sentence& sentence, const NerOutput& ner_output,
                                           const ConstituencyTree& tree);

// Permutes same-category entities within the sentence. Only non-identity
// permutations are kept; duplicate mutant texts are dropped.
std::vector<MutantPair> entity_shuffle_mutants(const Sentence& sentence,
                                               const NerOutput& ner_output, std::uint64_t seed,
                                               const PipelineConfig& config);

}  // namespace nercheck
