#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nercheck/core.hpp"
#include "nercheck/mutation.hpp"

namespace nercheck {

struct WrongKindError : Error {
  using Error::Error;
};

struct TestInput {
  MutantPair pair;
  NerOutput output_original;
  NerOutput output_mutant;
};

// Outputs must belong to the pair's sentences.
TestInput make_test_input(MutantPair pair, NerOutput output_original, NerOutput output_mutant);

enum class MetamorphicRelation { MR1, MR2 };

std::string_view mr_name(MetamorphicRelation mr);

// Per-surface label multisets on each side; an empty vector means the surface
// is not predicted on that side.
struct Disagreement {
  std::string surface;
  std::vector<std::string> labels_original;
  std::vector<std::string> labels_mutant;
};

struct SuspiciousIssue {
  TestInput input;
  MetamorphicRelation violated = MetamorphicRelation::MR1;
  std::vector<Disagreement> disagreements;
};

// MR1 (same entity under similar context keeps its prediction), for token- and
// phrase-substitution pairs. Surfaces whose text does not occur in both
// sentences are skipped.
std::optional<SuspiciousIssue> check_mr1(const TestInput& input);

// MR2 (prediction multisets identical), for structural and shuffle pairs.
std::optional<SuspiciousIssue> check_mr2(const TestInput& input);

// Routes each input to its relation by kind; stable order.
std::vector<SuspiciousIssue> detect_suspicious_issues(const std::vector<TestInput>& inputs);

}  // namespace nercheck
