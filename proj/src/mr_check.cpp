#include "nercheck/mr_check.hpp"

#include <algorithm>

namespace nercheck {

namespace {

// Predicted surfaces across both outputs, ordered by first appearance.
std::vector<std::string> union_surfaces(const NerOutput& a, const NerOutput& b) {
  std::vector<std::string> surfaces;
  auto add = [&](const std::string& s) {
    if (std::find(surfaces.begin(), surfaces.end(), s) == surfaces.end()) surfaces.push_back(s);
  };
  for (const NerPrediction& p : a.predictions) add(p.surface);
  for (const NerPrediction& p : b.predictions) add(p.surface);
  return surfaces;
}

std::vector<std::string> labels_of(const NerOutput& out, const std::string& surface) {
  std::vector<std::string> labels;
  for (const NerPrediction& p : out.predictions)
    if (p.surface == surface) labels.push_back(p.category.label);
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::optional<SuspiciousIssue> compare_by_surface(const TestInput& input,
                                                  MetamorphicRelation mr,
                                                  bool require_in_both_texts) {
  std::vector<Disagreement> disagreements;
  for (const std::string& surface :
       union_surfaces(input.output_original, input.output_mutant)) {
    if (require_in_both_texts &&
        (!occurs_as_word(input.pair.original.text, surface) ||
         !occurs_as_word(input.pair.mutant.text, surface)))
      continue;
    std::vector<std::string> in_original = labels_of(input.output_original, surface);
    std::vector<std::string> in_mutant = labels_of(input.output_mutant, surface);
    if (in_original != in_mutant)
      disagreements.push_back(Disagreement{surface, std::move(in_original), std::move(in_mutant)});
  }
  if (disagreements.empty()) return std::nullopt;
  return SuspiciousIssue{input, mr, std::move(disagreements)};
}

}  // namespace

TestInput make_test_input(MutantPair pair, NerOutput output_original, NerOutput output_mutant) {
  if (output_original.sentence_id != pair.original.id ||
      output_mutant.sentence_id != pair.mutant.id)
    throw ValidationError("test input outputs do not correspond to the pair's sentences");
  return TestInput{std::move(pair), std::move(output_original), std::move(output_mutant)};
}

std::string_view mr_name(MetamorphicRelation mr) {
  return mr == MetamorphicRelation::MR1 ? "MR1" : "MR2";
}

std::optional<SuspiciousIssue> check_mr1(const TestInput& input) {
  if (input.pair.kind != MutationKind::TokenSubst && input.pair.kind != MutationKind::PhraseSubst)
    throw WrongKindError("MR1 applies to token/phrase substitution pairs only");
  return compare_by_surface(input, MetamorphicRelation::MR1, /*require_in_both_texts=*/true);
}

std::optional<SuspiciousIssue> check_mr2(const TestInput& input) {
  if (input.pair.kind != MutationKind::Structural && input.pair.kind != MutationKind::EntityShuffle)
    throw WrongKindError("MR2 applies to structural/shuffle pairs only");
  // Multiset equality N(s) == N(s') factorizes into per-surface label
  // multisets, which also yields the symmetric difference for the report.
  return compare_by_surface(input, MetamorphicRelation::MR2, /*require_in_both_texts=*/false);
}

std::vector<SuspiciousIssue> detect_suspicious_issues(const std::vector<TestInput>& inputs) {
  std::vector<SuspiciousIssue> issues;
  for (const TestInput& input : inputs) {
    std::optional<SuspiciousIssue> issue;
    if (input.pair.kind == MutationKind::TokenSubst ||
        input.pair.kind == MutationKind::PhraseSubst)
      issue = check_mr1(input);
    else
      issue = check_mr2(input);
    if (issue) issues.push_back(std::move(*issue));
  }
  return issues;
}

}  // namespace nercheck
