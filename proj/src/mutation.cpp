#include "nercheck/mutation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "nercheck/utf8.hpp"

namespace nercheck {

namespace {

bool overlaps_prediction(const NerOutput& out, int begin, int end) {
  for (const NerPrediction& p : out.predictions)
    if (begin < p.end && p.begin < end) return true;
  return false;
}

std::string replace_span(const std::string& text, int begin, int end,
                         const std::string& replacement) {
  return utf8::slice(text, 0, static_cast<std::size_t>(begin)) + replacement +
         utf8::slice(text, static_cast<std::size_t>(end), utf8::length(text));
}

// VB* and JJ* collapse to their class; everything else is its own class.
std::string coarse_pos(const std::string& tag) {
  if (tag.rfind("VB", 0) == 0) return "VB";
  if (tag.rfind("JJ", 0) == 0) return "JJ";
  return tag;
}

const Token* token_at(const Sentence& s, int begin) {
  for (const Token& t : s.tokens)
    if (t.begin == begin) return &t;
  return nullptr;
}

}  // namespace

std::string pair_digest(const MutantPair& pair) {
  std::string data = std::string(kind_name(pair.kind)) + '\x1F' + pair.original.text + '\x1F' +
                     pair.mutant.text;
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(data)));
  return buf;
}

std::vector<MutantPair> token_level_mutants(const Sentence& sentence, const NerOutput& ner_output,
                                            const OracleSuite& oracles,
                                            const PipelineConfig& config) {
  std::vector<MutantPair> mutants;
  const std::vector<std::string> tags = oracles.pos_tagger->tag(sentence);
  int counter = 0;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& tok = sentence.tokens[i];
    if (overlaps_prediction(ner_output, tok.begin, tok.end)) continue;
    const std::string cls = coarse_pos(tags[i]);
    if (cls != "VB" && cls != "JJ") continue;

    const std::string masked = replace_span(sentence.text, tok.begin, tok.end, "[MASK]");
    for (const MaskCandidate& cand :
         oracles.masked_lm->top_candidates(masked, config.top_k_testing)) {
      if (cand.word == tok.surface) continue;
      const std::string mutant_text = replace_span(sentence.text, tok.begin, tok.end, cand.word);
      Sentence mutant = tokenize(mutant_text, sentence.id + ".t" + std::to_string(counter));
      const Token* new_tok = token_at(mutant, tok.begin);
      if (new_tok == nullptr) continue;
      std::vector<std::string> mutant_tags = oracles.pos_tagger->tag(mutant);
      std::size_t new_idx =
          static_cast<std::size_t>(new_tok - mutant.tokens.data());
      if (coarse_pos(mutant_tags[new_idx]) != cls) continue;

      MutantPair pair;
      pair.original = sentence;
      pair.mutant = std::move(mutant);
      pair.kind = MutationKind::TokenSubst;
      pair.edit = MutantEdit{tok.begin, tok.end, tok.surface, cand.word, ""};
      pair.candidate_logit = cand.logit;
      mutants.push_back(std::move(pair));
      ++counter;
    }
  }
  return mutants;
}

std::vector<MutantPair> phrase_level_mutants(const Sentence& sentence, const NerOutput& ner_output,
                                             const ConstituencyTree& tree,
                                             const OracleSuite& oracles,
                                             const PipelineConfig& config) {
  std::vector<MutantPair> mutants;
  int counter = 0;
  for (const TreeNode* np : find_minimal_np_nodes(tree)) {
    auto [first, last] = token_span(*np);
    int begin = sentence.tokens[static_cast<std::size_t>(first)].begin;
    int end = sentence.tokens[static_cast<std::size_t>(last)].end;
    if (overlaps_prediction(ner_output, begin, end)) continue;

    const std::string np_text = sentence.slice(begin, end);
    for (const std::string& phrase :
         oracles.phrase_sim->similar(np_text, config.top_k_testing)) {
      if (phrase == np_text) continue;
      const std::string mutant_text = replace_span(sentence.text, begin, end, phrase);
      MutantPair pair;
      pair.original = sentence;
      pair.mutant = tokenize(mutant_text, sentence.id + ".p" + std::to_string(counter));
      pair.kind = MutationKind::PhraseSubst;
      pair.edit = MutantEdit{begin, end, np_text, phrase, ""};
      mutants.push_back(std::move(pair));
      ++counter;
    }
  }
  return mutants;
}

std::vector<MutantPair> structural_mutants(const Sentence& sentence, const NerOutput& ner_output,
                                           const ConstituencyTree& tree) {
  std::optional<RewriteResult> rewrite = declarative_to_interrogative(sentence, tree, ner_output);
  if (!rewrite || rewrite->mutant_text == sentence.text) return {};
  MutantPair pair;
  pair.original = sentence;
  pair.mutant = tokenize(rewrite->mutant_text, sentence.id + ".s0");
  pair.kind = MutationKind::Structural;
  pair.edit.note = std::string(rewrite_rule_name(rewrite->rule));
  pair.edit.replacement_text = rewrite->moved_or_inserted;
  return {std::move(pair)};
}

std::vector<MutantPair> entity_shuffle_mutants(const Sentence& sentence,
                                               const NerOutput& ner_output, std::uint64_t seed,
                                               const PipelineConfig& config) {
  // Entity slots per category, in text order.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ner_output.predictions.size(); ++i)
    groups[ner_output.predictions[i].category.label].push_back(i);
  bool shufflable = false;
  for (const auto& [label, members] : groups)
    if (members.size() >= 2) shufflable = true;
  if (!shufflable) return {};

  std::mt19937_64 rng(seed);
  // Hand-rolled Fisher-Yates: rng()%n is deterministic across platforms,
  // unlike std::shuffle.
  auto shuffled = [&rng](std::size_t n) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
      std::swap(perm[i], perm[j]);
    }
    return perm;
  };

  std::vector<MutantPair> mutants;
  std::set<std::string> seen_texts;
  int counter = 0;
  for (int attempt = 0; attempt < config.shuffle_attempts; ++attempt) {
    std::map<std::string, std::vector<std::size_t>> perms;
    bool identity = true;
    for (const auto& [label, members] : groups) {
      std::vector<std::size_t> perm =
          members.size() >= 2 ? shuffled(members.size()) : std::vector<std::size_t>{0};
      for (std::size_t i = 0; i < perm.size(); ++i)
        if (perm[i] != i) identity = false;
      perms[label] = std::move(perm);
    }
    if (identity) continue;

    // Rebuild the text with each entity slot refilled by its permuted peer.
    std::string text;
    std::string note;
    int cursor = 0;
    std::map<std::string, std::size_t> slot_counter;
    for (std::size_t i = 0; i < ner_output.predictions.size(); ++i) {
      const NerPrediction& p = ner_output.predictions[i];
      text += utf8::slice(sentence.text, static_cast<std::size_t>(cursor),
                          static_cast<std::size_t>(p.begin));
      std::size_t slot = slot_counter[p.category.label]++;
      const auto& members = groups[p.category.label];
      const auto& perm = perms[p.category.label];
      text += ner_output.predictions[members[perm[slot]]].surface;
      cursor = p.end;
    }
    text += utf8::slice(sentence.text, static_cast<std::size_t>(cursor),
                        utf8::length(sentence.text));

    if (text == sentence.text || seen_texts.count(text)) continue;
    seen_texts.insert(text);
    for (const auto& [label, perm] : perms) {
      if (perm.size() < 2) continue;
      if (!note.empty()) note += ';';
      note += label + ":[";
      for (std::size_t i = 0; i < perm.size(); ++i) {
        if (i > 0) note += ',';
        note += std::to_string(perm[i]);
      }
      note += ']';
    }

    MutantPair pair;
    pair.original = sentence;
    pair.mutant = tokenize(text, sentence.id + ".h" + std::to_string(counter));
    pair.kind = MutationKind::EntityShuffle;
    pair.edit.note = note;
    mutants.push_back(std::move(pair));
    ++counter;
  }
  return mutants;
}

}  // namespace nercheck
