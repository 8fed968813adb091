#include "nercheck/repair.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nercheck/utf8.hpp"

namespace nercheck {

namespace {

std::string replace_span(const std::string& text, int begin, int end,
                         const std::string& replacement) {
  return utf8::slice(text, 0, static_cast<std::size_t>(begin)) + replacement +
         utf8::slice(text, static_cast<std::size_t>(end), utf8::length(text));
}

std::vector<std::string> sorted_labels(const NerOutput& out, const std::string& surface) {
  std::vector<std::string> labels;
  for (const NerPrediction& p : out.predictions)
    if (p.surface == surface) labels.push_back(p.category.label);
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::optional<EntityCategory> first_label(const NerOutput& out, const std::string& surface) {
  for (const NerPrediction& p : out.predictions)
    if (p.surface == surface) return p.category;
  return std::nullopt;
}

bool all_caps(const std::string& word) {
  int letters = 0;
  for (unsigned char c : word) {
    if (std::isalpha(c)) {
      ++letters;
      if (std::islower(c)) return false;
    }
  }
  return letters >= 2;
}

// Prediction category covering at least half of [begin, end), else NULL.
EntityCategory covering_label(const NerOutput& out, int begin, int end) {
  int span_len = end - begin;
  int best_overlap = 0;
  const NerPrediction* best = nullptr;
  for (const NerPrediction& p : out.predictions) {
    int ov = std::min(p.end, end) - std::max(p.begin, begin);
    if (ov > best_overlap) {
      best_overlap = ov;
      best = &p;
    }
  }
  if (best != nullptr && 2 * best_overlap >= span_len) return best->category;
  return EntityCategory::null_category();
}

bool spans_overlap(const std::vector<std::pair<int, int>>& a,
                   const std::vector<std::pair<int, int>>& b) {
  for (auto [ab, ae] : a)
    for (auto [bb, be] : b)
      if (ab < be && bb < ae) return true;
  return false;
}

int max_span_length(const std::vector<std::pair<int, int>>& spans) {
  int best = 0;
  for (auto [b, e] : spans) best = std::max(best, e - b);
  return best;
}

}  // namespace

std::string_view repair_status_name(RepairStatus status) {
  switch (status) {
    case RepairStatus::Relabeled: return "RELABELED";
    case RepairStatus::Abstained: return "ABSTAINED";
    case RepairStatus::DeprecatedByConflict: return "DEPRECATED_BY_CONFLICT";
  }
  return "unknown";
}

bool format_consistent(const std::string& unit, const std::string& candidate) {
  if (candidate.empty() || unit.empty()) return false;
  for (unsigned char c : candidate)
    if (std::isspace(c)) return false;
  unsigned char u0 = static_cast<unsigned char>(unit[0]);
  unsigned char c0 = static_cast<unsigned char>(candidate[0]);
  if (std::isalpha(u0) && std::isalpha(c0)) {
    if (static_cast<bool>(std::isupper(u0)) != static_cast<bool>(std::isupper(c0))) return false;
  }
  if (all_caps(unit) != all_caps(candidate)) return false;
  return true;
}

std::vector<SuspiciousEntity> locate_suspicious_entities(const SuspiciousIssue& issue) {
  const Sentence& original = issue.input.pair.original;
  const Sentence& mutant = issue.input.pair.mutant;
  const NerOutput& out_s = issue.input.output_original;
  const NerOutput& out_m = issue.input.output_mutant;

  std::vector<std::string> surfaces;
  auto add = [&](const std::string& s) {
    if (std::find(surfaces.begin(), surfaces.end(), s) == surfaces.end()) surfaces.push_back(s);
  };
  for (const NerPrediction& p : out_s.predictions) add(p.surface);
  for (const NerPrediction& p : out_m.predictions) add(p.surface);

  std::vector<SuspiciousEntity> entities;
  for (const std::string& surface : surfaces) {
    auto occ_s = word_occurrences(original.text, surface);
    auto occ_m = word_occurrences(mutant.text, surface);
    if (occ_s.empty() || occ_m.empty()) continue;  // must exist in both sentences
    if (sorted_labels(out_s, surface) == sorted_labels(out_m, surface)) continue;
    SuspiciousEntity e;
    e.surface = surface;
    e.label_in_original = first_label(out_s, surface);
    e.label_in_mutant = first_label(out_m, surface);
    e.occurrences_original = std::move(occ_s);
    e.occurrences_mutant = std::move(occ_m);
    entities.push_back(std::move(e));
  }
  std::stable_sort(entities.begin(), entities.end(),
                   [](const SuspiciousEntity& a, const SuspiciousEntity& b) {
                     return a.occurrences_original[0].first < b.occurrences_original[0].first;
                   });
  return entities;
}

double evaluate_F(double logit, double sim, bool is_null, bool is_subword,
                  const PipelineConfig& config) {
  if (logit < 0.0) throw ValidationError("evaluate_F requires a non-negative logit");
  if (sim < -1.0 || sim > 1.0) throw ValidationError("evaluate_F requires sim in [-1,1]");
  double f = logit * std::exp(config.k_balance * sim);
  if (is_null) f *= config.alpha;
  if (is_subword) f *= config.lambda;
  return f;
}

RepairOutcome relabel(const Sentence& sentence, const SuspiciousEntity& entity,
                      const NerBackend& backend, const OracleSuite& oracles,
                      const PipelineConfig& config, ResponseCache* cache) {
  std::vector<std::pair<int, int>> spans = word_occurrences(sentence.text, entity.surface);
  if (spans.empty())
    throw Error("suspicious entity '" + entity.surface + "' does not occur in sentence '" +
                sentence.id + "'");

  RepairOutcome outcome;
  outcome.entity = entity;
  outcome.spans = spans;

  const int ent_begin = spans[0].first;
  const int ent_end = spans[0].second;
  const EmbeddingVector entity_embedding =
      phrase_embedding(sentence, ent_begin, ent_end, *oracles.embedder);

  ScoreTable table;
  for (const SubwordUnit& unit : oracles.masked_lm->tokenize_units(entity.surface)) {
    const int unit_begin = ent_begin + unit.begin;
    const int unit_end = ent_begin + unit.end;
    const std::string masked = replace_span(sentence.text, unit_begin, unit_end, "[MASK]");
    for (const MaskCandidate& cand :
         oracles.masked_lm->top_candidates(masked, config.top_k_repair)) {
      if (cand.word == unit.piece) continue;
      if (!format_consistent(unit.piece, cand.word)) continue;
      if (cand.logit < config.p_threshold) continue;
      try {
        const std::string mutant_entity =
            replace_span(entity.surface, unit.begin, unit.end, cand.word);
        const std::string mutant_text =
            replace_span(sentence.text, unit_begin, unit_end, cand.word);
        Sentence mutant = tokenize(mutant_text, sentence.id);
        const int mutant_end = ent_begin + static_cast<int>(utf8::length(mutant_entity));
        EmbeddingVector mutant_embedding =
            phrase_embedding(mutant, ent_begin, mutant_end, *oracles.embedder);
        double sim = std::clamp(cosine_similarity(entity_embedding, mutant_embedding), -1.0, 1.0);
        if (sim < config.s_threshold_repair) continue;

        NerOutput prediction = predict(backend, mutant, cache);
        EntityCategory label = covering_label(prediction, ent_begin, mutant_end);
        double f = evaluate_F(cand.logit, sim, label.is_null, unit.is_subword, config);
        table.entries[label] += f;
        table.logit_totals[label] += cand.logit;
        outcome.contributing.push_back(ContributingCandidate{
            unit.piece, cand.word, mutant_entity, label, cand.logit, sim, f});
      } catch (const Error& err) {
        outcome.warnings.push_back("candidate '" + cand.word + "' skipped: " + err.what());
      }
    }
  }

  if (table.entries.empty()) {
    outcome.status = RepairStatus::Abstained;
    outcome.p_score = 0.0;
    return outcome;
  }

  const EntityCategory* best = nullptr;
  for (const auto& [category, score] : table.entries) {
    if (best == nullptr) {
      best = &category;
      continue;
    }
    double best_score = table.entries.at(*best);
    if (score > best_score ||
        (score == best_score &&
         (table.logit_totals.at(category) > table.logit_totals.at(*best) ||
          (table.logit_totals.at(category) == table.logit_totals.at(*best) &&
           category.label < best->label))))
      best = &category;
  }
  outcome.status = RepairStatus::Relabeled;
  outcome.relabeled = *best;
  outcome.p_score = table.entries.at(*best);
  return outcome;
}

std::vector<RepairOutcome> resolve_range_conflicts(std::vector<RepairOutcome> outcomes,
                                                   const Sentence& /*within*/) {
  // Claim order: higher p_score first, then longer span, then position.
  std::vector<std::size_t> claimants;
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    if (outcomes[i].status == RepairStatus::Relabeled && !outcomes[i].relabeled.is_null)
      claimants.push_back(i);
  std::stable_sort(claimants.begin(), claimants.end(), [&](std::size_t a, std::size_t b) {
    const RepairOutcome& oa = outcomes[a];
    const RepairOutcome& ob = outcomes[b];
    if (oa.p_score != ob.p_score) return oa.p_score > ob.p_score;
    int la = max_span_length(oa.spans);
    int lb = max_span_length(ob.spans);
    if (la != lb) return la > lb;
    return oa.spans[0].first < ob.spans[0].first;
  });

  std::vector<std::size_t> kept;
  for (std::size_t idx : claimants) {
    bool conflict = false;
    for (std::size_t k : kept)
      if (spans_overlap(outcomes[idx].spans, outcomes[k].spans)) conflict = true;
    if (conflict)
      outcomes[idx].status = RepairStatus::DeprecatedByConflict;
    else
      kept.push_back(idx);
  }
  return outcomes;
}

namespace {

SideRepair repair_side(const Sentence& sentence, const NerOutput& before,
                       const std::vector<SuspiciousEntity>& entities, const NerBackend& backend,
                       const OracleSuite& oracles, const PipelineConfig& config,
                       ResponseCache* cache) {
  SideRepair side;
  side.before = before;

  for (const SuspiciousEntity& entity : entities) {
    try {
      side.outcomes.push_back(relabel(sentence, entity, backend, oracles, config, cache));
    } catch (const Error& err) {
      side.warnings.push_back("entity '" + entity.surface + "' left unrepaired: " + err.what());
    }
  }
  side.outcomes = resolve_range_conflicts(std::move(side.outcomes), sentence);

  std::vector<NerPrediction> preds = before.predictions;
  std::vector<NerPrediction> adds;
  for (const RepairOutcome& outcome : side.outcomes) {
    // Deprecated outcomes leave the output untouched here; the winning span's
    // overlap sweep below removes whatever conflicts with it.
    if (outcome.status != RepairStatus::Relabeled) continue;
    std::erase_if(preds, [&](const NerPrediction& p) {
      return p.surface == outcome.entity.surface;
    });
    if (outcome.relabeled.is_null) continue;
    for (auto [b, e] : outcome.spans) {
      bool clashes = false;
      for (const NerPrediction& a : adds)
        if (b < a.end && a.begin < e) clashes = true;
      if (!clashes) adds.push_back(NerPrediction{outcome.entity.surface, b, e, outcome.relabeled});
    }
  }
  for (const NerPrediction& a : adds) {
    std::erase_if(preds,
                  [&](const NerPrediction& p) { return a.begin < p.end && p.begin < a.end; });
  }
  preds.insert(preds.end(), adds.begin(), adds.end());
  std::sort(preds.begin(), preds.end(), [](const NerPrediction& a, const NerPrediction& b) {
    return a.begin < b.begin;
  });

  side.after = NerOutput{before.sentence_id, std::move(preds)};
  side.attempted = predictions_multiset(side.after) != predictions_multiset(side.before);
  return side;
}

}  // namespace

IssueRepair repair_issue(const SuspiciousIssue& issue, const NerBackend& backend,
                         const OracleSuite& oracles, const PipelineConfig& config,
                         ResponseCache* cache) {
  std::vector<SuspiciousEntity> entities = locate_suspicious_entities(issue);

  IssueRepair repair;
  repair.issue_id = issue.input.pair.mutant.id;
  repair.kind = issue.input.pair.kind;
  repair.original = issue.input.pair.original;
  repair.mutant = issue.input.pair.mutant;
  repair.original_side = repair_side(issue.input.pair.original, issue.input.output_original,
                                     entities, backend, oracles, config, cache);
  repair.mutant_side = repair_side(issue.input.pair.mutant, issue.input.output_mutant, entities,
                                   backend, oracles, config, cache);
  return repair;
}

}  // namespace nercheck
