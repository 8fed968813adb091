#include "nercheck/json_io.hpp"

#include <fstream>
#include <sstream>

namespace nercheck::io {

namespace {

std::string auto_id(std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "s%04zu", n);
  return buf;
}

EntityCategory category_from(const ojson& j) {
  std::string label = j.get<std::string>();
  if (label == "NULL") return EntityCategory::null_category();
  return EntityCategory::of(label);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  return in;
}

}  // namespace

ojson sentence_json(const Sentence& s) {
  return ojson{{"id", s.id}, {"text", s.text}};
}

Sentence sentence_from(const ojson& j) {
  return tokenize(j.at("text").get<std::string>(), j.at("id").get<std::string>());
}

ojson prediction_json(const NerPrediction& p) {
  return ojson{{"surface", p.surface}, {"begin", p.begin}, {"end", p.end},
               {"label", p.category.is_null ? "NULL" : p.category.label}};
}

NerPrediction prediction_from(const ojson& j, const Sentence&) {
  return NerPrediction{j.at("surface").get<std::string>(), j.at("begin").get<int>(),
                       j.at("end").get<int>(), category_from(j.at("label"))};
}

ojson output_json(const NerOutput& out) {
  ojson preds = ojson::array();
  for (const NerPrediction& p : out.predictions) preds.push_back(prediction_json(p));
  return ojson{{"sentence_id", out.sentence_id}, {"predictions", std::move(preds)}};
}

NerOutput output_from(const ojson& j) {
  NerOutput out;
  out.sentence_id = j.at("sentence_id").get<std::string>();
  for (const ojson& p : j.at("predictions"))
    out.predictions.push_back(NerPrediction{p.at("surface").get<std::string>(),
                                            p.at("begin").get<int>(), p.at("end").get<int>(),
                                            category_from(p.at("label"))});
  return out;
}

NerOutput output_from(const ojson& j, const Sentence& sentence) {
  NerOutput out = output_from(j);
  validate_output(out, sentence);
  return out;
}

ojson pair_json(const MutantPair& pair) {
  ojson j;
  j["original"] = sentence_json(pair.original);
  j["mutant"] = sentence_json(pair.mutant);
  j["kind"] = std::string(kind_name(pair.kind));
  ojson edit;
  edit["begin"] = pair.edit.begin;
  edit["end"] = pair.edit.end;
  edit["original_text"] = pair.edit.original_text;
  edit["replacement_text"] = pair.edit.replacement_text;
  edit["note"] = pair.edit.note;
  j["edit"] = std::move(edit);
  if (pair.candidate_logit) j["logit"] = *pair.candidate_logit;
  return j;
}

MutantPair pair_from(const ojson& j) {
  MutantPair pair;
  pair.original = sentence_from(j.at("original"));
  pair.mutant = sentence_from(j.at("mutant"));
  auto kind = kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw ValidationError("unknown mutation kind: " + j.at("kind").get<std::string>());
  pair.kind = *kind;
  const ojson& e = j.at("edit");
  pair.edit = MutantEdit{e.at("begin").get<int>(), e.at("end").get<int>(),
                         e.at("original_text").get<std::string>(),
                         e.at("replacement_text").get<std::string>(),
                         e.at("note").get<std::string>()};
  if (j.contains("logit")) pair.candidate_logit = j["logit"].get<double>();
  return pair;
}

ojson issue_json(const SuspiciousIssue& issue) {
  ojson j;
  j["issue_id"] = issue.input.pair.mutant.id;
  j["mr"] = std::string(mr_name(issue.violated));
  j["pair"] = pair_json(issue.input.pair);
  j["output_original"] = output_json(issue.input.output_original);
  j["output_mutant"] = output_json(issue.input.output_mutant);
  ojson ds = ojson::array();
  for (const Disagreement& d : issue.disagreements)
    ds.push_back(ojson{{"surface", d.surface},
                       {"labels_original", d.labels_original},
                       {"labels_mutant", d.labels_mutant}});
  j["disagreements"] = std::move(ds);
  return j;
}

SuspiciousIssue issue_from(const ojson& j) {
  SuspiciousIssue issue;
  MutantPair pair = pair_from(j.at("pair"));
  NerOutput out_s = output_from(j.at("output_original"), pair.original);
  NerOutput out_m = output_from(j.at("output_mutant"), pair.mutant);
  issue.input = make_test_input(std::move(pair), std::move(out_s), std::move(out_m));
  issue.violated = j.at("mr").get<std::string>() == "MR1" ? MetamorphicRelation::MR1
                                                          : MetamorphicRelation::MR2;
  for (const ojson& d : j.at("disagreements"))
    issue.disagreements.push_back(
        Disagreement{d.at("surface").get<std::string>(),
                     d.at("labels_original").get<std::vector<std::string>>(),
                     d.at("labels_mutant").get<std::vector<std::string>>()});
  return issue;
}

namespace {

ojson outcome_json(const RepairOutcome& o) {
  ojson j;
  j["surface"] = o.entity.surface;
  j["label_in_original"] =
      o.entity.label_in_original ? ojson(o.entity.label_in_original->label) : ojson(nullptr);
  j["label_in_mutant"] =
      o.entity.label_in_mutant ? ojson(o.entity.label_in_mutant->label) : ojson(nullptr);
  j["status"] = std::string(repair_status_name(o.status));
  j["relabeled"] = o.status == RepairStatus::Abstained
                       ? ojson(nullptr)
                       : ojson(o.relabeled.is_null ? "NULL" : o.relabeled.label);
  j["p_score"] = o.p_score;
  ojson spans = ojson::array();
  for (auto [b, e] : o.spans) spans.push_back(ojson::array({b, e}));
  j["spans"] = std::move(spans);
  ojson cs = ojson::array();
  for (const ContributingCandidate& c : o.contributing) {
    cs.push_back(ojson{{"unit", c.unit},
                       {"candidate", c.candidate},
                       {"mutant_entity", c.mutant_entity},
                       {"label", c.label.is_null ? "NULL" : c.label.label},
                       {"logit", c.logit},
                       {"sim", c.sim},
                       {"f", c.f}});
  }
  j["contributing"] = std::move(cs);
  j["warnings"] = o.warnings;
  return j;
}

RepairOutcome outcome_from(const ojson& j) {
  RepairOutcome o;
  o.entity.surface = j.at("surface").get<std::string>();
  if (!j.at("label_in_original").is_null())
    o.entity.label_in_original = category_from(j["label_in_original"]);
  if (!j.at("label_in_mutant").is_null())
    o.entity.label_in_mutant = category_from(j["label_in_mutant"]);
  const std::string status = j.at("status").get<std::string>();
  o.status = status == "RELABELED"                ? RepairStatus::Relabeled
             : status == "DEPRECATED_BY_CONFLICT" ? RepairStatus::DeprecatedByConflict
                                                  : RepairStatus::Abstained;
  if (!j.at("relabeled").is_null()) o.relabeled = category_from(j["relabeled"]);
  o.p_score = j.at("p_score").get<double>();
  for (const ojson& s : j.at("spans")) o.spans.emplace_back(s.at(0).get<int>(), s.at(1).get<int>());
  for (const ojson& c : j.at("contributing"))
    o.contributing.push_back(ContributingCandidate{
        c.at("unit").get<std::string>(), c.at("candidate").get<std::string>(),
        c.at("mutant_entity").get<std::string>(), category_from(c.at("label")),
        c.at("logit").get<double>(), c.at("sim").get<double>(), c.at("f").get<double>()});
  o.warnings = j.at("warnings").get<std::vector<std::string>>();
  return o;
}

ojson side_json(const SideRepair& side) {
  ojson j;
  j["before"] = output_json(side.before);
  j["after"] = output_json(side.after);
  j["attempted"] = side.attempted;
  ojson os = ojson::array();
  for (const RepairOutcome& o : side.outcomes) os.push_back(outcome_json(o));
  j["outcomes"] = std::move(os);
  j["warnings"] = side.warnings;
  return j;
}

SideRepair side_from(const ojson& j) {
  SideRepair side;
  side.before = output_from(j.at("before"));
  side.after = output_from(j.at("after"));
  side.attempted = j.at("attempted").get<bool>();
  for (const ojson& o : j.at("outcomes")) side.outcomes.push_back(outcome_from(o));
  side.warnings = j.at("warnings").get<std::vector<std::string>>();
  return side;
}

}  // namespace

ojson repair_json(const IssueRepair& repair) {
  ojson j;
  j["issue_id"] = repair.issue_id;
  j["kind"] = std::string(kind_name(repair.kind));
  j["original"] = sentence_json(repair.original);
  j["mutant"] = sentence_json(repair.mutant);
  j["original_side"] = side_json(repair.original_side);
  j["mutant_side"] = side_json(repair.mutant_side);
  return j;
}

IssueRepair repair_from(const ojson& j) {
  IssueRepair r;
  r.issue_id = j.at("issue_id").get<std::string>();
  auto kind = kind_from_name(j.at("kind").get<std::string>());
  if (!kind) throw ValidationError("unknown mutation kind in repair record");
  r.kind = *kind;
  r.original = sentence_from(j.at("original"));
  r.mutant = sentence_from(j.at("mutant"));
  r.original_side = side_from(j.at("original_side"));
  r.mutant_side = side_from(j.at("mutant_side"));
  return r;
}

std::vector<Sentence> load_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<Sentence> corpus;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++n;
    if (line.front() == '{') {
      ojson j = ojson::parse(line, nullptr, false);
      if (!j.is_discarded() && j.contains("text")) {
        std::string id = j.contains("id") ? j["id"].get<std::string>() : auto_id(n);
        corpus.push_back(tokenize(j["text"].get<std::string>(), id));
        continue;
      }
    }
    corpus.push_back(tokenize(line, auto_id(n)));
  }
  if (corpus.empty()) throw ValidationError("corpus is empty: " + path.string());
  return corpus;
}

std::string issues_to_jsonl(const std::vector<SuspiciousIssue>& issues) {
  std::string out;
  for (const SuspiciousIssue& issue : issues) {
    out += issue_json(issue).dump();
    out += '\n';
  }
  return out;
}

void save_issues(const std::filesystem::path& path, const std::vector<SuspiciousIssue>& issues) {
  write_text_file(path, issues_to_jsonl(issues));
}

std::vector<SuspiciousIssue> load_issues(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<SuspiciousIssue> issues;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    issues.push_back(issue_from(ojson::parse(line)));
  }
  return issues;
}

std::string repairs_to_jsonl(const std::vector<IssueRepair>& repairs) {
  std::string out;
  for (const IssueRepair& r : repairs) {
    out += repair_json(r).dump();
    out += '\n';
  }
  return out;
}

void save_repairs(const std::filesystem::path& path, const std::vector<IssueRepair>& repairs) {
  write_text_file(path, repairs_to_jsonl(repairs));
}

std::vector<IssueRepair> load_repairs(const std::filesystem::path& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<IssueRepair> repairs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    repairs.push_back(repair_from(ojson::parse(line)));
  }
  return repairs;
}

std::string audit_to_jsonl(const std::vector<MutantPair>& kept,
                           const std::vector<RejectedPair>& rejected) {
  std::string out;
  auto line = [](const MutantPair& pair, const char* status, const FilterVerdict* v) {
    ojson j;
    j["digest"] = pair_digest(pair);
    j["kind"] = std::string(kind_name(pair.kind));
    j["mutant_id"] = pair.mutant.id;
    j["status"] = status;
    if (v != nullptr) {
      j["reason"] = std::string(filter_reason_name(v->reason));
      if (v->semantic_sim) j["semantic_sim"] = *v->semantic_sim;
      if (v->syntactic_delta) j["syntactic_delta"] = *v->syntactic_delta;
    }
    return j.dump();
  };
  for (const MutantPair& pair : kept) {
    out += line(pair, "kept", nullptr);
    out += '\n';
  }
  for (const RejectedPair& r : rejected) {
    out += line(r.pair, "rejected", &r.verdict);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file: " + path.string());
  out << content;
}

}  // namespace nercheck::io
