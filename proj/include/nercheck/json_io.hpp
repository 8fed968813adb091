#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "nercheck/core.hpp"
#include "nercheck/filters.hpp"
#include "nercheck/mr_check.hpp"
#include "nercheck/mutation.hpp"
#include "nercheck/repair.hpp"

namespace nercheck::io {

using ojson = nlohmann::ordered_json;

// Sentences serialize as {id, text}; tokens are recomputed on load, which is
// exact because every Sentence in the pipeline is produced by tokenize().
ojson sentence_json(const Sentence& s);
Sentence sentence_from(const ojson& j);

ojson prediction_json(const NerPrediction& p);
NerPrediction prediction_from(const ojson& j, const Sentence& sentence);

ojson output_json(const NerOutput& out);
NerOutput output_from(const ojson& j);  // surfaces trusted as serialized
NerOutput output_from(const ojson& j, const Sentence& sentence);

ojson pair_json(const MutantPair& pair);
MutantPair pair_from(const ojson& j);

ojson issue_json(const SuspiciousIssue& issue);
SuspiciousIssue issue_from(const ojson& j);

ojson repair_json(const IssueRepair& repair);
IssueRepair repair_from(const ojson& j);

// Corpus: JSONL {"id", "text"}, or plain text (one sentence per line, ids
// auto-assigned s0001, s0002, ...).
std::vector<Sentence> load_corpus(const std::filesystem::path& path);

std::string issues_to_jsonl(const std::vector<SuspiciousIssue>& issues);
void save_issues(const std::filesystem::path& path, const std::vector<SuspiciousIssue>& issues);
std::vector<SuspiciousIssue> load_issues(const std::filesystem::path& path);

std::string repairs_to_jsonl(const std::vector<IssueRepair>& repairs);
void save_repairs(const std::filesystem::path& path, const std::vector<IssueRepair>& repairs);
std::vector<IssueRepair> load_repairs(const std::filesystem::path& path);

// Filter audit log: one line per generated mutant, kept or rejected.
std::string audit_to_jsonl(const std::vector<MutantPair>& kept,
                           const std::vector<RejectedPair>& rejected);

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace nercheck::io
