#include "nercheck/eval.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace nercheck {

RepairMetrics repair_metrics(const ConfusionCounts& c) {
  if (c.tt < 0 || c.tf < 0 || c.ft < 0 || c.ff < 0)
    throw ValidationError("confusion counts must be non-negative");
  RepairMetrics m;
  if (c.num_error() == 0)
    throw DivisionByZeroError("NumError is zero (FT+FF); Err2Cor/ErrorReduce undefined");
  if (c.num_correct() == 0)
    throw DivisionByZeroError("NumCorrect is zero (TT+TF); Cor2Err undefined");
  m.err2cor = static_cast<double>(c.ft) / static_cast<double>(c.num_error());
  m.cor2err = static_cast<double>(c.tf) / static_cast<double>(c.num_correct());
  m.error_reduce = static_cast<double>(c.ft - c.tf) / static_cast<double>(c.num_error());
  return m;
}

std::string_view error_category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Omission: return "OMISSION";
    case ErrorCategory::OverLabeling: return "OVER_LABELING";
    case ErrorCategory::IncorrectCategory: return "INCORRECT_CATEGORY";
    case ErrorCategory::RangeError: return "RANGE_ERROR";
  }
  return "unknown";
}

std::optional<ErrorCategory> error_category_from_name(std::string_view name) {
  for (ErrorCategory c : {ErrorCategory::Omission, ErrorCategory::OverLabeling,
                          ErrorCategory::IncorrectCategory, ErrorCategory::RangeError})
    if (error_category_name(c) == name) return c;
  return std::nullopt;
}

double precision(const std::vector<HumanVerdict>& verdicts) {
  if (verdicts.empty()) throw EmptySampleError("precision over an empty verdict sample");
  long erroneous = 0;
  for (const HumanVerdict& v : verdicts)
    if (v.is_erroneous) ++erroneous;
  return static_cast<double>(erroneous) / static_cast<double>(verdicts.size());
}

ErrorCategory classify_change(const NerOutput& before, const NerOutput& after,
                              const std::string& entity_surface) {
  std::vector<const NerPrediction*> b_exact, a_exact;
  for (const NerPrediction& p : before.predictions)
    if (p.surface == entity_surface) b_exact.push_back(&p);
  for (const NerPrediction& p : after.predictions)
    if (p.surface == entity_surface) a_exact.push_back(&p);

  auto overlapping = [](const NerOutput& out, const NerPrediction& span) {
    for (const NerPrediction& p : out.predictions)
      if (p.begin < span.end && span.begin < p.end && p.surface != span.surface) return true;
    return false;
  };

  if (b_exact.empty() && !a_exact.empty()) {
    // Appeared: plain omission fix unless it displaced overlapping spans.
    for (const NerPrediction* a : a_exact)
      if (overlapping(before, *a)) return ErrorCategory::RangeError;
    return ErrorCategory::Omission;
  }
  if (!b_exact.empty() && a_exact.empty()) {
    for (const NerPrediction* b : b_exact)
      if (overlapping(after, *b)) return ErrorCategory::RangeError;
    return ErrorCategory::OverLabeling;
  }
  if (!b_exact.empty() && !a_exact.empty()) {
    std::multiset<std::string> b_labels, a_labels;
    for (const NerPrediction* p : b_exact) b_labels.insert(p->category.label);
    for (const NerPrediction* p : a_exact) a_labels.insert(p->category.label);
    if (b_labels != a_labels) return ErrorCategory::IncorrectCategory;
  }
  throw NoChangeError("outputs do not differ at surface '" + entity_surface + "'");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ValidationError("bad boolean in verdict file: '" + s + "'");
}

}  // namespace

std::vector<HumanVerdict> load_verdicts_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open verdict file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("verdict file is empty");
  if (split_csv_line(line) !=
      std::vector<std::string>{"issue_id", "is_erroneous", "error_category", "annotator"})
    throw ValidationError("verdict file header must be issue_id,is_erroneous,error_category,annotator");

  std::vector<HumanVerdict> verdicts;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() < 4)
      throw ValidationError("verdict line " + std::to_string(lineno) + " has too few fields");
    HumanVerdict v;
    v.issue_id = f[0];
    v.is_erroneous = parse_bool(f[1]);
    if (!f[2].empty()) {
      v.error_category = error_category_from_name(f[2]);
      if (!v.error_category)
        throw ValidationError("unknown error category '" + f[2] + "' at line " +
                              std::to_string(lineno));
    }
    v.annotator = f[3];
    if (v.is_erroneous != v.error_category.has_value())
      throw ValidationError("error_category must be present iff is_erroneous, line " +
                            std::to_string(lineno));
    verdicts.push_back(std::move(v));
  }
  return verdicts;
}

std::string shared_triple_label(const std::string& backend_label) {
  static const std::map<std::string, std::string> kMap = {
      {"PER", "PER"},          {"PERSON", "PER"},       {"LOC", "LOC"},
      {"LOCATION", "LOC"},     {"GPE", "LOC"},          {"ORG", "ORG"},
      {"ORGANIZATION", "ORG"},
  };
  auto it = kMap.find(backend_label);
  return it == kMap.end() ? std::string() : it->second;
}

}  // namespace nercheck
