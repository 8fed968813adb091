#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nercheck/core.hpp"

namespace nercheck {

struct EmptySampleError : Error {
  using Error::Error;
};
struct DivisionByZeroError : Error {
  using Error::Error;
};
struct NoChangeError : Error {
  using Error::Error;
};
struct IdMismatchError : Error {
  using Error::Error;
};

// Repair transition counts: first letter = correct before, second = correct
// after (tt = stayed correct, ft = error fixed, ...).
struct ConfusionCounts {
  long tt = 0;
  long tf = 0;
  long ft = 0;
  long ff = 0;

  long num_error() const { return ft + ff; }
  long num_correct() const { return tt + tf; }
};

struct RepairMetrics {
  double err2cor = 0.0;      // FT / (FT + FF)
  double cor2err = 0.0;      // TF / (TT + TF)
  double error_reduce = 0.0; // (FT - TF) / (FT + FF)
};

RepairMetrics repair_metrics(const ConfusionCounts& counts);

enum class ErrorCategory { Omission, OverLabeling, IncorrectCategory, RangeError };

std::string_view error_category_name(ErrorCategory category);
std::optional<ErrorCategory> error_category_from_name(std::string_view name);

struct HumanVerdict {
  std::string issue_id;
  bool is_erroneous = false;
  std::optional<ErrorCategory> error_category;  // present iff is_erroneous
  std::string annotator;
};

// Fraction of erroneous issues among the verdicts.
double precision(const std::vector<HumanVerdict>& verdicts);

// Which error class a repair fixed at `entity_surface`, judged from the
// before/after outputs: appeared -> omission, vanished -> over-labeling,
// same span new label -> incorrect category, merged/split spans -> range.
ErrorCategory classify_change(const NerOutput& before, const NerOutput& after,
                              const std::string& entity_surface);

// CSV with header: issue_id,is_erroneous,error_category,annotator
std::vector<HumanVerdict> load_verdicts_csv(const std::filesystem::path& path);

// Reporting-only mapping of backend-specific labels onto the shared
// PER/LOC/ORG triple; anything else maps to empty.
std::string shared_triple_label(const std::string& backend_label);

}  // namespace nercheck
