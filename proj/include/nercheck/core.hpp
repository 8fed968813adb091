#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nercheck {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyTextError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};

// All span offsets in this project count Unicode code points, not bytes.
struct Token {
  std::string surface;
  int begin = 0;
  int end = 0;  // exclusive
};

struct Sentence {
  std::string id;
  std::string text;
  std::vector<Token> tokens;

  int length() const;                       // in code points
  std::string slice(int begin, int end) const;
};

// Tokens must be in ascending, non-overlapping order and each surface must
// equal the corresponding text slice. Throws ValidationError otherwise.
void validate_sentence(const Sentence& s);

// Whitespace splitting with ASCII punctuation emitted as single-char tokens.
// Offsets are faithful to the input text.
Sentence tokenize(std::string_view text, std::string id = "");

// Joins token surfaces back into display text. Not offset-faithful: spacing
// follows standard English conventions (no space before closing punctuation,
// none around apostrophes).
std::string detokenize(const std::vector<std::string>& surfaces);

struct EntityCategory {
  std::string label;
  bool is_null = false;

  static EntityCategory null_category() { return EntityCategory{"NULL", true}; }
  static EntityCategory of(std::string_view label);  // trims, is_null = false

  friend bool operator==(const EntityCategory& a, const EntityCategory& b) {
    return a.is_null == b.is_null && a.label == b.label;
  }
  friend auto operator<=>(const EntityCategory& a, const EntityCategory& b) {
    if (auto c = a.is_null <=> b.is_null; c != 0) return c;
    return a.label <=> b.label;
  }
};

struct NerPrediction {
  std::string surface;
  int begin = 0;
  int end = 0;
  EntityCategory category;
};

struct NerOutput {
  std::string sentence_id;
  std::vector<NerPrediction> predictions;
};

// Predictions must be sorted by begin, non-overlapping, with surfaces that
// match the sentence text and non-NULL categories.
void validate_output(const NerOutput& output, const Sentence& sentence);

// Canonical position-free view of an output: (surface, label) -> count.
using PredictionMultiset = std::map<std::pair<std::string, std::string>, int>;
PredictionMultiset predictions_multiset(const NerOutput& output);

enum class MutationKind {
  TokenSubst = 0,
  PhraseSubst = 1,
  Structural = 2,
  EntityShuffle = 3,
};
inline constexpr std::array<MutationKind, 4> kAllMutationKinds = {
    MutationKind::TokenSubst, MutationKind::PhraseSubst,
    MutationKind::Structural, MutationKind::EntityShuffle};

std::string_view kind_name(MutationKind kind);
std::optional<MutationKind> kind_from_name(std::string_view name);

struct PipelineConfig {
  double s_threshold_testing = 0.65;
  // Indexed by MutationKind. Defaults are the 4-category-backend settings;
  // use for_category_count() to get the strict all-zero variant.
  std::array<double, 4> syn_threshold = {0.01, 0.01, 0.02, 0.01};
  double p_threshold = 5.5;
  double s_threshold_repair = 0.45;
  double k_balance = 2.5;
  double alpha = 0.2;
  double lambda = 0.5;
  int top_k_testing = 10;
  int top_k_repair = 20;
  int shuffle_attempts = 3;
  int parallelism = 1;

  static PipelineConfig for_category_count(std::size_t categories);
  void validate() const;  // throws ValidationError
};

// True when `surface` occurs in `text` delimited by word boundaries on both
// sides ("ESA" does not match inside "Measles").
bool occurs_as_word(std::string_view text, std::string_view surface);

// Code-point spans of every word-boundary occurrence, in text order.
std::vector<std::pair<int, int>> word_occurrences(std::string_view text,
                                                  std::string_view surface);

// Same, reusing a precomputed utf8::byte_index(text); callers scanning many
// surfaces over one text avoid rebuilding the index per surface.
std::vector<std::pair<int, int>> word_occurrences(std::string_view text,
                                                  std::string_view surface,
                                                  const std::vector<std::size_t>& byte_index);

// FNV-1a, used for cache keys, pair digests and per-sentence seed derivation.
std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 14695981039346656037ull);

}  // namespace nercheck
