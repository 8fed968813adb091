#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nercheck/core.hpp"
#include "nercheck/syntax.hpp"

namespace nercheck {

struct DimensionMismatchError : Error {
  using Error::Error;
};
struct ZeroNormError : Error {
  using Error::Error;
};
struct EmptySpanError : Error {
  using Error::Error;
};
struct UnscriptedQueryError : Error {
  using Error::Error;
};

struct MaskCandidate {
  std::string word;
  double logit = 0.0;  // raw, unnormalized predictive score
};

struct EmbeddingVector {
  std::vector<double> values;
  std::size_t dim() const { return values.size(); }
};

// One maskable piece of an entity surface; offsets are code points within the
// surface. A subword is a fragment that does not stand alone as a word.
struct SubwordUnit {
  std::string piece;
  int begin = 0;
  int end = 0;
  bool is_subword = false;
};

class MaskedLm {
 public:
  virtual ~MaskedLm() = default;
  // Candidates for the "[MASK]" slot, sorted by descending logit (ties broken
  // lexicographically), at most top_k of them.
  virtual std::vector<MaskCandidate> top_candidates(const std::string& masked_text,
                                                    int top_k) const = 0;
  // How this model splits an entity surface into maskable units. Default:
  // whitespace words.
  virtual std::vector<SubwordUnit> tokenize_units(const std::string& surface) const;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingVector embed_token(const Sentence& sentence, int token_index) const = 0;
};

class PhraseSimilarity {
 public:
  virtual ~PhraseSimilarity() = default;
  virtual std::vector<std::string> similar(const std::string& phrase, int top_k) const = 0;
};

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<std::string> tag(const Sentence& sentence) const = 0;
};

class NaturalnessScorer {
 public:
  virtual ~NaturalnessScorer() = default;
  virtual double score(const std::string& text) const = 0;
};

class ConstituencyParser {
 public:
  virtual ~ConstituencyParser() = default;
  virtual std::optional<ConstituencyTree> parse(const Sentence& sentence) const = 0;
};

struct OracleSuite {
  std::shared_ptr<const MaskedLm> masked_lm;
  std::shared_ptr<const Embedder> embedder;
  std::shared_ptr<const PhraseSimilarity> phrase_sim;
  std::shared_ptr<const PosTagger> pos_tagger;
  std::shared_ptr<const NaturalnessScorer> naturalness;
  std::shared_ptr<const ConstituencyParser> parser;
  // When set, callers must funnel all oracle queries through one worker.
  bool requires_serialization = false;

  void validate() const;  // all six members present
};

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

// Mean of the embeddings of the tokens lying fully inside [begin, end).
// A single-word span returns that word's embedding unchanged.
EmbeddingVector phrase_embedding(const Sentence& sentence, int begin, int end,
                                 const Embedder& embedder);

// Canned-response table backing the scripted oracle suite. File format: one
// JSON object per line, {"oracle": ..., "query": ..., "response": ...}.
class ScriptTable {
 public:
  void add_masked_lm(const std::string& masked_text, std::vector<MaskCandidate> candidates);
  void add_units(const std::string& surface, std::vector<SubwordUnit> units);
  void add_embedding(const std::string& word, std::vector<double> values);
  void add_embedding_in(const std::string& word, const std::string& context_text,
                        std::vector<double> values);
  void add_similar_phrases(const std::string& phrase, std::vector<std::string> phrases);
  void add_tags(const std::string& sentence_text, std::vector<std::string> tags);
  void add_word_tag(const std::string& word, const std::string& tag);
  void add_naturalness(const std::string& text, double score);
  void set_default_naturalness(double score);
  void add_parse(const std::string& sentence_text, const std::string& sexpr);

  static ScriptTable load_jsonl(const std::filesystem::path& path);

  std::map<std::string, std::vector<MaskCandidate>> masked_lm;
  std::map<std::string, std::vector<SubwordUnit>> units;
  std::map<std::string, std::vector<double>> embeddings;  // "word" or "word\x1Fcontext"
  std::map<std::string, std::vector<std::string>> phrases;
  std::map<std::string, std::vector<std::string>> sentence_tags;
  std::map<std::string, std::string> word_tags;
  std::map<std::string, double> naturalness;
  std::optional<double> default_naturalness;
  std::map<std::string, std::string> parses;  // text -> s-expr
};

// Replays canned responses; unknown queries raise UnscriptedQueryError naming
// the query. Deterministic by construction.
OracleSuite scripted_oracle_suite(ScriptTable table, std::uint64_t seed = 0);

// Self-contained heuristic suite (hash embeddings, lexicon POS tags, shallow
// parser, fixed mask candidates). Deterministic given the seed; needs no
// model downloads or scripts, so full pipeline runs work offline.
OracleSuite builtin_oracle_suite(std::uint64_t seed = 0);

}  // namespace nercheck
