#include "nercheck/oracles.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "json.hpp"
#include "nercheck/utf8.hpp"

namespace nercheck {

namespace {
constexpr char kKeySep = '\x1F';

std::string context_key(const std::string& word, const std::string& context) {
  return word + kKeySep + context;
}
}  // namespace

std::vector<SubwordUnit> MaskedLm::tokenize_units(const std::string& surface) const {
  std::vector<SubwordUnit> units;
  std::vector<std::size_t> idx = utf8::byte_index(surface);
  const std::size_t n = idx.size() - 1;
  auto is_space_cp = [&](std::size_t cp) {
    return idx[cp + 1] == idx[cp] + 1 &&
           std::isspace(static_cast<unsigned char>(surface[idx[cp]]));
  };
  std::size_t i = 0;
  while (i < n) {
    if (is_space_cp(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && !is_space_cp(j)) ++j;
    units.push_back(SubwordUnit{surface.substr(idx[i], idx[j] - idx[i]), static_cast<int>(i),
                                static_cast<int>(j), false});
    i = j;
  }
  return units;
}

void OracleSuite::validate() const {
  if (!masked_lm || !embedder || !phrase_sim || !pos_tagger || !naturalness || !parser)
    throw ValidationError("oracle suite is missing a member");
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.dim() != b.dim())
    throw DimensionMismatchError("embedding dims differ: " + std::to_string(a.dim()) + " vs " +
                                 std::to_string(b.dim()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) throw ZeroNormError("cosine similarity of zero-norm vector");
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingVector phrase_embedding(const Sentence& sentence, int begin, int end,
                                 const Embedder& embedder) {
  std::vector<int> inside;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token& t = sentence.tokens[i];
    if (t.begin >= begin && t.end <= end) inside.push_back(static_cast<int>(i));
  }
  if (inside.empty())
    throw EmptySpanError("span [" + std::to_string(begin) + "," + std::to_string(end) +
                         ") covers no whole token");
  EmbeddingVector sum = embedder.embed_token(sentence, inside[0]);
  for (std::size_t k = 1; k < inside.size(); ++k) {
    EmbeddingVector v = embedder.embed_token(sentence, inside[k]);
    if (v.dim() != sum.dim()) throw DimensionMismatchError("embedder returned mixed dims");
    for (std::size_t d = 0; d < sum.dim(); ++d) sum.values[d] += v.values[d];
  }
  for (double& x : sum.values) x /= static_cast<double>(inside.size());
  return sum;
}

// ---------------------------------------------------------------------------
// Script table

void ScriptTable::add_masked_lm(const std::string& masked_text,
                                std::vector<MaskCandidate> candidates) {
  masked_lm[masked_text] = std::move(candidates);
}
void ScriptTable::add_units(const std::string& surface, std::vector<SubwordUnit> u) {
  units[surface] = std::move(u);
}
void ScriptTable::add_embedding(const std::string& word, std::vector<double> values) {
  embeddings[word] = std::move(values);
}
void ScriptTable::add_embedding_in(const std::string& word, const std::string& context_text,
                                   std::vector<double> values) {
  embeddings[context_key(word, context_text)] = std::move(values);
}
void ScriptTable::add_similar_phrases(const std::string& phrase, std::vector<std::string> ps) {
  phrases[phrase] = std::move(ps);
}
void ScriptTable::add_tags(const std::string& sentence_text, std::vector<std::string> tags) {
  sentence_tags[sentence_text] = std::move(tags);
}
void ScriptTable::add_word_tag(const std::string& word, const std::string& tag) {
  word_tags[word] = tag;
}
void ScriptTable::add_naturalness(const std::string& text, double score) {
  naturalness[text] = score;
}
void ScriptTable::set_default_naturalness(double score) {
  default_naturalness = score;
}
void ScriptTable::add_parse(const std::string& sentence_text, const std::string& sexpr) {
  parses[sentence_text] = sexpr;
}

ScriptTable ScriptTable::load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open oracle script file: " + path.string());
  ScriptTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("oracle") || !j.contains("query") ||
        !j.contains("response"))
      throw Error("bad script line " + std::to_string(lineno) + " in " + path.string());
    const std::string oracle = j["oracle"].get<std::string>();
    const std::string query = j["query"].get<std::string>();
    const nlohmann::json& r = j["response"];
    if (oracle == "masked_lm") {
      std::vector<MaskCandidate> cs;
      for (const auto& c : r) cs.push_back({c.at(0).get<std::string>(), c.at(1).get<double>()});
      table.add_masked_lm(query, std::move(cs));
    } else if (oracle == "units") {
      std::vector<SubwordUnit> us;
      for (const auto& u : r)
        us.push_back({u.at(0).get<std::string>(), u.at(1).get<int>(), u.at(2).get<int>(),
                      u.at(3).get<bool>()});
      table.add_units(query, std::move(us));
    } else if (oracle == "embedder") {
      table.embeddings[query] = r.get<std::vector<double>>();
    } else if (oracle == "phrase_sim") {
      table.add_similar_phrases(query, r.get<std::vector<std::string>>());
    } else if (oracle == "pos_tagger") {
      table.add_tags(query, r.get<std::vector<std::string>>());
    } else if (oracle == "pos_word") {
      table.add_word_tag(query, r.get<std::string>());
    } else if (oracle == "naturalness") {
      if (query.empty())
        table.set_default_naturalness(r.get<double>());
      else
        table.add_naturalness(query, r.get<double>());
    } else if (oracle == "parser") {
      table.add_parse(query, r.get<std::string>());
    } else {
      throw Error("unknown oracle '" + oracle + "' at line " + std::to_string(lineno));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Scripted suite

namespace {

[[noreturn]] void unscripted(const std::string& oracle, const std::string& query) {
  throw UnscriptedQueryError("unscripted " + oracle + " query: \"" + query + "\"");
}

void sort_candidates(std::vector<MaskCandidate>& cs) {
  std::stable_sort(cs.begin(), cs.end(), [](const MaskCandidate& a, const MaskCandidate& b) {
    if (a.logit != b.logit) return a.logit > b.logit;
    return a.word < b.word;
  });
}

class ScriptedMaskedLm : public MaskedLm {
 public:
  explicit ScriptedMaskedLm(std::shared_ptr<const ScriptTable> t) : table_(std::move(t)) {}

  std::vector<MaskCandidate> top_candidates(const std::string& masked_text,
                                            int top_k) const override {
    auto it = table_->masked_lm.find(masked_text);
    if (it == table_->masked_lm.end()) unscripted("masked_lm", masked_text);
    std::vector<MaskCandidate> cs = it->second;
    sort_candidates(cs);
    if (static_cast<int>(cs.size()) > top_k) cs.resize(static_cast<std::size_t>(top_k));
    return cs;
  }

  std::vector<SubwordUnit> tokenize_units(const std::string& surface) const override {
    auto it = table_->units.find(surface);
    if (it != table_->units.end()) return it->second;
    return MaskedLm::tokenize_units(surface);
  }

 private:
  std::shared_ptr<const ScriptTable> table_;
};

class ScriptedEmbedder : public Embedder {
 public:
  explicit ScriptedEmbedder(std::shared_ptr<const ScriptTable> t) : table_(std::move(t)) {}

  EmbeddingVector embed_token(const Sentence& sentence, int token_index) const override {
    const std::string& word = sentence.tokens[static_cast<std::size_t>(token_index)].surface;
    auto it = table_->embeddings.find(context_key(word, sentence.text));
    if (it == table_->embeddings.end()) it = table_->embeddings.find(word);
    if (it == table_->embeddings.end()) unscripted("embedder", word);
    return EmbeddingVector{it->second};
  }

 private:
  std::shared_ptr<const ScriptTable> table_;
};

class ScriptedPhraseSim : public PhraseSimilarity {
 public:
  explicit ScriptedPhraseSim(std::shared_ptr<const ScriptTable> t) : table_(std::move(t)) {}

  std::vector<std::string> similar(const std::string& phrase, int top_k) const override {
    auto it = table_->phrases.find(phrase);
    if (it == table_->phrases.end()) unscripted("phrase_sim", phrase);
    std::vector<std::string> out = it->second;
    if (static_cast<int>(out.size()) > top_k) out.resize(static_cast<std::size_t>(top_k));
    return out;
  }

 private:
  std::shared_ptr<const ScriptTable> table_;
};

class ScriptedPosTagger : public PosTagger {
 public:
  explicit ScriptedPosTagger(std::shared_ptr<const ScriptTable> t) : table_(std::move(t)) {}

  std::vector<std::string> tag(const Sentence& sentence) const override {
    auto it = table_->sentence_tags.find(sentence.text);
    if (it != table_->sentence_tags.end()) {
      if (it->second.size() != sentence.tokens.size())
        throw ValidationError("scripted tag count mismatch for: " + sentence.text);
      return it->second;
    }
    std::vector<std::string> tags;
    tags.reserve(sentence.tokens.size());
    for (const Token& t : sentence.tokens) {
      auto wt = table_->word_tags.find(t.surface);
      if (wt == table_->word_tags.end()) unscripted("pos_word", t.surface);
      tags.push_back(wt->second);
    }
    return tags;
  }

 private:
  std::shared_ptr<const ScriptTable> table_;
};

class ScriptedNaturalness : public NaturalnessScorer {
 public:
  explicit ScriptedNaturalness(std::shared_ptr<const ScriptTable> t) : table_(std::move(t)) {}

  double score(const std::string& text) const override {
    auto it = table_->naturalness.find(text);
    if (it != table_->naturalness.end()) return it->second;
    if (table_->default_naturalness) return *table_->default_naturalness;
    unscripted("naturalness", text);
  }

 private:
  std::shared_ptr<const ScriptTable> table_;
};

class ScriptedParser : public ConstituencyParser {
 public:
  explicit ScriptedParser(std::shared_ptr<const ScriptTable> t) : table_(std::move(t)) {}

  std::optional<ConstituencyTree> parse(const Sentence& sentence) const override {
    auto it = table_->parses.find(sentence.text);
    if (it == table_->parses.end()) unscripted("parser", sentence.text);
    return parse_sexpr_tree(it->second, sentence);
  }

 private:
  std::shared_ptr<const ScriptTable> table_;
};

}  // namespace

OracleSuite scripted_oracle_suite(ScriptTable table, std::uint64_t /*seed*/) {
  auto shared = std::make_shared<const ScriptTable>(std::move(table));
  OracleSuite suite;
  suite.masked_lm = std::make_shared<ScriptedMaskedLm>(shared);
  suite.embedder = std::make_shared<ScriptedEmbedder>(shared);
  suite.phrase_sim = std::make_shared<ScriptedPhraseSim>(shared);
  suite.pos_tagger = std::make_shared<ScriptedPosTagger>(shared);
  suite.naturalness = std::make_shared<ScriptedNaturalness>(shared);
  suite.parser = std::make_shared<ScriptedParser>(shared);
  return suite;
}

// ---------------------------------------------------------------------------
// Builtin heuristic suite

namespace {

const std::map<std::string, std::string>& builtin_verb_tags() {
  static const std::map<std::string, std::string> kVerbs = {
      {"is", "VBZ"},        {"was", "VBD"},      {"are", "VBP"},      {"were", "VBD"},
      {"be", "VB"},         {"been", "VBN"},     {"has", "VBZ"},      {"have", "VBP"},
      {"had", "VBD"},       {"do", "VBP"},       {"does", "VBZ"},     {"did", "VBD"},
      {"said", "VBD"},      {"says", "VBZ"},     {"say", "VBP"},      {"told", "VBD"},
      {"tell", "VB"},       {"eat", "VBP"},      {"ate", "VBD"},      {"cried", "VBD"},
      {"faced", "VBN"},     {"believes", "VBZ"}, {"believe", "VBP"},  {"remained", "VBD"},
      {"remains", "VBZ"},   {"stated", "VBD"},   {"seemed", "VBD"},   {"appeared", "VBD"},
      {"continued", "VBD"}, {"offers", "VBZ"},   {"offer", "VB"},     {"affords", "VBZ"},
      {"makes", "VBZ"},     {"make", "VB"},      {"won", "VBD"},      {"met", "VBD"},
      {"visited", "VBD"},   {"opened", "VBD"},   {"launched", "VBD"}, {"signed", "VBD"},
      {"announced", "VBD"}, {"reported", "VBD"}, {"beat", "VBD"},     {"returned", "VBD"},
      {"could", "MD"},      {"would", "MD"},     {"will", "MD"},      {"can", "MD"},
      {"may", "MD"},        {"might", "MD"},     {"should", "MD"},    {"must", "MD"},
      {"delivers", "VBZ"},  {"sees", "VBZ"},     {"saw", "VBD"},      {"plans", "VBZ"},
      {"joined", "VBD"},    {"became", "VBD"},   {"holds", "VBZ"},    {"held", "VBD"},
      {"runs", "VBZ"},      {"ran", "VBD"},      {"leads", "VBZ"},    {"led", "VBD"},
      {"wrote", "VBD"},     {"welcomed", "VBD"}, {"praised", "VBD"},  {"warned", "VBD"},
      {"added", "VBD"},     {"agreed", "VBD"},   {"confirmed", "VBD"}};
  return kVerbs;
}

const std::set<std::string>& builtin_adjectives() {
  static const std::set<std::string> kAdj = {
      "casual",   "obvious",  "similar",  "new",      "active",   "big",     "small",
      "major",    "minor",    "recent",   "notable",  "positive", "federal", "local",
      "several",  "strong",   "popular",  "early",    "late",     "good",    "famous",
      "sustainable", "environmental", "operational", "smarter",  "little",  "top",
      "crewed",   "next",     "abundant", "superfast", "high",    "low"};
  return kAdj;
}

std::string builtin_tag_word(const std::string& word, bool sentence_initial) {
  if (word.empty()) return "NN";
  unsigned char c0 = static_cast<unsigned char>(word[0]);
  if (!std::isalnum(c0) && c0 < 0x80) return word;  // punctuation tags itself
  if (std::isdigit(c0)) return "CD";

  std::string low;
  for (char c : word) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  static const std::set<std::string> kDet = {"the", "a", "an", "this", "that", "these", "those"};
  static const std::set<std::string> kPrp = {"he", "she", "it", "they", "we", "i", "you"};
  static const std::set<std::string> kPrep = {"in", "of",   "to",   "from", "on",    "at",
                                              "with", "by", "for",  "into", "about", "over",
                                              "under", "between", "across", "as"};
  static const std::set<std::string> kConj = {"and", "or", "but", "while", "where", "when"};

  if (word == "I") return "PRP";
  const auto& verbs = builtin_verb_tags();
  if (auto it = verbs.find(low); it != verbs.end()) return it->second;
  if (kDet.count(low)) return "DT";
  if (kPrp.count(low)) return "PRP";
  if (kPrep.count(low)) return "IN";
  if (kConj.count(low)) return "CC";
  if (low == "not" || low == "then" || low == "there" || low == "more") return "RB";
  if (builtin_adjectives().count(low)) return "JJ";
  if (std::isupper(c0) && !sentence_initial) return "NNP";
  if (low.size() > 3 && low.ends_with("ly")) return "RB";
  if (low.size() > 4 && low.ends_with("ing")) return "VBG";
  if (low.size() > 3 && low.ends_with("ed")) return "VBD";
  if (std::isupper(c0)) return "NNP";
  if (low.size() > 2 && low.ends_with("s")) return "NNS";
  return "NN";
}

class BuiltinPosTagger : public PosTagger {
 public:
  std::vector<std::string> tag(const Sentence& sentence) const override {
    std::vector<std::string> tags;
    tags.reserve(sentence.tokens.size());
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i)
      tags.push_back(builtin_tag_word(sentence.tokens[i].surface, i == 0));
    return tags;
  }
};

class BuiltinMaskedLm : public MaskedLm {
 public:
  std::vector<MaskCandidate> top_candidates(const std::string& /*masked_text*/,
                                            int top_k) const override {
    static const std::vector<MaskCandidate> kCandidates = {
        {"stated", 10.0}, {"Group", 9.6},  {"remained", 9.2},  {"Johnson", 8.8},
        {"notable", 8.4}, {"Council", 8.0}, {"seemed", 7.6},   {"London", 7.2},
        {"recent", 6.8},  {"Company", 6.4}, {"continued", 6.0}, {"Smith", 5.9},
        {"major", 5.8},   {"News", 5.7},    {"appeared", 5.6},  {"Paris", 5.4}};
    std::vector<MaskCandidate> cs = kCandidates;
    if (static_cast<int>(cs.size()) > top_k) cs.resize(static_cast<std::size_t>(top_k));
    return cs;
  }
};

class BuiltinEmbedder : public Embedder {
 public:
  explicit BuiltinEmbedder(std::uint64_t seed) : base_(hash_vector("\x01__base__", seed)) {}

  EmbeddingVector embed_token(const Sentence& sentence, int token_index) const override {
    const std::string& word = sentence.tokens[static_cast<std::size_t>(token_index)].surface;
    std::vector<double> w = hash_vector(word, 0);
    EmbeddingVector v;
    v.values.resize(kDim);
    for (std::size_t d = 0; d < kDim; ++d) v.values[d] = 0.95 * base_[d] + 0.31 * w[d];
    double norm = 0.0;
    for (double x : v.values) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v.values) x /= norm;
    return v;
  }

 private:
  static constexpr std::size_t kDim = 16;

  static std::vector<double> hash_vector(const std::string& word, std::uint64_t seed) {
    std::vector<double> v(kDim);
    std::uint64_t state = fnv1a(word) ^ (seed * 0x9E3779B97F4A7C15ull);
    double norm = 0.0;
    for (std::size_t d = 0; d < kDim; ++d) {
      // xorshift64*, mapped to [-1, 1]; avoids platform-dependent std
      // distributions so outputs are bit-stable everywhere.
      state ^= state >> 12;
      state ^= state << 25;
      state ^= state >> 27;
      std::uint64_t r = state * 0x2545F4914F6CDD1Dull;
      v[d] = static_cast<double>(r >> 11) / 4503599627370495.5 - 1.0;
      norm += v[d] * v[d];
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
  }

  std::vector<double> base_;
};

class BuiltinPhraseSim : public PhraseSimilarity {
 public:
  std::vector<std::string> similar(const std::string& phrase, int top_k) const override {
    static const std::map<std::string, std::vector<std::string>> kTable = {
        {"emergency care", {"medical care", "urgent care"}},
        {"the investigation", {"the inquiry", "the probe"}},
        {"the stage", {"the arena", "the platform"}},
        {"the obvious solution", {"the clear answer", "the simple answer"}},
        {"a burger", {"a sandwich", "a meal"}},
        {"the track", {"the song", "the record"}},
        {"household rubbish", {"household waste"}},
        {"sustainable tourism", {"responsible tourism"}},
        {"a similar scheme", {"a comparable scheme"}},
        {"the peatland", {"the wetland"}},
        {"new opportunities", {"fresh opportunities"}},
        {"local produce", {"regional produce"}},
        {"superfast broadband services", {"high-speed broadband services"}},
    };
    auto it = kTable.find(phrase);
    if (it == kTable.end()) return {};
    std::vector<std::string> out = it->second;
    if (static_cast<int>(out.size()) > top_k) out.resize(static_cast<std::size_t>(top_k));
    return out;
  }
};

class BuiltinNaturalness : public NaturalnessScorer {
 public:
  double score(const std::string& /*text*/) const override { return 0.5; }
};

// Shallow deterministic parser: subject NP = tokens before the first verb,
// nested VPs after auxiliaries, flat NP grouping elsewhere. Good enough to
// drive phrase- and structure-level mutation offline.
class BuiltinParser : public ConstituencyParser {
 public:
  std::optional<ConstituencyTree> parse(const Sentence& sentence) const override {
    if (sentence.tokens.empty()) return std::nullopt;
    std::vector<std::string> tags = tagger_.tag(sentence);
    const std::size_t n = sentence.tokens.size();

    std::size_t end = n;
    bool final_punct = !tags.empty() && is_punct(tags[n - 1]);
    if (final_punct) --end;
    if (end == 0) return std::nullopt;

    std::size_t verb = end;
    for (std::size_t i = 0; i < end; ++i) {
      if (is_verb(tags[i])) {
        verb = i;
        break;
      }
    }

    TreeNode s_node;
    s_node.label = "S";
    if (verb == end || verb == 0) {
      // No subject/verb split: single NP over everything.
      s_node.children.push_back(np_over(sentence, tags, 0, end));
    } else {
      s_node.children.push_back(np_over(sentence, tags, 0, verb));
      s_node.children.push_back(vp_over(sentence, tags, verb, end));
    }
    if (final_punct) s_node.children.push_back(preterminal(sentence, tags, n - 1));

    return ConstituencyTree{std::move(s_node)};
  }

 private:
  BuiltinPosTagger tagger_;

  static bool is_verb(const std::string& tag) {
    return tag.rfind("VB", 0) == 0 || tag == "MD";
  }
  static bool is_punct(const std::string& tag) {
    return !tag.empty() && !std::isalnum(static_cast<unsigned char>(tag[0]));
  }
  static bool np_word(const std::string& tag) {
    return tag == "DT" || tag == "PRP" || tag == "CD" || tag.rfind("NN", 0) == 0 ||
           tag.rfind("JJ", 0) == 0;
  }

  static TreeNode preterminal(const Sentence& s, const std::vector<std::string>& tags,
                              std::size_t i) {
    TreeNode pre;
    pre.label = tags[i];
    TreeNode term;
    term.label = s.tokens[i].surface;
    term.token_index = static_cast<int>(i);
    pre.children.push_back(std::move(term));
    return pre;
  }

  static TreeNode np_over(const Sentence& s, const std::vector<std::string>& tags,
                          std::size_t begin, std::size_t end) {
    TreeNode np;
    np.label = "NP";
    for (std::size_t i = begin; i < end; ++i) np.children.push_back(preterminal(s, tags, i));
    return np;
  }

  TreeNode vp_over(const Sentence& s, const std::vector<std::string>& tags, std::size_t verb,
                   std::size_t end) const {
    TreeNode vp;
    vp.label = "VP";
    vp.children.push_back(preterminal(s, tags, verb));
    std::size_t next_verb = end;
    for (std::size_t i = verb + 1; i < end; ++i) {
      if (is_verb(tags[i])) {
        next_verb = i;
        break;
      }
    }
    if (next_verb < end) {
      // Complement tokens before the next verb stay flat in this VP.
      append_flat(vp, s, tags, verb + 1, next_verb);
      vp.children.push_back(vp_over(s, tags, next_verb, end));
    } else {
      append_flat(vp, s, tags, verb + 1, end);
    }
    return vp;
  }

  static void append_flat(TreeNode& parent, const Sentence& s,
                          const std::vector<std::string>& tags, std::size_t begin,
                          std::size_t end) {
    std::size_t i = begin;
    while (i < end) {
      if (np_word(tags[i])) {
        std::size_t j = i;
        while (j < end && np_word(tags[j])) ++j;
        TreeNode np = np_over(s, tags, i, j);
        parent.children.push_back(std::move(np));
        i = j;
      } else {
        parent.children.push_back(preterminal(s, tags, i));
        ++i;
      }
    }
  }
};

}  // namespace

OracleSuite builtin_oracle_suite(std::uint64_t seed) {
  OracleSuite suite;
  suite.masked_lm = std::make_shared<BuiltinMaskedLm>();
  suite.embedder = std::make_shared<BuiltinEmbedder>(seed);
  suite.phrase_sim = std::make_shared<BuiltinPhraseSim>();
  suite.pos_tagger = std::make_shared<BuiltinPosTagger>();
  suite.naturalness = std::make_shared<BuiltinNaturalness>();
  suite.parser = std::make_shared<BuiltinParser>();
  return suite;
}

}  // namespace nercheck
