#include "nercheck/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "nercheck/utf8.hpp"

namespace nercheck {

namespace {

bool is_ascii_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_ascii_punct(char32_t c) {
  return c < 0x80 && !is_ascii_space(c) &&
         !std::isalnum(static_cast<unsigned char>(static_cast<char>(c)));
}

// Decodes next code point starting at byte i; advances i.
char32_t next_cp(std::string_view text, std::size_t& i) {
  unsigned char c = static_cast<unsigned char>(text[i]);
  std::size_t len = 1;
  char32_t cp = c;
  if ((c & 0xE0) == 0xC0) {
    len = 2;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    len = 4;
    cp = c & 0x07;
  }
  for (std::size_t k = 1; k < len && i + k < text.size(); ++k) {
    cp = (cp << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
  }
  i += len;
  if (i > text.size()) i = text.size();
  return cp;
}

std::string trimmed(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_ascii_space(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && is_ascii_space(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool is_word_cp(char32_t c) {
  if (c >= 0x80) return true;
  return std::isalnum(static_cast<unsigned char>(static_cast<char>(c))) || c == '_';
}

}  // namespace

int Sentence::length() const {
  return static_cast<int>(utf8::length(text));
}

std::string Sentence::slice(int begin, int end) const {
  return utf8::slice(text, static_cast<std::size_t>(begin), static_cast<std::size_t>(end));
}

void validate_sentence(const Sentence& s) {
  if (trimmed(s.text).empty()) throw ValidationError("sentence text is empty");
  int prev_end = 0;
  for (const Token& t : s.tokens) {
    if (t.begin < prev_end || t.end <= t.begin)
      throw ValidationError("tokens out of order or empty in sentence '" + s.id + "'");
    if (s.slice(t.begin, t.end) != t.surface)
      throw ValidationError("token surface mismatch at " + std::to_string(t.begin) +
                            " in sentence '" + s.id + "'");
    prev_end = t.end;
  }
}

Sentence tokenize(std::string_view text, std::string id) {
  if (trimmed(text).empty()) throw EmptyTextError("cannot tokenize empty text");
  Sentence s;
  s.id = std::move(id);
  s.text = std::string(text);

  std::size_t byte = 0;
  int cp_pos = 0;
  int tok_begin = -1;
  std::string tok;
  auto flush = [&](int end_cp) {
    if (tok_begin >= 0) {
      s.tokens.push_back(Token{tok, tok_begin, end_cp});
      tok.clear();
      tok_begin = -1;
    }
  };
  while (byte < text.size()) {
    std::size_t start_byte = byte;
    char32_t cp = next_cp(text, byte);
    if (is_ascii_space(cp)) {
      flush(cp_pos);
    } else if (is_ascii_punct(cp)) {
      flush(cp_pos);
      s.tokens.push_back(
          Token{std::string(text.substr(start_byte, byte - start_byte)), cp_pos, cp_pos + 1});
    } else {
      if (tok_begin < 0) tok_begin = cp_pos;
      tok.append(text.substr(start_byte, byte - start_byte));
    }
    ++cp_pos;
  }
  flush(cp_pos);
  return s;
}

std::string detokenize(const std::vector<std::string>& surfaces) {
  static const std::string no_space_before = ".,?!:;)]}%";
  std::string out;
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const std::string& w = surfaces[i];
    if (w.empty()) continue;
    bool glue = out.empty();
    if (!glue && w.size() == 1 && no_space_before.find(w[0]) != std::string::npos) glue = true;
    if (!glue && (w == "'" || w == "’" || w == "n't")) glue = true;
    if (!glue && !out.empty()) {
      char last = out.back();
      if (last == '(' || last == '[' || last == '{') glue = true;
      if ((out.size() >= 1 && (out.ends_with("'") || out.ends_with("’"))) && w.size() <= 2)
        glue = true;  // possessive "'s"
    }
    if (!glue) out.push_back(' ');
    out += w;
  }
  return out;
}

EntityCategory EntityCategory::of(std::string_view label) {
  return EntityCategory{trimmed(label), false};
}

void validate_output(const NerOutput& output, const Sentence& sentence) {
  int prev_end = 0;
  for (const NerPrediction& p : output.predictions) {
    if (p.category.is_null)
      throw ValidationError("NULL category in backend output for '" + output.sentence_id + "'");
    if (p.begin >= p.end || p.begin < 0 || p.end > sentence.length())
      throw ValidationError("bad prediction span [" + std::to_string(p.begin) + "," +
                            std::to_string(p.end) + ")");
    if (sentence.slice(p.begin, p.end) != p.surface)
      throw ValidationError("prediction surface '" + p.surface + "' does not match text slice");
    if (p.begin < prev_end)
      throw ValidationError("overlapping predictions at " + std::to_string(p.begin));
    prev_end = p.end;
  }
}

PredictionMultiset predictions_multiset(const NerOutput& output) {
  PredictionMultiset m;
  for (const NerPrediction& p : output.predictions) ++m[{p.surface, p.category.label}];
  return m;
}

std::string_view kind_name(MutationKind kind) {
  switch (kind) {
    case MutationKind::TokenSubst: return "token";
    case MutationKind::PhraseSubst: return "phrase";
    case MutationKind::Structural: return "structural";
    case MutationKind::EntityShuffle: return "shuffle";
  }
  return "unknown";
}

std::optional<MutationKind> kind_from_name(std::string_view name) {
  for (MutationKind k : kAllMutationKinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

PipelineConfig PipelineConfig::for_category_count(std::size_t categories) {
  PipelineConfig c;
  if (categories != 4) c.syn_threshold = {0.0, 0.0, 0.0, 0.0};
  return c;
}

void PipelineConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must be in (0,1]");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ValidationError("lambda must be in (0,1]");
  if (!finite(s_threshold_testing) || s_threshold_testing < -1.0 || s_threshold_testing > 1.0)
    throw ValidationError("s_threshold_testing must be finite in [-1,1]");
  if (!finite(p_threshold) || !finite(s_threshold_repair) || !finite(k_balance))
    throw ValidationError("thresholds must be finite");
  for (double t : syn_threshold)
    if (!finite(t)) throw ValidationError("syn_threshold must be finite");
  if (top_k_testing < 1 || top_k_repair < 1) throw ValidationError("top_k must be >= 1");
  if (shuffle_attempts < 1) throw ValidationError("shuffle_attempts must be >= 1");
  if (parallelism < 1) throw ValidationError("parallelism must be >= 1");
}

std::vector<std::pair<int, int>> word_occurrences(std::string_view text,
                                                  std::string_view surface) {
  return word_occurrences(text, surface, utf8::byte_index(text));
}

std::vector<std::pair<int, int>> word_occurrences(std::string_view text,
                                                  std::string_view surface,
                                                  const std::vector<std::size_t>& idx) {
  std::vector<std::pair<int, int>> spans;
  if (surface.empty()) return spans;
  std::size_t n_cp = idx.size() - 1;
  std::size_t sur_cp = utf8::length(surface);

  // Decode the code point starting at byte position idx[cp].
  auto cp_at = [&](std::size_t cp) {
    std::size_t b = idx[cp];
    return next_cp(text, b);
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t hit = text.find(surface, pos);
    if (hit == std::string_view::npos) break;
    // Locate hit as a code point index; substring match must be cp-aligned.
    auto it = std::lower_bound(idx.begin(), idx.end(), hit);
    if (it != idx.end() && *it == hit) {
      std::size_t cp = static_cast<std::size_t>(it - idx.begin());
      std::size_t cp_end = cp + sur_cp;
      bool left_ok = cp == 0 || !is_word_cp(cp_at(cp - 1));
      bool right_ok = cp_end >= n_cp || !is_word_cp(cp_at(cp_end));
      // The match itself must end at a cp boundary too.
      bool aligned = cp_end <= n_cp && idx[cp_end] == hit + surface.size();
      if (left_ok && right_ok && aligned)
        spans.emplace_back(static_cast<int>(cp), static_cast<int>(cp_end));
    }
    pos = hit + 1;
  }
  return spans;
}

bool occurs_as_word(std::string_view text, std::string_view surface) {
  return !word_occurrences(text, surface).empty();
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace nercheck
