#include "nercheck/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace nercheck {

namespace {

struct SexprParser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  std::string atom() {
    std::size_t start = pos;
    while (pos < src.size() && src[pos] != '(' && src[pos] != ')' &&
           !std::isspace(static_cast<unsigned char>(src[pos])))
      ++pos;
    if (pos == start) throw TreeParseError("expected atom at position " + std::to_string(start));
    return std::string(src.substr(start, pos - start));
  }

  TreeNode node(int& next_token) {
    skip_ws();
    if (pos >= src.size() || src[pos] != '(')
      throw TreeParseError("expected '(' at position " + std::to_string(pos));
    ++pos;
    skip_ws();
    TreeNode n;
    n.label = atom();
    skip_ws();
    while (pos < src.size() && src[pos] != ')') {
      if (src[pos] == '(') {
        n.children.push_back(node(next_token));
      } else {
        TreeNode terminal;
        terminal.label = atom();
        terminal.token_index = next_token++;
        n.children.push_back(std::move(terminal));
      }
      skip_ws();
    }
    if (pos >= src.size()) throw TreeParseError("unbalanced parentheses");
    ++pos;  // ')'
    if (n.children.empty()) throw TreeParseError("non-terminal '" + n.label + "' has no children");
    return n;
  }
};

void collect_terminals(const TreeNode& n, std::vector<const TreeNode*>& out) {
  if (n.is_terminal()) {
    out.push_back(&n);
    return;
  }
  for (const TreeNode& c : n.children) collect_terminals(c, out);
}

bool is_punct_label(const std::string& label) {
  return !label.empty() &&
         !std::isalnum(static_cast<unsigned char>(label[0]));
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_be_form(const std::string& word) {
  static const std::set<std::string> kBe = {"am", "is", "are", "was", "were",
                                            "be", "been", "being"};
  return kBe.count(lower(word)) > 0;
}

bool is_aux_lemma(const std::string& word) {
  static const std::set<std::string> kAux = {"have", "has", "had", "do", "does", "did"};
  return kAux.count(lower(word)) > 0;
}

std::string capitalize_first(std::string word) {
  if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
  return word;
}

std::string lowercase_first(std::string word) {
  if (!word.empty()) word[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(word[0])));
  return word;
}

// Direct child of vp whose label marks a verb (VB* or MD), plus its terminal.
struct VerbChild {
  const TreeNode* node = nullptr;
  const TreeNode* terminal = nullptr;
  std::size_t child_pos = 0;
};

const TreeNode* first_terminal(const TreeNode& n) {
  if (n.is_terminal()) return &n;
  for (const TreeNode& c : n.children)
    if (const TreeNode* t = first_terminal(c)) return t;
  return nullptr;
}

std::optional<VerbChild> first_verb_child(const TreeNode& vp) {
  for (std::size_t i = 0; i < vp.children.size(); ++i) {
    const TreeNode& c = vp.children[i];
    if (c.label.rfind("VB", 0) == 0 || c.label == "MD") {
      const TreeNode* t = first_terminal(c);
      if (t != nullptr) return VerbChild{&c, t, i};
    }
  }
  return std::nullopt;
}

bool has_vp_after(const TreeNode& vp, std::size_t child_pos) {
  for (std::size_t i = child_pos + 1; i < vp.children.size(); ++i)
    if (vp.children[i].label == "VP") return true;
  return false;
}

}  // namespace

ConstituencyTree parse_sexpr_tree(std::string_view sexpr, const Sentence& sentence) {
  SexprParser parser{sexpr};
  int next_token = 0;
  ConstituencyTree tree{parser.node(next_token)};
  parser.skip_ws();
  if (parser.pos != sexpr.size()) throw TreeParseError("trailing content after tree");

  std::vector<const TreeNode*> terminals;
  collect_terminals(tree.root, terminals);
  if (terminals.size() != sentence.tokens.size())
    throw TreeParseError("tree yield has " + std::to_string(terminals.size()) +
                         " terminals, sentence has " + std::to_string(sentence.tokens.size()) +
                         " tokens");
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (terminals[i]->label != sentence.tokens[i].surface)
      throw TreeParseError("yield mismatch at token " + std::to_string(i) + ": '" +
                           terminals[i]->label + "' vs '" + sentence.tokens[i].surface + "'");
  }
  return tree;
}

static void write_sexpr(const TreeNode& n, std::string& out) {
  if (n.is_terminal()) {
    out += n.label;
    return;
  }
  out += '(';
  out += n.label;
  for (const TreeNode& c : n.children) {
    out += ' ';
    write_sexpr(c, out);
  }
  out += ')';
}

std::string to_sexpr(const ConstituencyTree& tree) {
  std::string out;
  write_sexpr(tree.root, out);
  return out;
}

std::vector<int> tree_yield(const TreeNode& node) {
  std::vector<const TreeNode*> terminals;
  collect_terminals(node, terminals);
  std::vector<int> idx;
  idx.reserve(terminals.size());
  for (const TreeNode* t : terminals) idx.push_back(t->token_index);
  return idx;
}

std::pair<int, int> token_span(const TreeNode& node) {
  std::vector<int> yield = tree_yield(node);
  if (yield.empty()) throw TreeParseError("node '" + node.label + "' dominates no terminal");
  return {yield.front(), yield.back()};
}

static bool subtree_contains_np(const TreeNode& n) {
  for (const TreeNode& c : n.children) {
    if (c.label == "NP" || subtree_contains_np(c)) return true;
  }
  return false;
}

static void scan_minimal_np(const TreeNode& n, std::vector<const TreeNode*>& out) {
  if (n.label == "NP" && !subtree_contains_np(n)) {
    out.push_back(&n);
    return;  // nothing below can be an NP
  }
  for (const TreeNode& c : n.children) scan_minimal_np(c, out);
}

std::vector<const TreeNode*> find_minimal_np_nodes(const ConstituencyTree& tree) {
  std::vector<const TreeNode*> out;
  scan_minimal_np(tree.root, out);
  return out;
}

static const TreeNode* scan_s_np_vp(const TreeNode& n, SNpVpMatch& match) {
  if (n.label == "S") {
    const TreeNode* np = nullptr;
    const TreeNode* vp = nullptr;
    for (const TreeNode& c : n.children) {
      if (c.is_terminal() || is_punct_label(c.label)) continue;
      if (np == nullptr) {
        np = &c;
        continue;
      }
      vp = &c;
      break;
    }
    if (np != nullptr && vp != nullptr && np->label == "NP" && vp->label == "VP") {
      match = SNpVpMatch{&n, np, vp};
      return &n;
    }
  }
  for (const TreeNode& c : n.children)
    if (const TreeNode* hit = scan_s_np_vp(c, match)) return hit;
  return nullptr;
}

std::optional<SNpVpMatch> match_s_np_vp(const ConstituencyTree& tree) {
  SNpVpMatch match{};
  if (scan_s_np_vp(tree.root, match) == nullptr) return std::nullopt;
  return match;
}

std::string_view rewrite_rule_name(RewriteRule rule) {
  switch (rule) {
    case RewriteRule::BeMainVerb: return "BE_MAIN_VERB";
    case RewriteRule::NormalVerbAuxInsert: return "NORMAL_VERB_AUX_INSERT";
    case RewriteRule::AuxFronting: return "AUX_FRONTING";
  }
  return "unknown";
}

std::string verb_base_form(const std::string& verb) {
  static const std::map<std::string, std::string> kIrregular = {
      {"ate", "eat"},     {"said", "say"},    {"went", "go"},     {"made", "make"},
      {"took", "take"},   {"got", "get"},     {"saw", "see"},     {"came", "come"},
      {"found", "find"},  {"gave", "give"},   {"told", "tell"},   {"knew", "know"},
      {"thought", "think"}, {"became", "become"}, {"left", "leave"}, {"felt", "feel"},
      {"met", "meet"},    {"ran", "run"},     {"paid", "pay"},    {"sat", "sit"},
      {"spoke", "speak"}, {"won", "win"},     {"led", "lead"},    {"read", "read"},
      {"held", "hold"},   {"stood", "stand"}, {"wrote", "write"}, {"lost", "lose"},
      {"sold", "sell"},   {"sent", "send"},   {"built", "build"}, {"bought", "buy"},
      {"cried", "cry"},   {"has", "have"},    {"had", "have"},    {"does", "do"},
      {"did", "do"},      {"is", "be"},       {"was", "be"},      {"were", "be"},
      {"are", "be"},      {"am", "be"},       {"says", "say"},    {"goes", "go"},
  };
  std::string w = lower(verb);
  if (auto it = kIrregular.find(w); it != kIrregular.end()) return it->second;
  auto ends = [&](std::string_view suf) { return w.size() > suf.size() && w.ends_with(suf); };
  if (ends("ies")) return w.substr(0, w.size() - 3) + "y";
  if (ends("sses") || ends("shes") || ends("ches") || ends("xes")) return w.substr(0, w.size() - 2);
  if (ends("ied")) return w.substr(0, w.size() - 3) + "y";
  if (ends("ed")) {
    std::string stem = w.substr(0, w.size() - 2);
    // "faced" -> "face", "hoped" -> "hope": restore silent e after soft stem.
    if (!stem.empty() && (stem.back() == 'c' || stem.back() == 'g' || stem.back() == 'v' ||
                          stem.back() == 'u' || stem.back() == 's'))
      return stem + "e";
    return stem;
  }
  if (ends("s") && !ends("ss")) return w.substr(0, w.size() - 1);
  return w;
}

std::optional<RewriteResult> declarative_to_interrogative(const Sentence& sentence,
                                                          const ConstituencyTree& tree,
                                                          const NerOutput& ner_output) {
  if (sentence.tokens.empty() || sentence.tokens.back().surface != ".") return std::nullopt;

  std::optional<SNpVpMatch> match = match_s_np_vp(tree);
  if (!match) return std::nullopt;

  std::optional<VerbChild> verb = first_verb_child(*match->vp_node);
  if (!verb) return std::nullopt;

  int verb_idx = verb->terminal->token_index;
  const std::string verb_surface = sentence.tokens[verb_idx].surface;
  int s_first = token_span(*match->s_node).first;
  if (verb_idx <= s_first) return std::nullopt;

  bool modal = verb->node->label == "MD";
  bool be = is_be_form(verb_surface);
  bool aux_follows = has_vp_after(*match->vp_node, verb->child_pos);

  RewriteRule rule;
  if (modal) {
    rule = RewriteRule::AuxFronting;
  } else if (be) {
    rule = aux_follows ? RewriteRule::AuxFronting : RewriteRule::BeMainVerb;
  } else if (aux_follows && is_aux_lemma(verb_surface)) {
    rule = RewriteRule::AuxFronting;
  } else {
    rule = RewriteRule::NormalVerbAuxInsert;
  }

  std::vector<std::string> words;
  words.reserve(sentence.tokens.size() + 1);
  for (const Token& t : sentence.tokens) words.push_back(t.surface);

  std::string fronted;
  if (rule == RewriteRule::NormalVerbAuxInsert) {
    const std::string& tag = verb->node->label;
    std::string aux = tag == "VBZ" ? "does" : tag == "VBD" ? "did" : "do";
    words[static_cast<std::size_t>(verb_idx)] = verb_base_form(verb_surface);
    words.insert(words.begin() + s_first, aux);
    fronted = aux;
  } else {
    words.erase(words.begin() + verb_idx);
    words.insert(words.begin() + s_first, verb_surface);
    fronted = verb_surface;
  }

  // The displaced old first word now sits one slot to the right.
  std::size_t old_first = static_cast<std::size_t>(s_first) + 1;
  const Token& old_tok = sentence.tokens[static_cast<std::size_t>(s_first)];
  bool in_entity = false;
  for (const NerPrediction& p : ner_output.predictions)
    if (old_tok.begin >= p.begin && old_tok.end <= p.end) in_entity = true;
  if (old_first < words.size() && !in_entity && words[old_first] != "I")
    words[old_first] = lowercase_first(words[old_first]);

  words[static_cast<std::size_t>(s_first)] =
      capitalize_first(words[static_cast<std::size_t>(s_first)]);
  words.back() = "?";

  return RewriteResult{detokenize(words), rule, capitalize_first(fronted)};
}

}  // namespace nercheck
