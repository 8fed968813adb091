#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nercheck/core.hpp"

namespace nercheck {

struct TreeParseError : Error {
  using Error::Error;
};

struct TreeNode {
  std::string label;                // nonterminal label, or token surface for terminals
  int token_index = -1;             // >= 0 for terminals
  std::vector<TreeNode> children;

  bool is_terminal() const { return token_index >= 0; }
};

struct ConstituencyTree {
  TreeNode root;
};

// Reads bracketed notation like "(S (NP (NNP Twitter)) (VP (VBD was)) (. .))".
// Terminal atoms are matched against the sentence tokens in order; the yield
// must reproduce them exactly.
ConstituencyTree parse_sexpr_tree(std::string_view sexpr, const Sentence& sentence);
std::string to_sexpr(const ConstituencyTree& tree);

// Terminal token indices in left-to-right order.
std::vector<int> tree_yield(const TreeNode& node);

// [first, last] token indices covered by the node. Node must dominate at
// least one terminal.
std::pair<int, int> token_span(const TreeNode& node);

// NP nodes with no NP strictly below them, in left-to-right order. The result
// is an antichain by construction.
std::vector<const TreeNode*> find_minimal_np_nodes(const ConstituencyTree& tree);

struct SNpVpMatch {
  const TreeNode* s_node;
  const TreeNode* np_node;
  const TreeNode* vp_node;
};

// First (preorder: top-most, left-most) S node whose first two non-punctuation
// children are NP then VP.
std::optional<SNpVpMatch> match_s_np_vp(const ConstituencyTree& tree);

enum class RewriteRule {
  BeMainVerb,           // be-verb fronted
  NormalVerbAuxInsert,  // do/does/did inserted, verb reduced to base form
  AuxFronting,          // auxiliary or modal fronted
};

std::string_view rewrite_rule_name(RewriteRule rule);

struct RewriteResult {
  std::string mutant_text;  // ends with "?"
  RewriteRule rule;
  std::string moved_or_inserted;
};

// Turns a declarative sentence into its interrogative form (three cases:
// be-verb fronting, auxiliary insertion for normal verbs, auxiliary fronting).
// Returns nullopt when the sentence does not fit any case; entity surfaces in
// `ner_output` are never case-mangled.
std::optional<RewriteResult> declarative_to_interrogative(const Sentence& sentence,
                                                          const ConstituencyTree& tree,
                                                          const NerOutput& ner_output);

// Base form of an inflected verb: irregular table first, then -s/-ed stripping.
std::string verb_base_form(const std::string& verb);

}  // namespace nercheck
