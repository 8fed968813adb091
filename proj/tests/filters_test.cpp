#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "nercheck/filters.hpp"
#include "test_support.hpp"

using namespace nercheck;

namespace {

// One-word substitution pair over a fixed frame, with scripted word vectors
// and naturalness scores.
struct Rig {
  MutantPair pair;
  OracleSuite oracles;
};

Rig make_rig(const std::vector<double>& original_vec, const std::vector<double>& mutant_vec,
             double score_original, double score_mutant,
             MutationKind kind = MutationKind::TokenSubst) {
  Sentence original = tokenize("the play was casual tonight.", "r");
  MutantPair pair = nercheck::test::make_subst_pair(original, 13, 19, "relaxed", kind);
  ScriptTable t;
  t.add_embedding("casual", original_vec);
  t.add_embedding("relaxed", mutant_vec);
  t.add_naturalness(pair.original.text, score_original);
  t.add_naturalness(pair.mutant.text, score_mutant);
  return Rig{std::move(pair), scripted_oracle_suite(std::move(t))};
}

}  // namespace

TEST_CASE("semantic filter compares replaced and replacement span embeddings") {
  PipelineConfig config;

  SUBCASE("below the threshold fails") {
    // cos((1,0),(0.64, 0.768...)) ~= 0.64 < 0.65
    Rig rig = make_rig({1, 0}, {0.64, 0.7682}, 0.5, 0.5);
    FilterVerdict v = semantic_filter(rig.pair, rig.oracles, config);
    CHECK_FALSE(v.passed);
    CHECK(v.reason == FilterReason::SemanticBelow);
    REQUIRE(v.semantic_sim.has_value());
    CHECK(*v.semantic_sim == doctest::Approx(0.64).epsilon(1e-3));
  }

  SUBCASE("equality at the threshold passes") {
    // identical vectors with an exactly-representable norm: sim == 1.0 exactly
    Rig rig = make_rig({3, 4}, {3, 4}, 0.5, 0.5);
    PipelineConfig boundary = config;
    boundary.s_threshold_testing = 1.0;
    FilterVerdict v = semantic_filter(rig.pair, rig.oracles, boundary);
    CHECK(v.passed);
    CHECK(v.reason == FilterReason::Ok);

    // and at a 0.65-level similarity, threshold == computed sim passes too
    Rig near = make_rig({1, 0}, {0.65, 0.7599342076785331}, 0.5, 0.5);
    FilterVerdict probe = semantic_filter(near.pair, near.oracles, config);
    REQUIRE(probe.semantic_sim.has_value());
    PipelineConfig exact = config;
    exact.s_threshold_testing = *probe.semantic_sim;
    CHECK(semantic_filter(near.pair, near.oracles, exact).passed);
    CHECK(*probe.semantic_sim == doctest::Approx(0.65).epsilon(1e-6));
  }

  SUBCASE("non-substitution kinds pass with no similarity recorded") {
    Rig rig = make_rig({1, 0}, {0, 1}, 0.5, 0.5, MutationKind::Structural);
    FilterVerdict v = semantic_filter(rig.pair, rig.oracles, config);
    CHECK(v.passed);
    CHECK(v.reason == FilterReason::Ok);
    CHECK_FALSE(v.semantic_sim.has_value());
  }
}

TEST_CASE("syntactic filter uses the naturalness delta") {
  PipelineConfig config;  // structural threshold 0.02

  SUBCASE("small positive delta passes") {
    Rig rig = make_rig({3, 4}, {3, 4}, 0.80, 0.79, MutationKind::Structural);
    FilterVerdict v = syntactic_filter(rig.pair, rig.oracles, config);
    CHECK(v.passed);
    REQUIRE(v.syntactic_delta.has_value());
    CHECK(*v.syntactic_delta == doctest::Approx(0.01));
  }
  SUBCASE("large delta fails") {
    Rig rig = make_rig({3, 4}, {3, 4}, 0.80, 0.77, MutationKind::Structural);
    FilterVerdict v = syntactic_filter(rig.pair, rig.oracles, config);
    CHECK_FALSE(v.passed);
    CHECK(v.reason == FilterReason::SyntacticAbove);
    CHECK(*v.syntactic_delta == doctest::Approx(0.03));
  }
  SUBCASE("zero delta passes for every non-negative threshold") {
    Rig rig = make_rig({3, 4}, {3, 4}, 0.80, 0.80, MutationKind::Structural);
    for (double threshold : {0.0, 0.01, 0.02, 0.05}) {
      PipelineConfig c = config;
      c.syn_threshold = {threshold, threshold, threshold, threshold};
      CHECK(syntactic_filter(rig.pair, rig.oracles, c).passed);
    }
  }
  SUBCASE("equality at the threshold passes") {
    Rig rig = make_rig({3, 4}, {3, 4}, 0.80, 0.78, MutationKind::Structural);
    FilterVerdict probe = syntactic_filter(rig.pair, rig.oracles, config);
    REQUIRE(probe.syntactic_delta.has_value());
    PipelineConfig exact = config;
    exact.syn_threshold[static_cast<int>(MutationKind::Structural)] = *probe.syntactic_delta;
    CHECK(syntactic_filter(rig.pair, rig.oracles, exact).passed);
  }
  SUBCASE("delta is antisymmetric under swapping the sentences") {
    Rig rig = make_rig({3, 4}, {3, 4}, 0.80, 0.74, MutationKind::Structural);
    MutantPair reversed = rig.pair;
    std::swap(reversed.original, reversed.mutant);
    FilterVerdict forward = syntactic_filter(rig.pair, rig.oracles, config);
    FilterVerdict backward = syntactic_filter(reversed, rig.oracles, config);
    CHECK(*forward.syntactic_delta == doctest::Approx(-*backward.syntactic_delta));
  }
}

namespace {

// Random scripted population for the partition / monotonicity properties.
struct Population {
  std::vector<MutantPair> pairs;
  OracleSuite oracles;
};

Population make_population(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScriptTable t;
  std::vector<MutantPair> pairs;
  for (int i = 0; i < n; ++i) {
    std::string orig_word = "orig" + std::to_string(i);
    std::string repl_word = "repl" + std::to_string(i);
    Sentence original = tokenize("the " + orig_word + " here.", "s" + std::to_string(i));
    MutationKind kind = static_cast<MutationKind>(rng() % 4);
    MutantPair pair;
    if (kind == MutationKind::TokenSubst || kind == MutationKind::PhraseSubst) {
      pair = nercheck::test::make_subst_pair(original, 4, 4 + static_cast<int>(orig_word.size()),
                                             repl_word, kind, "m" + std::to_string(i));
    } else {
      pair = nercheck::test::make_pair_with_texts("the " + orig_word + " here.",
                                                  "the " + orig_word + " there?", kind,
                                                  "s" + std::to_string(i),
                                                  "m" + std::to_string(i));
    }
    double sim = nercheck::test::urand(rng, -1.0, 1.0);
    // vectors (1,0) and (sim, sqrt(1-sim^2)) give cosine ~= sim
    t.add_embedding(orig_word, {1, 0});
    t.add_embedding(repl_word, {sim, std::sqrt(std::max(0.0, 1.0 - sim * sim))});
    t.add_naturalness(pair.original.text, nercheck::test::urand(rng, 0.0, 1.0));
    t.add_naturalness(pair.mutant.text, nercheck::test::urand(rng, 0.0, 1.0));
    pairs.push_back(std::move(pair));
  }
  return Population{std::move(pairs), scripted_oracle_suite(std::move(t))};
}

std::set<std::string> kept_ids(const std::vector<MutantPair>& kept) {
  std::set<std::string> ids;
  for (const MutantPair& p : kept) ids.insert(p.mutant.id);
  return ids;
}

}  // namespace

TEST_CASE("apply_filters partitions the input in order") {
  Population pop = make_population(100, 21);
  PipelineConfig config;
  auto [kept, rejected] = apply_filters(pop.pairs, pop.oracles, config);
  CHECK(kept.size() + rejected.size() == pop.pairs.size());

  // partition oracle: ids unite to the input set, disjointly
  std::set<std::string> all;
  for (const MutantPair& p : pop.pairs) all.insert(p.mutant.id);
  std::set<std::string> got = kept_ids(kept);
  for (const RejectedPair& r : rejected) CHECK(got.insert(r.pair.mutant.id).second);
  CHECK(got == all);

  // order preserved within each side
  std::size_t last_kept = 0, last_rej = 0;
  auto index_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < pop.pairs.size(); ++i)
      if (pop.pairs[i].mutant.id == id) return i;
    return pop.pairs.size();
  };
  for (const MutantPair& p : kept) {
    std::size_t i = index_of(p.mutant.id);
    CHECK(i + 1 > last_kept);
    last_kept = i + 1;
  }
  for (const RejectedPair& r : rejected) {
    std::size_t i = index_of(r.pair.mutant.id);
    CHECK(i + 1 > last_rej);
    last_rej = i + 1;
  }
}

TEST_CASE("apply_filters routes distinct reasons") {
  Sentence s1 = tokenize("the casual act.", "a");
  MutantPair semantic_fail = nercheck::test::make_subst_pair(s1, 4, 10, "relaxed",
                                                             MutationKind::TokenSubst, "a.m");
  Sentence s2 = tokenize("the easy act.", "b");
  MutantPair syntactic_fail =
      nercheck::test::make_subst_pair(s2, 4, 8, "simple", MutationKind::TokenSubst, "b.m");

  ScriptTable t;
  t.add_embedding("casual", {1, 0});
  t.add_embedding("relaxed", {0, 1});  // sim 0: semantic fail
  t.add_embedding("easy", {3, 4});
  t.add_embedding("simple", {3, 4});  // sim 1: semantic pass
  t.set_default_naturalness(0.5);
  t.add_naturalness(syntactic_fail.mutant.text, 0.1);  // delta 0.4: syntactic fail
  OracleSuite oracles = scripted_oracle_suite(std::move(t));

  auto [kept, rejected] = apply_filters({semantic_fail, syntactic_fail}, oracles,
                                        PipelineConfig{});
  CHECK(kept.empty());
  REQUIRE(rejected.size() == 2);
  CHECK(rejected[0].verdict.reason == FilterReason::SemanticBelow);
  CHECK(rejected[1].verdict.reason == FilterReason::SyntacticAbove);
}

TEST_CASE("all-pass population returns the input order") {
  Sentence s = tokenize("the casual act.", "c");
  MutantPair p1 = nercheck::test::make_subst_pair(s, 4, 10, "relaxed", MutationKind::TokenSubst,
                                                  "c.m0");
  MutantPair p2 = nercheck::test::make_subst_pair(s, 4, 10, "mellow", MutationKind::TokenSubst,
                                                  "c.m1");
  ScriptTable t;
  t.add_embedding("casual", {3, 4});
  t.add_embedding("relaxed", {3, 4});
  t.add_embedding("mellow", {3, 4});
  t.set_default_naturalness(0.5);
  OracleSuite oracles = scripted_oracle_suite(std::move(t));
  auto [kept, rejected] = apply_filters({p1, p2}, oracles, PipelineConfig{});
  CHECK(rejected.empty());
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].mutant.id == "c.m0");
  CHECK(kept[1].mutant.id == "c.m1");
}

TEST_CASE("filter monotonicity over 500 random score sets") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 5; ++round) {
    Population pop = make_population(100, 1000 + round);
    double t1 = nercheck::test::urand(rng, -1.0, 1.0);
    double t2 = nercheck::test::urand(rng, t1, 1.0);
    PipelineConfig lower, higher;
    lower.s_threshold_testing = t1;
    higher.s_threshold_testing = t2;
    auto kept_low = kept_ids(apply_filters(pop.pairs, pop.oracles, lower).first);
    auto kept_high = kept_ids(apply_filters(pop.pairs, pop.oracles, higher).first);
    // lowering the semantic threshold never shrinks the kept set
    for (const std::string& id : kept_high) CHECK(kept_low.count(id) == 1);

    double s1 = nercheck::test::urand(rng, -1.0, 1.0);
    double s2 = nercheck::test::urand(rng, s1, 1.0);
    PipelineConfig syn_low, syn_high;
    syn_low.syn_threshold = {s1, s1, s1, s1};
    syn_high.syn_threshold = {s2, s2, s2, s2};
    auto kept_syn_low = kept_ids(apply_filters(pop.pairs, pop.oracles, syn_low).first);
    auto kept_syn_high = kept_ids(apply_filters(pop.pairs, pop.oracles, syn_high).first);
    // raising the syntactic threshold never shrinks the kept set
    for (const std::string& id : kept_syn_low) CHECK(kept_syn_high.count(id) == 1);
  }
}

TEST_CASE("kept-set membership is independent of filter order") {
  Population pop = make_population(120, 31);
  PipelineConfig config;
  auto kept_default = kept_ids(apply_filters(pop.pairs, pop.oracles, config).first);

  // reverse order: syntactic first, then semantic
  std::set<std::string> kept_reversed;
  for (const MutantPair& pair : pop.pairs) {
    FilterVerdict syn = syntactic_filter(pair, pop.oracles, config);
    if (!syn.passed) continue;
    FilterVerdict sem = semantic_filter(pair, pop.oracles, config);
    if (!sem.passed) continue;
    kept_reversed.insert(pair.mutant.id);
  }
  CHECK(kept_default == kept_reversed);
}
