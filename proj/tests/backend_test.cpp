#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "nercheck/backend.hpp"
#include "test_support.hpp"

using namespace nercheck;
namespace fs = std::filesystem;

namespace {

// Backend returning whatever predictions it is told to, contract or not.
class RawBackend : public NerBackend {
 public:
  RawBackend(std::vector<NerPrediction> preds, std::vector<EntityCategory> cats)
      : preds_(std::move(preds)), cats_(std::move(cats)) {}
  const std::string& name() const override { return name_; }
  const std::string& version() const override { return version_; }
  const std::vector<EntityCategory>& categories() const override { return cats_; }
  NerOutput invoke(const std::string&) const override { return NerOutput{"", preds_}; }

 private:
  std::string name_ = "raw";
  std::string version_ = "1";
  std::vector<NerPrediction> preds_;
  std::vector<EntityCategory> cats_;
};

}  // namespace

TEST_CASE("mock predict labels lexicon matches") {
  auto backend = dictionary_mock_backend({{"Paul", "PER"}});
  Sentence s = tokenize("Sir Paul's command of the stage is so casual that he makes it look easy.",
                        "t1");
  NerOutput out = predict(*backend, s);
  REQUIRE(out.predictions.size() == 1);
  CHECK(out.predictions[0].surface == "Paul");
  CHECK(out.predictions[0].begin == 4);
  CHECK(out.predictions[0].end == 8);
  CHECK(out.predictions[0].category.label == "PER");
  CHECK(out.sentence_id == "t1");
}

TEST_CASE("cache hit avoids backend invocation") {
  auto backend = dictionary_mock_backend({{"Paul", "PER"}});
  ResponseCache cache;
  Sentence s = tokenize("Paul spoke.", "c1");
  NerOutput first = predict(*backend, s, &cache);
  CHECK(backend->invocation_count() == 1);
  NerOutput second = predict(*backend, s, &cache);
  CHECK(backend->invocation_count() == 1);
  CHECK(predictions_multiset(first) == predictions_multiset(second));
  CHECK(second.predictions[0].begin == first.predictions[0].begin);
}

TEST_CASE("cache transparency: cold and warm predictions agree") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> words = {"Paul", "visited", "Acme", "in", "Ruritania", "today"};
  auto backend = dictionary_mock_backend({{"Paul", "PER"}, {"Acme", "ORG"}, {"Ruritania", "LOC"}});
  ResponseCache cache;
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    int len = 2 + static_cast<int>(rng() % 5);
    for (int i = 0; i < len; ++i) text += (i ? " " : "") + test::pick(rng, words);
    text += ".";
    Sentence s = tokenize(text, "p" + std::to_string(trial));
    NerOutput cold = predict(*backend, s, nullptr);
    NerOutput warm1 = predict(*backend, s, &cache);
    NerOutput warm2 = predict(*backend, s, &cache);
    CHECK(predictions_multiset(cold) == predictions_multiset(warm1));
    CHECK(predictions_multiset(warm1) == predictions_multiset(warm2));
  }
}

TEST_CASE("predict surfaces backend span violations") {
  Sentence s = tokenize("alpha beta gamma.", "b");
  auto cat = EntityCategory::of("X");

  RawBackend inverted({NerPrediction{"xx", 5, 3, cat}}, {cat});
  CHECK_THROWS_AS(predict(inverted, s), SpanMismatchError);

  RawBackend mismatched({NerPrediction{"beta", 0, 5, cat}}, {cat});
  CHECK_THROWS_AS(predict(mismatched, s), SpanMismatchError);

  RawBackend overlapping(
      {NerPrediction{"alpha", 0, 5, cat}, NerPrediction{"alpha beta", 0, 10, cat}}, {cat});
  CHECK_THROWS_AS(predict(overlapping, s), SpanMismatchError);

  RawBackend undeclared({NerPrediction{"alpha", 0, 5, EntityCategory::of("Y")}}, {cat});
  CHECK_THROWS_AS(predict(undeclared, s), BackendContractError);

  RawBackend null_cat({NerPrediction{"alpha", 0, 5, EntityCategory::null_category()}}, {cat});
  CHECK_THROWS_AS(predict(null_cat, s), BackendContractError);
}

TEST_CASE("dictionary mock: exact matches, longest first") {
  auto backend = dictionary_mock_backend({{"Elon Musk", "PERSON"}});
  NerOutput out = backend->invoke("Elon Musk is having a similar effect on the platform.");
  REQUIRE(out.predictions.size() == 1);
  CHECK(out.predictions[0].surface == "Elon Musk");
  CHECK(out.predictions[0].category.label == "PERSON");

  auto nested = dictionary_mock_backend({{"South Africa", "LOC"}, {"Cricket South Africa", "ORG"}});
  NerOutput n = nested->invoke("Cricket South Africa toured South Africa.");
  REQUIRE(n.predictions.size() == 2);
  CHECK(n.predictions[0].surface == "Cricket South Africa");
  CHECK(n.predictions[0].category.label == "ORG");
  CHECK(n.predictions[1].surface == "South Africa");
  CHECK(n.predictions[1].category.label == "LOC");

  // word-boundary: no match inside a longer word
  auto esa = dictionary_mock_backend({{"ESA", "ORG"}});
  CHECK(esa->invoke("ESAs and Measles.").predictions.empty());
}

TEST_CASE("fault rules reproduce the four error classes") {
  SUBCASE("over-labeling via add_entity") {
    std::vector<FaultRule> faults = {{{FaultTrigger::Kind::Substring, "platform"},
                                      {FaultEffect::Kind::AddEntity, "platform", "LOCATION", {}}}};
    auto backend = dictionary_mock_backend({{"Elon Musk", "PERSON"}}, faults);
    NerOutput out = backend->invoke("Elon Musk is having a similar effect on the platform.");
    REQUIRE(out.predictions.size() == 2);
    CHECK(out.predictions[1].surface == "platform");
    CHECK(out.predictions[1].category.label == "LOCATION");
    REQUIRE(backend->fired_log().size() == 1);
    CHECK(backend->fired_log()[0].rule_index == 0);
  }
  SUBCASE("incorrect category via relabel") {
    std::vector<FaultRule> faults = {{{FaultTrigger::Kind::Substring, "Unesco"},
                                      {FaultEffect::Kind::Relabel, "Unesco", "MISC", {}}}};
    auto backend = dictionary_mock_backend({{"Unesco", "ORG"}}, faults);
    NerOutput out = backend->invoke("Norrie praised Unesco status.");
    REQUIRE(out.predictions.size() == 1);
    CHECK(out.predictions[0].category.label == "MISC");
  }
  SUBCASE("omission via drop_entity") {
    std::vector<FaultRule> faults = {{{FaultTrigger::Kind::Suffix, "?"},
                                      {FaultEffect::Kind::DropEntity, "Paul", "", {}}}};
    auto backend = dictionary_mock_backend({{"Paul", "PER"}}, faults);
    CHECK(backend->invoke("Was Paul here?").predictions.empty());
    CHECK(backend->invoke("Paul was here.").predictions.size() == 1);
    CHECK(backend->fired_log().size() == 1);
  }
  SUBCASE("range error via split_entity") {
    std::vector<FaultRule> faults = {
        {{FaultTrigger::Kind::Substring, "remained"},
         {FaultEffect::Kind::SplitEntity, "Det Supt Rance", "", {"Det", "Supt Rance"}}}};
    auto backend = dictionary_mock_backend({{"Det Supt Rance", "PERSON"}}, faults);
    NerOutput out = backend->invoke("Det Supt Rance said the investigation remained active.");
    REQUIRE(out.predictions.size() == 2);
    CHECK(out.predictions[0].surface == "Det");
    CHECK(out.predictions[1].surface == "Supt Rance");
    CHECK(out.predictions[0].category.label == "PERSON");
  }
  SUBCASE("rule does not fire when the effect surface is absent") {
    std::vector<FaultRule> faults = {{{FaultTrigger::Kind::Substring, "the"},
                                      {FaultEffect::Kind::DropEntity, "Ghost", "", {}}}};
    auto backend = dictionary_mock_backend({{"Paul", "PER"}}, faults);
    backend->invoke("the Paul story.");
    CHECK(backend->fired_log().empty());
  }
  SUBCASE("regex trigger") {
    std::vector<FaultRule> faults = {{{FaultTrigger::Kind::Regex, "^(?!Spotify).*Drake"},
                                      {FaultEffect::Kind::DropEntity, "Drake", "", {}}}};
    auto backend = dictionary_mock_backend({{"Drake", "PER"}}, faults);
    CHECK(backend->invoke("Spotify promoted Drake.").predictions.size() == 1);
    CHECK(backend->invoke("Deezer promoted Drake.").predictions.empty());
  }
}

TEST_CASE("persistent cache survives reload and tolerates a corrupt trailing line") {
  fs::path path = fs::temp_directory_path() / "nercheck_cache_test.jsonl";
  fs::remove(path);
  {
    auto backend = dictionary_mock_backend({{"Paul", "PER"}});
    ResponseCache cache(path);
    predict(*backend, tokenize("Paul spoke.", "a"), &cache);
    predict(*backend, tokenize("Paul left.", "b"), &cache);
    CHECK(backend->invocation_count() == 2);
  }
  {
    // truncated write at the tail
    std::ofstream out(path, std::ios::app);
    out << R"({"backend":"mock","version":"1","text_ha)";
  }
  {
    auto backend = dictionary_mock_backend({{"Paul", "PER"}});
    ResponseCache cache(path);
    CHECK(cache.size() == 2);
    NerOutput out = predict(*backend, tokenize("Paul spoke.", "a"), &cache);
    CHECK(backend->invocation_count() == 0);
    REQUIRE(out.predictions.size() == 1);
    CHECK(out.predictions[0].surface == "Paul");
  }
  fs::remove(path);
}

TEST_CASE("remote adapter parses an Azure-style fixture body") {
  // 62 characters before the entity
  std::string prefix = "They say the federal authorities have returned electricity to ";
  REQUIRE(prefix.size() == 62);
  Sentence s = tokenize(prefix + "Mekelle.", "r1");
  REQUIRE(s.slice(62, 69) == "Mekelle");

  fs::path body_path = fs::temp_directory_path() / "nercheck_azure_fixture.json";
  {
    std::ofstream out(body_path, std::ios::binary);
    out << R"({"entities":[{"text":"Mekelle","offset":62,"length":7,"category":"Location"}]})";
  }
  auto transport = std::make_shared<FixtureTransport>(
      std::vector<HttpResponse>{FixtureTransport::from_file(body_path)});

  EndpointConfig config;
  config.backend_name = "azure-test";
  config.schema = ProviderSchema::AzureLike;
  config.categories = {EntityCategory::of("LOCATION"), EntityCategory::of("PERSON")};
  config.transport = transport;
  config.retry_base_ms = 1;
  auto backend = remote_adapter(config);

  NerOutput out = predict(*backend, s);
  REQUIRE(out.predictions.size() == 1);
  CHECK(out.predictions[0].surface == "Mekelle");
  CHECK(out.predictions[0].begin == 62);
  CHECK(out.predictions[0].end == 69);
  CHECK(out.predictions[0].category.label == "LOCATION");
  REQUIRE(transport->requests().size() == 1);
  CHECK(transport->requests()[0].find("Mekelle") != std::string::npos);
  fs::remove(body_path);
}

TEST_CASE("remote adapter retries 429 with backoff and records the count") {
  auto transport = std::make_shared<FixtureTransport>(std::vector<HttpResponse>{
      {429, ""}, {429, ""}, {429, ""}, {200, R"({"Entities":[]})"}});
  EndpointConfig config;
  config.backend_name = "aws-test";
  config.schema = ProviderSchema::AwsLike;
  config.categories = {EntityCategory::of("PERSON")};
  config.transport = transport;
  config.retry_base_ms = 1;
  RemoteBackend backend(config);
  NerOutput out = backend.invoke("hello there.");
  CHECK(out.predictions.empty());
  CHECK(backend.total_retries() == 3);
}

TEST_CASE("remote adapter rate-limit and schema errors") {
  EndpointConfig config;
  config.backend_name = "aws-test";
  config.schema = ProviderSchema::AwsLike;
  config.categories = {EntityCategory::of("PERSON")};
  config.retry_base_ms = 1;
  config.max_retries = 2;

  config.transport = std::make_shared<FixtureTransport>(
      std::vector<HttpResponse>{{429, ""}, {429, ""}, {429, ""}});
  CHECK_THROWS_AS(RemoteBackend(config).invoke("x"), RateLimitedError);

  config.transport =
      std::make_shared<FixtureTransport>(std::vector<HttpResponse>{{200, "not json at all"}});
  CHECK_THROWS_AS(RemoteBackend(config).invoke("x"), SchemaError);

  config.transport =
      std::make_shared<FixtureTransport>(std::vector<HttpResponse>{{403, "denied"}});
  CHECK_THROWS_AS(RemoteBackend(config).invoke("x"), AuthError);
}

TEST_CASE("missing credentials raise AuthError before any network call") {
  unsetenv("NOSUCH_API_KEY");
  unsetenv("NOSUCH_ENDPOINT");
  EndpointConfig config;
  config.backend_name = "nosuch";
  config.schema = ProviderSchema::AzureLike;
  config.categories = {EntityCategory::of("PERSON")};
  CHECK_THROWS_AS(remote_adapter(config), AuthError);
}

TEST_CASE("NO_NETWORK forbids real transport calls") {
  setenv("NONET_API_KEY", "k", 1);
  setenv("NONET_ENDPOINT", "http://localhost:1/analyze", 1);
  setenv("NO_NETWORK", "1", 1);
  EndpointConfig config;
  config.backend_name = "nonet";
  config.schema = ProviderSchema::AzureLike;
  config.categories = {EntityCategory::of("PERSON")};
  auto backend = remote_adapter(config);
  CHECK_THROWS_AS(backend->invoke("x"), BackendUnavailableError);
  unsetenv("NO_NETWORK");
  unsetenv("NONET_API_KEY");
  unsetenv("NONET_ENDPOINT");
}

TEST_CASE("mock backend file loading") {
  fs::path path = fs::temp_directory_path() / "nercheck_mock_test.json";
  {
    std::ofstream out(path);
    out << R"({"lexicon": {"Paul": "PER", "Acme Corp": "ORG"},
               "faults": [{"trigger": {"kind": "suffix", "pattern": "?"},
                           "effect": {"kind": "drop", "surface": "Paul"}}]})";
  }
  auto backend = load_mock_backend(path);
  CHECK(backend->invoke("Paul joined Acme Corp.").predictions.size() == 2);
  CHECK(backend->invoke("Did Paul join Acme Corp?").predictions.size() == 1);
  CHECK(backend->categories().size() == 2);
  fs::remove(path);
}
