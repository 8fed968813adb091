#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "nercheck/core.hpp"

namespace nercheck {

struct BackendUnavailableError : Error {
  using Error::Error;
};
struct SpanMismatchError : Error {
  using Error::Error;
};
struct BackendContractError : Error {
  using Error::Error;
};
struct AuthError : Error {
  using Error::Error;
};
struct RateLimitedError : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};

// Uniform black-box view of a NER system. invoke() must be deterministic per
// (version, text) so responses are cacheable.
class NerBackend {
 public:
  virtual ~NerBackend() = default;
  virtual const std::string& name() const = 0;
  virtual const std::string& version() const = 0;
  virtual const std::vector<EntityCategory>& categories() const = 0;
  virtual NerOutput invoke(const std::string& text) const = 0;
};

// Thread-safe response cache keyed by (backend name, version, exact text).
// Entries never expire. Optionally persisted as append-only JSONL; a corrupt
// trailing line (truncated write) is tolerated on load.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(const std::filesystem::path& file);

  std::optional<NerOutput> lookup(const std::string& backend_name, const std::string& version,
                                  const std::string& text) const;
  void store(const std::string& backend_name, const std::string& version, const std::string& text,
             const NerOutput& output);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, NerOutput> entries_;  // key = name \x1F version \x1F text
  std::filesystem::path file_;
  bool persistent_ = false;
};

// Cache-first prediction. On a miss, invokes the backend, validates spans
// against the sentence text (mismatches surface as SpanMismatchError, never
// silently fixed), sorts predictions, caches, returns.
NerOutput predict(const NerBackend& backend, const Sentence& sentence,
                  ResponseCache* cache = nullptr);

// Fault rules model the four NER error classes on top of the mock:
// drop -> omission, add -> over-labeling, relabel -> incorrect category,
// split -> range error.
struct FaultTrigger {
  enum class Kind { Substring, Suffix, Regex };
  Kind kind = Kind::Substring;
  std::string pattern;

  bool matches(const std::string& text) const;
};

struct FaultEffect {
  enum class Kind { DropEntity, AddEntity, Relabel, SplitEntity };
  Kind kind = Kind::DropEntity;
  std::string surface;
  std::string label;                // AddEntity / Relabel
  std::vector<std::string> parts;   // SplitEntity
};

struct FaultRule {
  FaultTrigger trigger;
  FaultEffect effect;
};

struct FaultFiring {
  std::size_t rule_index;
  std::string text;
};

// Labels exact lexicon matches longest-match-first, left-to-right, at word
// boundaries, then applies fault rules whose triggers fire. Ground truth by
// construction when the fault list is empty.
class DictionaryMockBackend : public NerBackend {
 public:
  DictionaryMockBackend(std::string name, std::map<std::string, std::string> lexicon,
                        std::vector<FaultRule> faults = {});

  const std::string& name() const override { return name_; }
  const std::string& version() const override { return version_; }
  const std::vector<EntityCategory>& categories() const override { return categories_; }
  NerOutput invoke(const std::string& text) const override;

  int invocation_count() const;
  std::vector<FaultFiring> fired_log() const;
  const std::map<std::string, std::string>& lexicon() const { return lexicon_; }

 private:
  std::string name_;
  std::string version_ = "1";
  std::map<std::string, std::string> lexicon_;
  std::vector<FaultRule> faults_;
  std::vector<EntityCategory> categories_;
  mutable std::mutex mu_;
  mutable int invocations_ = 0;
  mutable std::vector<FaultFiring> fired_;
};

std::shared_ptr<DictionaryMockBackend> dictionary_mock_backend(
    std::map<std::string, std::string> lexicon, std::vector<FaultRule> faults = {},
    std::string name = "mock");

// Pure lexicon scan without faults; also used as the ground-truth oracle in
// eval. Spans are code-point offsets.
std::vector<NerPrediction> lexicon_scan(const std::string& text,
                                        const std::map<std::string, std::string>& lexicon);

// Mock backend description file:
//   {"lexicon": {"Elon Musk": "PERSON", ...},
//    "faults": [{"trigger": {"kind": "substring|suffix|regex", "pattern": ...},
//                "effect": {"kind": "drop|add|relabel|split", "surface": ...,
//                           "label": ..., "parts": [...]}}]}
std::shared_ptr<DictionaryMockBackend> load_mock_backend(const std::filesystem::path& path,
                                                         std::string name = "mock");

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Seam between adapters and the network, so captured provider payloads can be
// replayed bit-exactly in tests.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& url,
                            const std::vector<std::pair<std::string, std::string>>& headers,
                            const std::string& body) const = 0;
};

// Serves queued responses in order and records request bodies.
class FixtureTransport : public HttpTransport {
 public:
  explicit FixtureTransport(std::vector<HttpResponse> responses);
  static HttpResponse from_file(const std::filesystem::path& body_file, int status = 200);

  HttpResponse post(const std::string& url,
                    const std::vector<std::pair<std::string, std::string>>& headers,
                    const std::string& body) const override;

  std::vector<std::string> requests() const;

 private:
  mutable std::mutex mu_;
  mutable std::vector<HttpResponse> responses_;
  mutable std::size_t next_ = 0;
  mutable std::vector<std::string> requests_;
};

enum class ProviderSchema { AzureLike, AwsLike };

struct EndpointConfig {
  std::string backend_name;  // env vars: <UPPER(NAME)>_API_KEY, <UPPER(NAME)>_ENDPOINT
  ProviderSchema schema = ProviderSchema::AzureLike;
  std::vector<EntityCategory> categories;
  int max_retries = 3;
  int retry_base_ms = 1000;  // exponential backoff base
  std::shared_ptr<const HttpTransport> transport;  // null = real HTTP client
};

class RemoteBackend : public NerBackend {
 public:
  explicit RemoteBackend(EndpointConfig config);

  const std::string& name() const override { return config_.backend_name; }
  const std::string& version() const override { return version_; }
  const std::vector<EntityCategory>& categories() const override { return config_.categories; }
  NerOutput invoke(const std::string& text) const override;

  int total_retries() const;

 private:
  EndpointConfig config_;
  std::string version_;
  std::string api_key_;
  std::string endpoint_;
  mutable std::mutex mu_;
  mutable int retries_ = 0;
};

// Reads credentials from the environment; throws AuthError before any network
// activity when they are missing.
std::shared_ptr<NerBackend> remote_adapter(EndpointConfig config);

}  // namespace nercheck
