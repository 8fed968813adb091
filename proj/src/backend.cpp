#include "nercheck/backend.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "nercheck/json_io.hpp"
#include "nercheck/utf8.hpp"

namespace nercheck {

namespace {

constexpr char kKeySep = '\x1F';

std::string cache_key(const std::string& name, const std::string& version,
                      const std::string& text) {
  return name + kKeySep + version + kKeySep + text;
}

std::string hex_digest(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

}  // namespace

ResponseCache::ResponseCache(const std::filesystem::path& file)
    : file_(file), persistent_(true) {
  std::ifstream in(file);
  if (!in) return;  // fresh cache file
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) continue;  // truncated trailing write
    try {
      const std::string backend = j.at("backend").get<std::string>();
      const std::string version = j.at("version").get<std::string>();
      const std::string text = j.at("text").get<std::string>();
      if (j.at("text_hash").get<std::string>() != hex_digest(text)) continue;
      entries_[cache_key(backend, version, text)] = io::output_from(j.at("output"));
    } catch (const std::exception&) {
      continue;
    }
  }
}

std::optional<NerOutput> ResponseCache::lookup(const std::string& backend_name,
                                               const std::string& version,
                                               const std::string& text) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = entries_.find(cache_key(backend_name, version, text));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ResponseCache::store(const std::string& backend_name, const std::string& version,
                          const std::string& text, const NerOutput& output) {
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = entries_.emplace(cache_key(backend_name, version, text), output);
  if (!inserted || !persistent_) return;
  nlohmann::ordered_json j;
  j["backend"] = backend_name;
  j["version"] = version;
  j["text_hash"] = hex_digest(text);
  j["text"] = text;
  j["fetched_at"] = static_cast<long long>(
      std::chrono::duration_cast<std::chrono::seconds>(
          std::chrono::system_clock::now().time_since_epoch())
          .count());
  j["output"] = io::output_json(output);
  std::ofstream out(file_, std::ios::app);
  out << j.dump() << '\n';
}

std::size_t ResponseCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

NerOutput predict(const NerBackend& backend, const Sentence& sentence, ResponseCache* cache) {
  if (cache) {
    if (auto hit = cache->lookup(backend.name(), backend.version(), sentence.text)) {
      hit->sentence_id = sentence.id;
      return *hit;
    }
  }
  NerOutput raw = backend.invoke(sentence.text);
  std::vector<NerPrediction> preds = std::move(raw.predictions);
  std::sort(preds.begin(), preds.end(), [](const NerPrediction& a, const NerPrediction& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end < b.end;
  });
  int prev_end = 0;
  for (const NerPrediction& p : preds) {
    if (p.begin < 0 || p.end <= p.begin || p.end > sentence.length())
      throw SpanMismatchError("backend '" + backend.name() + "' returned span [" +
                              std::to_string(p.begin) + "," + std::to_string(p.end) +
                              ") for text of length " + std::to_string(sentence.length()));
    if (sentence.slice(p.begin, p.end) != p.surface)
      throw SpanMismatchError("backend '" + backend.name() + "' surface '" + p.surface +
                              "' does not match text slice '" + sentence.slice(p.begin, p.end) +
                              "'");
    if (p.begin < prev_end)
      throw SpanMismatchError("backend '" + backend.name() + "' returned overlapping spans at " +
                              std::to_string(p.begin));
    prev_end = p.end;
    if (p.category.is_null)
      throw BackendContractError("backend '" + backend.name() + "' emitted the NULL category");
    bool declared = false;
    for (const EntityCategory& c : backend.categories())
      if (c == p.category) declared = true;
    if (!declared)
      throw BackendContractError("backend '" + backend.name() + "' emitted undeclared category '" +
                                 p.category.label + "'");
  }
  NerOutput out{sentence.id, std::move(preds)};
  if (cache) cache->store(backend.name(), backend.version(), sentence.text, out);
  return out;
}

bool FaultTrigger::matches(const std::string& text) const {
  switch (kind) {
    case Kind::Substring: return text.find(pattern) != std::string::npos;
    case Kind::Suffix: return text.size() >= pattern.size() && text.ends_with(pattern);
    case Kind::Regex: return std::regex_search(text, std::regex(pattern));
  }
  return false;
}

std::vector<NerPrediction> lexicon_scan(const std::string& text,
                                        const std::map<std::string, std::string>& lexicon) {
  struct Occ {
    int begin;
    int end;
    const std::string* surface;
    const std::string* label;
  };
  std::vector<Occ> all;
  const std::vector<std::size_t> idx = utf8::byte_index(text);
  for (const auto& [surface, label] : lexicon) {
    for (auto [b, e] : word_occurrences(text, surface, idx))
      all.push_back({b, e, &surface, &label});
  }
  std::sort(all.begin(), all.end(), [](const Occ& a, const Occ& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    if (a.end != b.end) return a.end > b.end;  // longest first
    return *a.surface < *b.surface;
  });
  std::vector<NerPrediction> preds;
  int covered = 0;
  for (const Occ& o : all) {
    if (o.begin < covered) continue;
    preds.push_back(NerPrediction{*o.surface, o.begin, o.end, EntityCategory::of(*o.label)});
    covered = o.end;
  }
  return preds;
}

DictionaryMockBackend::DictionaryMockBackend(std::string name,
                                             std::map<std::string, std::string> lexicon,
                                             std::vector<FaultRule> faults)
    : name_(std::move(name)), lexicon_(std::move(lexicon)), faults_(std::move(faults)) {
  std::set<std::string> labels;
  for (const auto& [surface, label] : lexicon_) {
    if (surface.empty()) throw ValidationError("empty lexicon surface");
    labels.insert(label);
  }
  for (const FaultRule& r : faults_)
    if (!r.effect.label.empty()) labels.insert(r.effect.label);
  for (const std::string& l : labels) categories_.push_back(EntityCategory::of(l));
}

NerOutput DictionaryMockBackend::invoke(const std::string& text) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++invocations_;
  }
  std::vector<NerPrediction> preds = lexicon_scan(text, lexicon_);

  for (std::size_t i = 0; i < faults_.size(); ++i) {
    const FaultRule& rule = faults_[i];
    if (!rule.trigger.matches(text)) continue;
    bool fired = false;
    const FaultEffect& e = rule.effect;
    switch (e.kind) {
      case FaultEffect::Kind::DropEntity: {
        auto before = preds.size();
        std::erase_if(preds, [&](const NerPrediction& p) { return p.surface == e.surface; });
        fired = preds.size() != before;
        break;
      }
      case FaultEffect::Kind::AddEntity: {
        for (auto [b, end] : word_occurrences(text, e.surface)) {
          bool overlaps = false;
          for (const NerPrediction& p : preds)
            if (b < p.end && p.begin < end) overlaps = true;
          if (overlaps) continue;
          preds.push_back(NerPrediction{e.surface, b, end, EntityCategory::of(e.label)});
          fired = true;
          break;
        }
        break;
      }
      case FaultEffect::Kind::Relabel: {
        for (NerPrediction& p : preds) {
          if (p.surface == e.surface) {
            p.category = EntityCategory::of(e.label);
            fired = true;
          }
        }
        break;
      }
      case FaultEffect::Kind::SplitEntity: {
        auto it = std::find_if(preds.begin(), preds.end(), [&](const NerPrediction& p) {
          return p.surface == e.surface;
        });
        if (it == preds.end()) break;
        std::vector<NerPrediction> pieces;
        int cursor = it->begin;
        bool ok = !e.parts.empty();
        for (const std::string& part : e.parts) {
          bool found = false;
          for (auto [b, end] : word_occurrences(text, part)) {
            if (b >= cursor && end <= it->end) {
              pieces.push_back(NerPrediction{part, b, end, it->category});
              cursor = end;
              found = true;
              break;
            }
          }
          if (!found) {
            ok = false;
            break;
          }
        }
        if (ok) {
          preds.erase(it);
          preds.insert(preds.end(), pieces.begin(), pieces.end());
          fired = true;
        }
        break;
      }
    }
    if (fired) {
      std::lock_guard<std::mutex> lock(mu_);
      fired_.push_back(FaultFiring{i, text});
    }
  }

  std::sort(preds.begin(), preds.end(), [](const NerPrediction& a, const NerPrediction& b) {
    return a.begin < b.begin;
  });
  return NerOutput{"", std::move(preds)};
}

int DictionaryMockBackend::invocation_count() const {
  std::lock_guard<std::mutex> lock(mu_);
  return invocations_;
}

std::vector<FaultFiring> DictionaryMockBackend::fired_log() const {
  std::lock_guard<std::mutex> lock(mu_);
  return fired_;
}

std::shared_ptr<DictionaryMockBackend> dictionary_mock_backend(
    std::map<std::string, std::string> lexicon, std::vector<FaultRule> faults, std::string name) {
  return std::make_shared<DictionaryMockBackend>(std::move(name), std::move(lexicon),
                                                 std::move(faults));
}

namespace {

FaultTrigger::Kind trigger_kind_from(const std::string& s) {
  if (s == "substring") return FaultTrigger::Kind::Substring;
  if (s == "suffix") return FaultTrigger::Kind::Suffix;
  if (s == "regex") return FaultTrigger::Kind::Regex;
  throw ValidationError("unknown trigger kind '" + s + "'");
}

FaultEffect::Kind effect_kind_from(const std::string& s) {
  if (s == "drop") return FaultEffect::Kind::DropEntity;
  if (s == "add") return FaultEffect::Kind::AddEntity;
  if (s == "relabel") return FaultEffect::Kind::Relabel;
  if (s == "split") return FaultEffect::Kind::SplitEntity;
  throw ValidationError("unknown effect kind '" + s + "'");
}

}  // namespace

std::shared_ptr<DictionaryMockBackend> load_mock_backend(const std::filesystem::path& path,
                                                         std::string name) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mock backend file: " + path.string());
  nlohmann::json j = nlohmann::json::parse(in);
  std::map<std::string, std::string> lexicon;
  for (const auto& [surface, label] : j.at("lexicon").items())
    lexicon[surface] = label.get<std::string>();
  std::vector<FaultRule> faults;
  if (j.contains("faults")) {
    for (const auto& f : j["faults"]) {
      FaultRule rule;
      rule.trigger.kind = trigger_kind_from(f.at("trigger").at("kind").get<std::string>());
      rule.trigger.pattern = f.at("trigger").at("pattern").get<std::string>();
      const auto& eff = f.at("effect");
      rule.effect.kind = effect_kind_from(eff.at("kind").get<std::string>());
      rule.effect.surface = eff.at("surface").get<std::string>();
      if (eff.contains("label")) rule.effect.label = eff["label"].get<std::string>();
      if (eff.contains("parts")) rule.effect.parts = eff["parts"].get<std::vector<std::string>>();
      faults.push_back(std::move(rule));
    }
  }
  return dictionary_mock_backend(std::move(lexicon), std::move(faults), std::move(name));
}

// ---------------------------------------------------------------------------
// Remote adapter

FixtureTransport::FixtureTransport(std::vector<HttpResponse> responses)
    : responses_(std::move(responses)) {}

HttpResponse FixtureTransport::from_file(const std::filesystem::path& body_file, int status) {
  std::ifstream in(body_file, std::ios::binary);
  if (!in) throw Error("cannot open fixture file: " + body_file.string());
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return HttpResponse{status, std::move(body)};
}

HttpResponse FixtureTransport::post(const std::string& /*url*/,
                                    const std::vector<std::pair<std::string, std::string>>&,
                                    const std::string& body) const {
  std::lock_guard<std::mutex> lock(mu_);
  requests_.push_back(body);
  if (next_ >= responses_.size())
    throw BackendUnavailableError("fixture transport exhausted after " +
                                  std::to_string(responses_.size()) + " responses");
  return responses_[next_++];
}

std::vector<std::string> FixtureTransport::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_;
}

namespace {

std::string env_prefix(const std::string& backend_name) {
  std::string prefix;
  for (char c : backend_name)
    prefix += std::isalnum(static_cast<unsigned char>(c))
                  ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
                  : '_';
  return prefix;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

class RealTransport : public HttpTransport {
 public:
  HttpResponse post(const std::string& url,
                    const std::vector<std::pair<std::string, std::string>>& headers,
                    const std::string& body) const override {
    const char* no_net = std::getenv("NO_NETWORK");
    if (no_net && std::string(no_net) == "1")
      throw BackendUnavailableError("NO_NETWORK=1 forbids remote calls");
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw SchemaError("endpoint URL lacks scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    httplib::Headers hdrs;
    std::string content_type = "application/json";
    for (const auto& [k, v] : headers) {
      if (upper(k) == "CONTENT-TYPE")
        content_type = v;
      else
        hdrs.emplace(k, v);
    }
    httplib::Result res = client.Post(path, hdrs, body, content_type);
    if (!res) throw BackendUnavailableError("HTTP request failed: " + httplib::to_string(res.error()));
    return HttpResponse{res->status, res->body};
  }
};

std::vector<NerPrediction> parse_provider_body(ProviderSchema schema, const std::string& body) {
  nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded()) throw SchemaError("unparseable provider response");
  std::vector<NerPrediction> preds;
  try {
    if (schema == ProviderSchema::AzureLike) {
      const nlohmann::json* entities = nullptr;
      if (j.contains("entities")) {
        entities = &j["entities"];
      } else if (j.contains("results")) {
        entities = &j["results"].at("documents").at(0).at("entities");
      } else {
        throw SchemaError("no entities in provider response");
      }
      for (const auto& e : *entities) {
        int offset = e.at("offset").get<int>();
        int length = e.at("length").get<int>();
        preds.push_back(NerPrediction{e.at("text").get<std::string>(), offset, offset + length,
                                      EntityCategory::of(upper(e.at("category").get<std::string>()))});
      }
    } else {
      for (const auto& e : j.at("Entities")) {
        preds.push_back(NerPrediction{e.at("Text").get<std::string>(),
                                      e.at("BeginOffset").get<int>(), e.at("EndOffset").get<int>(),
                                      EntityCategory::of(upper(e.at("Type").get<std::string>()))});
      }
    }
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("provider response schema error: ") + ex.what());
  }
  return preds;
}

}  // namespace

RemoteBackend::RemoteBackend(EndpointConfig config)
    : config_(std::move(config)), version_("v1") {
  const std::string prefix = env_prefix(config_.backend_name);
  const char* key = std::getenv((prefix + "_API_KEY").c_str());
  const char* endpoint = std::getenv((prefix + "_ENDPOINT").c_str());
  if (config_.transport == nullptr) {
    if (key == nullptr || *key == '\0')
      throw AuthError("missing environment variable " + prefix + "_API_KEY");
    if (endpoint == nullptr || *endpoint == '\0')
      throw AuthError("missing environment variable " + prefix + "_ENDPOINT");
  }
  api_key_ = key != nullptr ? key : "";
  endpoint_ = endpoint != nullptr ? endpoint : "fixture://local/analyze";
  if (config_.categories.empty())
    throw ValidationError("remote backend must declare its categories");
}

NerOutput RemoteBackend::invoke(const std::string& text) const {
  nlohmann::ordered_json body;
  std::vector<std::pair<std::string, std::string>> headers;
  if (config_.schema == ProviderSchema::AzureLike) {
    body = {{"kind", "EntityRecognition"},
            {"analysisInput",
             {{"documents", nlohmann::json::array({{{"id", "1"}, {"language", "en"}, {"text", text}}})}}}};
    headers = {{"Ocp-Apim-Subscription-Key", api_key_}, {"Content-Type", "application/json"}};
  } else {
    body = {{"Text", text}, {"LanguageCode", "en"}};
    headers = {{"X-Amz-Target", "Comprehend_20171127.DetectEntities"},
               {"Authorization", api_key_},
               {"Content-Type", "application/x-amz-json-1.1"}};
  }

  static const RealTransport kReal;
  const HttpTransport& transport = config_.transport ? *config_.transport : kReal;

  HttpResponse res;
  int attempts = config_.max_retries + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    res = transport.post(endpoint_, headers, body.dump());
    if (res.status == 429 || res.status >= 500) {
      if (attempt + 1 == attempts) break;
      {
        std::lock_guard<std::mutex> lock(mu_);
        ++retries_;
      }
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.retry_base_ms * (1 << attempt)));
      continue;
    }
    break;
  }
  if (res.status == 401 || res.status == 403)
    throw AuthError("provider rejected credentials (HTTP " + std::to_string(res.status) + ")");
  if (res.status == 429)
    throw RateLimitedError("still rate-limited after " + std::to_string(config_.max_retries) +
                           " retries");
  if (res.status < 200 || res.status >= 300)
    throw BackendUnavailableError("provider returned HTTP " + std::to_string(res.status));

  return NerOutput{"", parse_provider_body(config_.schema, res.body)};
}

int RemoteBackend::total_retries() const {
  std::lock_guard<std::mutex> lock(mu_);
  return retries_;
}

std::shared_ptr<NerBackend> remote_adapter(EndpointConfig config) {
  return std::make_shared<RemoteBackend>(std::move(config));
}

}  // namespace nercheck
