#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nercheck/backend.hpp"
#include "nercheck/eval.hpp"
#include "nercheck/json_io.hpp"
#include "nercheck/oracles.hpp"
#include "nercheck/pipeline.hpp"

namespace {

using namespace nercheck;

std::vector<EntityCategory> azure_categories() {
  std::vector<EntityCategory> cs;
  for (const char* l : {"PERSON", "PERSONTYPE", "ORGANIZATION", "LOCATION", "EVENT", "PRODUCT",
                        "SKILL", "ADDRESS", "PHONENUMBER", "EMAIL", "URL", "IP", "DATETIME",
                        "QUANTITY"})
    cs.push_back(EntityCategory::of(l));
  return cs;
}

std::vector<EntityCategory> aws_categories() {
  std::vector<EntityCategory> cs;
  for (const char* l : {"PERSON", "ORGANIZATION", "LOCATION", "COMMERCIAL_ITEM", "DATE", "EVENT",
                        "OTHER", "QUANTITY", "TITLE"})
    cs.push_back(EntityCategory::of(l));
  return cs;
}

// Backend spec: "mock:<file>", "azure:<name>" or "aws:<name>".
std::shared_ptr<NerBackend> make_backend(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "mock") {
    if (arg.empty()) throw Error("mock backend needs a file: mock:<path>");
    return load_mock_backend(arg);
  }
  if (kind == "azure" || kind == "aws") {
    EndpointConfig config;
    config.backend_name = arg.empty() ? kind : arg;
    config.schema = kind == "azure" ? ProviderSchema::AzureLike : ProviderSchema::AwsLike;
    config.categories = kind == "azure" ? azure_categories() : aws_categories();
    return remote_adapter(std::move(config));
  }
  throw Error("unknown backend spec '" + spec + "' (expected mock:<file>, azure:<name>, aws:<name>)");
}

// Oracle spec: "builtin" or "scripted:<file>".
OracleSuite make_oracles(const std::string& spec, std::uint64_t seed) {
  if (spec == "builtin" || spec.empty()) return builtin_oracle_suite(seed);
  if (spec.rfind("scripted:", 0) == 0)
    return scripted_oracle_suite(ScriptTable::load_jsonl(spec.substr(9)), seed);
  throw Error("unknown oracle spec '" + spec + "' (expected builtin or scripted:<file>)");
}

std::vector<MutationKind> parse_schemes(const std::string& arg) {
  std::vector<MutationKind> schemes;
  std::size_t start = 0;
  while (start <= arg.size()) {
    std::size_t comma = arg.find(',', start);
    std::string name = arg.substr(start, comma == std::string::npos ? comma : comma - start);
    if (!name.empty()) {
      auto kind = kind_from_name(name);
      if (!kind) throw Error("unknown scheme '" + name + "'");
      schemes.push_back(*kind);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (schemes.empty()) throw Error("no schemes selected");
  return schemes;
}

std::map<std::string, std::string> load_ground_truth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ground truth file: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  const nlohmann::json& lex = j.contains("lexicon") ? j["lexicon"] : j;
  std::map<std::string, std::string> lexicon;
  for (const auto& [surface, label] : lex.items()) lexicon[surface] = label.get<std::string>();
  return lexicon;
}

void report_warnings(const std::vector<SentenceLog>& warnings) {
  for (const SentenceLog& w : warnings)
    std::cerr << "warning [" << w.sentence_id << "] " << w.message << '\n';
}

int cmd_test(const std::string& corpus_path, const std::string& backend_spec,
             const std::string& out_path, const std::string& schemes_arg, std::uint64_t seed,
             const std::string& config_path, const std::string& oracles_spec,
             const std::string& cache_path, const std::string& audit_path,
             const std::string& manifest_path, int max_mutants, int jobs, bool serial) {
  std::vector<Sentence> corpus = io::load_corpus(corpus_path);
  std::shared_ptr<NerBackend> backend = make_backend(backend_spec);

  PipelineConfig config = PipelineConfig::for_category_count(backend->categories().size());
  if (!config_path.empty()) config = load_config_file(config_path, config);
  if (jobs > 0) config.parallelism = jobs;

  OracleSuite oracles = make_oracles(oracles_spec, seed);
  std::unique_ptr<ResponseCache> cache =
      cache_path.empty() ? std::make_unique<ResponseCache>()
                         : std::make_unique<ResponseCache>(cache_path);

  RunOptions options;
  options.schemes = parse_schemes(schemes_arg);
  options.seed = seed;
  options.max_mutants_per_sentence = max_mutants;
  options.mode = serial ? ExecutionMode::Serial : ExecutionMode::Parallel;

  TestStageResult result =
      run_test_stage(corpus, *backend, cache.get(), oracles, config, options);
  io::save_issues(out_path, result.issues);
  if (!audit_path.empty())
    io::write_text_file(audit_path, io::audit_to_jsonl(result.kept, result.rejected));
  save_manifest(manifest_path.empty() ? out_path + ".manifest.json" : manifest_path,
                result.manifest);
  report_warnings(result.warnings);

  const StageCheckpoints& cp = result.manifest.checkpoints;
  std::cout << "sentences=" << cp.sentences << " generated=" << cp.generated
            << " kept=" << cp.kept << " rejected=" << cp.rejected << " tested=" << cp.tested
            << " issues=" << cp.issues << '\n';
  return 0;
}

int cmd_repair(const std::string& issues_path, const std::string& backend_spec,
               const std::string& out_path, std::uint64_t seed, const std::string& config_path,
               const std::string& oracles_spec, const std::string& cache_path, int jobs,
               bool serial) {
  std::vector<SuspiciousIssue> issues = io::load_issues(issues_path);
  std::shared_ptr<NerBackend> backend = make_backend(backend_spec);

  PipelineConfig config = PipelineConfig::for_category_count(backend->categories().size());
  if (!config_path.empty()) config = load_config_file(config_path, config);
  if (jobs > 0) config.parallelism = jobs;

  OracleSuite oracles = make_oracles(oracles_spec, seed);
  std::unique_ptr<ResponseCache> cache =
      cache_path.empty() ? std::make_unique<ResponseCache>()
                         : std::make_unique<ResponseCache>(cache_path);

  RunOptions options;
  options.seed = seed;
  options.mode = serial ? ExecutionMode::Serial : ExecutionMode::Parallel;

  RepairStageResult result =
      run_repair_stage(issues, *backend, cache.get(), oracles, config, options);
  io::save_repairs(out_path, result.repairs);
  report_warnings(result.warnings);

  RunManifest manifest;
  manifest.backend_name = backend->name();
  manifest.backend_version = backend->version();
  {
    std::ifstream in(issues_path, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(bytes)));
    manifest.corpus_digest = buf;
  }
  manifest.seed = seed;
  manifest.config = config;
  manifest.checkpoints.issues = static_cast<long>(issues.size());
  manifest.checkpoints.repaired = static_cast<long>(result.repairs.size());
  manifest.run_id = manifest.corpus_digest;
  save_manifest(out_path + ".manifest.json", manifest);

  long attempted = 0;
  for (const IssueRepair& r : result.repairs)
    if (r.original_side.attempted || r.mutant_side.attempted) ++attempted;
  std::cout << "issues=" << issues.size() << " repaired_records=" << result.repairs.size()
            << " attempted=" << attempted << '\n';
  if (!issues.empty() && result.repairs.empty()) return 1;
  return 0;
}

int cmd_eval(const std::string& repairs_path, const std::string& verdicts_path,
             const std::string& ground_truth_path, const std::string& out_path) {
  std::vector<IssueRepair> repairs = io::load_repairs(repairs_path);
  std::string report;
  if (!verdicts_path.empty()) {
    report = metrics_report_from_verdicts(repairs, load_verdicts_csv(verdicts_path));
  } else if (!ground_truth_path.empty()) {
    report = metrics_report_from_ground_truth(repairs, load_ground_truth(ground_truth_path));
  } else {
    throw Error("eval needs --verdicts or --ground-truth");
  }
  io::write_text_file(out_path, report);
  std::cout << report;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metamorphic testing and black-box repair for NER systems"};
  app.require_subcommand(1);

  std::string corpus_path, backend_spec, out_path, config_path, cache_path, audit_path,
      manifest_path, issues_path, repairs_path, verdicts_path, ground_truth_path;
  std::string schemes_arg = "token,phrase,structural,shuffle";
  std::string oracles_spec = "builtin";
  std::uint64_t seed = 0;
  int max_mutants = 0;
  int jobs = 0;
  bool serial = false;

  CLI::App* test = app.add_subcommand("test", "Generate mutants, check MRs, write issues");
  test->add_option("--corpus", corpus_path, "Corpus JSONL or plain text")->required();
  test->add_option("--backend", backend_spec, "mock:<file> | azure:<name> | aws:<name>")
      ->required();
  test->add_option("--out", out_path, "Issues JSONL output")->required();
  test->add_option("--schemes", schemes_arg, "Comma list: token,phrase,structural,shuffle");
  test->add_option("--seed", seed, "Root seed");
  test->add_option("--config", config_path, "Config file (key = value)");
  test->add_option("--oracles", oracles_spec, "builtin | scripted:<file>");
  test->add_option("--cache", cache_path, "Persistent response cache (JSONL)");
  test->add_option("--audit", audit_path, "Filter audit log (JSONL)");
  test->add_option("--manifest", manifest_path, "Run manifest path");
  test->add_option("--max-mutants-per-sentence", max_mutants, "0 = unlimited");
  test->add_option("--jobs", jobs, "Worker threads (overrides config parallelism)");
  test->add_flag("--serial", serial, "Force the serial reference path");

  CLI::App* repair = app.add_subcommand("repair", "Relabel suspicious entities in issues");
  repair->add_option("--issues", issues_path, "Issues JSONL from `test`")->required();
  repair->add_option("--backend", backend_spec, "mock:<file> | azure:<name> | aws:<name>")
      ->required();
  repair->add_option("--out", out_path, "Repairs JSONL output")->required();
  repair->add_option("--seed", seed, "Root seed");
  repair->add_option("--config", config_path, "Config file (key = value)");
  repair->add_option("--oracles", oracles_spec, "builtin | scripted:<file>");
  repair->add_option("--cache", cache_path, "Persistent response cache (JSONL)");
  repair->add_option("--jobs", jobs, "Worker threads (overrides config parallelism)");
  repair->add_flag("--serial", serial, "Force the serial reference path");

  CLI::App* eval = app.add_subcommand("eval", "Compute metrics from repairs");
  eval->add_option("--repairs", repairs_path, "Repairs JSONL from `repair`")->required();
  eval->add_option("--verdicts", verdicts_path, "Human verdict CSV");
  eval->add_option("--ground-truth", ground_truth_path, "Lexicon JSON (mock file or flat map)");
  eval->add_option("--out", out_path, "Metrics JSON output")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (test->parsed())
      return cmd_test(corpus_path, backend_spec, out_path, schemes_arg, seed, config_path,
                      oracles_spec, cache_path, audit_path, manifest_path, max_mutants, jobs,
                      serial);
    if (repair->parsed())
      return cmd_repair(issues_path, backend_spec, out_path, seed, config_path, oracles_spec,
                        cache_path, jobs, serial);
    if (eval->parsed())
      return cmd_eval(repairs_path, verdicts_path, ground_truth_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
