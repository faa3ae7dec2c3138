// refdet: build refactoring corpora, run detectors over them and score the results.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "refdet/pipeline.hpp"
#include "refdet/version.hpp"

namespace {

using namespace refdet;

std::vector<RefactoringKind> parse_kinds(const std::vector<std::string>& slugs) {
  std::vector<RefactoringKind> kinds;
  for (const auto& slug : slugs) {
    const auto kind = kind_from_slug(slug);
    if (!kind || !is_generated_kind(*kind)) {
      std::string valid;
      for (auto k : generated_kinds()) valid += " " + std::string(kind_slug(k));
      throw CLI::ValidationError("--kinds", "unknown or non-generated kind '" + slug +
                                                "'; expected one of:" + valid);
    }
    kinds.push_back(*kind);
  }
  return kinds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate refactoring corpora, detect refactorings and score detectors."};
  app.set_version_flag("--version", std::string(refdet::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::optional<std::string> out;
  bool verbose = false;
  app.add_option("--seed", seed, "Seed for corpus generation");
  app.add_option("--out", out,
                 "Output location: corpus directory (generate, default out/corpus), results "
                 "file (detect, default out/results.json) or report directory (evaluate, "
                 "default out)");
  app.add_flag("-v,--verbose", verbose, "Print per-case progress");

  // generate
  auto* generate = app.add_subcommand("generate", "Build and save a corpus of refactoring cases");
  int per_kind = 100;
  std::vector<std::string> kind_slugs;
  gen::GeneratorConfig config;
  generate->add_option("--per-kind", per_kind, "Cases requested per refactoring kind")
      ->check(CLI::PositiveNumber);
  generate->add_option("--kinds", kind_slugs, "Comma-separated kinds (default: all ten)")
      ->delimiter(',');
  generate->add_option("--classes-min", config.classes_min, "Fewest classes per program");
  generate->add_option("--classes-max", config.classes_max, "Most classes per program");
  generate->add_option("--inheritance-probability", config.inheritance_probability,
                       "Chance that a class extends an earlier one");

  // detect
  auto* detect = app.add_subcommand("detect", "Run a detector over a saved corpus");
  std::string corpus_dir;
  std::string detector_name = "structural";
  std::string backend_config;
  std::string prompt_name = "pair";
  double max_error_rate = 0.1;
  detect->add_option("--corpus", corpus_dir, "Corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  detect->add_option("--detector", detector_name, "structural, llm or mock-echo")
      ->check(CLI::IsMember({"structural", "llm", "mock-echo"}));
  detect->add_option("--backend-config", backend_config, "Backend JSON file (llm detector)")
      ->check(CLI::ExistingFile);
  detect->add_option("--prompt", prompt_name, "pair or diff")
      ->check(CLI::IsMember({"pair", "diff"}));
  detect->add_option("--max-error-rate", max_error_rate,
                     "Fail when more than this fraction of cases errored")
      ->check(CLI::Range(0.0, 1.0));

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score a results file against its corpus");
  std::string results_file;
  std::string eval_corpus;
  std::string format_name = "all";
  bool lenient = false;
  evaluate->add_option("--results", results_file, "Results file written by detect")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--corpus", eval_corpus, "Corpus directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  evaluate->add_option("--format", format_name, "markdown, csv, json or all")
      ->check(CLI::IsMember({"markdown", "md", "csv", "json", "all"}));
  evaluate->add_flag("--lenient", lenient, "Leave unrecognized labels out of precision");

  // diff
  auto* diff_cmd = app.add_subcommand("diff", "Print the unified diff of two files or directories");
  std::string before_path;
  std::string after_path;
  diff_cmd->add_option("--before", before_path, "Original file or directory")
      ->required()
      ->check(CLI::ExistingPath);
  diff_cmd->add_option("--after", after_path, "Changed file or directory")
      ->required()
      ->check(CLI::ExistingPath);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      config.seed = seed;
      config.validate();
      pipeline::GenerateOptions options;
      options.config = config;
      options.per_kind = per_kind;
      options.kinds = parse_kinds(kind_slugs);
      options.out = out.value_or("out/corpus");
      const auto outcome = pipeline::run_generate(options, std::cout);
      return outcome.exhausted ? 3 : 0;
    }
    if (*detect) {
      pipeline::DetectOptions options;
      options.corpus = corpus_dir;
      options.detector = *pipeline::detector_from_string(detector_name);
      if (!backend_config.empty()) options.backend_config = backend_config;
      options.prompt = *llm::prompt_from_slug(prompt_name);
      options.out = out.value_or("out/results.json");
      options.max_error_rate = max_error_rate;
      options.verbose = verbose;
      const auto outcome = pipeline::run_detect(options, std::cout);
      return outcome.within_threshold ? 0 : 4;
    }
    if (*evaluate) {
      pipeline::EvaluateOptions options;
      options.results = results_file;
      options.corpus = eval_corpus;
      options.out = out.value_or("out");
      if (format_name != "all") options.formats = {*eval::format_from_string(format_name)};
      options.scoring.mode = lenient ? eval::PrecisionMode::Lenient : eval::PrecisionMode::Strict;
      pipeline::run_evaluate(options, std::cout);
      return 0;
    }
    if (*diff_cmd) {
      const auto outcome = pipeline::run_diff(before_path, after_path);
      std::cout << outcome.text;
      std::cout << "diff_loc: " << outcome.loc << " (added + removed lines)\n";
      std::cout << "bucket: " << diff::bucket_label(outcome.bucket) << "\n";
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const llm::AuthError& e) {
    std::cerr << "refdet: authentication error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "refdet: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
