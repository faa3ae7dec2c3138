#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "refdet/diffing.hpp"
#include "refdet/evaluate.hpp"
#include "refdet/generate.hpp"
#include "refdet/llm.hpp"
#include "refdet/persistence.hpp"

namespace refdet::pipeline {

struct GenerateOptions {
  gen::GeneratorConfig config;  // seed lives here
  int per_kind = 100;
  std::vector<RefactoringKind> kinds;  // empty: every generated kind
  std::filesystem::path out = "out/corpus";
};

struct GenerateOutcome {
  gen::Corpus corpus;
  std::string hash;
  bool exhausted = false;
};

/// Builds and saves a corpus, then prints per-kind attrition and the corpus
/// hash to `log`. A partial corpus is saved even when a kind runs out of
/// attempts; `exhausted` reports that.
GenerateOutcome run_generate(const GenerateOptions& options, std::ostream& log);

enum class DetectorKind { Structural, Llm, MockEcho };

std::optional<DetectorKind> detector_from_string(std::string_view name);

struct DetectOptions {
  std::filesystem::path corpus;
  DetectorKind detector = DetectorKind::Structural;
  std::optional<std::filesystem::path> backend_config;  // required for Llm
  llm::PromptKind prompt = llm::PromptKind::SmallProgramPair;
  std::filesystem::path out = "out/results.json";
  double max_error_rate = 0.1;
  bool verbose = false;
};

struct DetectOutcome {
  store::ResultsFile results;
  int errors = 0;
  bool within_threshold = true;
};

/// Structural detection of every case, on up to `workers` threads
/// (hardware concurrency when 0). Records are sorted by case id.
store::ResultsFile detect_structural(const gen::Corpus& corpus, int workers = 0);

/// One prompt per case through `backend`, at most backend.parallelism()
/// requests at a time. Backend failures become empty predictions with the
/// error recorded.
store::ResultsFile detect_with_backend(const gen::Corpus& corpus, llm::Backend& backend,
                                       llm::PromptKind prompt, std::ostream* progress = nullptr);

/// Prompt text for one case.
std::string case_prompt(const gen::TransformationCase& c, llm::PromptKind prompt);

/// Loads the corpus, runs the detector and writes the results file.
/// Throws llm::AuthError before any request when the key is missing.
DetectOutcome run_detect(const DetectOptions& options, std::ostream& log);

struct EvaluateOptions {
  std::filesystem::path results;
  std::filesystem::path corpus;
  std::vector<eval::Format> formats{eval::Format::Markdown, eval::Format::Csv,
                                    eval::Format::Json};
  std::filesystem::path out = "out";
  eval::ScoreOptions scoring;
};

/// Checks that the results cover exactly the corpus cases with matching
/// ground truth (store::IntegrityError otherwise), scores them, writes
/// report.<ext> files and prints the markdown report to `out`.
eval::EvaluationReport run_evaluate(const EvaluateOptions& options, std::ostream& out);

struct DiffOutcome {
  diff::UnifiedDiff diff;
  std::string text;
  int loc = 0;
  diff::DiffSizeBucket bucket = diff::DiffSizeBucket::B0_39;
};

/// Files of a directory (non-recursive) or a single file, keyed by file
/// name, with CRLF normalized to LF. Throws store::IoError.
diff::FileSet read_file_set(const std::filesystem::path& path);

DiffOutcome run_diff(const std::filesystem::path& before, const std::filesystem::path& after);

}  // namespace refdet::pipeline
