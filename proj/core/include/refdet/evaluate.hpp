#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "refdet/catalog.hpp"
#include "refdet/diffing.hpp"

namespace refdet::eval {

struct CaseResult {
  std::string case_id;
  RefactoringKind ground_truth;
  std::vector<RefactoringKind> predicted;  // no duplicates
  std::vector<std::string> unrecognized;
  int diff_loc = 0;

  bool correct() const;
  friend bool operator==(const CaseResult&, const CaseResult&) = default;
};

class DuplicateCase : public std::invalid_argument {
 public:
  explicit DuplicateCase(const std::string& case_id);
};

class EmptyResults : public std::invalid_argument {
 public:
  EmptyResults();
};

struct Tally {
  int correct = 0;
  int total = 0;
  double rate() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
  friend bool operator==(const Tally&, const Tally&) = default;
};

// Strict precision counts unrecognized labels as wrong; lenient ignores them.
enum class PrecisionMode { Strict, Lenient };

std::string_view to_string(PrecisionMode mode);

struct CorpusInfo {
  std::uint64_t seed = 0;
  int per_kind = 0;
  int case_count = 0;
  std::string tool_version;
  std::string corpus_hash;
  friend bool operator==(const CorpusInfo&, const CorpusInfo&) = default;
};

struct ScoreOptions {
  PrecisionMode mode = PrecisionMode::Strict;
  diff::BucketBounds bounds;
};

inline constexpr std::string_view kLocRule =
    "diff size = added + removed lines of the unified diff (context lines excluded)";

struct EvaluationReport {
  std::string detector_id;
  CorpusInfo corpus;
  PrecisionMode mode = PrecisionMode::Strict;
  diff::BucketBounds bounds;

  int cases = 0;
  int correct_cases = 0;
  // Label counts over all cases.
  int labels_recognized = 0;
  int labels_unrecognized = 0;
  int labels_correct = 0;

  double recall = 0;
  double precision = 0;  // according to `mode`
  double precision_strict = 0;
  double precision_lenient = 0;

  std::map<RefactoringKind, Tally> per_kind;
  std::map<diff::DiffSizeBucket, Tally> per_bucket;  // every bucket present

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Aggregates pass@1 results. Throws EmptyResults or DuplicateCase.
EvaluationReport score(const std::vector<CaseResult>& results, const ScoreOptions& options = {});

enum class Format { Markdown, Csv, Json };

std::optional<Format> format_from_string(std::string_view name);
std::string_view extension(Format format);

std::string emit(const EvaluationReport& report, Format format);

/// Inverse of emit(report, Format::Json). Throws std::invalid_argument.
EvaluationReport report_from_json(std::string_view text);

}  // namespace refdet::eval
