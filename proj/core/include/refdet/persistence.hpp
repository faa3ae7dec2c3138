#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "refdet/evaluate.hpp"
#include "refdet/generate.hpp"
#include "refdet/llm.hpp"

namespace refdet::store {

inline constexpr int kSchemaVersion = 1;

class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& message);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

class SchemaMismatch : public std::runtime_error {
 public:
  explicit SchemaMismatch(const std::string& message);
};

class IntegrityError : public std::runtime_error {
 public:
  IntegrityError(std::string case_id, const std::string& reason);
  const std::string& case_id() const { return case_id_; }

 private:
  std::string case_id_;
};

struct ManifestEntry {
  std::string id;
  RefactoringKind kind;
  bool hard = false;
  std::string before_dir;  // relative to the corpus directory
  std::string after_dir;
  std::vector<std::string> before_files;  // unit order
  std::vector<std::string> after_files;
  int diff_loc = 0;
  gen::CaseSubject subject;
  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct CorpusManifest {
  int schema_version = kSchemaVersion;
  gen::Provenance provenance;
  std::vector<gen::KindStats> stats;
  std::vector<ManifestEntry> cases;
  friend bool operator==(const CorpusManifest&, const CorpusManifest&) = default;
};

/// Writes manifest.json and cases/<id>/{before,after}/*.mj. The case tree is
/// staged next to the target and renamed into place; the manifest is
/// written last, through a temporary file.
CorpusManifest save_corpus(const gen::Corpus& corpus, const std::filesystem::path& dir);

/// Reads a saved corpus, re-parsing, re-resolving and re-auditing every case.
/// Throws IoError, SchemaMismatch or IntegrityError.
gen::Corpus load_corpus(const std::filesystem::path& dir);

CorpusManifest load_manifest(const std::filesystem::path& dir);

/// 16 hex digits of FNV-1a over every case's files, in id order.
std::string corpus_hash(const gen::Corpus& corpus);

/// 16 hex digits of FNV-1a over every regular file below `dir` (relative
/// path and contents, sorted by path).
std::string directory_hash(const std::filesystem::path& dir);

struct ResultRecord {
  std::string case_id;
  RefactoringKind ground_truth;
  std::vector<RefactoringKind> predicted;
  std::vector<std::string> unrecognized;
  std::string raw_text;
  // Empty when the detector answered; otherwise why it did not.
  std::string error;
  double latency_ms = 0;
  int diff_loc = 0;
  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

struct ResultsFile {
  int schema_version = kSchemaVersion;
  std::string detector_id;
  // Present for LLM runs. Holds the key's variable name, never the key.
  std::optional<llm::BackendConfig> backend;
  std::optional<llm::PromptKind> prompt;
  std::string corpus_hash;
  std::vector<ResultRecord> records;  // sorted by case id
  friend bool operator==(const ResultsFile&, const ResultsFile&) = default;
};

void save_results(const ResultsFile& results, const std::filesystem::path& file);
ResultsFile load_results(const std::filesystem::path& file);

std::vector<eval::CaseResult> case_results(const ResultsFile& results);

/// Writes `text` to `file` via a temporary sibling and rename.
void write_file_atomically(const std::filesystem::path& file, const std::string& text);
std::string read_file(const std::filesystem::path& file);

}  // namespace refdet::store
