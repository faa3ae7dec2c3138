#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "refdet/ast.hpp"

namespace refdet::diff {

// Path -> file text. Text is expected to use LF line endings.
using FileSet = std::map<std::string, std::string>;

enum class LineTag { Context, Added, Removed };

struct DiffLine {
  LineTag tag = LineTag::Context;
  // Line content without its terminator.
  std::string text;
  // Last line of a file that does not end in '\n'.
  bool missing_newline = false;
  friend bool operator==(const DiffLine&, const DiffLine&) = default;
};

// Ranges are 0-based line offsets into the before/after file.
struct Hunk {
  int before_start = 0;
  int before_count = 0;
  int after_start = 0;
  int after_count = 0;
  std::vector<DiffLine> lines;
  friend bool operator==(const Hunk&, const Hunk&) = default;
};

enum class FileChange { Modified, Added, Deleted };

struct FileDiff {
  std::string path;
  FileChange change = FileChange::Modified;
  std::vector<Hunk> hunks;
  friend bool operator==(const FileDiff&, const FileDiff&) = default;
};

struct UnifiedDiff {
  std::vector<FileDiff> files;  // sorted by path
  bool empty() const { return files.empty(); }
  friend bool operator==(const UnifiedDiff&, const UnifiedDiff&) = default;
};

inline constexpr int kDefaultContext = 3;

/// Line diff of two file sets. Files present on one side only become
/// whole-file additions or deletions; renames are not tracked.
UnifiedDiff compute_diff(const FileSet& before, const FileSet& after,
                         int context_lines = kDefaultContext);

/// Printed source of every unit, keyed by its file name.
FileSet program_files(const syntax::Program& program);

UnifiedDiff diff_programs(const syntax::Program& before, const syntax::Program& after,
                          int context_lines = kDefaultContext);

/// "--- a/<path>" / "+++ b/<path>" headers (/dev/null for added or deleted
/// files), "@@ -l,c +l,c @@" hunk headers and ' ', '-', '+' prefixed lines.
std::string render_diff(const UnifiedDiff& diff);

class DiffParseError : public std::runtime_error {
 public:
  DiffParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Inverse of render_diff.
UnifiedDiff parse_diff(std::string_view text);

/// Added plus removed lines; context lines are not counted.
int diff_loc(const UnifiedDiff& diff);

enum class DiffSizeBucket { B0_39, B40_79, B80_119, B120_159, B160_359, Overflow };

inline constexpr int kBucketCount = 6;

// Inclusive upper bound of each bounded bucket, ascending.
struct BucketBounds {
  std::array<int, 5> upper{39, 79, 119, 159, 359};
  /// Throws std::invalid_argument unless the bounds are non-negative and increasing.
  void validate() const;
  friend bool operator==(const BucketBounds&, const BucketBounds&) = default;
};

DiffSizeBucket bucket_of(int loc, const BucketBounds& bounds = {});
/// "0-39", "40-79", ..., ">359".
std::string bucket_label(DiffSizeBucket bucket, const BucketBounds& bounds = {});
std::array<DiffSizeBucket, kBucketCount> all_buckets();

}  // namespace refdet::diff
