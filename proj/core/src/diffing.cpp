#include "refdet/diffing.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "refdet/syntax.hpp"

namespace refdet::diff {

namespace {

struct Line {
  std::string_view text;
  bool missing_newline = false;
  friend bool operator==(const Line&, const Line&) = default;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back({text.substr(pos), true});
      break;
    }
    lines.push_back({text.substr(pos, nl - pos), false});
    pos = nl + 1;
  }
  return lines;
}

enum class Op { Equal, Delete, Insert };

struct Edit {
  Op op;
  int a = -1;  // index into before (Equal, Delete)
  int b = -1;  // index into after (Equal, Insert)
};

// Greedy O((N+M)D) shortest edit script with a saved frontier per step.
std::vector<Edit> shortest_edit(const std::vector<Line>& a, const std::vector<Line>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int max = n + m;
  const int offset = max + 1;
  std::vector<int> v(2 * max + 3, 0);
  std::vector<std::vector<int>> trace;
  bool done = (max == 0);
  for (int d = 0; d <= max && !done; ++d) {
    trace.push_back(v);
    for (int k = -d; k <= d; k += 2) {
      int x = (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1]))
                  ? v[offset + k + 1]
                  : v[offset + k - 1] + 1;
      int y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[offset + k] = x;
      if (x >= n && y >= m) {
        done = true;
        break;
      }
    }
  }

  std::vector<Edit> edits;
  int x = n;
  int y = m;
  for (int d = static_cast<int>(trace.size()) - 1; d >= 0; --d) {
    const auto& vd = trace[d];
    const int k = x - y;
    const int prev_k = (k == -d || (k != d && vd[offset + k - 1] < vd[offset + k + 1]))
                           ? k + 1
                           : k - 1;
    const int prev_x = vd[offset + prev_k];
    const int prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      --x;
      --y;
      edits.push_back({Op::Equal, x, y});
    }
    if (d > 0) {
      if (x == prev_x) {
        edits.push_back({Op::Insert, -1, y - 1});
      } else {
        edits.push_back({Op::Delete, x - 1, -1});
      }
    }
    x = prev_x;
    y = prev_y;
  }
  std::reverse(edits.begin(), edits.end());

  // Within a run of changes, removals come before additions.
  for (std::size_t i = 0; i < edits.size();) {
    if (edits[i].op == Op::Equal) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < edits.size() && edits[j].op != Op::Equal) ++j;
    std::stable_partition(edits.begin() + static_cast<std::ptrdiff_t>(i),
                          edits.begin() + static_cast<std::ptrdiff_t>(j),
                          [](const Edit& e) { return e.op == Op::Delete; });
    i = j;
  }
  return edits;
}

std::vector<Hunk> make_hunks(const std::vector<Line>& a, const std::vector<Line>& b,
                             const std::vector<Edit>& edits, int context) {
  const std::size_t size = edits.size();
  std::vector<int> a_pos(size + 1, 0);
  std::vector<int> b_pos(size + 1, 0);
  for (std::size_t i = 0; i < size; ++i) {
    a_pos[i + 1] = a_pos[i] + (edits[i].op != Op::Insert ? 1 : 0);
    b_pos[i + 1] = b_pos[i] + (edits[i].op != Op::Delete ? 1 : 0);
  }
  const std::size_t ctx = static_cast<std::size_t>(context);

  std::vector<Hunk> hunks;
  std::size_t i = 0;
  while (i < size) {
    if (edits[i].op == Op::Equal) {
      ++i;
      continue;
    }
    const std::size_t start = i >= ctx ? i - ctx : 0;
    std::size_t j = i;
    std::size_t stop = size;
    while (true) {
      while (j < size && edits[j].op != Op::Equal) ++j;
      std::size_t e = j;
      while (e < size && edits[e].op == Op::Equal) ++e;
      if (e == size || e - j > 2 * ctx) {
        stop = std::min(size, j + ctx);
        break;
      }
      j = e;
    }
    Hunk h;
    h.before_start = a_pos[start];
    h.after_start = b_pos[start];
    h.before_count = a_pos[stop] - a_pos[start];
    h.after_count = b_pos[stop] - b_pos[start];
    for (std::size_t k = start; k < stop; ++k) {
      const Edit& ed = edits[k];
      const Line& line = ed.op == Op::Insert ? b[ed.b] : a[ed.a];
      const LineTag tag = ed.op == Op::Equal    ? LineTag::Context
                          : ed.op == Op::Delete ? LineTag::Removed
                                                : LineTag::Added;
      h.lines.push_back({tag, std::string(line.text), line.missing_newline});
    }
    hunks.push_back(std::move(h));
    i = stop;
  }
  return hunks;
}

std::string range(int start, int count) {
  return std::to_string(count > 0 ? start + 1 : start) + "," + std::to_string(count);
}

}  // namespace

UnifiedDiff compute_diff(const FileSet& before, const FileSet& after, int context_lines) {
  if (context_lines < 0) context_lines = 0;
  std::set<std::string> paths;
  for (const auto& [p, _] : before) paths.insert(p);
  for (const auto& [p, _] : after) paths.insert(p);

  UnifiedDiff diff;
  for (const auto& path : paths) {
    const auto b_it = before.find(path);
    const auto a_it = after.find(path);
    FileDiff fd;
    fd.path = path;
    fd.change = b_it == before.end()  ? FileChange::Added
                : a_it == after.end() ? FileChange::Deleted
                                      : FileChange::Modified;
    const std::string_view old_text =
        b_it == before.end() ? std::string_view() : std::string_view(b_it->second);
    const std::string_view new_text =
        a_it == after.end() ? std::string_view() : std::string_view(a_it->second);
    if (fd.change == FileChange::Modified && old_text == new_text) continue;
    const auto a = split_lines(old_text);
    const auto b = split_lines(new_text);
    fd.hunks = make_hunks(a, b, shortest_edit(a, b), context_lines);
    diff.files.push_back(std::move(fd));
  }
  return diff;
}

FileSet program_files(const syntax::Program& program) {
  FileSet files;
  for (const auto& unit : program) files[syntax::file_name(unit)] = syntax::print(unit);
  return files;
}

UnifiedDiff diff_programs(const syntax::Program& before, const syntax::Program& after,
                          int context_lines) {
  return compute_diff(program_files(before), program_files(after), context_lines);
}

std::string render_diff(const UnifiedDiff& diff) {
  std::string out;
  for (const auto& fd : diff.files) {
    out += fd.change == FileChange::Added ? "--- /dev/null\n" : "--- a/" + fd.path + "\n";
    out += fd.change == FileChange::Deleted ? "+++ /dev/null\n" : "+++ b/" + fd.path + "\n";
    for (const auto& h : fd.hunks) {
      out += "@@ -" + range(h.before_start, h.before_count) + " +" +
             range(h.after_start, h.after_count) + " @@\n";
      for (const auto& line : h.lines) {
        out += line.tag == LineTag::Context ? ' ' : line.tag == LineTag::Added ? '+' : '-';
        out += line.text;
        out += '\n';
        if (line.missing_newline) out += "\\ No newline at end of file\n";
      }
    }
  }
  return out;
}

DiffParseError::DiffParseError(int line, const std::string& message)
    : std::runtime_error("diff line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

class DiffParser {
 public:
  explicit DiffParser(std::string_view text) {
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      lines_.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }

  UnifiedDiff run() {
    UnifiedDiff diff;
    while (at_ < lines_.size()) diff.files.push_back(file());
    return diff;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw DiffParseError(static_cast<int>(at_) + 1, message);
  }

  static bool starts_with(std::string_view s, std::string_view prefix) {
    return s.substr(0, prefix.size()) == prefix;
  }

  FileDiff file() {
    FileDiff fd;
    if (!starts_with(lines_[at_], "--- ")) fail("expected '--- ' file header");
    const std::string_view old_path = lines_[at_].substr(4);
    ++at_;
    if (at_ >= lines_.size() || !starts_with(lines_[at_], "+++ ")) {
      fail("expected '+++ ' file header");
    }
    const std::string_view new_path = lines_[at_].substr(4);
    ++at_;
    if (old_path == "/dev/null" && new_path == "/dev/null") fail("both sides are /dev/null");
    if (old_path == "/dev/null") {
      fd.change = FileChange::Added;
      fd.path = strip_prefix(new_path, "b/");
    } else if (new_path == "/dev/null") {
      fd.change = FileChange::Deleted;
      fd.path = strip_prefix(old_path, "a/");
    } else {
      fd.path = strip_prefix(new_path, "b/");
      if (strip_prefix(old_path, "a/") != fd.path) fail("file headers name different paths");
    }
    while (at_ < lines_.size() && starts_with(lines_[at_], "@@ ")) fd.hunks.push_back(hunk());
    return fd;
  }

  std::string strip_prefix(std::string_view path, std::string_view prefix) const {
    if (!starts_with(path, prefix)) fail("path lacks '" + std::string(prefix) + "' prefix");
    path.remove_prefix(prefix.size());
    if (path.empty()) fail("empty path");
    return std::string(path);
  }

  // Parses "l,c" or "l" into a 0-based start and a count.
  std::pair<int, int> parse_range(std::string_view s) const {
    int line = 0;
    int count = 1;
    const std::size_t comma = s.find(',');
    const std::string_view l = s.substr(0, comma);
    if (std::from_chars(l.data(), l.data() + l.size(), line).ec != std::errc{} || line < 0) {
      fail("bad hunk range");
    }
    if (comma != std::string_view::npos) {
      const std::string_view c = s.substr(comma + 1);
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), count);
      if (ec != std::errc{} || ptr != c.data() + c.size() || count < 0) fail("bad hunk count");
    }
    if (count > 0 && line == 0) fail("hunk range starts at line 0");
    return {count > 0 ? line - 1 : line, count};
  }

  Hunk hunk() {
    const std::string_view header = lines_[at_];
    const std::size_t end = header.find(" @@", 3);
    if (end == std::string_view::npos) fail("unterminated hunk header");
    const std::string_view ranges = header.substr(3, end - 3);
    const std::size_t space = ranges.find(' ');
    if (space == std::string_view::npos || ranges[0] != '-' || ranges[space + 1] != '+') {
      fail("malformed hunk header");
    }
    Hunk h;
    std::tie(h.before_start, h.before_count) = parse_range(ranges.substr(1, space - 1));
    std::tie(h.after_start, h.after_count) = parse_range(ranges.substr(space + 2));
    ++at_;
    int old_seen = 0;
    int new_seen = 0;
    while (at_ < lines_.size() && (old_seen < h.before_count || new_seen < h.after_count)) {
      const std::string_view line = lines_[at_];
      if (line.empty()) fail("empty line inside hunk");
      DiffLine dl;
      switch (line[0]) {
        case ' ': dl.tag = LineTag::Context; ++old_seen; ++new_seen; break;
        case '-': dl.tag = LineTag::Removed; ++old_seen; break;
        case '+': dl.tag = LineTag::Added; ++new_seen; break;
        default: fail("unexpected hunk line prefix");
      }
      dl.text = std::string(line.substr(1));
      ++at_;
      if (at_ < lines_.size() && starts_with(lines_[at_], "\\ ")) {
        dl.missing_newline = true;
        ++at_;
      }
      h.lines.push_back(std::move(dl));
    }
    if (old_seen != h.before_count || new_seen != h.after_count) {
      fail("hunk line counts disagree with its header");
    }
    return h;
  }

  std::vector<std::string_view> lines_;
  std::size_t at_ = 0;
};

}  // namespace

UnifiedDiff parse_diff(std::string_view text) { return DiffParser(text).run(); }

int diff_loc(const UnifiedDiff& diff) {
  int loc = 0;
  for (const auto& fd : diff.files) {
    for (const auto& h : fd.hunks) {
      for (const auto& line : h.lines) {
        if (line.tag != LineTag::Context) ++loc;
      }
    }
  }
  return loc;
}

void BucketBounds::validate() const {
  int previous = -1;
  for (int u : upper) {
    if (u <= previous) {
      throw std::invalid_argument("bucket bounds must be non-negative and increasing");
    }
    previous = u;
  }
}

DiffSizeBucket bucket_of(int loc, const BucketBounds& bounds) {
  for (std::size_t i = 0; i < bounds.upper.size(); ++i) {
    if (loc <= bounds.upper[i]) return static_cast<DiffSizeBucket>(i);
  }
  return DiffSizeBucket::Overflow;
}

std::string bucket_label(DiffSizeBucket bucket, const BucketBounds& bounds) {
  const auto i = static_cast<std::size_t>(bucket);
  if (bucket == DiffSizeBucket::Overflow) return ">" + std::to_string(bounds.upper.back());
  const int lower = i == 0 ? 0 : bounds.upper[i - 1] + 1;
  return std::to_string(lower) + "-" + std::to_string(bounds.upper[i]);
}

std::array<DiffSizeBucket, kBucketCount> all_buckets() {
  return {DiffSizeBucket::B0_39,    DiffSizeBucket::B40_79,   DiffSizeBucket::B80_119,
          DiffSizeBucket::B120_159, DiffSizeBucket::B160_359, DiffSizeBucket::Overflow};
}

}  // namespace refdet::diff
