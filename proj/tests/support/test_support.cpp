#include "test_support.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "refdet/syntax.hpp"

namespace refdet::testing {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

// "a/Foo.mj" -> "Foo.mj"; "/dev/null" -> "".
std::string strip_prefix(const std::string& header) {
  const std::string path = header.substr(4);
  if (path == "/dev/null") return "";
  return path.substr(2);
}

struct Range {
  int start = 0;
  int count = 1;
};

Range parse_range(const std::string& token) {
  Range r;
  const auto comma = token.find(',');
  r.start = std::stoi(token.substr(1, comma == std::string::npos ? std::string::npos : comma - 1));
  if (comma != std::string::npos) r.count = std::stoi(token.substr(comma + 1));
  return r;
}

}  // namespace

std::map<std::string, std::string> apply_patch(std::map<std::string, std::string> files,
                                               std::string_view patch) {
  const auto lines = split_lines(patch);
  std::size_t i = 0;
  while (i < lines.size()) {
    if (lines[i].rfind("--- ", 0) != 0 || i + 1 >= lines.size() ||
        lines[i + 1].rfind("+++ ", 0) != 0) {
      throw std::runtime_error("expected file header at line " + std::to_string(i + 1));
    }
    const std::string old_path = strip_prefix(lines[i]);
    const std::string new_path = strip_prefix(lines[i + 1]);
    i += 2;

    std::vector<std::string> source;
    bool source_has_final_newline = true;
    if (!old_path.empty()) {
      const auto it = files.find(old_path);
      if (it == files.end()) throw std::runtime_error("patch touches missing file " + old_path);
      source = split_lines(it->second);
      source_has_final_newline = it->second.empty() || it->second.back() == '\n';
    }

    std::vector<std::string> result;
    bool hunk_tail_no_newline = false;
    std::size_t cursor = 0;  // next unread source line
    while (i < lines.size() && lines[i].rfind("@@ ", 0) == 0) {
      std::istringstream header(lines[i]);
      std::string at, before_tok, after_tok;
      header >> at >> before_tok >> after_tok;
      const Range before = parse_range(before_tok);
      const Range after = parse_range(after_tok);
      const std::size_t first = static_cast<std::size_t>(before.count == 0 ? before.start
                                                                           : before.start - 1);
      if (first < cursor || first > source.size()) {
        throw std::runtime_error("hunk out of order: " + lines[i]);
      }
      while (cursor < first) result.push_back(source[cursor++]);
      ++i;
      int old_left = before.count;
      int new_left = after.count;
      char last_tag = 0;
      while (i < lines.size()) {
        const std::string& line = lines[i];
        if (!line.empty() && line[0] == '\\') {
          if (last_tag == '+' || last_tag == ' ') hunk_tail_no_newline = true;
          ++i;
          continue;
        }
        if (old_left == 0 && new_left == 0) break;
        if (line.empty()) throw std::runtime_error("empty line inside hunk");
        const char tag = line[0];
        const std::string body = line.substr(1);
        if (tag == '+') {
          if (new_left-- == 0) throw std::runtime_error("hunk adds too many lines");
          result.push_back(body);
          hunk_tail_no_newline = false;
        } else if (tag == '-' || tag == ' ') {
          if (old_left-- == 0 || (tag == ' ' && new_left-- == 0)) {
            throw std::runtime_error("hunk longer than its header");
          }
          if (cursor >= source.size() || source[cursor] != body) {
            throw std::runtime_error("mismatch applying '" + line + "'");
          }
          ++cursor;
          if (tag == ' ') {
            result.push_back(body);
            hunk_tail_no_newline = false;
          }
        } else {
          throw std::runtime_error("unexpected line in hunk: " + line);
        }
        last_tag = tag;
        ++i;
      }
    }
    const bool copied_tail = cursor < source.size();
    while (cursor < source.size()) result.push_back(source[cursor++]);
    const bool result_has_final_newline =
        copied_tail ? source_has_final_newline : !hunk_tail_no_newline;

    if (new_path.empty()) {
      files.erase(old_path);
      continue;
    }
    std::string text;
    for (std::size_t k = 0; k < result.size(); ++k) {
      text += result[k];
      if (k + 1 < result.size() || result_has_final_newline) text += '\n';
    }
    if (!old_path.empty() && old_path != new_path) files.erase(old_path);
    files[new_path] = text;
  }
  return files;
}

TempDir::TempDir() {
  std::string templ = (fs::temp_directory_path() / "refdet-test-XXXXXX").string();
  if (mkdtemp(templ.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
  path_ = templ;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

syntax::Program program(const std::vector<std::string>& sources) {
  syntax::Program p;
  for (const auto& s : sources) p.push_back(syntax::parse(s));
  return p;
}

std::string slurp(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& file, std::string_view text) {
  fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  out << text;
}

fs::path golden_dir() { return REFDET_GOLDEN_DIR; }

}  // namespace refdet::testing
