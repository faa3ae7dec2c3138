#include <algorithm>
#include <set>

#include "json.hpp"
#include "refdet/llm.hpp"
#include "refdet/syntax.hpp"

namespace refdet::llm {

std::string_view prompt_slug(PromptKind kind) {
  return kind == PromptKind::SmallProgramPair ? "pair" : "diff";
}

std::optional<PromptKind> prompt_from_slug(std::string_view slug) {
  if (slug == "pair") return PromptKind::SmallProgramPair;
  if (slug == "diff") return PromptKind::CommitDiff;
  return std::nullopt;
}

EmptyDiff::EmptyDiff() : std::invalid_argument("diff text is empty") {}

namespace {

constexpr std::string_view kOpening =
    "You are an expert coding assistant specialized in software refactoring, with many "
    "years of experience analyzing code transformations.\n\n";

constexpr std::string_view kTask =
    "Your task is to identify which refactoring type(s) have been applied in transforming "
    "the original program into the new version. Use only the following list of predefined "
    "refactorings:\n";

constexpr std::string_view kInstructions =
    "\n\n**Instructions:**\n"
    "1. Begin your response with a bullet-point list of the refactoring type(s) applied.\n"
    "2. Then, briefly justify each identified refactoring with reference to the specific "
    "code changes.\n"
    "3. Only include refactorings from the list above.\n"
    "4. Be concise but precise in your explanations.\n"
    "Do not generate explanations unrelated to the given transformation.";

std::string_view trim_newlines(std::string_view s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string build_small_prompt(std::string_view original, std::string_view refactored,
                               std::string_view definitions) {
  if (original.empty() || refactored.empty()) {
    throw std::invalid_argument("both program versions must be non-empty");
  }
  std::string out(kOpening);
  out += "You will be given two versions of a program:\n\n**Original Version:**\n";
  out += trim_newlines(original);
  out += "\n\n**Transformed Version:**\n";
  out += trim_newlines(refactored);
  out += "\n\n";
  out += kTask;
  out += trim_newlines(definitions);
  out += kInstructions;
  return out;
}

std::string build_diff_prompt(std::string_view diff_text, std::string_view definitions) {
  if (diff_text.empty()) throw EmptyDiff();
  std::string out(kOpening);
  out += "You will be given the diffs of a commit:\n\n**Diffs:**\n";
  out += trim_newlines(diff_text);
  out += "\n\n";
  out += kTask;
  out += trim_newlines(definitions);
  out += kInstructions;
  return out;
}

std::string program_text(const syntax::Program& program) {
  std::string out;
  for (std::size_t i = 0; i < program.size(); ++i) {
    if (i > 0) out += '\n';
    out += "// " + syntax::file_name(program[i]) + "\n" + syntax::print(program[i]);
  }
  return out;
}

void BackendConfig::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument("backend config: " + what); };
  if (endpoint_url.empty()) bad("endpoint_url is required");
  if (endpoint_url.rfind("http://", 0) != 0 && endpoint_url.rfind("https://", 0) != 0) {
    bad("endpoint_url must start with http:// or https://");
  }
  if (model_name.empty()) bad("model_name is required");
  if (!(temperature >= 0.0 && temperature <= 2.0)) bad("temperature must be in [0, 2]");
  if (max_output_tokens <= 0) bad("max_output_tokens must be positive");
  if (request_timeout_s <= 0) bad("request_timeout_s must be positive");
  if (max_retries < 0) bad("max_retries must be non-negative");
  if (parallelism <= 0) bad("parallelism must be positive");
  if (backoff_base_ms < 0) bad("backoff_base_ms must be non-negative");
  if (response_path.empty()) bad("response_path is required");
}

BackendConfig backend_config_from_json(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("backend config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("backend config must be a JSON object");
  BackendConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "endpoint_url") c.endpoint_url = value.get<std::string>();
      else if (key == "model_name") c.model_name = value.get<std::string>();
      else if (key == "temperature") c.temperature = value.get<double>();
      else if (key == "max_output_tokens") c.max_output_tokens = value.get<int>();
      else if (key == "api_key_env") c.api_key_env = value.get<std::string>();
      else if (key == "request_timeout_s") c.request_timeout_s = value.get<int>();
      else if (key == "max_retries") c.max_retries = value.get<int>();
      else if (key == "parallelism") c.parallelism = value.get<int>();
      else if (key == "backoff_base_ms") c.backoff_base_ms = value.get<int>();
      else if (key == "response_path") c.response_path = value.get<std::string>();
      else if (key == "api_key" || key == "key") {
        throw std::invalid_argument(
            "backend config must not contain a key; name its environment variable in api_key_env");
      } else {
        throw std::invalid_argument("backend config: unknown field '" + key + "'");
      }
    } catch (const nlohmann::json::exception&) {
      throw std::invalid_argument("backend config: field '" + key + "' has the wrong type");
    }
  }
  c.validate();
  return c;
}

std::string to_json(const BackendConfig& c) {
  nlohmann::json j{{"endpoint_url", c.endpoint_url},
                   {"model_name", c.model_name},
                   {"temperature", c.temperature},
                   {"max_output_tokens", c.max_output_tokens},
                   {"api_key_env", c.api_key_env},
                   {"request_timeout_s", c.request_timeout_s},
                   {"max_retries", c.max_retries},
                   {"parallelism", c.parallelism},
                   {"backoff_base_ms", c.backoff_base_ms},
                   {"response_path", c.response_path}};
  return j.dump(2);
}

namespace {

constexpr std::string_view kBulletDot = "\xE2\x80\xA2";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::size_t indentation(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && (line[n] == ' ' || line[n] == '\t')) ++n;
  return n;
}

// Content after a list marker, or nullopt when `line` (already unindented)
// does not start with one.
std::optional<std::string_view> bullet_content(std::string_view line) {
  auto after = [&](std::size_t marker) -> std::optional<std::string_view> {
    if (line.size() == marker) return line.substr(marker);
    if (line[marker] == ' ' || line[marker] == '\t') return line.substr(marker + 1);
    return std::nullopt;
  };
  if (line.empty()) return std::nullopt;
  if (line[0] == '-' || line[0] == '*' || line[0] == '+') return after(1);
  if (line.substr(0, kBulletDot.size()) == kBulletDot) return after(kBulletDot.size());
  std::size_t digits = 0;
  while (digits < line.size() && digits < 3 && line[digits] >= '0' && line[digits] <= '9') {
    ++digits;
  }
  if (digits > 0 && digits < line.size() && (line[digits] == '.' || line[digits] == ')')) {
    return after(digits + 1);
  }
  return std::nullopt;
}

void erase_all(std::string& s, std::string_view token) {
  for (std::size_t pos = s.find(token); pos != std::string::npos; pos = s.find(token, pos)) {
    s.erase(pos, token.size());
  }
}

std::string strip_edges(std::string s) {
  auto edge = [](char c) {
    return c == '*' || c == '_' || c == ' ' || c == '\t' || c == '.' || c == ',' || c == ';';
  };
  while (!s.empty() && edge(s.back())) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && edge(s[start])) ++start;
  return s.substr(start);
}

std::string clean_label(std::string_view content) {
  std::string s(content);
  erase_all(s, "**");
  erase_all(s, "__");
  erase_all(s, "`");
  s = strip_edges(std::move(s));
  std::size_t cut = s.size();
  for (std::string_view sep : {":", "(", " - ", " \xE2\x80\x93 ", " \xE2\x80\x94 "}) {
    cut = std::min(cut, s.find(sep));
  }
  return strip_edges(s.substr(0, cut));
}

}  // namespace

ModelAnswer parse_response(std::string_view raw) {
  ModelAnswer answer;
  answer.raw_text = std::string(raw);
  std::set<RefactoringKind> seen;

  std::vector<std::string_view> lines;
  for (std::size_t pos = 0; pos <= raw.size();) {
    std::size_t nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) nl = raw.size();
    lines.push_back(raw.substr(pos, nl - pos));
    pos = nl + 1;
  }

  std::optional<std::size_t> top;  // indentation of the first bullet
  bool blank_before = false;
  for (std::string_view line : lines) {
    if (trim(line).empty()) {
      blank_before = true;
      continue;
    }
    const std::size_t indent = indentation(line);
    const auto content = bullet_content(line.substr(indent));
    if (!top) {
      if (!content) continue;  // preamble
      top = indent;
    }
    if (!content || indent > *top) {
      if (indent <= *top && !content && blank_before) break;
      blank_before = false;
      continue;
    }
    blank_before = false;
    const std::string label = clean_label(*content);
    try {
      const LabelMatch match = match_label(label);
      if (const auto* r = std::get_if<Recognized>(&match)) {
        if (seen.insert(r->kind).second) answer.recognized.push_back(r->kind);
      } else {
        answer.unrecognized_labels.push_back(std::get<Unrecognized>(match).raw_text);
      }
    } catch (const InvalidLabel&) {
      // Nothing matchable: keep the bullet verbatim so it still counts.
      const std::string_view verbatim = trim(*content);
      answer.unrecognized_labels.emplace_back(verbatim.empty() ? trim(line) : verbatim);
    }
  }
  std::sort(answer.recognized.begin(), answer.recognized.end());
  return answer;
}

}  // namespace refdet::llm
