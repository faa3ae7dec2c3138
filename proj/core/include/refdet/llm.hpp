#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "refdet/ast.hpp"
#include "refdet/catalog.hpp"

namespace refdet::llm {

enum class PromptKind { SmallProgramPair, CommitDiff };

/// "pair" / "diff", as used on the command line and in results files.
std::string_view prompt_slug(PromptKind kind);
std::optional<PromptKind> prompt_from_slug(std::string_view slug);

class EmptyDiff : public std::invalid_argument {
 public:
  EmptyDiff();
};

/// Prompt asking for the refactorings between two program versions. Trailing
/// newlines of the substituted blocks are trimmed; the result has no final
/// newline. Throws std::invalid_argument when either program is empty.
std::string build_small_prompt(std::string_view original, std::string_view refactored,
                               std::string_view definitions);

/// Prompt asking for the refactorings in a commit diff. Throws EmptyDiff
/// when `diff_text` is empty.
std::string build_diff_prompt(std::string_view diff_text, std::string_view definitions);

/// Every unit as "// <file name>" followed by its printed source.
std::string program_text(const syntax::Program& program);

struct BackendConfig {
  std::string endpoint_url;
  std::string model_name;
  double temperature = 0.6;
  int max_output_tokens = 1024;
  // Name of the environment variable holding the API key; empty for
  // endpoints that need no key.
  std::string api_key_env;
  int request_timeout_s = 60;
  int max_retries = 3;
  int parallelism = 2;
  int backoff_base_ms = 1000;
  // Dotted path to the answer text in the response body.
  std::string response_path = "choices[0].message.content";

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;

  friend bool operator==(const BackendConfig&, const BackendConfig&) = default;
};

/// JSON object with the fields above. Unknown keys, and any attempt to
/// store a key itself, are rejected with std::invalid_argument.
BackendConfig backend_config_from_json(std::string_view json_text);
std::string to_json(const BackendConfig& config);

class BackendError : public std::runtime_error {
 public:
  BackendError(const std::string& message, bool retryable)
      : std::runtime_error(message), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class AuthError : public BackendError {
 public:
  explicit AuthError(const std::string& message) : BackendError(message, false) {}
};
class RateLimited : public BackendError {
 public:
  explicit RateLimited(const std::string& message) : BackendError(message, true) {}
};
class Timeout : public BackendError {
 public:
  explicit Timeout(const std::string& message) : BackendError(message, true) {}
};
class TransportError : public BackendError {
 public:
  explicit TransportError(const std::string& message) : BackendError(message, true) {}
};
class MalformedResponse : public BackendError {
 public:
  explicit MalformedResponse(const std::string& message) : BackendError(message, false) {}
};

struct ModelAnswer {
  std::string raw_text;
  std::vector<RefactoringKind> recognized;  // catalog order, no duplicates
  std::vector<std::string> unrecognized_labels;
  double latency_ms = 0;
  friend bool operator==(const ModelAnswer&, const ModelAnswer&) = default;
};

/// Reads the leading bullet list ('-', '*', '+', '•', "1." or "1)"
/// markers) of a free-text answer. Text before the first bullet is skipped;
/// reading stops at the first non-bullet paragraph after a blank line.
/// Nested bullets and continuation lines are ignored. Emphasis and any
/// justification after ':', '(' or a spaced dash are removed before the
/// label is matched against the catalog. Never throws.
ModelAnswer parse_response(std::string_view raw);

// What a backend may know about the case it is answering. Only the mock
// backend looks at the ground truth.
struct QueryContext {
  std::string case_id;
  std::optional<RefactoringKind> ground_truth;
};

class Backend {
 public:
  virtual ~Backend() = default;
  /// Returns the answer text verbatim. Throws BackendError subclasses.
  virtual std::string complete(const std::string& prompt, const QueryContext& context) = 0;
  /// Short identifier recorded in results files.
  virtual std::string id() const = 0;
  /// Upper bound on concurrent complete() calls the caller should issue.
  virtual int parallelism() const = 0;
};

// Blocks callers beyond `limit` concurrent holders.
class InFlightLimiter {
 public:
  explicit InFlightLimiter(int limit);
  void acquire();
  void release();

  class Slot {
   public:
    explicit Slot(InFlightLimiter& limiter) : limiter_(limiter) { limiter_.acquire(); }
    ~Slot() { limiter_.release(); }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

   private:
    InFlightLimiter& limiter_;
  };

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  int limit_;
  int in_use_ = 0;
};

struct HttpRequest {
  std::string url;
  std::map<std::string, std::string> headers;
  std::string body;
  int timeout_s = 60;
};

struct HttpResponse {
  enum class Outcome { Ok, ConnectionFailed, TimedOut };
  Outcome outcome = Outcome::Ok;
  int status = 0;
  std::string body;
  std::string error;  // transport-level description
};

using Transport = std::function<HttpResponse(const HttpRequest&)>;
using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// Transport over cpp-httplib. https URLs need a build with OpenSSL.
Transport default_transport();

// OpenAI-style chat-completion client.
class HttpBackend : public Backend {
 public:
  /// Throws AuthError when api_key_env names an unset variable, before any
  /// request is made.
  explicit HttpBackend(BackendConfig config, Transport transport = default_transport(),
                       Sleeper sleeper = {}, std::uint64_t jitter_seed = 0);

  std::string complete(const std::string& prompt, const QueryContext& context) override;
  std::string id() const override { return "llm:" + config_.model_name; }
  int parallelism() const override { return config_.parallelism; }

  /// Request body sent for `prompt`.
  std::string request_body(const std::string& prompt) const;
  /// Extracts the answer at config.response_path; throws MalformedResponse.
  std::string extract_answer(std::string_view body) const;
  /// Delay before retry number `retry` (0-based), jitter included.
  std::chrono::milliseconds backoff(int retry);
  int attempts_made() const { return attempts_.load(); }

 private:
  std::string attempt(const std::string& prompt);

  BackendConfig config_;
  Transport transport_;
  Sleeper sleeper_;
  std::string api_key_;
  InFlightLimiter limiter_;
  std::mutex jitter_mutex_;
  std::uint64_t jitter_state_;
  std::atomic<int> attempts_{0};
};

/// One request with `cfg` over the default transport.
std::string query(const BackendConfig& cfg, const std::string& prompt);

// Offline backend with scripted answers.
class MockBackend : public Backend {
 public:
  enum class Mode { EchoGroundTruth, FixedAnswer, Transcript };

  static MockBackend echo(int parallelism = 2);
  static MockBackend fixed(std::string answer, int parallelism = 2);
  /// Answers keyed by case id; unknown ids raise MalformedResponse.
  static MockBackend transcript(std::map<std::string, std::string> answers,
                                int parallelism = 2);

  MockBackend(const MockBackend& other);

  std::string complete(const std::string& prompt, const QueryContext& context) override;
  std::string id() const override;
  int parallelism() const override { return parallelism_; }

  /// Simulated latency per call.
  void set_delay(std::chrono::milliseconds delay) { delay_ = delay; }
  int calls() const { return calls_.load(); }
  int max_in_flight() const { return max_in_flight_.load(); }
  const std::string& last_prompt() const { return last_prompt_; }

 private:
  MockBackend(Mode mode, int parallelism);

  Mode mode_;
  int parallelism_;
  std::string fixed_;
  std::map<std::string, std::string> transcript_;
  std::chrono::milliseconds delay_{0};
  std::atomic<int> calls_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  std::mutex prompt_mutex_;
  std::string last_prompt_;
};

}  // namespace refdet::llm
