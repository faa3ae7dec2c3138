#include <cstdlib>
#include <thread>

#ifdef REFDET_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"
#include "json.hpp"
#include "refdet/llm.hpp"
#include "refdet/random.hpp"

namespace refdet::llm {

InFlightLimiter::InFlightLimiter(int limit) : limit_(limit < 1 ? 1 : limit) {}

void InFlightLimiter::acquire() {
  std::unique_lock lock(mutex_);
  cv_.wait(lock, [&] { return in_use_ < limit_; });
  ++in_use_;
}

void InFlightLimiter::release() {
  {
    std::lock_guard lock(mutex_);
    --in_use_;
  }
  cv_.notify_one();
}

namespace {

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

UrlParts split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  const std::size_t path_start =
      scheme_end == std::string::npos ? std::string::npos : url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string describe(httplib::Error error) { return httplib::to_string(error); }

}  // namespace

Transport default_transport() {
  return [](const HttpRequest& request) {
    const UrlParts parts = split_url(request.url);
    HttpResponse response;
#ifndef REFDET_HAVE_OPENSSL
    if (parts.origin.rfind("https://", 0) == 0) {
      response.outcome = HttpResponse::Outcome::ConnectionFailed;
      response.error = "https endpoints need a build with OpenSSL";
      return response;
    }
#endif
    httplib::Client client(parts.origin);
    client.set_connection_timeout(request.timeout_s, 0);
    client.set_read_timeout(request.timeout_s, 0);
    client.set_write_timeout(request.timeout_s, 0);
    httplib::Headers headers;
    for (const auto& [k, v] : request.headers) headers.emplace(k, v);
    auto result = client.Post(parts.path, headers, request.body, "application/json");
    if (!result) {
      const auto error = result.error();
      response.outcome = (error == httplib::Error::ConnectionTimeout ||
                          error == httplib::Error::Read || error == httplib::Error::Write)
                             ? HttpResponse::Outcome::TimedOut
                             : HttpResponse::Outcome::ConnectionFailed;
      response.error = describe(error);
      return response;
    }
    response.status = result->status;
    response.body = result->body;
    return response;
  };
}

HttpBackend::HttpBackend(BackendConfig config, Transport transport, Sleeper sleeper,
                         std::uint64_t jitter_seed)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)),
      limiter_(config_.parallelism),
      jitter_state_(splitmix64(jitter_seed)) {
  config_.validate();
  if (!config_.api_key_env.empty()) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw AuthError("environment variable " + config_.api_key_env + " is not set");
    }
    api_key_ = key;
  }
  if (!sleeper_) {
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

std::string HttpBackend::request_body(const std::string& prompt) const {
  nlohmann::json body{{"model", config_.model_name},
                      {"temperature", config_.temperature},
                      {"max_tokens", config_.max_output_tokens},
                      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  return body.dump();
}

std::string HttpBackend::extract_answer(std::string_view body) const {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    throw MalformedResponse("response is not JSON: " + std::string(body.substr(0, 200)));
  }
  // "choices[0].message.content" -> "/choices/0/message/content"
  std::string pointer;
  for (char c : config_.response_path) {
    if (c == '.' || c == '[') pointer += '/';
    else if (c != ']') pointer += c;
  }
  if (pointer.empty() || pointer[0] != '/') pointer.insert(pointer.begin(), '/');
  try {
    const auto& node = j.at(nlohmann::json::json_pointer(pointer));
    if (!node.is_string()) throw MalformedResponse(config_.response_path + " is not a string");
    return node.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw MalformedResponse("response lacks " + config_.response_path + ": " +
                            std::string(body.substr(0, 200)));
  }
}

std::chrono::milliseconds HttpBackend::backoff(int retry) {
  const double base = static_cast<double>(config_.backoff_base_ms) * static_cast<double>(1LL << retry);
  double jitter = 0;
  {
    std::lock_guard lock(jitter_mutex_);
    jitter_state_ = splitmix64(jitter_state_);
    jitter = static_cast<double>(jitter_state_ >> 11) * 0x1.0p-53;
  }
  // Full delay plus up to half again.
  return std::chrono::milliseconds(static_cast<long long>(base * (1.0 + 0.5 * jitter)));
}

std::string HttpBackend::attempt(const std::string& prompt) {
  ++attempts_;
  HttpRequest request;
  request.url = config_.endpoint_url;
  request.body = request_body(prompt);
  request.timeout_s = config_.request_timeout_s;
  if (!api_key_.empty()) request.headers["Authorization"] = "Bearer " + api_key_;
  const HttpResponse response = transport_(request);
  switch (response.outcome) {
    case HttpResponse::Outcome::TimedOut: throw Timeout("request timed out: " + response.error);
    case HttpResponse::Outcome::ConnectionFailed:
      throw TransportError("connection failed: " + response.error);
    case HttpResponse::Outcome::Ok: break;
  }
  const std::string status = "HTTP " + std::to_string(response.status);
  if (response.status == 401 || response.status == 403) throw AuthError(status + " from endpoint");
  if (response.status == 429) throw RateLimited(status + " rate limited");
  if (response.status == 408) throw Timeout(status + " request timeout");
  if (response.status >= 500) throw TransportError(status + " server error");
  if (response.status < 200 || response.status >= 300) {
    throw BackendError(status + ": " + response.body.substr(0, 200), false);
  }
  return extract_answer(response.body);
}

std::string HttpBackend::complete(const std::string& prompt, const QueryContext&) {
  InFlightLimiter::Slot slot(limiter_);
  for (int retry = 0;; ++retry) {
    try {
      return attempt(prompt);
    } catch (const BackendError& e) {
      if (!e.retryable() || retry >= config_.max_retries) throw;
    }
    sleeper_(backoff(retry));
  }
}

std::string query(const BackendConfig& cfg, const std::string& prompt) {
  HttpBackend backend(cfg);
  return backend.complete(prompt, {});
}

MockBackend::MockBackend(Mode mode, int parallelism)
    : mode_(mode), parallelism_(parallelism < 1 ? 1 : parallelism) {}

MockBackend::MockBackend(const MockBackend& other)
    : mode_(other.mode_),
      parallelism_(other.parallelism_),
      fixed_(other.fixed_),
      transcript_(other.transcript_),
      delay_(other.delay_) {}

MockBackend MockBackend::echo(int parallelism) {
  return MockBackend(Mode::EchoGroundTruth, parallelism);
}

MockBackend MockBackend::fixed(std::string answer, int parallelism) {
  MockBackend b(Mode::FixedAnswer, parallelism);
  b.fixed_ = std::move(answer);
  return b;
}

MockBackend MockBackend::transcript(std::map<std::string, std::string> answers,
                                    int parallelism) {
  MockBackend b(Mode::Transcript, parallelism);
  b.transcript_ = std::move(answers);
  return b;
}

std::string MockBackend::id() const {
  switch (mode_) {
    case Mode::EchoGroundTruth: return "mock-echo";
    case Mode::FixedAnswer: return "mock-fixed";
    case Mode::Transcript: return "mock-transcript";
  }
  return "mock";
}

std::string MockBackend::complete(const std::string& prompt, const QueryContext& context) {
  ++calls_;
  const int now = ++in_flight_;
  int seen = max_in_flight_.load();
  while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
  }
  struct Leave {
    std::atomic<int>& counter;
    ~Leave() { --counter; }
  } leave{in_flight_};
  {
    std::lock_guard lock(prompt_mutex_);
    last_prompt_ = prompt;
  }
  if (delay_.count() > 0) std::this_thread::sleep_for(delay_);
  switch (mode_) {
    case Mode::EchoGroundTruth:
      if (!context.ground_truth) throw MalformedResponse("echo mock needs a ground truth");
      return "- " + std::string(display_name(*context.ground_truth)) +
             "\n\nThe transformation matches this catalog entry.";
    case Mode::FixedAnswer: return fixed_;
    case Mode::Transcript: {
      auto it = transcript_.find(context.case_id);
      if (it == transcript_.end()) {
        throw MalformedResponse("no transcript answer for case " + context.case_id);
      }
      return it->second;
    }
  }
  return {};
}

}  // namespace refdet::llm
