#include "refdet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "refdet/structural.hpp"

namespace refdet::pipeline {

namespace fs = std::filesystem;

namespace {

// Runs body(i) for i in [0, n) on `workers` threads.
template <class Body>
void parallel_for(std::size_t n, int workers, Body body) {
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string rpad(const std::string& s, std::size_t width) {
  return s.size() < width ? std::string(width - s.size(), ' ') + s : s;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

void sort_records(store::ResultsFile& results) {
  std::sort(results.records.begin(), results.records.end(),
            [](const auto& a, const auto& b) { return a.case_id < b.case_id; });
}

}  // namespace

GenerateOutcome run_generate(const GenerateOptions& options, std::ostream& log) {
  GenerateOutcome outcome;
  outcome.corpus = gen::build_corpus(options.config, options.per_kind, options.kinds);
  store::save_corpus(outcome.corpus, options.out);
  outcome.hash = store::corpus_hash(outcome.corpus);

  log << pad("kind", 26) << rpad("requested", 10) << rpad("accepted", 9) << rpad("attempts", 9)
      << rpad("no-prog", 8) << rpad("n/a", 6) << rpad("unresolved", 11) << rpad("audit", 6)
      << "\n";
  int attempts = 0;
  std::vector<std::string> short_kinds;
  for (const auto& s : outcome.corpus.stats) {
    attempts += s.attempts;
    log << pad(std::string(kind_slug(s.kind)), 26) << rpad(std::to_string(s.requested), 10)
        << rpad(std::to_string(s.accepted), 9) << rpad(std::to_string(s.attempts), 9)
        << rpad(std::to_string(s.generation_failures), 8)
        << rpad(std::to_string(s.not_applicable), 6)
        << rpad(std::to_string(s.resolution_rejects), 11)
        << rpad(std::to_string(s.audit_rejects), 6) << "\n";
    if (s.budget_exhausted()) {
      short_kinds.push_back(std::string(kind_slug(s.kind)) + " (" + std::to_string(s.accepted) +
                            "/" + std::to_string(s.requested) + ")");
    }
  }
  log << "cases: " << outcome.corpus.cases.size() << " kept of " << attempts << " attempts\n";
  log << "corpus: " << options.out.string() << "\n";
  log << "corpus hash: " << outcome.hash << "\n";
  if (!short_kinds.empty()) {
    outcome.exhausted = true;
    log << "budget exhausted (partial corpus saved):";
    for (const auto& k : short_kinds) log << " " << k;
    log << "\n";
  }
  return outcome;
}

std::optional<DetectorKind> detector_from_string(std::string_view name) {
  if (name == "structural") return DetectorKind::Structural;
  if (name == "llm") return DetectorKind::Llm;
  if (name == "mock-echo") return DetectorKind::MockEcho;
  return std::nullopt;
}

store::ResultsFile detect_structural(const gen::Corpus& corpus, int workers) {
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  store::ResultsFile results;
  results.detector_id = "structural";
  results.corpus_hash = store::corpus_hash(corpus);
  results.records.resize(corpus.cases.size());
  parallel_for(corpus.cases.size(), workers, [&](std::size_t i) {
    const auto& c = corpus.cases[i];
    store::ResultRecord& r = results.records[i];
    r.case_id = c.id;
    r.ground_truth = c.kind;
    r.diff_loc = diff::diff_loc(diff::diff_programs(c.before, c.after));
    const auto start = std::chrono::steady_clock::now();
    try {
      std::set<RefactoringKind> kinds;
      for (const auto& d : structural::detect(c.before, c.after)) {
        kinds.insert(d.kind);
        if (!r.raw_text.empty()) r.raw_text += "\n";
        r.raw_text += "- " + std::string(display_name(d.kind)) + ": " + structural::explain(d);
      }
      r.predicted.assign(kinds.begin(), kinds.end());
    } catch (const structural::UnresolvedInput& e) {
      r.error = e.what();
    }
    r.latency_ms = elapsed_ms(start);
  });
  sort_records(results);
  return results;
}

std::string case_prompt(const gen::TransformationCase& c, llm::PromptKind prompt) {
  const std::string defs = render_definitions(catalog());
  if (prompt == llm::PromptKind::SmallProgramPair) {
    return llm::build_small_prompt(llm::program_text(c.before), llm::program_text(c.after), defs);
  }
  return llm::build_diff_prompt(diff::render_diff(diff::diff_programs(c.before, c.after)), defs);
}

store::ResultsFile detect_with_backend(const gen::Corpus& corpus, llm::Backend& backend,
                                       llm::PromptKind prompt, std::ostream* progress) {
  store::ResultsFile results;
  results.detector_id = backend.id();
  results.prompt = prompt;
  results.corpus_hash = store::corpus_hash(corpus);
  results.records.resize(corpus.cases.size());
  std::mutex log_mutex;
  std::atomic<int> done{0};
  parallel_for(corpus.cases.size(), backend.parallelism(), [&](std::size_t i) {
    const auto& c = corpus.cases[i];
    store::ResultRecord& r = results.records[i];
    r.case_id = c.id;
    r.ground_truth = c.kind;
    r.diff_loc = diff::diff_loc(diff::diff_programs(c.before, c.after));
    const auto start = std::chrono::steady_clock::now();
    try {
      const std::string text = backend.complete(case_prompt(c, prompt), {c.id, c.kind});
      r.latency_ms = elapsed_ms(start);
      const llm::ModelAnswer answer = llm::parse_response(text);
      r.raw_text = answer.raw_text;
      r.predicted = answer.recognized;
      r.unrecognized = answer.unrecognized_labels;
    } catch (const std::exception& e) {
      r.latency_ms = elapsed_ms(start);
      r.error = e.what();
    }
    const int n = ++done;
    if (progress) {
      std::lock_guard lock(log_mutex);
      *progress << "[" << n << "/" << corpus.cases.size() << "] " << c.id
                << (r.error.empty() ? "" : " error: " + r.error) << "\n";
    }
  });
  sort_records(results);
  return results;
}

DetectOutcome run_detect(const DetectOptions& options, std::ostream& log) {
  const gen::Corpus corpus = store::load_corpus(options.corpus);
  DetectOutcome outcome;
  std::ostream* progress = options.verbose ? &log : nullptr;
  switch (options.detector) {
    case DetectorKind::Structural:
      outcome.results = detect_structural(corpus);
      break;
    case DetectorKind::MockEcho: {
      auto backend = llm::MockBackend::echo();
      outcome.results = detect_with_backend(corpus, backend, options.prompt, progress);
      break;
    }
    case DetectorKind::Llm: {
      if (!options.backend_config) {
        throw std::invalid_argument("--backend-config is required for the llm detector");
      }
      llm::BackendConfig config;
      try {
        config = llm::backend_config_from_json(store::read_file(*options.backend_config));
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(options.backend_config->string() + ": " + e.what());
      }
      llm::HttpBackend backend(config);
      outcome.results = detect_with_backend(corpus, backend, options.prompt, progress);
      outcome.results.backend = config;
      break;
    }
  }
  store::save_results(outcome.results, options.out);

  int correct = 0;
  for (const auto& r : outcome.results.records) {
    if (!r.error.empty()) ++outcome.errors;
    if (std::find(r.predicted.begin(), r.predicted.end(), r.ground_truth) != r.predicted.end()) {
      ++correct;
    }
  }
  const std::size_t n = outcome.results.records.size();
  const double rate = n == 0 ? 0.0 : static_cast<double>(outcome.errors) / static_cast<double>(n);
  outcome.within_threshold = rate <= options.max_error_rate;
  log << "detector: " << outcome.results.detector_id << "\n";
  log << "cases: " << n << ", answered: " << n - static_cast<std::size_t>(outcome.errors)
      << ", errors: " << outcome.errors << ", ground truth found: " << correct << "\n";
  log << "results: " << options.out.string() << "\n";
  if (!outcome.within_threshold) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1f%% > %.1f%%", rate * 100.0, options.max_error_rate * 100.0);
    log << "error rate too high: " << buf << "\n";
  }
  return outcome;
}

eval::EvaluationReport run_evaluate(const EvaluateOptions& options, std::ostream& out) {
  const store::ResultsFile results = store::load_results(options.results);
  const gen::Corpus corpus = store::load_corpus(options.corpus);
  const std::string hash = store::corpus_hash(corpus);
  if (!results.corpus_hash.empty() && results.corpus_hash != hash) {
    throw store::IntegrityError("*", "results were produced for corpus " + results.corpus_hash +
                                         ", not " + hash);
  }
  std::map<std::string, RefactoringKind> truth;
  for (const auto& c : corpus.cases) truth[c.id] = c.kind;
  std::set<std::string> seen;
  for (const auto& r : results.records) {
    auto it = truth.find(r.case_id);
    if (it == truth.end()) throw store::IntegrityError(r.case_id, "not in the corpus");
    if (it->second != r.ground_truth) {
      throw store::IntegrityError(r.case_id, "ground truth differs from the corpus");
    }
    seen.insert(r.case_id);
  }
  for (const auto& [id, _] : truth) {
    if (!seen.contains(id)) throw store::IntegrityError(id, "no result recorded");
  }

  eval::EvaluationReport report = eval::score(store::case_results(results), options.scoring);
  report.detector_id = results.detector_id;
  report.corpus = {corpus.provenance.seed, corpus.provenance.per_kind,
                   static_cast<int>(corpus.cases.size()), corpus.provenance.tool_version, hash};
  std::error_code ec;
  fs::create_directories(options.out, ec);
  if (ec) throw store::IoError(options.out, "cannot create directory: " + ec.message());
  for (auto format : options.formats) {
    store::write_file_atomically(options.out / ("report." + std::string(eval::extension(format))),
                                 eval::emit(report, format));
  }
  out << eval::emit(report, eval::Format::Markdown);
  return report;
}

diff::FileSet read_file_set(const fs::path& path) {
  auto normalized = [](std::string text) {
    text.erase(std::remove(text.begin(), text.end(), '\r'), text.end());
    return text;
  };
  diff::FileSet files;
  if (fs::is_regular_file(path)) {
    files[path.filename().string()] = normalized(store::read_file(path));
    return files;
  }
  if (!fs::is_directory(path)) throw store::IoError(path, "no such file or directory");
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file()) {
      files[entry.path().filename().string()] = normalized(store::read_file(entry.path()));
    }
  }
  return files;
}

DiffOutcome run_diff(const fs::path& before, const fs::path& after) {
  DiffOutcome outcome;
  outcome.diff = diff::compute_diff(read_file_set(before), read_file_set(after));
  outcome.text = diff::render_diff(outcome.diff);
  outcome.loc = diff::diff_loc(outcome.diff);
  outcome.bucket = diff::bucket_of(outcome.loc);
  return outcome;
}

}  // namespace refdet::pipeline
