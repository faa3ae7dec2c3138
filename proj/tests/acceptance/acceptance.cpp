// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "refdet/catalog.hpp"
#include "refdet/diffing.hpp"
#include "refdet/evaluate.hpp"
#include "refdet/generate.hpp"
#include "refdet/llm.hpp"
#include "refdet/persistence.hpp"
#include "refdet/pipeline.hpp"
#include "refdet/random.hpp"
#include "refdet/resolve.hpp"
#include "refdet/structural.hpp"
#include "refdet/syntax.hpp"
#include "test_support.hpp"

namespace {

using namespace refdet;
namespace fs = std::filesystem;

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome pass(std::string d) { return {Verdict::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Verdict::Fail, std::move(d)}; }

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd =
      std::string(REFDET_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const gen::Corpus& seed42_corpus() {
  static const gen::Corpus corpus = [] {
    gen::GeneratorConfig config;
    config.seed = 42;
    return gen::build_corpus(config, 50);
  }();
  return corpus;
}

// 1: structural detector against generator ground truth.
Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  const auto& corpus = seed42_corpus();
  const auto results = pipeline::detect_structural(corpus);
  const auto scored = store::case_results(results);
  const auto report = eval::score(scored);
  std::set<std::string> hard_ids;
  for (const auto& c : corpus.cases) {
    if (c.hard) hard_ids.insert(c.id);
  }
  const int hard = static_cast<int>(hard_ids.size());
  std::vector<eval::CaseResult> easy;
  for (const auto& r : scored) {
    if (!hard_ids.contains(r.case_id)) easy.push_back(r);
  }
  const auto easy_report = eval::score(easy);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string detail =
      std::to_string(corpus.cases.size()) + " cases (" + std::to_string(hard) + " hard), " +
      fmt("recall %.4f, precision %.4f, non-hard precision %.4f", report.recall, report.precision,
          easy_report.precision) +
      fmt(", %.2f s", seconds);
  const bool ok = report.recall == 1.0 && report.precision >= 0.99 &&
                  easy_report.precision == 1.0 && seconds < 60.0 && !corpus.cases.empty();
  return ok ? pass(detail) : fail(detail);
}

// 2: generate -> detect (mock echo, pair prompt) -> evaluate through the CLI.
Outcome pipeline_identity() {
  testing::TempDir tmp;
  const fs::path log = tmp / "log.txt";
  const std::string corpus = (tmp / "corpus").string();
  if (run_cli("generate --seed 42 --per-kind 50 --out " + corpus, log) != 0) {
    return fail("generate failed: " + testing::slurp(log));
  }
  if (run_cli("detect --corpus " + corpus + " --detector mock-echo --prompt pair --out " +
                  (tmp / "results.json").string(),
              log) != 0) {
    return fail("detect failed: " + testing::slurp(log));
  }
  if (run_cli("evaluate --results " + (tmp / "results.json").string() + " --corpus " + corpus +
                  " --out " + (tmp / "report").string(),
              log) != 0) {
    return fail("evaluate failed: " + testing::slurp(log));
  }
  const auto report = eval::report_from_json(testing::slurp(tmp / "report" / "report.json"));
  const std::string printed = testing::slurp(log);
  const bool table_ok = printed.find("| **Recall** |") != std::string::npos &&
                        printed.find("100.0%") != std::string::npos;
  const std::string detail = std::to_string(report.cases) + " cases, " +
                             fmt("recall %.4f, precision %.4f", report.recall, report.precision);
  return report.recall == 1.0 && report.precision == 1.0 && table_ok ? pass(detail) : fail(detail);
}

// 3: prompts against hand-written golden files.
Outcome prompt_fidelity() {
  const auto dir = testing::golden_dir();
  const std::string small = llm::build_small_prompt(
      "// Shape.mj\npackage p;\n\nclass Shape {\n    int sides;\n}\n",
      "// Polygon.mj\npackage p;\n\nclass Polygon {\n    int sides;\n}\n",
      render_definitions(std::array{definition_of(RefactoringKind::RenameClass),
                                    definition_of(RefactoringKind::RenameField)}));
  const std::string diff = llm::build_diff_prompt(
      "--- a/Counter.mj\n+++ b/Counter.mj\n@@ -3,5 +3,5 @@\n class Counter {\n     int n;\n \n"
      "-    void bump() {\n+    void increment() {\n         n = n + 1;\n",
      render_definitions(std::array{definition_of(RefactoringKind::RenameMethod)}));
  const bool defs_ok = render_definitions(catalog()) == testing::slurp(dir / "definitions.txt");
  const bool small_ok = small == testing::slurp(dir / "small_prompt.txt");
  const bool diff_ok = diff == testing::slurp(dir / "diff_prompt.txt");
  const std::string last = "\nDo not generate explanations unrelated to the given transformation.";
  const bool literals = small.find("\n**Original Version:**\n") != std::string::npos &&
                        diff.find("\n**Diffs:**\n") != std::string::npos &&
                        small.ends_with(last) && diff.ends_with(last);
  std::string detail = std::string("definitions ") + (defs_ok ? "ok" : "differ") + ", pair " +
                       (small_ok ? "ok" : "differs") + ", diff " + (diff_ok ? "ok" : "differs") +
                       ", literal lines " + (literals ? "ok" : "missing");
  return defs_ok && small_ok && diff_ok && literals ? pass(detail) : fail(detail);
}

// 4: transcript fixtures plus fuzzing.
Outcome response_parser() {
  using K = RefactoringKind;
  struct Fixture {
    const char* text;
    std::vector<K> recognized;
    std::vector<std::string> unrecognized;
  };
  const Fixture fixtures[] = {
      {"- Rename Method\n\nThe method foo was renamed to bar.", {K::RenameMethod}, {}},
      {"- Pull Down Member\n\nThe abstract declaration stays in the parent.", {}, {"Pull Down Member"}},
      {"* **Move Method**: relocated m", {K::MoveMethod}, {}},
      {"Analysis:\n\n1. Push Down Method\n2. Push Up Field\n\nPush Down Method because ...",
       {K::PushDownMethod}, {"Push Up Field"}},
      {"No refactoring recognised.", {}, {}},
  };
  int matched = 0;
  for (const auto& f : fixtures) {
    const auto a = llm::parse_response(f.text);
    if (a.recognized == f.recognized && a.unrecognized_labels == f.unrecognized && a.raw_text == f.text) {
      ++matched;
    }
  }
  RandomStream rng(99);
  const std::string pieces[] = {"- ", "* ", "1. ", "•", "**", ":", "\n", "\n\n", " ", "Rename",
                                "Pull", "Down", "Member", "Field", "(", "`", "\xc3", "\t"};
  int threw = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string text;
    for (auto n = rng.below(50); n > 0; --n) text += pieces[rng.below(std::size(pieces))];
    try {
      (void)llm::parse_response(text);
    } catch (...) {
      ++threw;
    }
  }
  const std::string detail = std::to_string(matched) + "/" + std::to_string(std::size(fixtures)) +
                             " fixtures, " + std::to_string(threw) + "/1000 fuzzed texts threw";
  return matched == static_cast<int>(std::size(fixtures)) && threw == 0 ? pass(detail) : fail(detail);
}

// 5: hand-counted metrics fixture and report shape.
Outcome metrics_hand_check() {
  using K = RefactoringKind;
  const std::vector<eval::CaseResult> fixture = {
      {"c1", K::RenameClass, {K::RenameClass}, {"Pull Down Member"}, 12},
      {"c2", K::MoveMethod, {K::MoveMethod}, {}, 25},
      {"c3", K::PullUpField, {K::PullUpField}, {}, 44},
      {"c4", K::PushDownMethod, {K::PullUpMethod}, {}, 130},
  };
  const auto r = eval::score(fixture);
  const std::string md = eval::emit(r, eval::Format::Markdown);
  bool buckets = true;
  for (const char* label : {"| 0-39 |", "| 40-79 |", "| 80-119 |", "| 120-159 |", "| 160-359 |"}) {
    buckets = buckets && md.find(label) != std::string::npos;
  }
  const bool footer = md.find("| **Recall** |") != std::string::npos &&
                      md.find("| **Precision** |") != std::string::npos;
  const std::string detail = fmt("recall %g, precision %g", r.recall, r.precision) +
                             (buckets ? ", five buckets" : ", bucket rows missing") +
                             (footer ? "" : ", footer missing");
  return r.recall == 0.75 && r.precision == 0.6 && buckets && footer ? pass(detail) : fail(detail);
}

// 6: patch oracle over the corpus, empty diff, bucket partition.
Outcome diff_correctness() {
  int patched = 0, mismatched = 0;
  for (const auto& c : seed42_corpus().cases) {
    const auto before = diff::program_files(c.before);
    const auto after = diff::program_files(c.after);
    try {
      if (testing::apply_patch(before, diff::render_diff(diff::compute_diff(before, after))) == after) {
        ++patched;
      } else {
        ++mismatched;
      }
    } catch (const std::exception&) {
      ++mismatched;
    }
  }
  const bool empty_ok = diff::diff_loc(diff::UnifiedDiff{}) == 0;
  int partition_errors = 0;
  const int lows[] = {0, 40, 80, 120, 160};
  const int highs[] = {39, 79, 119, 159, 359};
  for (int n = 0; n <= 1000; ++n) {
    int containing = 0;
    auto expected = diff::DiffSizeBucket::Overflow;
    for (int b = 0; b < 5; ++b) {
      if (n >= lows[b] && n <= highs[b]) {
        ++containing;
        expected = static_cast<diff::DiffSizeBucket>(b);
      }
    }
    if (containing > 1 || diff::bucket_of(n) != expected) ++partition_errors;
  }
  const std::string detail = std::to_string(patched) + " cases patched exactly, " +
                             std::to_string(mismatched) + " mismatched, empty loc " +
                             (empty_ok ? "0" : "nonzero") + ", " +
                             std::to_string(partition_errors) + " bucket errors over 0..1000";
  return mismatched == 0 && patched > 0 && empty_ok && partition_errors == 0 ? pass(detail)
                                                                              : fail(detail);
}

// 7: parse(print(u)) == u over generated units; resolution determinism.
Outcome syntax_round_trip() {
  gen::GeneratorConfig config;
  int units = 0, failures = 0, unstable = 0;
  for (std::uint64_t seed = 0; units < 1000; ++seed) {
    config.seed = seed;
    RandomStream stream = RandomStream::derive(seed, "acceptance", 0);
    const auto program = gen::generate_program(config, stream);
    for (const auto& unit : program) {
      ++units;
      try {
        if (syntax::parse(syntax::print(unit)) != unit) ++failures;
      } catch (const std::exception&) {
        ++failures;
      }
    }
    if (seed < 20) {
      const std::string first = syntax::resolve(program).dump();
      for (int run = 0; run < 10; ++run) {
        if (syntax::resolve(program).dump() != first) ++unstable;
      }
    }
  }
  const std::string detail = std::to_string(units) + " units, " + std::to_string(failures) +
                             " round-trip failures, " + std::to_string(unstable) +
                             " unstable resolutions over 20 programs x 10 runs";
  return failures == 0 && unstable == 0 ? pass(detail) : fail(detail);
}

// 8: two identical CLI pipelines give identical corpus trees and report.json.
Outcome reproducibility() {
  testing::TempDir tmp;
  std::string hashes[2], reports[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path root = tmp / ("run" + std::to_string(run));
    const fs::path log = tmp / "log.txt";
    const std::string corpus = (root / "corpus").string();
    if (run_cli("--seed 7 generate --per-kind 20 --out " + corpus, log) != 0 ||
        run_cli("detect --corpus " + corpus + " --detector structural --out " +
                    (root / "results.json").string(),
                log) != 0 ||
        run_cli("evaluate --results " + (root / "results.json").string() + " --corpus " + corpus +
                    " --out " + (root / "report").string(),
                log) != 0) {
      return fail("pipeline run " + std::to_string(run) + " failed: " + testing::slurp(log));
    }
    hashes[run] = store::directory_hash(corpus);
    reports[run] = testing::slurp(root / "report" / "report.json");
  }
  const std::string report_hash = [&] {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(reports[0])));
    return std::string(buf);
  }();
  const std::string detail = "corpus " + hashes[0] + (hashes[0] == hashes[1] ? " == " : " != ") +
                             hashes[1] + ", report.json " + report_hash +
                             (reports[0] == reports[1] ? " identical" : " differs");
  return hashes[0] == hashes[1] && reports[0] == reports[1] ? pass(detail) : fail(detail);
}

// 9: live endpoint, only when REFDET_LIVE_CONFIG points at a backend config.
Outcome live_smoke() {
  const char* config_path = std::getenv("REFDET_LIVE_CONFIG");
  if (config_path == nullptr || *config_path == '\0') {
    return {Verdict::Skip, "REFDET_LIVE_CONFIG not set"};
  }
  try {
    const auto config = llm::backend_config_from_json(store::read_file(config_path));
    llm::HttpBackend backend(config);
    gen::GeneratorConfig gc;
    gc.seed = 42;
    const auto corpus = gen::build_corpus(gc, 5, {RefactoringKind::RenameClass});
    int answered = 0, errors = 0, empty = 0;
    for (const auto& c : corpus.cases) {
      try {
        const auto text = backend.complete(
            pipeline::case_prompt(c, llm::PromptKind::SmallProgramPair), {c.id, std::nullopt});
        const auto a = llm::parse_response(text);
        ++answered;
        if (a.recognized.empty() && a.unrecognized_labels.empty()) ++empty;
      } catch (const llm::BackendError& e) {
        ++errors;
        std::cerr << c.id << ": " << e.what() << "\n";
      }
    }
    const std::string detail = std::to_string(answered) + "/5 answered, " +
                               std::to_string(errors) + " transport errors, " +
                               std::to_string(empty) + " empty parses";
    return answered == 5 && errors == 0 && empty == 0 ? pass(detail) : fail(detail);
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"oracle equivalence", oracle_equivalence},
      {"pipeline identity", pipeline_identity},
      {"prompt fidelity", prompt_fidelity},
      {"response-parser fixtures", response_parser},
      {"metrics hand-check", metrics_hand_check},
      {"diff correctness", diff_correctness},
      {"syntax round-trip", syntax_round_trip},
      {"reproducibility", reproducibility},
      {"live-backend smoke", live_smoke},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = fail(std::string("threw: ") + e.what());
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
    if (o.verdict == Verdict::Fail) ++failures;
    std::cout << tag << " [" << index << "] " << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
