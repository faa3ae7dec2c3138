#include "refdet/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "json.hpp"

namespace refdet::eval {

bool CaseResult::correct() const {
  return std::find(predicted.begin(), predicted.end(), ground_truth) != predicted.end();
}

DuplicateCase::DuplicateCase(const std::string& case_id)
    : std::invalid_argument("duplicate case id: " + case_id) {}

EmptyResults::EmptyResults() : std::invalid_argument("no results to score") {}

std::string_view to_string(PrecisionMode mode) {
  return mode == PrecisionMode::Strict ? "strict" : "lenient";
}

EvaluationReport score(const std::vector<CaseResult>& results, const ScoreOptions& options) {
  if (results.empty()) throw EmptyResults();
  options.bounds.validate();
  EvaluationReport r;
  r.mode = options.mode;
  r.bounds = options.bounds;
  for (auto b : diff::all_buckets()) {
    if (b != diff::DiffSizeBucket::Overflow) r.per_bucket[b] = {};
  }
  std::set<std::string> ids;
  for (const auto& c : results) {
    if (!ids.insert(c.case_id).second) throw DuplicateCase(c.case_id);
    const bool hit = c.correct();
    ++r.cases;
    r.correct_cases += hit;
    r.labels_recognized += static_cast<int>(c.predicted.size());
    r.labels_unrecognized += static_cast<int>(c.unrecognized.size());
    r.labels_correct += hit;
    Tally& k = r.per_kind[c.ground_truth];
    ++k.total;
    k.correct += hit;
    Tally& b = r.per_bucket[diff::bucket_of(c.diff_loc, options.bounds)];
    ++b.total;
    b.correct += hit;
  }
  auto ratio = [](int num, int den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; };
  r.recall = ratio(r.correct_cases, r.cases);
  r.precision_strict = ratio(r.labels_correct, r.labels_recognized + r.labels_unrecognized);
  r.precision_lenient = ratio(r.labels_correct, r.labels_recognized);
  r.precision = options.mode == PrecisionMode::Strict ? r.precision_strict : r.precision_lenient;
  return r;
}

std::optional<Format> format_from_string(std::string_view name) {
  if (name == "markdown" || name == "md") return Format::Markdown;
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  return std::nullopt;
}

std::string_view extension(Format format) {
  switch (format) {
    case Format::Markdown: return "md";
    case Format::Csv: return "csv";
    case Format::Json: return "json";
  }
  return "txt";
}

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", fraction * 100.0);
  return buf;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// Overflow appears only when something landed there.
std::vector<std::pair<diff::DiffSizeBucket, Tally>> shown_buckets(const EvaluationReport& r) {
  std::vector<std::pair<diff::DiffSizeBucket, Tally>> out;
  for (auto b : diff::all_buckets()) {
    auto it = r.per_bucket.find(b);
    const Tally t = it == r.per_bucket.end() ? Tally{} : it->second;
    if (b == diff::DiffSizeBucket::Overflow && t.total == 0) continue;
    out.emplace_back(b, t);
  }
  return out;
}

std::string markdown(const EvaluationReport& r) {
  std::string out = "# Detection report\n\n";
  out += "- Detector: " + r.detector_id + "\n";
  out += "- Corpus: seed " + std::to_string(r.corpus.seed) + ", " +
         std::to_string(r.cases) + " cases";
  if (!r.corpus.corpus_hash.empty()) out += ", hash " + r.corpus.corpus_hash;
  out += "\n- Scoring: pass@1, " + std::string(to_string(r.mode)) + " precision\n";
  out += "- LOC: " + std::string(kLocRule) + "\n\n";

  out += "| Refactoring | Correct | Total | Recall |\n|---|---:|---:|---:|\n";
  for (const auto& [kind, t] : r.per_kind) {
    out += "| " + std::string(display_name(kind)) + " | " + std::to_string(t.correct) + " | " +
           std::to_string(t.total) + " | " + percent(t.rate()) + " |\n";
  }
  out += "| **Recall** | " + std::to_string(r.correct_cases) + " | " + std::to_string(r.cases) +
         " | " + percent(r.recall) + " |\n";
  const int strict_den = r.labels_recognized + r.labels_unrecognized;
  const bool strict = r.mode == PrecisionMode::Strict;
  out += "| **Precision** | " + std::to_string(r.labels_correct) + " | " +
         std::to_string(strict ? strict_den : r.labels_recognized) + " | " +
         percent(r.precision) + " |\n";
  out += "| Precision (" + std::string(strict ? "lenient" : "strict") + ") | " +
         std::to_string(r.labels_correct) + " | " +
         std::to_string(strict ? r.labels_recognized : strict_den) + " | " +
         percent(strict ? r.precision_lenient : r.precision_strict) + " |\n\n";

  out += "| Diff size (LOC) | Correct | Total | Recall |\n|---|---:|---:|---:|\n";
  for (const auto& [b, t] : shown_buckets(r)) {
    out += "| " + diff::bucket_label(b, r.bounds) + " | " + std::to_string(t.correct) + " | " +
           std::to_string(t.total) + " | " + percent(t.rate()) + " |\n";
  }
  return out;
}

std::string csv(const EvaluationReport& r) {
  std::string out = "section,name,correct,total,value\n";
  auto row = [&](const std::string& section, const std::string& name, int correct, int total,
                 double value) {
    out += section + "," + name + "," + std::to_string(correct) + "," + std::to_string(total) +
           "," + fixed6(value) + "\n";
  };
  for (const auto& [kind, t] : r.per_kind) {
    row("kind", std::string(kind_slug(kind)), t.correct, t.total, t.rate());
  }
  row("metric", "recall", r.correct_cases, r.cases, r.recall);
  row("metric", "precision_strict", r.labels_correct,
      r.labels_recognized + r.labels_unrecognized, r.precision_strict);
  row("metric", "precision_lenient", r.labels_correct, r.labels_recognized,
      r.precision_lenient);
  for (const auto& [b, t] : shown_buckets(r)) {
    row("bucket", diff::bucket_label(b, r.bounds), t.correct, t.total, t.rate());
  }
  return out;
}

nlohmann::ordered_json tally_json(const Tally& t) {
  return {{"correct", t.correct}, {"total", t.total}};
}

std::string json(const EvaluationReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["detector_id"] = r.detector_id;
  j["corpus"] = {{"seed", r.corpus.seed},
                 {"per_kind", r.corpus.per_kind},
                 {"case_count", r.corpus.case_count},
                 {"tool_version", r.corpus.tool_version},
                 {"corpus_hash", r.corpus.corpus_hash}};
  j["loc_rule"] = kLocRule;
  j["precision_mode"] = to_string(r.mode);
  j["bucket_upper_bounds"] = r.bounds.upper;
  j["cases"] = r.cases;
  j["correct_cases"] = r.correct_cases;
  j["labels"] = {{"recognized", r.labels_recognized},
                 {"unrecognized", r.labels_unrecognized},
                 {"correct", r.labels_correct}};
  j["recall"] = r.recall;
  j["precision"] = r.precision;
  j["precision_strict"] = r.precision_strict;
  j["precision_lenient"] = r.precision_lenient;
  auto kinds = nlohmann::ordered_json::array();
  for (const auto& [kind, t] : r.per_kind) {
    auto entry = tally_json(t);
    entry["kind"] = kind_slug(kind);
    kinds.push_back(entry);
  }
  j["per_kind"] = kinds;
  auto buckets = nlohmann::ordered_json::array();
  for (auto b : diff::all_buckets()) {
    auto it = r.per_bucket.find(b);
    if (it == r.per_bucket.end()) continue;
    auto entry = tally_json(it->second);
    entry["bucket"] = diff::bucket_label(b, r.bounds);
    buckets.push_back(entry);
  }
  j["per_bucket"] = buckets;
  return j.dump(2) + "\n";
}

}  // namespace

std::string emit(const EvaluationReport& report, Format format) {
  switch (format) {
    case Format::Markdown: return markdown(report);
    case Format::Csv: return csv(report);
    case Format::Json: return json(report);
  }
  return {};
}

EvaluationReport report_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("schema_version").get<int>() != 1) {
      throw std::invalid_argument("unsupported report schema_version");
    }
    EvaluationReport r;
    r.detector_id = j.at("detector_id").get<std::string>();
    const auto& c = j.at("corpus");
    r.corpus = {c.at("seed").get<std::uint64_t>(), c.at("per_kind").get<int>(),
                c.at("case_count").get<int>(), c.at("tool_version").get<std::string>(),
                c.at("corpus_hash").get<std::string>()};
    const auto mode = j.at("precision_mode").get<std::string>();
    if (mode != "strict" && mode != "lenient") throw std::invalid_argument("bad precision_mode");
    r.mode = mode == "strict" ? PrecisionMode::Strict : PrecisionMode::Lenient;
    r.bounds.upper = j.at("bucket_upper_bounds").get<std::array<int, 5>>();
    r.bounds.validate();
    r.cases = j.at("cases").get<int>();
    r.correct_cases = j.at("correct_cases").get<int>();
    r.labels_recognized = j.at("labels").at("recognized").get<int>();
    r.labels_unrecognized = j.at("labels").at("unrecognized").get<int>();
    r.labels_correct = j.at("labels").at("correct").get<int>();
    r.recall = j.at("recall").get<double>();
    r.precision = j.at("precision").get<double>();
    r.precision_strict = j.at("precision_strict").get<double>();
    r.precision_lenient = j.at("precision_lenient").get<double>();
    for (const auto& e : j.at("per_kind")) {
      const auto kind = kind_from_slug(e.at("kind").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown kind in report");
      r.per_kind[*kind] = {e.at("correct").get<int>(), e.at("total").get<int>()};
    }
    for (const auto& e : j.at("per_bucket")) {
      const auto label = e.at("bucket").get<std::string>();
      bool found = false;
      for (auto b : diff::all_buckets()) {
        if (diff::bucket_label(b, r.bounds) == label) {
          r.per_bucket[b] = {e.at("correct").get<int>(), e.at("total").get<int>()};
          found = true;
        }
      }
      if (!found) throw std::invalid_argument("unknown bucket label " + label);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

}  // namespace refdet::eval
