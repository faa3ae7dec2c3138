#include "refdet/persistence.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "refdet/diffing.hpp"
#include "refdet/random.hpp"
#include "refdet/resolve.hpp"
#include "refdet/syntax.hpp"

namespace refdet::store {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

IoError::IoError(const fs::path& path, const std::string& message)
    : std::runtime_error(path.string() + ": " + message), path_(path) {}

SchemaMismatch::SchemaMismatch(const std::string& message) : std::runtime_error(message) {}

IntegrityError::IntegrityError(std::string case_id, const std::string& reason)
    : std::runtime_error("case " + case_id + ": " + reason), case_id_(std::move(case_id)) {}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError(file, "cannot open for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

namespace {

void write_file(const fs::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(file, "cannot open for writing");
  out << text;
  out.close();
  if (!out) throw IoError(file, "write failed");
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create directory: " + ec.message());
}

void remove_tree(const fs::path& dir) {
  std::error_code ec;
  fs::remove_all(dir, ec);
  if (ec) throw IoError(dir, "cannot remove: " + ec.message());
}

std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string slug_of(RefactoringKind kind) { return std::string(kind_slug(kind)); }

RefactoringKind kind_of(const json& j, const std::string& where) {
  const auto kind = kind_from_slug(j.get<std::string>());
  if (!kind) throw SchemaMismatch(where + ": unknown refactoring kind " + j.dump());
  return *kind;
}

ordered_json config_json(const gen::GeneratorConfig& c) {
  return {{"seed", c.seed},
          {"classes_min", c.classes_min},
          {"classes_max", c.classes_max},
          {"fields_per_class_max", c.fields_per_class_max},
          {"methods_per_class_max", c.methods_per_class_max},
          {"inheritance_probability", c.inheritance_probability},
          {"abstract_probability", c.abstract_probability},
          {"target_loc_min", c.target_loc_min},
          {"target_loc_max", c.target_loc_max},
          {"loc_slack", c.loc_slack},
          {"package_name", c.package_name}};
}

gen::GeneratorConfig config_from(const json& j) {
  gen::GeneratorConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.classes_min = j.at("classes_min").get<int>();
  c.classes_max = j.at("classes_max").get<int>();
  c.fields_per_class_max = j.at("fields_per_class_max").get<int>();
  c.methods_per_class_max = j.at("methods_per_class_max").get<int>();
  c.inheritance_probability = j.at("inheritance_probability").get<double>();
  c.abstract_probability = j.at("abstract_probability").get<double>();
  c.target_loc_min = j.at("target_loc_min").get<int>();
  c.target_loc_max = j.at("target_loc_max").get<int>();
  c.loc_slack = j.at("loc_slack").get<int>();
  c.package_name = j.at("package_name").get<std::string>();
  return c;
}

ordered_json manifest_json(const CorpusManifest& m) {
  ordered_json j;
  j["schema_version"] = m.schema_version;
  const auto& p = m.provenance;
  auto kinds = ordered_json::array();
  for (auto k : p.kinds) kinds.push_back(slug_of(k));
  j["provenance"] = {{"seed", p.seed},
                     {"per_kind", p.per_kind},
                     {"kinds", kinds},
                     {"tool_version", p.tool_version},
                     {"config", config_json(p.config)}};
  auto stats = ordered_json::array();
  for (const auto& s : m.stats) {
    stats.push_back({{"kind", slug_of(s.kind)},
                     {"requested", s.requested},
                     {"attempts", s.attempts},
                     {"accepted", s.accepted},
                     {"generation_failures", s.generation_failures},
                     {"not_applicable", s.not_applicable},
                     {"resolution_rejects", s.resolution_rejects},
                     {"audit_rejects", s.audit_rejects}});
  }
  j["stats"] = stats;
  auto cases = ordered_json::array();
  for (const auto& e : m.cases) {
    cases.push_back({{"id", e.id},
                     {"kind", slug_of(e.kind)},
                     {"hard", e.hard},
                     {"before_dir", e.before_dir},
                     {"after_dir", e.after_dir},
                     {"before_files", e.before_files},
                     {"after_files", e.after_files},
                     {"diff_loc", e.diff_loc},
                     {"subject",
                      {{"source_class", e.subject.source_class},
                       {"member", e.subject.member},
                       {"new_name", e.subject.new_name},
                       {"target_classes", e.subject.target_classes},
                       {"added_members", e.subject.added_members}}}});
  }
  j["cases"] = cases;
  return j;
}

CorpusManifest manifest_from(const json& j) {
  CorpusManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  const auto& p = j.at("provenance");
  m.provenance.seed = p.at("seed").get<std::uint64_t>();
  m.provenance.per_kind = p.at("per_kind").get<int>();
  for (const auto& k : p.at("kinds")) m.provenance.kinds.push_back(kind_of(k, "provenance"));
  m.provenance.tool_version = p.at("tool_version").get<std::string>();
  m.provenance.config = config_from(p.at("config"));
  for (const auto& s : j.at("stats")) {
    gen::KindStats k;
    k.kind = kind_of(s.at("kind"), "stats");
    k.requested = s.at("requested").get<int>();
    k.attempts = s.at("attempts").get<int>();
    k.accepted = s.at("accepted").get<int>();
    k.generation_failures = s.at("generation_failures").get<int>();
    k.not_applicable = s.at("not_applicable").get<int>();
    k.resolution_rejects = s.at("resolution_rejects").get<int>();
    k.audit_rejects = s.at("audit_rejects").get<int>();
    m.stats.push_back(k);
  }
  for (const auto& c : j.at("cases")) {
    ManifestEntry e;
    e.id = c.at("id").get<std::string>();
    e.kind = kind_of(c.at("kind"), "case " + e.id);
    e.hard = c.at("hard").get<bool>();
    e.before_dir = c.at("before_dir").get<std::string>();
    e.after_dir = c.at("after_dir").get<std::string>();
    e.before_files = c.at("before_files").get<std::vector<std::string>>();
    e.after_files = c.at("after_files").get<std::vector<std::string>>();
    e.diff_loc = c.at("diff_loc").get<int>();
    const auto& s = c.at("subject");
    e.subject.source_class = s.at("source_class").get<std::string>();
    e.subject.member = s.at("member").get<std::string>();
    e.subject.new_name = s.at("new_name").get<std::string>();
    e.subject.target_classes = s.at("target_classes").get<std::vector<std::string>>();
    e.subject.added_members = s.at("added_members").get<std::vector<std::string>>();
    m.cases.push_back(std::move(e));
  }
  return m;
}

// File names must be plain "<name>.mj" so a manifest cannot point outside its case.
bool safe_file_name(const std::string& name) {
  return !name.empty() && name.find('/') == std::string::npos &&
         name.find('\\') == std::string::npos && name != "." && name != ".." &&
         fs::path(name).extension() == syntax::kSourceExtension;
}

void write_units(const syntax::Program& program, const fs::path& dir,
                 std::vector<std::string>& names) {
  make_dirs(dir);
  for (const auto& unit : program) {
    const std::string name = syntax::file_name(unit);
    write_file(dir / name, syntax::print(unit));
    names.push_back(name);
  }
}

syntax::Program read_units(const fs::path& dir, const std::vector<std::string>& names,
                           const std::string& case_id) {
  syntax::Program program;
  for (const auto& name : names) {
    if (!safe_file_name(name)) throw IntegrityError(case_id, "bad file name " + name);
    const fs::path file = dir / name;
    if (!fs::is_regular_file(file)) throw IntegrityError(case_id, "missing file " + file.string());
    try {
      program.push_back(syntax::parse(read_file(file)));
    } catch (const syntax::ParseError& e) {
      throw IntegrityError(case_id, file.string() + ": " + e.what());
    }
    if (syntax::file_name(program.back()) != name) {
      throw IntegrityError(case_id, "file " + name + " does not hold its class");
    }
  }
  // Anything else in the directory would be silently ignored otherwise.
  std::set<std::string> listed(names.begin(), names.end());
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (!listed.contains(entry.path().filename().string())) {
      throw IntegrityError(case_id, "unlisted file " + entry.path().string());
    }
  }
  if (ec) throw IoError(dir, ec.message());
  return program;
}

}  // namespace

void write_file_atomically(const fs::path& file, const std::string& text) {
  fs::path tmp = file;
  tmp += ".tmp";
  write_file(tmp, text);
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) throw IoError(file, "cannot rename into place: " + ec.message());
}

CorpusManifest save_corpus(const gen::Corpus& corpus, const fs::path& dir) {
  make_dirs(dir);
  CorpusManifest manifest;
  manifest.provenance = corpus.provenance;
  manifest.stats = corpus.stats;

  const fs::path staging = dir / "cases.staging";
  remove_tree(staging);
  make_dirs(staging);
  std::set<std::string> ids;
  for (const auto& c : corpus.cases) {
    if (!ids.insert(c.id).second) throw IntegrityError(c.id, "duplicate case id");
    ManifestEntry e;
    e.id = c.id;
    e.kind = c.kind;
    e.hard = c.hard;
    e.before_dir = "cases/" + c.id + "/before";
    e.after_dir = "cases/" + c.id + "/after";
    write_units(c.before, staging / c.id / "before", e.before_files);
    write_units(c.after, staging / c.id / "after", e.after_files);
    e.diff_loc = diff::diff_loc(diff::diff_programs(c.before, c.after));
    e.subject = c.subject;
    manifest.cases.push_back(std::move(e));
  }
  std::error_code ec;
  fs::remove(dir / "manifest.json", ec);
  remove_tree(dir / "cases");
  fs::rename(staging, dir / "cases", ec);
  if (ec) throw IoError(dir / "cases", "cannot move case tree into place: " + ec.message());
  write_file_atomically(dir / "manifest.json", manifest_json(manifest).dump(2) + "\n");
  return manifest;
}

CorpusManifest load_manifest(const fs::path& dir) {
  const fs::path file = dir / "manifest.json";
  if (!fs::is_regular_file(file)) throw IoError(file, "corpus manifest not found");
  json j;
  try {
    j = json::parse(read_file(file));
  } catch (const json::exception& e) {
    throw SchemaMismatch(file.string() + ": not valid JSON: " + e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw SchemaMismatch(file.string() + ": unsupported schema_version " +
                           std::to_string(version));
    }
    return manifest_from(j);
  } catch (const json::exception& e) {
    throw SchemaMismatch(file.string() + ": " + e.what());
  }
}

gen::Corpus load_corpus(const fs::path& dir) {
  const CorpusManifest m = load_manifest(dir);
  gen::Corpus corpus;
  corpus.provenance = m.provenance;
  corpus.stats = m.stats;
  std::set<std::string> ids;
  for (const auto& e : m.cases) {
    if (!ids.insert(e.id).second) throw IntegrityError(e.id, "duplicate case id");
    if (e.before_dir != "cases/" + e.id + "/before" || e.after_dir != "cases/" + e.id + "/after") {
      throw IntegrityError(e.id, "case directories do not follow the layout");
    }
    gen::TransformationCase c;
    c.id = e.id;
    c.kind = e.kind;
    c.hard = e.hard;
    c.subject = e.subject;
    c.before = read_units(dir / e.before_dir, e.before_files, e.id);
    c.after = read_units(dir / e.after_dir, e.after_files, e.id);
    for (const auto* side : {&c.before, &c.after}) {
      try {
        syntax::resolve(*side);
      } catch (const syntax::ResolutionError& err) {
        throw IntegrityError(e.id, std::string(side == &c.before ? "before" : "after") +
                                       " does not resolve: " + err.what());
      }
    }
    if (auto failure = gen::audit_case(c)) {
      throw IntegrityError(e.id, "stored files do not show a " +
                                     std::string(display_name(e.kind)) + ": " + *failure);
    }
    if (diff::diff_loc(diff::diff_programs(c.before, c.after)) != e.diff_loc) {
      throw IntegrityError(e.id, "diff_loc disagrees with the stored files");
    }
    corpus.cases.push_back(std::move(c));
  }
  std::sort(corpus.cases.begin(), corpus.cases.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return corpus;
}

std::string corpus_hash(const gen::Corpus& corpus) {
  std::vector<const gen::TransformationCase*> cases;
  for (const auto& c : corpus.cases) cases.push_back(&c);
  std::sort(cases.begin(), cases.end(), [](auto* a, auto* b) { return a->id < b->id; });
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto* c : cases) {
    h = fnv1a64(c->id + "\n" + std::string(kind_slug(c->kind)) + "\n", h);
    for (const auto* side : {&c->before, &c->after}) {
      for (const auto& unit : *side) {
        h = fnv1a64(syntax::file_name(unit) + "\n" + syntax::print(unit), h);
      }
      h = fnv1a64("\x1f", h);
    }
  }
  return hex16(h);
}

std::string directory_hash(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError(dir, "not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(fs::relative(entry.path(), dir));
  }
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& f : files) {
    h = fnv1a64(f.generic_string() + "\n", h);
    h = fnv1a64(read_file(dir / f), h);
  }
  return hex16(h);
}

void save_results(const ResultsFile& results, const fs::path& file) {
  ordered_json j;
  j["schema_version"] = results.schema_version;
  j["detector_id"] = results.detector_id;
  j["backend"] = results.backend ? ordered_json::parse(llm::to_json(*results.backend))
                                 : ordered_json(nullptr);
  j["prompt"] = results.prompt ? ordered_json(llm::prompt_slug(*results.prompt))
                               : ordered_json(nullptr);
  j["corpus_hash"] = results.corpus_hash;
  auto records = ordered_json::array();
  for (const auto& r : results.records) {
    auto predicted = ordered_json::array();
    for (auto k : r.predicted) predicted.push_back(slug_of(k));
    records.push_back({{"case_id", r.case_id},
                       {"ground_truth", slug_of(r.ground_truth)},
                       {"predicted", predicted},
                       {"unrecognized", r.unrecognized},
                       {"raw_text", r.raw_text},
                       {"error", r.error},
                       {"latency_ms", r.latency_ms},
                       {"diff_loc", r.diff_loc}});
  }
  j["records"] = records;
  if (file.has_parent_path()) make_dirs(file.parent_path());
  write_file_atomically(file, j.dump(2) + "\n");
}

ResultsFile load_results(const fs::path& file) {
  json j;
  try {
    j = json::parse(read_file(file));
  } catch (const json::exception& e) {
    throw SchemaMismatch(file.string() + ": not valid JSON: " + e.what());
  }
  try {
    ResultsFile r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kSchemaVersion) {
      throw SchemaMismatch(file.string() + ": unsupported schema_version " +
                           std::to_string(r.schema_version));
    }
    r.detector_id = j.at("detector_id").get<std::string>();
    if (!j.at("backend").is_null()) {
      try {
        r.backend = llm::backend_config_from_json(j.at("backend").dump());
      } catch (const std::invalid_argument& e) {
        throw SchemaMismatch(file.string() + ": " + e.what());
      }
    }
    if (!j.at("prompt").is_null()) {
      r.prompt = llm::prompt_from_slug(j.at("prompt").get<std::string>());
      if (!r.prompt) throw SchemaMismatch(file.string() + ": unknown prompt kind");
    }
    r.corpus_hash = j.at("corpus_hash").get<std::string>();
    std::set<std::string> ids;
    for (const auto& e : j.at("records")) {
      ResultRecord rec;
      rec.case_id = e.at("case_id").get<std::string>();
      if (!ids.insert(rec.case_id).second) throw IntegrityError(rec.case_id, "duplicate record");
      rec.ground_truth = kind_of(e.at("ground_truth"), "record " + rec.case_id);
      for (const auto& k : e.at("predicted")) {
        rec.predicted.push_back(kind_of(k, "record " + rec.case_id));
      }
      rec.unrecognized = e.at("unrecognized").get<std::vector<std::string>>();
      rec.raw_text = e.at("raw_text").get<std::string>();
      rec.error = e.at("error").get<std::string>();
      rec.latency_ms = e.at("latency_ms").get<double>();
      rec.diff_loc = e.at("diff_loc").get<int>();
      r.records.push_back(std::move(rec));
    }
    return r;
  } catch (const json::exception& e) {
    throw SchemaMismatch(file.string() + ": " + e.what());
  }
}

std::vector<eval::CaseResult> case_results(const ResultsFile& results) {
  std::vector<eval::CaseResult> out;
  for (const auto& r : results.records) {
    out.push_back({r.case_id, r.ground_truth, r.predicted, r.unrecognized, r.diff_loc});
  }
  return out;
}

}  // namespace refdet::store
