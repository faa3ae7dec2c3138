#include <algorithm>
#include <cstdio>
#include <future>

#include "refdet/generate.hpp"
#include "refdet/resolve.hpp"
#include "refdet/version.hpp"

namespace refdet::gen {

std::vector<KindStats> Corpus::exhausted() const {
  std::vector<KindStats> out;
  for (const auto& s : stats) {
    if (s.budget_exhausted()) out.push_back(s);
  }
  return out;
}

std::string case_id(std::uint64_t seed, RefactoringKind kind, int attempt) {
  const std::string slug(kind_slug(kind));
  const std::uint64_t h = splitmix64(
      fnv1a64(slug + ":" + std::to_string(attempt)) ^ splitmix64(seed));
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "-%04d-%08x", attempt,
                static_cast<unsigned>(h & 0xffffffffULL));
  return slug + buffer;
}

namespace {

struct KindResult {
  std::vector<TransformationCase> cases;
  KindStats stats;
};

KindResult build_kind(const GeneratorConfig& config, int per_kind, RefactoringKind kind) {
  KindResult result;
  result.stats.kind = kind;
  result.stats.requested = per_kind;
  const std::string slug(kind_slug(kind));
  const int budget = kAttemptBudgetFactor * per_kind;
  for (int attempt = 0; attempt < budget && result.stats.accepted < per_kind; ++attempt) {
    ++result.stats.attempts;
    RandomStream stream = RandomStream::derive(config.seed, slug, attempt);
    syntax::Program program;
    try {
      program = generate_program(config, stream);
    } catch (const GenerationExhausted&) {
      ++result.stats.generation_failures;
      continue;
    }
    ApplyResult applied = apply_refactoring(program, kind, stream);
    auto* c = std::get_if<TransformationCase>(&applied);
    if (!c) {
      ++result.stats.not_applicable;
      continue;
    }
    if (!syntax::resolves(c->after) || c->before == c->after) {
      ++result.stats.resolution_rejects;
      continue;
    }
    if (audit_case(*c)) {
      ++result.stats.audit_rejects;
      continue;
    }
    c->id = case_id(config.seed, kind, attempt);
    result.cases.push_back(std::move(*c));
    ++result.stats.accepted;
  }
  return result;
}

}  // namespace

Corpus build_corpus(const GeneratorConfig& config, int per_kind,
                    std::vector<RefactoringKind> kinds) {
  config.validate();
  if (per_kind < 1) throw std::invalid_argument("per_kind must be at least 1");
  if (kinds.empty()) {
    const auto all = generated_kinds();
    kinds.assign(all.begin(), all.end());
  }
  for (auto kind : kinds) {
    if (!is_generated_kind(kind)) throw InvalidKind(kind);
  }
  std::sort(kinds.begin(), kinds.end());
  kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());

  std::vector<std::future<KindResult>> jobs;
  for (auto kind : kinds) {
    jobs.push_back(std::async(std::launch::async, build_kind, std::cref(config),
                              per_kind, kind));
  }
  Corpus corpus;
  corpus.provenance = {config.seed, config, per_kind, kinds, std::string(kVersion)};
  for (auto& job : jobs) {
    KindResult r = job.get();
    corpus.stats.push_back(r.stats);
    for (auto& c : r.cases) corpus.cases.push_back(std::move(c));
  }
  std::sort(corpus.cases.begin(), corpus.cases.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  return corpus;
}

}  // namespace refdet::gen
