#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "refdet/ast.hpp"
#include "refdet/catalog.hpp"

namespace refdet::structural {

// A class, or a member of it when `member` is non-empty.
struct Locus {
  std::string class_name;
  std::string member;
  friend bool operator==(const Locus&, const Locus&) = default;
};

struct Detection {
  RefactoringKind kind;
  // Name of the refactored element in the before version.
  std::string element;
  // New name for renames; the added or removed parameter for parameter kinds.
  std::string new_name;
  Locus source;                // in the before version
  std::vector<Locus> targets;  // in the after version
  std::string rationale;
  friend bool operator==(const Detection&, const Detection&) = default;
};

class UnresolvedInput : public std::runtime_error {
 public:
  UnresolvedInput(const std::string& side, const std::string& reason);
};

/// Rule pipeline, in priority order: class renames, pull ups and push
/// downs, moves, member renames, parameter changes, field encapsulation.
/// A member consumed by one rule is invisible to later rules.
std::vector<Detection> detect(const syntax::Program& before, const syntax::Program& after);

/// One sentence naming the kind, the element and where it went.
std::string explain(const Detection& d);

}  // namespace refdet::structural
