#pragma once

#include <optional>
#include <string>

#include "putforge/model.hpp"

namespace putforge {

struct EmitOptions {
  // Replaces the bug kind written in the sequence.
  std::optional<BugKind> bug_override;
};

struct EmittedSource {
  std::string source;
  int bug_line = 0;  // 1-based line of the fail statement
  BugKind bug_kind = BugKind::Assert;
};

// Includes, do_something (only when an FL is present), main with the argc
// guard, then the nested templates. Deterministic; every hole body is braced.
EmittedSource emit(const InstantiatedSequence& seq, const EmitOptions& opts = {});

std::string do_something_definition();

// C rendering helpers, exposed for tests.
std::string c_int_literal(std::int64_t value);
std::string c_string_literal(const std::string& value);

}  // namespace putforge
