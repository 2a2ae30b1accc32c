#pragma once

// Textual transformation-sequence language.
//
//   sequence    := application+
//   application := KIND '(' arg (',' arg)* ')'
//   arg         := INT | CHAR | STRING | argv[INT] | atoll(argv[INT]) | '?'
//                | NEXT | FAIL | FAIL_OOB | SKIP | '{' raw-C '}' | application
//
// Parameters come first, holes after; for two-hole kinds the holes are T then E.
// A nested application in a hole is the explicit form of NEXT.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "putforge/model.hpp"

namespace putforge::dsl {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Throws ParseError on syntax errors and ValidationError when the result does
// not validate.
SequenceSpec parse(std::string_view text);

// Canonical single-line rendering. Throws ValidationError for invalid input.
std::string print(const SequenceSpec& seq);

std::string print_param(const Param& p);

struct SpecLine {
  int line = 0;
  std::optional<SequenceSpec> spec;
  std::string error;
};

// One sequence per line, '#' comments, blank lines skipped.
std::vector<SpecLine> parse_file(std::string_view text);

}  // namespace putforge::dsl
