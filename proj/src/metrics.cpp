#include "putforge/metrics.hpp"

#include <algorithm>

#include "putforge/oracle.hpp"

namespace putforge {

std::int64_t cyclomatic_increment(Kind kind) {
  switch (kind) {
    case Kind::IC:
    case Kind::SC:
    case Kind::FL:
      return 1;
    case Kind::PC:  // length guard, while, mismatch if
    case Kind::CC:  // for, match if, count if
      return 3;
  }
  return 0;
}

std::int64_t cyclomatic(const InstantiatedSequence& seq) {
  std::int64_t total = 2;
  for (const auto& item : seq.items) total += cyclomatic_increment(item.kind);
  return total;
}

std::int64_t path_statements(const InstantiatedSequence& seq, std::span<const std::string> trigger) {
  if (oracle::interpret(seq, trigger) != oracle::Outcome::FailReached)
    throw Error("path_statements: argv is not a triggering input");
  auto operand = [&](const Param& p) -> std::string_view {
    if (const auto* a = std::get_if<ArgvString>(&p)) return trigger[static_cast<std::size_t>(a->index - 1)];
    if (const auto* v = std::get_if<StringLiteral>(&p)) return v->value;
    throw Error("path_statements: expected a string operand");
  };

  std::int64_t total = 1;  // argc guard
  for (const auto& item : seq.items) {
    switch (item.kind) {
      case Kind::IC:
      case Kind::SC:
        total += 1;
        break;
      case Kind::FL: {
        const auto e = std::max<std::int64_t>(std::get<IntLiteral>(item.params[0]).value, 0);
        // init + (e + 1) tests + e * (call, callee statement, increment)
        total += 1 + (e + 1) + 3 * e;
        break;
      }
      case Kind::PC: {
        const auto len = static_cast<std::int64_t>(operand(item.params[0]).size());
        const auto iterations = (len + 1) / 2;
        // guard + declaration + (iterations + 1) tests + iterations * (if, h--, l++)
        total += 2 + (iterations + 1) + 3 * iterations;
        break;
      }
      case Kind::CC: {
        const auto s = operand(item.params[0]);
        const char c = std::get<CharLiteral>(item.params[1]).value;
        const auto len = static_cast<std::int64_t>(s.size());
        const auto matches = static_cast<std::int64_t>(std::count(s.begin(), s.end(), c));
        // declaration + init + (len + 1) tests + len * (if, increment) + matches + count test
        total += 2 + (len + 1) + 2 * len + matches + 1;
        break;
      }
    }
  }
  return total + 1;  // fail()
}

Metrics compute_metrics(const InstantiatedSequence& seq, std::span<const std::string> trigger) {
  return {cyclomatic(seq), path_statements(seq, trigger), static_cast<std::int64_t>(seq.items.size())};
}

}  // namespace putforge
