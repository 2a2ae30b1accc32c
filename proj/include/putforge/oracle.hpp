#pragma once

// Reaching-input derivation and a reference interpreter for the templates.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "putforge/model.hpp"

namespace putforge::oracle {

struct IntEquals {
  std::int64_t value;
  bool operator==(const IntEquals&) const = default;
};
struct IntNotEquals {
  std::int64_t value;
  bool operator==(const IntNotEquals&) const = default;
};
struct StrEquals {
  std::string value;
  bool operator==(const StrEquals&) const = default;
};
struct StrNotEquals {
  std::string value;
  bool operator==(const StrNotEquals&) const = default;
};
struct PalindromeMinLen {
  std::int64_t length;
  bool operator==(const PalindromeMinLen&) const = default;
};
// Negation of PalindromeMinLen; only produced when building non-triggering inputs.
struct NotPalindromeMinLen {
  std::int64_t length;
  bool operator==(const NotPalindromeMinLen&) const = default;
};
struct CharCountEquals {
  char c;
  std::int64_t count;
  bool operator==(const CharCountEquals&) const = default;
};
struct CharCountNotEquals {
  char c;
  std::int64_t count;
  bool operator==(const CharCountNotEquals&) const = default;
};
struct Unconstrained {
  bool operator==(const Unconstrained&) const = default;
};

using Atom = std::variant<IntEquals, IntNotEquals, StrEquals, StrNotEquals, PalindromeMinLen, NotPalindromeMinLen,
                          CharCountEquals, CharCountNotEquals, Unconstrained>;

std::string describe(const Atom& atom);
bool holds(const Atom& atom, std::string_view arg);
Atom negate(const Atom& atom);

// One atom on one argv index. argv_index == 0 means the operand is a literal
// (stored in `literal`), so the atom is a constant condition.
struct Constraint {
  int item = 0;
  int argv_index = 0;
  std::string literal;
  Atom atom = Unconstrained{};
  bool operator==(const Constraint&) const = default;
};

// Condition for entering `hole` (0-based hole index) of `item`.
std::vector<Constraint> constraints_for(const TransformationSpec& item, int hole, int item_index = 0);

// Atoms along the path to the fail() hole, outermost first.
std::vector<Constraint> trigger_path(const InstantiatedSequence& seq);

class ConflictError : public Error {
 public:
  ConflictError(const std::string& message, std::vector<int> items);
  // 0-based indices of the offending transformations.
  const std::vector<int>& items() const { return items_; }

 private:
  std::vector<int> items_;
};

struct Inputs {
  std::vector<std::string> trigger;
  // Absent when no input can avoid the bug (no input-dependent atom on the path).
  std::optional<std::vector<std::string>> non_trigger;
};

// Throws ConflictError when the trigger path is unsatisfiable.
Inputs derive_inputs(const InstantiatedSequence& seq);

struct LeafInput {
  int item = 0;
  int hole = 0;
  std::optional<std::vector<std::string>> argv;  // nullopt when unreachable
};

// A reaching input for every hole that is not NEXT, in source order.
std::vector<LeafInput> leaf_inputs(const InstantiatedSequence& seq);

// Some string satisfying every atom, trying `preferred` first. nullopt when the
// rule-based candidates all fail.
std::optional<std::string> solve(const std::vector<Atom>& atoms, const std::vector<std::string>& preferred = {});

enum class Outcome { FailReached, CleanExit, InsufficientArgs };

std::string_view outcome_name(Outcome outcome);

// C atoll as implemented by glibc (strtoll base 10, saturating).
std::int64_t c_atoll(std::string_view s);

// argv excludes the program name: argv[0] here is the C program's argv[1].
Outcome interpret(const InstantiatedSequence& seq, std::span<const std::string> argv);

// True when argv satisfies the argc guard and every trigger-path atom.
bool satisfies_trigger_path(const InstantiatedSequence& seq, std::span<const std::string> argv);

class BudgetError : public Error {
 public:
  using Error::Error;
};

struct BruteForceResult {
  bool confirmed = false;
  std::optional<std::vector<std::string>> counterexample;
  std::string reason;
  std::size_t enumerated = 0;
  std::vector<std::vector<std::string>> failing;
};

// Enumerates every argv vector of length argv_arity over `alphabet` strings up
// to max_len (plus a small integer window around IC constants on int slots) and
// checks that interpret() fails exactly on the constraint-satisfying vectors
// and on the derived trigger. Throws BudgetError outside alphabet <= 4,
// max_len <= 4, argv_arity <= 3.
BruteForceResult brute_force_check(const InstantiatedSequence& seq, std::string_view alphabet, int max_len);

}  // namespace putforge::oracle
