#pragma once

// Transformation catalogue and the sequence types every other module works on.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace putforge {

enum class Kind { IC, SC, FL, PC, CC };

inline constexpr Kind kAllKinds[] = {Kind::IC, Kind::SC, Kind::FL, Kind::PC, Kind::CC};

std::string_view kind_name(Kind kind);
std::optional<Kind> kind_from_name(std::string_view name);

enum class SlotType { IntLike, String, Char, Int };

std::string_view slot_type_name(SlotType type);

// An input slot is the one bound to a command-line argument in generated
// batches (IC.v1, SC.s1, PC.s, CC.s). All other slots take constants.
struct ParamSlot {
  std::string_view name;
  SlotType type;
  bool input;
};

enum class HoleName { Then, Else, Body };

std::string_view hole_name(HoleName hole);

struct Signature {
  std::span<const ParamSlot> params;
  std::span<const HoleName> holes;
};

Signature arity(Kind kind);

// Printable ASCII minus space, '"', '\'' and '\\'.
bool is_allowed_char(char c);

// ---- parameters ----

struct IntLiteral {
  std::int64_t value = 0;
  bool operator==(const IntLiteral&) const = default;
};
struct StringLiteral {
  std::string value;
  bool operator==(const StringLiteral&) const = default;
};
struct CharLiteral {
  char value = 'a';
  bool operator==(const CharLiteral&) const = default;
};
// argv[index], used as a string.
struct ArgvString {
  int index = 1;
  bool operator==(const ArgvString&) const = default;
};
// atoll(argv[index]).
struct ArgvInt {
  int index = 1;
  bool operator==(const ArgvInt&) const = default;
};
// Resolved at instantiation time: a random draw for constant slots, a fresh
// argv binding for input slots.
struct Fresh {
  bool operator==(const Fresh&) const = default;
};

using Param = std::variant<IntLiteral, StringLiteral, CharLiteral, ArgvString, ArgvInt, Fresh>;

// ---- holes ----

enum class BugKind { Assert, OutOfBounds };

std::string_view bug_kind_name(BugKind kind);
std::optional<BugKind> bug_kind_from_name(std::string_view name);

struct Snippet {
  std::string text;
  bool operator==(const Snippet&) const = default;
};
struct Next {
  bool operator==(const Next&) const = default;
};
struct Fail {
  BugKind bug = BugKind::Assert;
  bool operator==(const Fail&) const = default;
};
struct Skip {
  bool operator==(const Skip&) const = default;
};

using HoleFiller = std::variant<Snippet, Next, Fail, Skip>;

struct TransformationSpec {
  Kind kind = Kind::IC;
  std::vector<Param> params;
  std::vector<HoleFiller> holes;
  bool operator==(const TransformationSpec&) const = default;
};

struct SequenceSpec {
  std::vector<TransformationSpec> items;
  bool operator==(const SequenceSpec&) const = default;
};

// Explicitly nested form: a hole holds either a leaf filler or the next
// transformation itself.
struct NestedTransformation;
using NestedHole = std::variant<Snippet, Fail, Skip, std::shared_ptr<NestedTransformation>>;

struct NestedTransformation {
  Kind kind = Kind::IC;
  std::vector<Param> params;
  std::vector<NestedHole> holes;
};

struct Violation {
  // 0-based item index, or -1 for sequence-level problems.
  int item = -1;
  std::string message;
  bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

// Every arity, typing, Next-placement and Fail-placement problem. Never throws.
std::vector<Violation> validate(const SequenceSpec& seq);

// Replaces each Next hole by the following item.
NestedTransformation nest(const SequenceSpec& seq);

// Inverse of nest(). Violations (two nested holes in one node, ...) are appended to
// `violations` and the walk continues into the first nested hole.
SequenceSpec flatten(const NestedTransformation& root, std::vector<Violation>& violations);

std::vector<Violation> validate(const NestedTransformation& root);

// Fully concrete chain: no Fresh params, Next links explicit by position.
struct InstantiatedSequence {
  std::vector<TransformationSpec> items;
  std::vector<int> name_suffixes;
  int argv_arity = 0;
  bool operator==(const InstantiatedSequence&) const = default;
};

// Index of the hole that continues the chain (Next, or Fail for the last
// item). Returns -1 if absent.
int path_hole(const TransformationSpec& item);

BugKind bug_kind_of(const InstantiatedSequence& seq);

struct Metrics {
  std::int64_t cyclomatic = 0;
  std::int64_t path_statements = 0;
  std::int64_t transformation_count = 0;
  bool operator==(const Metrics&) const = default;
};

struct Put {
  std::string source;
  int bug_line = 0;
  BugKind bug_kind = BugKind::Assert;
  int argv_arity = 0;
  std::vector<std::string> trigger;
  std::optional<std::vector<std::string>> non_trigger;
  Metrics metrics;
  std::uint64_t seed = 0;
  SequenceSpec spec;
  InstantiatedSequence instance;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

}  // namespace putforge
