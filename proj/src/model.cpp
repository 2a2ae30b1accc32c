#include "putforge/model.hpp"

#include <array>
#include <limits>

namespace putforge {

namespace {

constexpr std::array<ParamSlot, 2> kIcParams{{{"v1", SlotType::IntLike, true}, {"v2", SlotType::IntLike, false}}};
constexpr std::array<ParamSlot, 2> kScParams{{{"s1", SlotType::String, true}, {"s2", SlotType::String, false}}};
constexpr std::array<ParamSlot, 1> kFlParams{{{"e", SlotType::IntLike, false}}};
constexpr std::array<ParamSlot, 2> kPcParams{{{"s", SlotType::String, true}, {"n", SlotType::Int, false}}};
constexpr std::array<ParamSlot, 3> kCcParams{
    {{"s", SlotType::String, true}, {"c", SlotType::Char, false}, {"n", SlotType::Int, false}}};

constexpr std::array<HoleName, 2> kBranchHoles{HoleName::Then, HoleName::Else};
constexpr std::array<HoleName, 1> kBodyHole{HoleName::Body};

std::string param_type_name(const Param& p) {
  struct V {
    std::string operator()(const IntLiteral&) const { return "int-like"; }
    std::string operator()(const StringLiteral&) const { return "string"; }
    std::string operator()(const CharLiteral&) const { return "char"; }
    std::string operator()(const ArgvString&) const { return "string"; }
    std::string operator()(const ArgvInt&) const { return "int-like"; }
    std::string operator()(const Fresh&) const { return "fresh"; }
  };
  return std::visit(V{}, p);
}

bool printable_string(const std::string& s) {
  for (unsigned char c : s)
    if (c < 0x20 || c > 0x7e) return false;
  return true;
}

void check_param(const ParamSlot& slot, const Param& p, Kind kind, int item, std::vector<Violation>& out) {
  auto mismatch = [&] {
    out.push_back({item, std::string(slot.name) + " requires " + std::string(slot_type_name(slot.type)) + ", got " +
                             param_type_name(p)});
  };
  if (std::holds_alternative<Fresh>(p)) return;
  const bool is_argv = std::holds_alternative<ArgvString>(p) || std::holds_alternative<ArgvInt>(p);
  switch (slot.type) {
    case SlotType::IntLike:
    case SlotType::Int:
      if (!std::holds_alternative<IntLiteral>(p) && !std::holds_alternative<ArgvInt>(p)) return mismatch();
      break;
    case SlotType::String:
      if (!std::holds_alternative<StringLiteral>(p) && !std::holds_alternative<ArgvString>(p)) return mismatch();
      break;
    case SlotType::Char:
      if (!std::holds_alternative<CharLiteral>(p)) return mismatch();
      break;
  }
  if (is_argv) {
    if (!slot.input) {
      out.push_back({item, std::string(slot.name) + " accepts constants only, got an argv reference"});
      return;
    }
    const int idx = std::holds_alternative<ArgvInt>(p) ? std::get<ArgvInt>(p).index : std::get<ArgvString>(p).index;
    if (idx < 1) out.push_back({item, std::string(slot.name) + " argv index must be >= 1"});
    return;
  }
  if (slot.type == SlotType::Int) {
    const auto v = std::get<IntLiteral>(p).value;
    if (v < std::numeric_limits<std::int32_t>::min() || v > std::numeric_limits<std::int32_t>::max())
      out.push_back({item, std::string(slot.name) + " literal out of int range"});
    else if (kind == Kind::PC && v < 1)
      out.push_back({item, "n must be >= 1 for PC"});
  }
  if (slot.type == SlotType::Char && !is_allowed_char(std::get<CharLiteral>(p).value))
    out.push_back({item, std::string(slot.name) + " char literal outside the printable set"});
  if (slot.type == SlotType::String && !printable_string(std::get<StringLiteral>(p).value))
    out.push_back({item, std::string(slot.name) + " string literal must be printable ASCII"});
}

}  // namespace

std::string_view kind_name(Kind kind) {
  switch (kind) {
    case Kind::IC: return "IC";
    case Kind::SC: return "SC";
    case Kind::FL: return "FL";
    case Kind::PC: return "PC";
    case Kind::CC: return "CC";
  }
  return "?";
}

std::optional<Kind> kind_from_name(std::string_view name) {
  for (Kind k : kAllKinds)
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

std::string_view slot_type_name(SlotType type) {
  switch (type) {
    case SlotType::IntLike: return "int-like";
    case SlotType::String: return "string";
    case SlotType::Char: return "char";
    case SlotType::Int: return "int";
  }
  return "?";
}

std::string_view hole_name(HoleName hole) {
  switch (hole) {
    case HoleName::Then: return "T";
    case HoleName::Else: return "E";
    case HoleName::Body: return "B";
  }
  return "?";
}

Signature arity(Kind kind) {
  switch (kind) {
    case Kind::IC: return {kIcParams, kBranchHoles};
    case Kind::SC: return {kScParams, kBranchHoles};
    case Kind::FL: return {kFlParams, kBodyHole};
    case Kind::PC: return {kPcParams, kBodyHole};
    case Kind::CC: return {kCcParams, kBranchHoles};
  }
  return {};
}

bool is_allowed_char(char c) {
  return c > ' ' && c <= '~' && c != '"' && c != '\'' && c != '\\';
}

std::string_view bug_kind_name(BugKind kind) { return kind == BugKind::Assert ? "assert" : "oob"; }

std::optional<BugKind> bug_kind_from_name(std::string_view name) {
  if (name == "assert") return BugKind::Assert;
  if (name == "oob") return BugKind::OutOfBounds;
  return std::nullopt;
}

std::string to_string(const Violation& v) {
  if (v.item < 0) return v.message;
  return "item " + std::to_string(v.item + 1) + ": " + v.message;
}

std::vector<Violation> validate(const SequenceSpec& seq) {
  std::vector<Violation> out;
  if (seq.items.empty()) {
    out.push_back({-1, "empty sequence"});
    return out;
  }
  for (std::size_t i = 0; i < seq.items.size(); ++i) {
    const auto& item = seq.items[i];
    const int idx = static_cast<int>(i);
    const auto sig = arity(item.kind);
    if (item.params.size() != sig.params.size())
      out.push_back({idx, std::string(kind_name(item.kind)) + " expects " + std::to_string(sig.params.size()) +
                              " parameters, got " + std::to_string(item.params.size())});
    if (item.holes.size() != sig.holes.size())
      out.push_back({idx, std::string(kind_name(item.kind)) + " expects " + std::to_string(sig.holes.size()) +
                              " holes, got " + std::to_string(item.holes.size())});
    for (std::size_t p = 0; p < item.params.size() && p < sig.params.size(); ++p)
      check_param(sig.params[p], item.params[p], item.kind, idx, out);

    int nexts = 0, fails = 0;
    for (const auto& h : item.holes) {
      nexts += std::holds_alternative<Next>(h);
      fails += std::holds_alternative<Fail>(h);
    }
    const bool last = i + 1 == seq.items.size();
    if (!last && nexts != 1)
      out.push_back({idx, "non-last item needs exactly one NEXT hole, got " + std::to_string(nexts)});
    if (last && nexts != 0) out.push_back({idx, "last item must not contain NEXT"});
    if (!last && fails != 0) out.push_back({idx, "FAIL only allowed in the last item"});
    if (last && fails != 1)
      out.push_back({idx, "last item needs exactly one FAIL hole, got " + std::to_string(fails)});
  }
  return out;
}

NestedTransformation nest(const SequenceSpec& seq) {
  if (seq.items.empty()) throw Error("cannot nest an empty sequence");
  std::shared_ptr<NestedTransformation> inner;
  for (auto it = seq.items.rbegin(); it != seq.items.rend(); ++it) {
    auto node = std::make_shared<NestedTransformation>();
    node->kind = it->kind;
    node->params = it->params;
    for (const auto& h : it->holes) {
      if (std::holds_alternative<Next>(h)) {
        if (inner)
          node->holes.emplace_back(inner);
        else
          node->holes.emplace_back(Skip{});
      } else if (const auto* s = std::get_if<Snippet>(&h)) {
        node->holes.emplace_back(*s);
      } else if (const auto* f = std::get_if<Fail>(&h)) {
        node->holes.emplace_back(*f);
      } else {
        node->holes.emplace_back(Skip{});
      }
    }
    inner = node;
  }
  return *inner;
}

SequenceSpec flatten(const NestedTransformation& root, std::vector<Violation>& violations) {
  SequenceSpec seq;
  const NestedTransformation* node = &root;
  while (node) {
    TransformationSpec item{node->kind, node->params, {}};
    const NestedTransformation* next = nullptr;
    const int idx = static_cast<int>(seq.items.size());
    for (const auto& h : node->holes) {
      if (const auto* child = std::get_if<std::shared_ptr<NestedTransformation>>(&h)) {
        if (next) {
          violations.push_back({idx, "more than one nested transformation"});
          item.holes.emplace_back(Skip{});
          continue;
        }
        next = child->get();
        item.holes.emplace_back(Next{});
      } else if (const auto* s = std::get_if<Snippet>(&h)) {
        item.holes.emplace_back(*s);
      } else if (const auto* f = std::get_if<Fail>(&h)) {
        item.holes.emplace_back(*f);
      } else {
        item.holes.emplace_back(Skip{});
      }
    }
    seq.items.push_back(std::move(item));
    node = next;
  }
  return seq;
}

std::vector<Violation> validate(const NestedTransformation& root) {
  std::vector<Violation> out;
  auto flat = flatten(root, out);
  auto rest = validate(flat);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

int path_hole(const TransformationSpec& item) {
  for (std::size_t i = 0; i < item.holes.size(); ++i)
    if (std::holds_alternative<Next>(item.holes[i]) || std::holds_alternative<Fail>(item.holes[i]))
      return static_cast<int>(i);
  return -1;
}

BugKind bug_kind_of(const InstantiatedSequence& seq) {
  for (const auto& item : seq.items)
    for (const auto& h : item.holes)
      if (const auto* f = std::get_if<Fail>(&h)) return f->bug;
  return BugKind::Assert;
}

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error([&] {
        std::string msg = "invalid sequence";
        for (const auto& v : violations) msg += "; " + to_string(v);
        return msg;
      }()),
      violations_(std::move(violations)) {}

}  // namespace putforge
