#include "putforge/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <set>

namespace putforge::oracle {

namespace {

// Longest witness string we are willing to build.
constexpr std::int64_t kMaxWitnessLength = 1 << 20;

bool is_palindrome(std::string_view s) {
  if (s.empty()) return true;
  std::size_t l = 0, h = s.size() - 1;
  while (l < h)
    if (s[l++] != s[h--]) return false;
  return true;
}

std::int64_t count_char(std::string_view s, char c) {
  return static_cast<std::int64_t>(std::count(s.begin(), s.end(), c));
}

std::optional<std::string> repeat(char c, std::int64_t n) {
  if (n < 0 || n > kMaxWitnessLength) return std::nullopt;
  return std::string(static_cast<std::size_t>(n), c);
}

std::string int_neighbour(std::int64_t v) {
  return std::to_string(v == std::numeric_limits<std::int64_t>::max() ? v - 1 : v + 1);
}

// Operand of an input slot: argv index, or the literal text.
void bind_operand(const Param& p, Constraint& c) {
  if (const auto* a = std::get_if<ArgvInt>(&p)) {
    c.argv_index = a->index;
  } else if (const auto* a = std::get_if<ArgvString>(&p)) {
    c.argv_index = a->index;
  } else if (const auto* v = std::get_if<IntLiteral>(&p)) {
    c.literal = std::to_string(v->value);
  } else if (const auto* v = std::get_if<StringLiteral>(&p)) {
    c.literal = v->value;
  } else {
    throw Error("oracle: input slot is not instantiated");
  }
}

std::int64_t int_param(const Param& p) {
  if (const auto* v = std::get_if<IntLiteral>(&p)) return v->value;
  throw Error("oracle: expected an integer literal");
}

std::string string_param(const Param& p) {
  if (const auto* v = std::get_if<StringLiteral>(&p)) return v->value;
  throw Error("oracle: expected a string literal");
}

char char_param(const Param& p) {
  if (const auto* v = std::get_if<CharLiteral>(&p)) return v->value;
  throw Error("oracle: expected a char literal");
}

// The preferred witness when an atom has been negated to build a
// non-triggering input. Keyed on the original (un-negated) atom.
std::optional<std::string> negation_witness(const Atom& original) {
  struct V {
    std::optional<std::string> operator()(const IntEquals& a) const { return int_neighbour(a.value); }
    std::optional<std::string> operator()(const IntNotEquals& a) const { return std::to_string(a.value); }
    std::optional<std::string> operator()(const StrEquals& a) const { return a.value + "x"; }
    std::optional<std::string> operator()(const StrNotEquals& a) const { return a.value; }
    std::optional<std::string> operator()(const PalindromeMinLen& a) const {
      auto tail = repeat('b', std::max<std::int64_t>(a.length - 1, 0));
      if (!tail) return std::nullopt;
      return "ab" + *tail;
    }
    std::optional<std::string> operator()(const NotPalindromeMinLen& a) const { return repeat('a', a.length); }
    std::optional<std::string> operator()(const CharCountEquals& a) const {
      return a.count >= 1 ? std::string() : std::string(1, a.c);
    }
    std::optional<std::string> operator()(const CharCountNotEquals& a) const { return repeat(a.c, a.count); }
    std::optional<std::string> operator()(const Unconstrained&) const { return std::nullopt; }
  };
  return std::visit(V{}, original);
}

bool flippable(const Constraint& c) {
  return c.argv_index > 0 && !std::holds_alternative<Unconstrained>(c.atom);
}

struct Assignment {
  std::optional<std::vector<std::string>> argv;
  std::string conflict;
  std::vector<int> conflict_items;
};

// Builds one argv vector satisfying every constraint. `preferred` maps an
// argv index to the candidate tried first on it.
Assignment assign(int arity, const std::vector<Constraint>& constraints, const std::map<int, std::string>& preferred) {
  Assignment out;
  for (const auto& c : constraints) {
    if (c.argv_index == 0 && !holds(c.atom, c.literal)) {
      out.conflict = "item " + std::to_string(c.item + 1) + ": " + describe(c.atom) + " is false for the literal \"" +
                     c.literal + "\"; the hole is unreachable";
      out.conflict_items = {c.item};
      return out;
    }
    if (c.argv_index > arity) {
      out.conflict = "item " + std::to_string(c.item + 1) + " references argv[" + std::to_string(c.argv_index) +
                     "] beyond the argument count";
      out.conflict_items = {c.item};
      return out;
    }
  }
  std::vector<std::string> argv(static_cast<std::size_t>(arity));
  for (int idx = 1; idx <= arity; ++idx) {
    std::vector<Atom> atoms;
    std::vector<int> items;
    for (const auto& c : constraints)
      if (c.argv_index == idx) {
        atoms.push_back(c.atom);
        items.push_back(c.item);
      }
    std::vector<std::string> pref;
    if (auto it = preferred.find(idx); it != preferred.end()) pref.push_back(it->second);
    auto value = solve(atoms, pref);
    if (!value) {
      out.conflict = "argv[" + std::to_string(idx) + "]: constraints cannot be satisfied together";
      out.conflict_items = items;
      for (std::size_t a = 0; a < atoms.size(); ++a)
        for (std::size_t b = a + 1; b < atoms.size(); ++b)
          if (!solve({atoms[a], atoms[b]})) {
            out.conflict = "argv[" + std::to_string(idx) + "]: " + describe(atoms[a]) + " from item " +
                           std::to_string(items[a] + 1) + " conflicts with " + describe(atoms[b]) + " from item " +
                           std::to_string(items[b] + 1);
            out.conflict_items = {items[a], items[b]};
            return out;
          }
      return out;
    }
    argv[static_cast<std::size_t>(idx - 1)] = std::move(*value);
  }
  out.argv = std::move(argv);
  return out;
}

}  // namespace

std::string describe(const Atom& atom) {
  struct V {
    std::string operator()(const IntEquals& a) const { return "IntEquals(" + std::to_string(a.value) + ")"; }
    std::string operator()(const IntNotEquals& a) const { return "IntNotEquals(" + std::to_string(a.value) + ")"; }
    std::string operator()(const StrEquals& a) const { return "StrEquals(\"" + a.value + "\")"; }
    std::string operator()(const StrNotEquals& a) const { return "StrNotEquals(\"" + a.value + "\")"; }
    std::string operator()(const PalindromeMinLen& a) const {
      return "PalindromeMinLen(" + std::to_string(a.length) + ")";
    }
    std::string operator()(const NotPalindromeMinLen& a) const {
      return "NotPalindromeMinLen(" + std::to_string(a.length) + ")";
    }
    std::string operator()(const CharCountEquals& a) const {
      return std::string("CharCountEquals('") + a.c + "', " + std::to_string(a.count) + ")";
    }
    std::string operator()(const CharCountNotEquals& a) const {
      return std::string("CharCountNotEquals('") + a.c + "', " + std::to_string(a.count) + ")";
    }
    std::string operator()(const Unconstrained&) const { return "Unconstrained"; }
  };
  return std::visit(V{}, atom);
}

bool holds(const Atom& atom, std::string_view arg) {
  struct V {
    std::string_view s;
    bool operator()(const IntEquals& a) const { return c_atoll(s) == a.value; }
    bool operator()(const IntNotEquals& a) const { return c_atoll(s) != a.value; }
    bool operator()(const StrEquals& a) const { return s == a.value; }
    bool operator()(const StrNotEquals& a) const { return s != a.value; }
    bool operator()(const PalindromeMinLen& a) const {
      return static_cast<std::int64_t>(s.size()) >= a.length && is_palindrome(s);
    }
    bool operator()(const NotPalindromeMinLen& a) const {
      return !(static_cast<std::int64_t>(s.size()) >= a.length && is_palindrome(s));
    }
    bool operator()(const CharCountEquals& a) const { return count_char(s, a.c) == a.count; }
    bool operator()(const CharCountNotEquals& a) const { return count_char(s, a.c) != a.count; }
    bool operator()(const Unconstrained&) const { return true; }
  };
  return std::visit(V{arg}, atom);
}

Atom negate(const Atom& atom) {
  struct V {
    Atom operator()(const IntEquals& a) const { return IntNotEquals{a.value}; }
    Atom operator()(const IntNotEquals& a) const { return IntEquals{a.value}; }
    Atom operator()(const StrEquals& a) const { return StrNotEquals{a.value}; }
    Atom operator()(const StrNotEquals& a) const { return StrEquals{a.value}; }
    Atom operator()(const PalindromeMinLen& a) const { return NotPalindromeMinLen{a.length}; }
    Atom operator()(const NotPalindromeMinLen& a) const { return PalindromeMinLen{a.length}; }
    Atom operator()(const CharCountEquals& a) const { return CharCountNotEquals{a.c, a.count}; }
    Atom operator()(const CharCountNotEquals& a) const { return CharCountEquals{a.c, a.count}; }
    Atom operator()(const Unconstrained&) const { throw Error("Unconstrained has no negation"); }
  };
  return std::visit(V{}, atom);
}

std::vector<Constraint> constraints_for(const TransformationSpec& item, int hole, int item_index) {
  Constraint c;
  c.item = item_index;
  const bool then_branch = hole == 0;
  switch (item.kind) {
    case Kind::IC: {
      bind_operand(item.params[0], c);
      const auto v = int_param(item.params[1]);
      c.atom = then_branch ? Atom{IntEquals{v}} : Atom{IntNotEquals{v}};
      break;
    }
    case Kind::SC: {
      bind_operand(item.params[0], c);
      auto v = string_param(item.params[1]);
      c.atom = then_branch ? Atom{StrEquals{v}} : Atom{StrNotEquals{v}};
      break;
    }
    case Kind::FL:
      c.atom = Unconstrained{};
      break;
    case Kind::PC:
      bind_operand(item.params[0], c);
      c.atom = PalindromeMinLen{int_param(item.params[1])};
      break;
    case Kind::CC: {
      bind_operand(item.params[0], c);
      const char ch = char_param(item.params[1]);
      const auto n = int_param(item.params[2]);
      c.atom = then_branch ? Atom{CharCountEquals{ch, n}} : Atom{CharCountNotEquals{ch, n}};
      break;
    }
  }
  return {c};
}

std::vector<Constraint> trigger_path(const InstantiatedSequence& seq) {
  std::vector<Constraint> out;
  for (std::size_t k = 0; k < seq.items.size(); ++k) {
    const int hole = path_hole(seq.items[k]);
    if (hole < 0) throw Error("oracle: item " + std::to_string(k + 1) + " has no NEXT/FAIL hole");
    auto cs = constraints_for(seq.items[k], hole, static_cast<int>(k));
    out.insert(out.end(), cs.begin(), cs.end());
  }
  return out;
}

ConflictError::ConflictError(const std::string& message, std::vector<int> items)
    : Error("conflict: " + message), items_(std::move(items)) {}

std::optional<std::string> solve(const std::vector<Atom>& atoms, const std::vector<std::string>& preferred) {
  std::vector<std::string> candidates = preferred;
  for (const auto& a : atoms) {
    if (const auto* x = std::get_if<IntEquals>(&a)) candidates.push_back(std::to_string(x->value));
    if (const auto* x = std::get_if<StrEquals>(&a)) candidates.push_back(x->value);
    if (const auto* x = std::get_if<PalindromeMinLen>(&a))
      if (auto w = repeat('a', x->length)) candidates.push_back(*w);
    if (const auto* x = std::get_if<CharCountEquals>(&a))
      if (auto w = repeat(x->c, x->count)) candidates.push_back(*w);
  }
  candidates.emplace_back();
  for (const auto& a : atoms) {
    if (const auto* x = std::get_if<IntNotEquals>(&a)) candidates.push_back(int_neighbour(x->value));
    if (const auto* x = std::get_if<StrNotEquals>(&a)) candidates.push_back(x->value + "x");
    if (const auto* x = std::get_if<CharCountNotEquals>(&a))
      if (auto w = repeat(x->c, x->count + 1)) candidates.push_back(*w);
    if (const auto* x = std::get_if<NotPalindromeMinLen>(&a))
      if (auto w = negation_witness(PalindromeMinLen{x->length})) candidates.push_back(*w);
  }
  for (int i = 1; i <= 64; ++i) candidates.push_back(std::to_string(i));
  for (const auto& cand : candidates)
    if (std::all_of(atoms.begin(), atoms.end(), [&](const Atom& a) { return holds(a, cand); })) return cand;
  return std::nullopt;
}

Inputs derive_inputs(const InstantiatedSequence& seq) {
  const auto path = trigger_path(seq);
  auto trig = assign(seq.argv_arity, path, {});
  if (!trig.argv) throw ConflictError(trig.conflict, trig.conflict_items);
  if (interpret(seq, *trig.argv) != Outcome::FailReached) {
    std::vector<int> all(seq.items.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    throw ConflictError("derived trigger does not reach fail()", all);
  }
  Inputs out;
  out.trigger = std::move(*trig.argv);

  for (std::size_t p = 0; p < path.size(); ++p) {
    if (!flippable(path[p])) continue;
    std::vector<Constraint> cs;
    for (std::size_t q = 0; q < p; ++q)
      if (path[q].argv_index > 0) cs.push_back(path[q]);
    Constraint flipped = path[p];
    flipped.atom = negate(path[p].atom);
    cs.push_back(flipped);
    std::map<int, std::string> pref;
    if (auto w = negation_witness(path[p].atom)) pref[flipped.argv_index] = *w;
    auto attempt = assign(seq.argv_arity, cs, pref);
    if (attempt.argv && interpret(seq, *attempt.argv) == Outcome::CleanExit) {
      out.non_trigger = std::move(*attempt.argv);
      break;
    }
  }
  return out;
}

std::vector<LeafInput> leaf_inputs(const InstantiatedSequence& seq) {
  std::vector<LeafInput> out;
  std::vector<Constraint> prefix;
  for (std::size_t k = 0; k < seq.items.size(); ++k) {
    const auto& item = seq.items[k];
    for (std::size_t h = 0; h < item.holes.size(); ++h) {
      if (std::holds_alternative<Next>(item.holes[h])) continue;
      auto cs = prefix;
      auto own = constraints_for(item, static_cast<int>(h), static_cast<int>(k));
      cs.insert(cs.end(), own.begin(), own.end());
      out.push_back({static_cast<int>(k), static_cast<int>(h), assign(seq.argv_arity, cs, {}).argv});
    }
    const int hole = path_hole(item);
    if (hole < 0 || std::holds_alternative<Fail>(item.holes[static_cast<std::size_t>(hole)])) break;
    auto own = constraints_for(item, hole, static_cast<int>(k));
    prefix.insert(prefix.end(), own.begin(), own.end());
  }
  return out;
}

std::string_view outcome_name(Outcome outcome) {
  switch (outcome) {
    case Outcome::FailReached: return "FailReached";
    case Outcome::CleanExit: return "CleanExit";
    case Outcome::InsufficientArgs: return "InsufficientArgs";
  }
  return "?";
}

std::int64_t c_atoll(std::string_view s) {
  std::size_t i = 0;
  auto space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r'; };
  while (i < s.size() && space(s[i])) ++i;
  bool negative = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) negative = s[i++] == '-';
  // Accumulate as a negative number so INT64_MIN is representable.
  std::int64_t acc = 0;
  constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  bool overflow = false;
  for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
    const int d = s[i] - '0';
    if (overflow) continue;
    if (acc < (kMin + d) / 10) {
      overflow = true;
      continue;
    }
    acc = acc * 10 - d;
  }
  if (overflow) return negative ? kMin : kMax;
  if (negative) return acc;
  return acc == kMin ? kMax : -acc;
}

Outcome interpret(const InstantiatedSequence& seq, std::span<const std::string> argv) {
  if (static_cast<int>(argv.size()) < seq.argv_arity) return Outcome::InsufficientArgs;
  auto text = [&](const Param& p) -> std::string_view {
    if (const auto* a = std::get_if<ArgvString>(&p)) return argv[static_cast<std::size_t>(a->index - 1)];
    if (const auto* a = std::get_if<ArgvInt>(&p)) return argv[static_cast<std::size_t>(a->index - 1)];
    if (const auto* v = std::get_if<StringLiteral>(&p)) return v->value;
    throw Error("interpret: expected a string operand");
  };
  auto number = [&](const Param& p) -> std::int64_t {
    if (const auto* v = std::get_if<IntLiteral>(&p)) return v->value;
    if (const auto* a = std::get_if<ArgvInt>(&p)) return c_atoll(argv[static_cast<std::size_t>(a->index - 1)]);
    throw Error("interpret: expected an integer operand");
  };

  for (const auto& item : seq.items) {
    std::size_t taken = 0;
    switch (item.kind) {
      case Kind::IC:
        taken = number(item.params[0]) == number(item.params[1]) ? 0 : 1;
        break;
      case Kind::SC:
        taken = text(item.params[0]) == text(item.params[1]) ? 0 : 1;
        break;
      case Kind::FL:
        // Loop body only bumps a counter.
        break;
      case Kind::PC: {
        const auto s = text(item.params[0]);
        if (static_cast<std::int64_t>(s.size()) < number(item.params[1])) return Outcome::CleanExit;
        std::int64_t l = 0, h = static_cast<std::int64_t>(s.size()) - 1;
        while (h >= l) {
          if (s[static_cast<std::size_t>(h)] != s[static_cast<std::size_t>(l)]) return Outcome::CleanExit;
          --h;
          ++l;
        }
        break;
      }
      case Kind::CC: {
        const auto s = text(item.params[0]);
        const char c = std::get<CharLiteral>(item.params[1]).value;
        std::int64_t count = 0;
        for (char x : s)
          if (x == c) ++count;
        taken = count == number(item.params[2]) ? 0 : 1;
        break;
      }
    }
    const auto& filler = item.holes[taken];
    if (std::holds_alternative<Fail>(filler)) return Outcome::FailReached;
    if (!std::holds_alternative<Next>(filler)) return Outcome::CleanExit;
  }
  return Outcome::CleanExit;
}

bool satisfies_trigger_path(const InstantiatedSequence& seq, std::span<const std::string> argv) {
  if (static_cast<int>(argv.size()) < seq.argv_arity) return false;
  for (const auto& c : trigger_path(seq)) {
    const std::string_view operand =
        c.argv_index > 0 ? std::string_view(argv[static_cast<std::size_t>(c.argv_index - 1)]) : c.literal;
    if (!holds(c.atom, operand)) return false;
  }
  return true;
}

BruteForceResult brute_force_check(const InstantiatedSequence& seq, std::string_view alphabet, int max_len) {
  if (alphabet.size() > 4) throw BudgetError("brute force: alphabet larger than 4 symbols");
  if (max_len > 4 || max_len < 0) throw BudgetError("brute force: max length must be in [0, 4]");
  if (seq.argv_arity > 3) throw BudgetError("brute force: more than 3 arguments");

  std::vector<std::string> strings{""};
  for (std::size_t begin = 0, len = 1; len <= static_cast<std::size_t>(max_len); ++len) {
    const std::size_t end = strings.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char c : alphabet) strings.push_back(strings[i] + c);
    begin = end;
  }

  std::vector<std::vector<std::string>> domains(static_cast<std::size_t>(seq.argv_arity), strings);
  for (const auto& item : seq.items) {
    if (item.kind != Kind::IC) continue;
    const auto* a = std::get_if<ArgvInt>(&item.params[0]);
    if (!a) continue;
    const auto v = std::get<IntLiteral>(item.params[1]).value;
    auto& dom = domains[static_cast<std::size_t>(a->index - 1)];
    for (std::int64_t d = -2; d <= 2; ++d) {
      if ((d < 0 && v < std::numeric_limits<std::int64_t>::min() - d) ||
          (d > 0 && v > std::numeric_limits<std::int64_t>::max() - d))
        continue;
      auto s = std::to_string(v + d);
      if (std::find(dom.begin(), dom.end(), s) == dom.end()) dom.push_back(s);
    }
  }
  std::size_t total = 1;
  for (const auto& d : domains) {
    total *= d.size();
    if (total > 5'000'000) throw BudgetError("brute force: more than 5,000,000 vectors");
  }

  BruteForceResult result;
  std::vector<std::size_t> odometer(domains.size(), 0);
  std::vector<std::string> argv(domains.size());
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < domains.size(); ++i) argv[i] = domains[i][odometer[i]];
    const bool fails = interpret(seq, argv) == Outcome::FailReached;
    const bool predicted = satisfies_trigger_path(seq, argv);
    ++result.enumerated;
    if (fails != predicted) {
      result.counterexample = argv;
      result.reason = fails ? "fails but violates the trigger-path constraints"
                            : "satisfies the trigger-path constraints but does not fail";
      return result;
    }
    if (fails && result.failing.size() < 10000) result.failing.push_back(argv);
    for (std::size_t i = 0; i < odometer.size(); ++i) {
      if (++odometer[i] < domains[i].size()) break;
      odometer[i] = 0;
    }
  }

  try {
    const auto inputs = derive_inputs(seq);
    if (interpret(seq, inputs.trigger) != Outcome::FailReached) {
      result.counterexample = inputs.trigger;
      result.reason = "derived trigger does not fail";
      return result;
    }
  } catch (const ConflictError& e) {
    if (!result.failing.empty()) {
      result.counterexample = result.failing.front();
      result.reason = std::string("derivation reported a conflict but a failing input exists: ") + e.what();
      return result;
    }
  }
  result.confirmed = true;
  return result;
}

}  // namespace putforge::oracle
