#include "putforge/instantiate.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

namespace putforge {

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw Error("Rng::uniform: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  if (span == ~std::uint64_t{0}) return static_cast<std::int64_t>(next());
  const std::uint64_t n = span + 1;
  // 2^64 mod n; draws below it are rejected so the rest divide evenly by n.
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x < threshold);
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % n);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{"IC.v2", "SC.s2", "FL.e", "PC.n", "CC.n", "CC.c"};
  return keys;
}

}  // namespace

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^ splitmix64(index * 2 + 0x51ed27ULL) ^ (stream * 0xd1b54a32d192ed03ULL));
}

Ranges Ranges::defaults() {
  Ranges r;
  r.set("IC.v2", {0, 255});
  r.set("SC.s2", {0, 255});
  r.set("FL.e", {0, 255});
  r.set("PC.n", {1, 20});
  r.set("CC.n", {1, 20});
  r.set("CC.c", {33, 126});
  return r;
}

void Ranges::set(const std::string& key, IntRange range) { entries_[key] = range; }

std::optional<IntRange> Ranges::get(Kind kind, std::string_view slot) const {
  const auto it = entries_.find(std::string(kind_name(kind)) + "." + std::string(slot));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void Ranges::check() const {
  for (const auto& [key, r] : entries_) {
    if (!known_keys().contains(key)) throw Error("unknown range key '" + key + "'");
    if (r.min > r.max) throw Error("range " + key + ": min > max");
    if (key == "PC.n" && r.min < 1) throw Error("range PC.n: min must be >= 1");
    if ((key == "PC.n" || key == "CC.n") && (r.min < INT32_MIN || r.max > INT32_MAX))
      throw Error("range " + key + " exceeds int");
    if (key == "CC.c") {
      bool any = false;
      for (std::int64_t c = std::max<std::int64_t>(r.min, 0); c <= std::min<std::int64_t>(r.max, 127); ++c)
        any = any || is_allowed_char(static_cast<char>(c));
      if (!any) throw Error("range CC.c contains no allowed character");
    }
  }
}

std::string_view argv_policy_name(ArgvPolicy policy) {
  return policy == ArgvPolicy::Distinct ? "distinct" : "as-written";
}

std::optional<ArgvPolicy> argv_policy_from_name(std::string_view name) {
  if (name == "distinct") return ArgvPolicy::Distinct;
  if (name == "as-written") return ArgvPolicy::AsWritten;
  return std::nullopt;
}

InstantiatedSequence instantiate(const SequenceSpec& seq, const Ranges& ranges, Rng& rng, ArgvPolicy policy) {
  if (auto v = validate(seq); !v.empty()) throw ValidationError(std::move(v));

  std::set<int> used;
  for (const auto& item : seq.items)
    for (const auto& p : item.params) {
      if (const auto* a = std::get_if<ArgvString>(&p)) used.insert(a->index);
      if (const auto* a = std::get_if<ArgvInt>(&p)) used.insert(a->index);
    }

  InstantiatedSequence out;
  int next_free = 1;
  for (std::size_t i = 0; i < seq.items.size(); ++i) {
    TransformationSpec item = seq.items[i];
    const auto sig = arity(item.kind);
    for (std::size_t p = 0; p < item.params.size(); ++p) {
      if (!std::holds_alternative<Fresh>(item.params[p])) continue;
      const auto& slot = sig.params[p];
      const std::string where = std::string(kind_name(item.kind)) + "." + std::string(slot.name) + " of item " +
                                std::to_string(i + 1);
      if (slot.input) {
        if (policy == ArgvPolicy::AsWritten) throw Error("as-written policy: no argv binding for " + where);
        while (used.contains(next_free)) ++next_free;
        used.insert(next_free);
        if (slot.type == SlotType::String)
          item.params[p] = ArgvString{next_free};
        else
          item.params[p] = ArgvInt{next_free};
        continue;
      }
      const auto range = ranges.get(item.kind, slot.name);
      if (!range) throw Error("no range for fresh parameter " + where);
      switch (slot.type) {
        case SlotType::IntLike:
        case SlotType::Int:
          item.params[p] = IntLiteral{rng.uniform(range->min, range->max)};
          break;
        case SlotType::String:
          item.params[p] = StringLiteral{std::to_string(rng.uniform(range->min, range->max))};
          break;
        case SlotType::Char: {
          std::vector<char> allowed;
          for (std::int64_t c = std::max<std::int64_t>(range->min, 0); c <= std::min<std::int64_t>(range->max, 127);
               ++c)
            if (is_allowed_char(static_cast<char>(c))) allowed.push_back(static_cast<char>(c));
          if (allowed.empty()) throw Error("range CC.c contains no allowed character");
          item.params[p] = CharLiteral{allowed[static_cast<std::size_t>(
              rng.uniform(0, static_cast<std::int64_t>(allowed.size()) - 1))]};
          break;
        }
      }
    }
    out.items.push_back(std::move(item));
    out.name_suffixes.push_back(static_cast<int>(i) + 1);
  }
  if (auto v = validate(SequenceSpec{out.items}); !v.empty()) throw ValidationError(std::move(v));
  out.argv_arity = used.empty() ? 0 : *used.rbegin();
  return out;
}

namespace {

TransformationSpec fresh_item(Kind kind, bool last, BugKind bug) {
  TransformationSpec item;
  item.kind = kind;
  item.params.assign(arity(kind).params.size(), Fresh{});
  const HoleFiller path = last ? HoleFiller{Fail{bug}} : HoleFiller{Next{}};
  if (arity(kind).holes.size() == 2)
    item.holes = {path, Skip{}};
  else
    item.holes = {path};
  return item;
}

}  // namespace

SequenceSpec random_sequence(int length, const std::vector<Kind>& kinds, Rng& rng, BugKind bug) {
  if (length < 1) throw Error("random_sequence: length must be >= 1");
  std::vector<Kind> pool;
  for (Kind k : kAllKinds)
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) pool.push_back(k);
  if (pool.empty()) throw Error("random_sequence: kind set is empty");
  std::vector<Kind> chosen;
  for (int i = 0; i < length; ++i)
    chosen.push_back(pool[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(pool.size()) - 1))]);
  return chain_of(chosen, bug);
}

SequenceSpec chain_of(const std::vector<Kind>& kinds, BugKind bug) {
  if (kinds.empty()) throw Error("chain_of: no kinds");
  SequenceSpec seq;
  for (std::size_t i = 0; i < kinds.size(); ++i) seq.items.push_back(fresh_item(kinds[i], i + 1 == kinds.size(), bug));
  return seq;
}

}  // namespace putforge
