#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "putforge/model.hpp"

namespace putforge {

// Seeded generator. Draws go through our own rejection sampler rather than
// std::uniform_int_distribution, whose output is implementation-defined.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+rejection/splitmix64-child";

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  // Uniform in [lo, hi]. Requires lo <= hi.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// Per-PUT seed derived from (master seed, index, stream).
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream);

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;
  bool operator==(const IntRange&) const = default;
};

// Inclusive ranges per constant slot, keyed "IC.v2", "SC.s2", "FL.e", "PC.n",
// "CC.n", "CC.c" (the last as ASCII codes).
class Ranges {
 public:
  static Ranges defaults();

  void set(const std::string& key, IntRange range);
  std::optional<IntRange> get(Kind kind, std::string_view slot) const;
  const std::map<std::string, IntRange>& entries() const { return entries_; }

  // Throws Error on an unknown key, min > max, or a CC.c range without any
  // allowed character.
  void check() const;

  bool operator==(const Ranges&) const = default;

 private:
  std::map<std::string, IntRange> entries_;
};

enum class ArgvPolicy { Distinct, AsWritten };

std::string_view argv_policy_name(ArgvPolicy policy);
std::optional<ArgvPolicy> argv_policy_from_name(std::string_view name);

// Resolves Fresh parameters and assigns name suffixes. Under Distinct, input
// slots written as `?` are bound to the lowest unused argv index in item
// order; explicit argv references stay as written. Throws ValidationError
// for invalid input and Error for the other failure cases.
InstantiatedSequence instantiate(const SequenceSpec& seq, const Ranges& ranges, Rng& rng,
                                 ArgvPolicy policy = ArgvPolicy::Distinct);

// `length` items drawn uniformly from `kinds` (deduplicated, canonical order),
// every parameter Fresh, conditionals nest into T with E = SKIP, FAIL innermost.
SequenceSpec random_sequence(int length, const std::vector<Kind>& kinds, Rng& rng,
                             BugKind bug = BugKind::Assert);

// Spec with every kind fixed and all parameters Fresh, same hole shape as
// random_sequence.
SequenceSpec chain_of(const std::vector<Kind>& kinds, BugKind bug = BugKind::Assert);

}  // namespace putforge
