#include <map>
#include <set>

#include "doctest.h"
#include "putforge/dsl.hpp"
#include "putforge/instantiate.hpp"

using namespace putforge;

namespace {
const std::vector<Kind> kAll{std::begin(kAllKinds), std::end(kAllKinds)};

bool has_input_slot(Kind k) { return k != Kind::FL; }
}  // namespace

TEST_CASE("Rng is reproducible and uniform draws stay in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.uniform(-3, 7);
    CHECK(x == b.uniform(-3, 7));
    CHECK(x >= -3);
    CHECK(x <= 7);
  }
  Rng c(1);
  CHECK(c.uniform(5, 5) == 5);
  CHECK_NOTHROW(c.uniform(INT64_MIN, INT64_MAX));
  // Every value of a small range shows up.
  std::set<std::int64_t> seen;
  for (int i = 0; i < 2000; ++i) seen.insert(c.uniform(0, 9));
  CHECK(seen.size() == 10);
}

TEST_CASE("mt19937_64 reference output") {
  // The standard requires the 10000th output of default-seeded mt19937_64.
  std::mt19937_64 e;
  e.discard(9999);
  CHECK(e() == 9981545732273789042ULL);
}

TEST_CASE("child seeds differ by index and stream") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 100; ++i)
    for (std::uint64_t s = 0; s < 3; ++s) seeds.insert(child_seed(7, i, s));
  CHECK(seeds.size() == 300);
  CHECK(child_seed(7, 3, 1) == child_seed(7, 3, 1));
  CHECK(child_seed(7, 3, 1) != child_seed(8, 3, 1));
}

TEST_CASE("instantiate: two-item random shape binds argv[1], argv[2]") {
  const auto spec = dsl::parse("IC(?, ?, NEXT, SKIP) SC(?, ?, FAIL, SKIP)");
  Rng rng(0);
  const auto inst = instantiate(spec, Ranges::defaults(), rng);
  CHECK(inst.items[0].params[0] == Param{ArgvInt{1}});
  CHECK(inst.items[1].params[0] == Param{ArgvString{2}});
  CHECK(inst.argv_arity == 2);
  CHECK(inst.name_suffixes == std::vector{1, 2});
}

TEST_CASE("instantiate: IC v2 drawn from [0,255]") {
  const auto spec = dsl::parse("IC(atoll(argv[1]), ?, FAIL, SKIP)");
  std::set<std::int64_t> values;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(seed);
    const auto inst = instantiate(spec, Ranges::defaults(), rng);
    const auto v = std::get<IntLiteral>(inst.items[0].params[1]).value;
    CHECK(v >= 0);
    CHECK(v <= 255);
    values.insert(v);
  }
  CHECK(values.size() > 100);
}

TEST_CASE("instantiate: same spec and seed give the same instance") {
  const auto spec = dsl::parse("CC(?, ?, ?, NEXT, SKIP) PC(?, ?, NEXT) FL(?, NEXT) SC(?, ?, FAIL, SKIP)");
  Rng a(99), b(99);
  CHECK(instantiate(spec, Ranges::defaults(), a) == instantiate(spec, Ranges::defaults(), b));
}

TEST_CASE("instantiate: SC s2 is a canonical decimal, CC c an allowed char") {
  const auto spec = dsl::parse("SC(?, ?, NEXT, SKIP) CC(?, ?, ?, FAIL, SKIP)");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto inst = instantiate(spec, Ranges::defaults(), rng);
    const auto s2 = std::get<StringLiteral>(inst.items[0].params[1]).value;
    REQUIRE_FALSE(s2.empty());
    CHECK((s2 == "0" || s2[0] != '0'));
    const auto n = std::stoll(s2);
    CHECK(n >= 0);
    CHECK(n <= 255);
    CHECK(is_allowed_char(std::get<CharLiteral>(inst.items[1].params[1]).value));
    const auto cn = std::get<IntLiteral>(inst.items[1].params[2]).value;
    CHECK(cn >= 1);
    CHECK(cn <= 20);
  }
}

TEST_CASE("instantiate: custom ranges are honoured and re-validate") {
  Ranges r = Ranges::defaults();
  r.set("FL.e", {3, 3});
  r.set("CC.c", {'a', 'a'});
  r.set("PC.n", {2, 4});
  const auto spec = dsl::parse("FL(?, NEXT) CC(?, ?, ?, NEXT, SKIP) PC(?, ?, FAIL)");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto inst = instantiate(spec, r, rng);
    CHECK(std::get<IntLiteral>(inst.items[0].params[0]).value == 3);
    CHECK(std::get<CharLiteral>(inst.items[1].params[1]).value == 'a');
    const auto n = std::get<IntLiteral>(inst.items[2].params[1]).value;
    CHECK(n >= 2);
    CHECK(n <= 4);
    CHECK(validate(SequenceSpec{inst.items}).empty());
  }
}

TEST_CASE("ranges check rejects bad entries") {
  Ranges r = Ranges::defaults();
  r.set("FL.e", {5, 1});
  CHECK_THROWS_AS(r.check(), Error);
  Ranges bad_key = Ranges::defaults();
  bad_key.set("XX.q", {0, 1});
  CHECK_THROWS_AS(bad_key.check(), Error);
  Ranges no_char = Ranges::defaults();
  no_char.set("CC.c", {' ', ' '});
  CHECK_THROWS_AS(no_char.check(), Error);
  Ranges pc_zero = Ranges::defaults();
  pc_zero.set("PC.n", {0, 3});
  CHECK_THROWS_AS(pc_zero.check(), Error);
}

TEST_CASE("argv policies") {
  const auto spec = dsl::parse("SC(argv[3], \"a\", NEXT, SKIP) IC(?, 1, NEXT, SKIP) PC(?, 2, FAIL)");
  Rng rng(1);
  const auto d = instantiate(spec, Ranges::defaults(), rng, ArgvPolicy::Distinct);
  CHECK(d.items[0].params[0] == Param{ArgvString{3}});
  CHECK(d.items[1].params[0] == Param{ArgvInt{1}});
  CHECK(d.items[2].params[0] == Param{ArgvString{2}});
  CHECK(d.argv_arity == 3);

  Rng rng2(1);
  CHECK_THROWS_AS(instantiate(spec, Ranges::defaults(), rng2, ArgvPolicy::AsWritten), Error);
  const auto written = dsl::parse("IC(atoll(argv[1]), 5, NEXT, SKIP) IC(atoll(argv[1]), 7, FAIL, SKIP)");
  Rng rng3(1);
  const auto w = instantiate(written, Ranges::defaults(), rng3, ArgvPolicy::AsWritten);
  CHECK(w.argv_arity == 1);
  CHECK(argv_policy_from_name("as-written") == ArgvPolicy::AsWritten);
  CHECK(argv_policy_name(ArgvPolicy::Distinct) == "distinct");
}

TEST_CASE("random_sequence shapes") {
  Rng rng(3);
  CHECK(dsl::print(random_sequence(1, {Kind::FL}, rng)) == "FL(?, FAIL)");
  CHECK(dsl::print(random_sequence(3, {Kind::IC}, rng)) ==
        "IC(?, ?, NEXT, SKIP) IC(?, ?, NEXT, SKIP) IC(?, ?, FAIL, SKIP)");
  CHECK_THROWS_AS(random_sequence(0, kAll, rng), Error);
  CHECK_THROWS_AS(random_sequence(2, {}, rng), Error);
  CHECK(dsl::print(chain_of({Kind::PC, Kind::CC}, BugKind::OutOfBounds)) == "PC(?, ?, NEXT) CC(?, ?, ?, FAIL_OOB, SKIP)");
}

TEST_CASE("distinct policy: arity counts the kinds with an input slot") {
  Rng rng(2024);
  std::map<Kind, int> seen;
  for (int i = 0; i < 300; ++i) {
    const auto spec = random_sequence(static_cast<int>(rng.uniform(1, 12)), kAll, rng);
    Rng inst_rng(static_cast<std::uint64_t>(i));
    const auto inst = instantiate(spec, Ranges::defaults(), inst_rng);
    int expected = 0;
    for (const auto& item : spec.items) {
      expected += has_input_slot(item.kind) ? 1 : 0;
      ++seen[item.kind];
    }
    CHECK(inst.argv_arity == expected);
  }
  CHECK(seen.size() == 5);
}
