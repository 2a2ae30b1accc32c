#include <map>
#include <set>

#include "doctest.h"
#include "putforge/batch.hpp"
#include "putforge/dsl.hpp"
#include "putforge/oracle.hpp"
#include "support.hpp"

using namespace putforge;
namespace fs = std::filesystem;

TEST_CASE("preset sizes") {
  const std::map<std::string, std::size_t> expected{{"B1", 10},   {"B2", 45},   {"B10", 200}, {"B100", 100},
                                                    {"B1000", 100}, {"B_IC", 10}, {"B_SC", 10}, {"B_FL", 10},
                                                    {"B_PC", 10}, {"B_CC", 10}, {"B_STAR", 10}};
  CHECK(preset_catalog().size() == expected.size());
  for (const auto& p : preset_catalog()) {
    REQUIRE(expected.contains(p.name));
    CHECK(p.count == expected.at(p.name));
    CHECK(make_batch(p.name, 1).size() == p.count);
  }
  CHECK_THROWS_AS(make_batch("B3", 1), UnknownPresetError);
  CHECK_THROWS_AS(make_batch("B_XX", 1), UnknownPresetError);
}

TEST_CASE("B10 size histogram") {
  std::map<std::size_t, int> hist;
  for (const auto& it : make_batch("B10", 7)) ++hist[it.spec.items.size()];
  CHECK(hist == std::map<std::size_t, int>{{2, 1}, {3, 4}, {4, 9}, {5, 41}, {6, 44}, {7, 43}, {8, 29}, {9, 20}, {10, 9}});
}

TEST_CASE("B1 and B2 shapes") {
  const auto b1 = make_batch("B1", 0);
  for (std::size_t i = 0; i < b1.size(); ++i) {
    CHECK(b1[i].spec.items.size() == 1);
    CHECK(bug_kind_of(InstantiatedSequence{b1[i].spec.items, {}, 0}) == (i % 2 ? BugKind::OutOfBounds : BugKind::Assert));
  }
  const auto b2 = make_batch("B2", 0);
  std::set<std::string> distinct;
  for (const auto& it : b2) {
    CHECK(it.spec.items.size() == 2);
    distinct.insert(dsl::print(it.spec));
  }
  // Only the inner bug variant shows in the text: 10 ordered kind pairs with
  // two variants each, plus 5 same-kind pairs whose inner variant is oob.
  std::set<std::pair<std::string, std::string>> expected;
  const auto b1k = make_batch("B1", 0);
  for (std::size_t i = 0; i < b1k.size(); ++i)
    for (std::size_t j = i + 1; j < b1k.size(); ++j)
      expected.insert({dsl::print(b1k[i].spec), dsl::print(b1k[j].spec)});
  CHECK(distinct.size() == 25);
  CHECK(expected.size() == 45);
}

TEST_CASE("B_T presets: sizes 1..10, one kind") {
  const auto b = make_batch("B_FL", 3);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK(b[i].spec.items.size() == i + 1);
    for (const auto& item : b[i].spec.items) CHECK(item.kind == Kind::FL);
  }
  const auto star = make_batch("B_STAR", 3);
  for (std::size_t i = 0; i < star.size(); ++i) CHECK(star[i].spec.items.size() == i + 1);
}

TEST_CASE("presets are deterministic in the seed") {
  const auto a = make_batch("B10", 7), b = make_batch("B10", 7), c = make_batch("B10", 8);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].spec == b[i].spec);
    CHECK(a[i].child_seed == b[i].child_seed);
    differs = differs || !(a[i].spec == c[i].spec);
  }
  CHECK(differs);
}

TEST_CASE("custom batches") {
  CustomRecipe r;
  r.count = 30;
  r.min_length = 2;
  r.max_length = 4;
  r.kinds = {Kind::PC, Kind::CC};
  const auto items = make_custom_batch(r, 5);
  CHECK(items.size() == 30);
  for (const auto& it : items) {
    CHECK(it.spec.items.size() >= 2);
    CHECK(it.spec.items.size() <= 4);
    for (const auto& item : it.spec.items) CHECK((item.kind == Kind::PC || item.kind == Kind::CC));
  }
  r.count = 0;
  CHECK(make_custom_batch(r, 5).empty());
  r.min_length = 5;
  CHECK_THROWS_AS(make_custom_batch(r, 5), Error);
}

TEST_CASE("generate_put rechecks the trigger") {
  const auto put = generate_put(dsl::parse("CC(?, ?, ?, NEXT, SKIP) SC(?, ?, FAIL, SKIP)"), Ranges::defaults(), 3);
  CHECK(oracle::interpret(put.instance, put.trigger) == oracle::Outcome::FailReached);
  CHECK(put.argv_arity == 2);
  CHECK(put.trigger.size() == 2);
  CHECK(put.metrics.transformation_count == 2);
  CHECK_THROWS_AS(generate_put(dsl::parse("IC(atoll(argv[1]), 5, NEXT, SKIP) IC(atoll(argv[1]), 7, FAIL, SKIP)"),
                               Ranges::defaults(), 1, ArgvPolicy::AsWritten),
                  oracle::ConflictError);
}

TEST_CASE("generate_batch writes sources and manifest, keeps going on errors") {
  testsupport::TempDir dir;
  std::vector<SequenceSpec> specs{dsl::parse("IC(atoll(argv[1]), 5, NEXT, SKIP) IC(atoll(argv[1]), 7, FAIL, SKIP)"),
                                  dsl::parse("FL(2, FAIL)")};
  GenerateOptions opts;
  opts.batch = "mixed";
  opts.seed = 1;
  opts.policy = ArgvPolicy::AsWritten;
  const auto m = generate_batch(items_from_specs(specs, 2, opts.seed), opts, dir.path());
  REQUIRE(m.records.size() == 4);
  CHECK_FALSE(m.records[0].ok);
  CHECK(m.records[0].error.find("conflict") != std::string::npos);
  CHECK_FALSE(m.records[1].ok);
  CHECK(m.records[2].ok);
  CHECK(m.records[3].ok);
  CHECK(m.records[2].spec_text == "FL(2, FAIL)");
  for (const auto& r : m.records) {
    if (!r.ok) continue;
    const auto src = read_text_file(dir.path() / "mixed" / r.source_path);
    CHECK(sha256_hex(src) == r.source_sha256);
  }
  CHECK(read_manifest(dir.path() / "mixed" / "manifest.json") == m);
  CHECK(summary_line(m.records[0]).find("error") != std::string::npos);
}

TEST_CASE("a manifest record regenerates its PUT") {
  testsupport::TempDir dir;
  GenerateOptions opts;
  opts.batch = "B_STAR";
  opts.seed = 42;
  const auto m = generate_batch(make_batch("B_STAR", 42), opts, dir.path());
  for (const auto& r : m.records) {
    REQUIRE(r.ok);
    const auto put = generate_put(dsl::parse(r.spec_text), m.ranges, r.child_seed);
    CHECK(sha256_hex(put.source) == r.source_sha256);
    CHECK(put.trigger == r.trigger);
  }
}

TEST_CASE("generation is byte-identical across runs and thread counts") {
  testsupport::TempDir a, b;
  GenerateOptions opts;
  opts.batch = "B2";
  opts.seed = 9;
  opts.jobs = 1;
  generate_batch(make_batch("B2", 9), opts, a.path());
  opts.jobs = 8;
  generate_batch(make_batch("B2", 9), opts, b.path());
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a.path() / "B2")) {
    const auto other = b.path() / "B2" / e.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(read_text_file(e.path()) == read_text_file(other));
    ++files;
  }
  CHECK(files == 46);
}

TEST_CASE("empty custom batch") {
  testsupport::TempDir dir;
  GenerateOptions opts;
  opts.batch = "custom";
  const auto m = generate_batch({}, opts, dir.path());
  CHECK(m.records.empty());
  CHECK(read_manifest(dir.path() / "custom" / "manifest.json").records.empty());
}

TEST_CASE("shell quoting") {
  CHECK(shell_quote({"69", ""}) == "\"69\" \"\"");
  CHECK(shell_quote({}) == "");
  CHECK(shell_quote({"a\"b$c`d\\"}) == "\"a\\\"b\\$c\\`d\\\\\"");
}
