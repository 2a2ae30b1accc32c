#include "putforge/batch.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <utility>

#include "putforge/dsl.hpp"
#include "putforge/metrics.hpp"
#include "putforge/oracle.hpp"

namespace putforge {

namespace {

// Sizes of B10: 1 PUT of 2 transformations, 4 of 3, ...
constexpr std::pair<int, int> kB10Histogram[] = {{2, 1},  {3, 4},  {4, 9},  {5, 41}, {6, 44},
                                                 {7, 43}, {8, 29}, {9, 20}, {10, 9}};

std::vector<Kind> all_kinds() { return {std::begin(kAllKinds), std::end(kAllKinds)}; }

std::vector<std::pair<Kind, BugKind>> base_configurations() {
  std::vector<std::pair<Kind, BugKind>> out;
  for (Kind k : kAllKinds) {
    out.emplace_back(k, BugKind::Assert);
    out.emplace_back(k, BugKind::OutOfBounds);
  }
  return out;
}

class Builder {
 public:
  explicit Builder(std::uint64_t seed) : seed_(seed) {}

  void fixed(SequenceSpec spec) { items_.push_back({std::move(spec), child_seed(seed_, items_.size(), 1)}); }

  void random(int length, const std::vector<Kind>& kinds) {
    Rng shape(child_seed(seed_, items_.size(), 0));
    fixed(random_sequence(length, kinds, shape));
  }

  std::vector<BatchItem> take() { return std::move(items_); }

 private:
  std::uint64_t seed_;
  std::vector<BatchItem> items_;
};

}  // namespace

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog{
      {"B1", 10, "one transformation per PUT: each kind x {assert, oob}"},
      {"B2", 45, "two transformations: every unordered pair of the 10 B1 configurations"},
      {"B10", 200, "2..10 random transformations, size histogram 1/4/9/41/44/43/29/20/9"},
      {"B100", 100, "100 random transformations per PUT"},
      {"B1000", 100, "1000 random transformations per PUT"},
      {"B_IC", 10, "m = 1..10 nested IC"},
      {"B_SC", 10, "m = 1..10 nested SC"},
      {"B_FL", 10, "m = 1..10 nested FL"},
      {"B_PC", 10, "m = 1..10 nested PC"},
      {"B_CC", 10, "m = 1..10 nested CC"},
      {"B_STAR", 10, "m = 1..10 random transformations"},
  };
  return catalog;
}

std::vector<BatchItem> make_batch(std::string_view preset, std::uint64_t seed) {
  Builder b(seed);
  if (preset == "B1") {
    for (auto [kind, bug] : base_configurations()) b.fixed(chain_of({kind}, bug));
  } else if (preset == "B2") {
    const auto base = base_configurations();
    for (std::size_t i = 0; i < base.size(); ++i)
      for (std::size_t j = i + 1; j < base.size(); ++j) b.fixed(chain_of({base[i].first, base[j].first}, base[j].second));
  } else if (preset == "B10") {
    for (auto [size, count] : kB10Histogram)
      for (int i = 0; i < count; ++i) b.random(size, all_kinds());
  } else if (preset == "B100" || preset == "B1000") {
    const int size = preset == "B100" ? 100 : 1000;
    for (int i = 0; i < 100; ++i) b.random(size, all_kinds());
  } else if (preset == "B_STAR") {
    for (int m = 1; m <= 10; ++m) b.random(m, all_kinds());
  } else if (preset.starts_with("B_") && kind_from_name(preset.substr(2))) {
    const Kind kind = *kind_from_name(preset.substr(2));
    for (int m = 1; m <= 10; ++m) b.fixed(chain_of(std::vector<Kind>(static_cast<std::size_t>(m), kind)));
  } else {
    throw UnknownPresetError("unknown preset '" + std::string(preset) + "'");
  }
  return b.take();
}

std::vector<BatchItem> make_custom_batch(const CustomRecipe& recipe, std::uint64_t seed) {
  if (recipe.min_length < 1 || recipe.max_length < recipe.min_length)
    throw Error("custom batch: need 1 <= min length <= max length");
  if (recipe.kinds.empty()) throw Error("custom batch: empty kind set");
  Builder b(seed);
  for (std::size_t i = 0; i < recipe.count; ++i) {
    Rng len_rng(child_seed(seed, i, 2));
    b.random(static_cast<int>(len_rng.uniform(recipe.min_length, recipe.max_length)), recipe.kinds);
  }
  return b.take();
}

std::vector<BatchItem> items_from_specs(const std::vector<SequenceSpec>& specs, std::size_t count,
                                        std::uint64_t seed) {
  Builder b(seed);
  for (const auto& spec : specs)
    for (std::size_t i = 0; i < count; ++i) b.fixed(spec);
  return b.take();
}

Put generate_put(const SequenceSpec& spec, const Ranges& ranges, std::uint64_t seed, ArgvPolicy policy,
                 const EmitOptions& opts) {
  Rng rng(seed);
  Put put;
  put.seed = seed;
  put.spec = spec;
  put.instance = instantiate(spec, ranges, rng, policy);
  auto inputs = oracle::derive_inputs(put.instance);
  auto emitted = emit(put.instance, opts);
  put.source = std::move(emitted.source);
  put.bug_line = emitted.bug_line;
  put.bug_kind = emitted.bug_kind;
  put.argv_arity = put.instance.argv_arity;
  put.trigger = std::move(inputs.trigger);
  put.non_trigger = std::move(inputs.non_trigger);
  put.metrics = compute_metrics(put.instance, put.trigger);

  if (oracle::interpret(put.instance, put.trigger) != oracle::Outcome::FailReached)
    throw Error("trigger does not reach fail()");
  if (put.non_trigger && oracle::interpret(put.instance, *put.non_trigger) != oracle::Outcome::CleanExit)
    throw Error("non-trigger does not exit cleanly");
  return put;
}

std::string source_file_name(std::string_view batch, std::size_t index) {
  return "put_" + std::string(batch) + "_" + std::to_string(index) + ".c";
}

Manifest generate_batch(const std::vector<BatchItem>& items, const GenerateOptions& opts,
                        const std::filesystem::path& out_dir) {
  opts.ranges.check();
  const auto dir = out_dir / opts.batch;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());

  Manifest manifest;
  manifest.batch = opts.batch;
  manifest.master_seed = opts.seed;
  manifest.argv_policy = std::string(argv_policy_name(opts.policy));
  manifest.ranges = opts.ranges;
  manifest.records.resize(items.size());

  const EmitOptions emit_opts{opts.bug};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      ManifestRecord& rec = manifest.records[i];
      rec.index = i;
      rec.child_seed = items[i].child_seed;
      try {
        rec.spec_text = dsl::print(items[i].spec);
        const auto put = generate_put(items[i].spec, opts.ranges, items[i].child_seed, opts.policy, emit_opts);
        rec.argv_arity = put.argv_arity;
        rec.trigger = put.trigger;
        rec.non_trigger = put.non_trigger;
        rec.bug_kind = put.bug_kind;
        rec.bug_line = put.bug_line;
        rec.metrics = put.metrics;
        rec.source_path = source_file_name(opts.batch, i);
        rec.source_sha256 = sha256_hex(put.source);
        write_text_file(dir / rec.source_path, put.source);
        rec.ok = true;
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
        rec.source_path.clear();
        rec.source_sha256.clear();
      }
    }
  };
  unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(items.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  write_manifest(manifest, dir / "manifest.json");
  return manifest;
}

std::string shell_quote(const std::vector<std::string>& argv) {
  std::string out;
  for (const auto& arg : argv) {
    if (!out.empty()) out += ' ';
    out += '"';
    for (char c : arg) {
      if (c == '"' || c == '\\' || c == '$' || c == '`') out += '\\';
      out += c;
    }
    out += '"';
  }
  return out;
}

std::string summary_line(const ManifestRecord& r) {
  if (!r.ok) return "#" + std::to_string(r.index) + " error: " + r.error;
  return "#" + std::to_string(r.index) + " " + r.source_path + " ok bug=" + std::string(bug_kind_name(r.bug_kind)) +
         " line=" + std::to_string(r.bug_line) + " argc=" + std::to_string(r.argv_arity) +
         " cyclomatic=" + std::to_string(r.metrics.cyclomatic) + " trigger=[" + shell_quote(r.trigger) + "]";
}

}  // namespace putforge
