#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "putforge/emit.hpp"
#include "putforge/instantiate.hpp"
#include "putforge/manifest.hpp"
#include "putforge/model.hpp"

namespace putforge {

struct PresetInfo {
  std::string name;
  std::size_t count;
  std::string description;
};

// B1, B2, B10, B100, B1000, B_IC, B_SC, B_FL, B_PC, B_CC, B_STAR.
const std::vector<PresetInfo>& preset_catalog();

class UnknownPresetError : public Error {
 public:
  using Error::Error;
};

struct BatchItem {
  SequenceSpec spec;
  std::uint64_t child_seed = 0;
};

std::vector<BatchItem> make_batch(std::string_view preset, std::uint64_t seed);

struct CustomRecipe {
  std::size_t count = 0;
  int min_length = 1;
  int max_length = 10;
  std::vector<Kind> kinds{std::begin(kAllKinds), std::end(kAllKinds)};
};

std::vector<BatchItem> make_custom_batch(const CustomRecipe& recipe, std::uint64_t seed);

// `count` instantiations of every spec, in file order.
std::vector<BatchItem> items_from_specs(const std::vector<SequenceSpec>& specs, std::size_t count,
                                        std::uint64_t seed);

// Instantiate, derive inputs, emit and measure one PUT. Throws on conflicts or
// invalid specs.
Put generate_put(const SequenceSpec& spec, const Ranges& ranges, std::uint64_t seed,
                 ArgvPolicy policy = ArgvPolicy::Distinct, const EmitOptions& opts = {});

struct GenerateOptions {
  std::string batch = "custom";
  std::uint64_t seed = 0;
  Ranges ranges = Ranges::defaults();
  ArgvPolicy policy = ArgvPolicy::Distinct;
  std::optional<BugKind> bug;
  unsigned jobs = 0;  // 0: hardware concurrency
};

// Writes <out_dir>/<batch>/put_<batch>_<i>.c and manifest.json. A failing PUT
// becomes an error record; the batch continues.
Manifest generate_batch(const std::vector<BatchItem>& items, const GenerateOptions& opts,
                        const std::filesystem::path& out_dir);

std::string source_file_name(std::string_view batch, std::size_t index);

std::string summary_line(const ManifestRecord& record);

// Double-quoted, shell-safe rendering of an argv vector.
std::string shell_quote(const std::vector<std::string>& argv);

}  // namespace putforge
