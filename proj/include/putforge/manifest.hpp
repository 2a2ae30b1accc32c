#pragma once

// Persisted ground truth of a generated batch (manifest.json).
//
// Top-level keys, in order:
//   formatVersion, generatorVersion, batch, masterSeed, rngAlgorithm,
//   argvPolicy, ranges, records
// Record keys, in order:
//   index, childSeed, specText, argvArity, trigger, nonTrigger, bugKind,
//   bugLine, sourcePath, sourceSha256, metrics {cyclomatic, pathStatements,
//   transformationCount}, status ("ok" | "error"), error
// Seeds are decimal strings; nonTrigger is null when no non-triggering input
// exists; sourcePath is relative to the manifest's directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "putforge/instantiate.hpp"
#include "putforge/model.hpp"

namespace putforge {

inline constexpr int kManifestFormatVersion = 1;
inline constexpr std::string_view kGeneratorVersion = "putforge 0.1.0";

struct ManifestRecord {
  std::size_t index = 0;
  std::uint64_t child_seed = 0;
  std::string spec_text;
  int argv_arity = 0;
  std::vector<std::string> trigger;
  std::optional<std::vector<std::string>> non_trigger;
  BugKind bug_kind = BugKind::Assert;
  int bug_line = 0;
  std::string source_path;
  std::string source_sha256;
  Metrics metrics;
  bool ok = true;
  std::string error;
  bool operator==(const ManifestRecord&) const = default;
};

struct Manifest {
  int format_version = kManifestFormatVersion;
  std::string generator_version{kGeneratorVersion};
  std::string batch;
  std::uint64_t master_seed = 0;
  std::string rng_algorithm{Rng::kAlgorithm};
  std::string argv_policy = "distinct";
  Ranges ranges = Ranges::defaults();
  std::vector<ManifestRecord> records;
  bool operator==(const Manifest&) const = default;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

std::string manifest_to_json(const Manifest& manifest);
// Throws VersionError for a newer format, Error for malformed text.
Manifest manifest_from_json(std::string_view text);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

std::string ranges_to_json(const Ranges& ranges);
// {"IC.v2": {"min": 0, "max": 255}, ...}; keys present define the ranges.
Ranges ranges_from_json(std::string_view text);
Ranges read_ranges(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace putforge
