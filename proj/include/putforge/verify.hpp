#pragma once

// Compiles emitted PUTs with system compilers and runs them on their inputs.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "putforge/manifest.hpp"
#include "putforge/model.hpp"

namespace putforge::verify {

struct CompilerConfig {
  std::string name;
  std::vector<std::string> command;  // compiler argv prefix, e.g. {"gcc"}
  std::vector<std::string> flags;
  bool sanitizer = false;
  bool operator==(const CompilerConfig&) const = default;
};

inline constexpr const char* kCcListEnv = "PUTFORGE_CC_LIST";

// Split a comma-separated compiler list; each entry may carry arguments.
std::vector<std::string> split_cc_list(std::string_view list);

// PUTFORGE_CC_LIST when set and non-empty, otherwise {"gcc", "clang"}.
std::vector<std::string> default_compilers();

// For each compiler `-O0 -Wall` and `-O1 -Wall`, plus one sanitizer config on
// the first clang-like available compiler (or the first available one).
std::vector<CompilerConfig> default_configs(const std::vector<std::string>& compilers, bool sanitizer = true);

struct ConfigFile {
  std::vector<CompilerConfig> configs;
  std::optional<double> timeout_seconds;
};

// {"compilers": ["gcc", ...], "sanitizer": true} or
// {"configs": [{"name", "command", "flags", "sanitizer"}], "timeoutSeconds": 10}
ConfigFile load_config_file(const std::filesystem::path& path);

// Whether argv[0] of the command resolves to an executable.
bool compiler_available(const std::vector<std::string>& command);

enum class RunClass { Abort, CleanExit, Other, NotRun };

struct RunResult {
  RunClass cls = RunClass::NotRun;
  int exit_code = 0;
  int signal = 0;
  bool timed_out = false;
  std::string stderr_text;
};

// "abort", "cleanExit", "other(exit N)", "other(signal N)", "other(timeout)", "notRun".
std::string outcome_label(const RunResult& r);

enum class Status { Pass, Fail, Inconclusive, Skipped };

std::string_view status_name(Status s);

struct ConfigReport {
  std::string config;
  Status status = Status::Skipped;
  bool compile_ok = false;
  int warning_count = 0;
  RunResult trigger;
  RunResult non_trigger;
  int sanitizer_findings = 0;
  std::string note;
};

struct PutReport {
  std::size_t index = 0;
  std::string source_path;
  Status status = Status::Skipped;
  bool consistent = true;  // same trigger and non-trigger outcome class on every compiled config
  std::vector<std::string> problems;
  std::vector<ConfigReport> configs;
};

struct Options {
  std::vector<CompilerConfig> configs;
  unsigned jobs = 1;
  double timeout_seconds = 10.0;
};

struct Subject {
  std::string source;
  std::vector<std::string> trigger;
  std::optional<std::vector<std::string>> non_trigger;
  int bug_line = 0;
  BugKind bug_kind = BugKind::Assert;
};

// Compiles and runs one program inside `work_dir` (must exist, used as scratch).
PutReport verify_subject(const Subject& subject, const Options& opts, const std::filesystem::path& work_dir);

PutReport verify_put(const Put& put, const Options& opts, const std::filesystem::path& work_dir);

struct Summary {
  std::string batch;
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;
  std::size_t skipped = 0;
  bool pass = true;  // no failed PUT; skips and inconclusive runs do not fail a batch
  std::vector<PutReport> puts;
};

// Sources are resolved relative to `manifest_dir`; scratch directories are
// created beneath it and removed afterwards. Reports are in record order.
Summary verify_batch(const Manifest& manifest, const std::filesystem::path& manifest_dir, const Options& opts);

std::string summary_to_json(const Summary& summary, const Options& opts);

}  // namespace putforge::verify
