#include "putforge/verify.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

extern char** environ;

namespace putforge::verify {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kSanitizerEnv = "UBSAN_OPTIONS=halt_on_error=1:abort_on_error=1:print_stacktrace=0";
// Compiling a B1000 PUT takes seconds; this only guards against hangs.
constexpr double kCompileTimeoutSeconds = 600.0;

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

struct ProcResult {
  int status = 0;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string output;
};

// Runs argv with stdin from /dev/null and stdout+stderr captured into
// `log_file`. The child gets its own process group so a timeout kills
// compiler subprocesses too.
ProcResult run_process(const std::vector<std::string>& argv, const fs::path& log_file, double timeout_seconds,
                       bool sanitizer_env) {
  ProcResult res;
  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  std::vector<std::string> env_store;
  for (char** e = environ; *e; ++e) {
    if (sanitizer_env && std::strncmp(*e, "UBSAN_OPTIONS=", 14) == 0) continue;
    env_store.emplace_back(*e);
  }
  if (sanitizer_env) env_store.emplace_back(kSanitizerEnv);
  std::vector<char*> envp;
  for (auto& e : env_store) envp.push_back(e.data());
  envp.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 0, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 1, log_file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_adddup2(&actions, 1, 2);
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, args[0], &actions, &attr, args.data(), envp.data());
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    res.spawn_failed = true;
    res.output = std::string("cannot run ") + argv[0] + ": " + std::strerror(rc);
    return res;
  }

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                             std::chrono::duration<double>(timeout_seconds));
  auto pause = std::chrono::microseconds(200);
  for (;;) {
    int status = 0;
    const pid_t w = waitpid(pid, &status, WNOHANG);
    if (w == pid) {
      res.status = status;
      break;
    }
    if (w < 0 && errno != EINTR) {
      res.spawn_failed = true;
      res.output = std::string("waitpid: ") + std::strerror(errno);
      return res;
    }
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      res.status = status;
      res.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(pause);
    pause = std::min(pause * 2, std::chrono::microseconds(20000));
  }
  try {
    res.output = read_text_file(log_file);
  } catch (const Error&) {
  }
  return res;
}

bool is_abort_signal(int sig) {
  return sig == SIGABRT || sig == SIGSEGV || sig == SIGBUS || sig == SIGILL || sig == SIGTRAP || sig == SIGFPE;
}

bool has_assert_diagnostic(const std::string& text) {
  return text.find("Assertion") != std::string::npos && text.find("failed") != std::string::npos;
}

RunResult classify(const ProcResult& p) {
  RunResult r;
  r.stderr_text = p.output;
  if (p.spawn_failed) {
    r.cls = RunClass::Other;
    r.exit_code = -1;
    return r;
  }
  if (p.timed_out) {
    r.cls = RunClass::Other;
    r.timed_out = true;
    return r;
  }
  if (WIFSIGNALED(p.status)) {
    r.signal = WTERMSIG(p.status);
    r.cls = is_abort_signal(r.signal) ? RunClass::Abort : RunClass::Other;
  } else {
    r.exit_code = WEXITSTATUS(p.status);
    if (r.exit_code == 0)
      r.cls = RunClass::CleanExit;
    else
      r.cls = has_assert_diagnostic(p.output) ? RunClass::Abort : RunClass::Other;
  }
  return r;
}

int count_lines_with(const std::string& text, std::string_view needle, std::string_view exclude = {}) {
  int n = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.find(needle) == std::string::npos) continue;
    if (!exclude.empty() && line.find(exclude) != std::string::npos) continue;
    ++n;
  }
  return n;
}

std::string first_line_with(const std::string& text, std::string_view needle) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (line.find(needle) != std::string::npos) return line;
  return {};
}

bool clang_like(const std::vector<std::string>& command) {
  return !command.empty() && fs::path(command[0]).filename().string().find("clang") != std::string::npos;
}

ConfigReport run_config(const CompilerConfig& cfg, const Subject& s, const Options& opts, const fs::path& dir,
                        int slot) {
  ConfigReport rep;
  rep.config = cfg.name;
  if (!compiler_available(cfg.command)) {
    rep.status = Status::Skipped;
    rep.note = "compiler not found: " + (cfg.command.empty() ? std::string("(empty)") : cfg.command[0]);
    return rep;
  }
  const auto source = dir / "put.c";
  const auto binary = dir / ("put_" + std::to_string(slot));
  const auto log = dir / ("log_" + std::to_string(slot) + ".txt");

  std::vector<std::string> argv = cfg.command;
  argv.insert(argv.end(), cfg.flags.begin(), cfg.flags.end());
  argv.insert(argv.end(), {"-o", binary.string(), source.string()});
  const auto compiled = run_process(argv, log, kCompileTimeoutSeconds, false);
  rep.compile_ok = !compiled.spawn_failed && !compiled.timed_out && WIFEXITED(compiled.status) &&
                   WEXITSTATUS(compiled.status) == 0;
  rep.warning_count = count_lines_with(compiled.output, "warning:");
  if (!rep.compile_ok) {
    rep.status = Status::Fail;
    const auto err = first_line_with(compiled.output, "error");
    rep.note = "compilation failed" + (err.empty() ? std::string() : ": " + err);
    return rep;
  }

  auto run = [&](const std::vector<std::string>& args) {
    std::vector<std::string> cmd{binary.string()};
    cmd.insert(cmd.end(), args.begin(), args.end());
    return classify(run_process(cmd, log, opts.timeout_seconds, cfg.sanitizer));
  };
  rep.trigger = run(s.trigger);
  if (s.non_trigger) rep.non_trigger = run(*s.non_trigger);

  if (cfg.sanitizer) {
    // The seeded bug itself is reported at the bug line on the trigger run.
    const std::string bug_at = "put.c:" + std::to_string(s.bug_line) + ":";
    rep.sanitizer_findings = count_lines_with(rep.trigger.stderr_text, "runtime error:", bug_at) +
                             count_lines_with(rep.non_trigger.stderr_text, "runtime error:");
  }

  std::vector<std::string> issues;
  if (rep.warning_count > 0) issues.push_back(std::to_string(rep.warning_count) + " warning(s)");
  if (rep.sanitizer_findings > 0) issues.push_back(std::to_string(rep.sanitizer_findings) + " sanitizer finding(s)");
  if (s.non_trigger && rep.non_trigger.cls != RunClass::CleanExit)
    issues.push_back("non-trigger: " + outcome_label(rep.non_trigger));
  bool inconclusive = false;
  if (rep.trigger.cls == RunClass::CleanExit && s.bug_kind == BugKind::OutOfBounds && !cfg.sanitizer)
    inconclusive = true;
  else if (rep.trigger.cls != RunClass::Abort)
    issues.push_back("trigger: " + outcome_label(rep.trigger));

  if (!issues.empty()) {
    rep.status = Status::Fail;
    for (const auto& i : issues) rep.note += (rep.note.empty() ? "" : "; ") + i;
  } else if (inconclusive) {
    rep.status = Status::Inconclusive;
    rep.note = "out-of-bounds write went undetected without instrumentation";
  } else {
    rep.status = Status::Pass;
  }
  // Large stderr payloads are not worth keeping in the report.
  for (RunResult* r : {&rep.trigger, &rep.non_trigger})
    if (r->stderr_text.size() > 2000) r->stderr_text.resize(2000);
  return rep;
}

Status combine(PutReport& rep, BugKind bug) {
  bool any_run = false, any_fail = false, any_abort = false;
  std::set<RunClass> trig, non;
  for (const auto& c : rep.configs) {
    if (c.status == Status::Skipped) continue;
    any_run = true;
    if (c.status == Status::Fail) {
      any_fail = true;
      rep.problems.push_back(c.config + ": " + c.note);
    }
    if (c.compile_ok) {
      trig.insert(c.trigger.cls);
      non.insert(c.non_trigger.cls);
      if (c.trigger.cls == RunClass::Abort) any_abort = true;
    }
  }
  rep.consistent = trig.size() <= 1 && non.size() <= 1;
  if (!any_run) return Status::Skipped;
  if (any_fail) return Status::Fail;
  if (!rep.consistent && bug == BugKind::Assert) {
    rep.problems.push_back("outcomes differ across configurations");
    return Status::Fail;
  }
  if (bug == BugKind::OutOfBounds && !any_abort) return Status::Inconclusive;
  return Status::Pass;
}

ordered_json run_json(const RunResult& r) { return outcome_label(r); }

}  // namespace

std::vector<std::string> split_cc_list(std::string_view list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const auto words = split_words(list.substr(start, end - start));
    if (!words.empty()) out.push_back(join(words));
    start = end + 1;
  }
  return out;
}

std::vector<std::string> default_compilers() {
  if (const char* env = std::getenv(kCcListEnv); env && *env) {
    auto list = split_cc_list(env);
    if (!list.empty()) return list;
  }
  return {"gcc", "clang"};
}

std::vector<CompilerConfig> default_configs(const std::vector<std::string>& compilers, bool sanitizer) {
  std::vector<CompilerConfig> out;
  for (const auto& cc : compilers) {
    const auto cmd = split_words(cc);
    if (cmd.empty()) continue;
    for (const char* opt : {"-O0", "-O1"}) out.push_back({join(cmd) + " " + opt + " -Wall", cmd, {opt, "-Wall"}, false});
  }
  if (sanitizer && !out.empty()) {
    const CompilerConfig* pick = nullptr;
    for (const auto& c : out)
      if (!pick && clang_like(c.command) && compiler_available(c.command)) pick = &c;
    for (const auto& c : out)
      if (!pick && compiler_available(c.command)) pick = &c;
    if (!pick) pick = &out.front();
    auto cmd = pick->command;
    out.push_back({join(cmd) + " -O0 ubsan",
                   cmd,
                   {"-O0", "-g", "-fsanitize=undefined", "-fno-sanitize-recover=all"},
                   true});
  }
  return out;
}

ConfigFile load_config_file(const fs::path& path) {
  ConfigFile cf;
  try {
    const auto j = ordered_json::parse(read_text_file(path));
    if (j.contains("timeoutSeconds")) cf.timeout_seconds = j.at("timeoutSeconds").get<double>();
    if (j.contains("configs")) {
      for (const auto& c : j.at("configs")) {
        CompilerConfig cfg;
        const auto& cmd = c.at("command");
        cfg.command = cmd.is_array() ? cmd.get<std::vector<std::string>>() : split_words(cmd.get<std::string>());
        cfg.flags = c.value("flags", std::vector<std::string>{});
        cfg.sanitizer = c.value("sanitizer", false);
        cfg.name = c.value("name", join(cfg.command) + (cfg.flags.empty() ? "" : " " + join(cfg.flags)));
        if (cfg.command.empty()) throw Error("config '" + cfg.name + "' has an empty command");
        cf.configs.push_back(std::move(cfg));
      }
    } else if (j.contains("compilers")) {
      cf.configs = default_configs(j.at("compilers").get<std::vector<std::string>>(), j.value("sanitizer", true));
    } else {
      throw Error("expected a \"configs\" or \"compilers\" key");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("compiler config " + path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error("compiler config " + path.string() + ": " + e.what());
  }
  if (cf.configs.empty()) throw Error("compiler config " + path.string() + ": no configurations");
  return cf;
}

bool compiler_available(const std::vector<std::string>& command) {
  if (command.empty() || command[0].empty()) return false;
  const std::string& name = command[0];
  if (name.find('/') != std::string::npos) return access(name.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  if (!path) return false;
  std::string_view rest(path);
  while (true) {
    const auto colon = rest.find(':');
    std::string dir(rest.substr(0, colon));
    if (dir.empty()) dir = ".";
    const auto candidate = fs::path(dir) / name;
    struct stat st {};
    if (stat(candidate.c_str(), &st) == 0 && S_ISREG(st.st_mode) && access(candidate.c_str(), X_OK) == 0) return true;
    if (colon == std::string_view::npos) return false;
    rest.remove_prefix(colon + 1);
  }
}

std::string outcome_label(const RunResult& r) {
  switch (r.cls) {
    case RunClass::Abort:
      return "abort";
    case RunClass::CleanExit:
      return "cleanExit";
    case RunClass::NotRun:
      return "notRun";
    case RunClass::Other:
      break;
  }
  if (r.timed_out) return "other(timeout)";
  if (r.signal) return "other(signal " + std::to_string(r.signal) + ")";
  return "other(exit " + std::to_string(r.exit_code) + ")";
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Inconclusive:
      return "inconclusive";
    case Status::Skipped:
      return "skipped";
  }
  return "?";
}

PutReport verify_subject(const Subject& subject, const Options& opts, const fs::path& work_dir) {
  if (opts.configs.empty()) throw Error("verify: no compiler configurations");
  PutReport rep;
  write_text_file(work_dir / "put.c", subject.source);
  for (std::size_t i = 0; i < opts.configs.size(); ++i)
    rep.configs.push_back(run_config(opts.configs[i], subject, opts, work_dir, static_cast<int>(i)));
  rep.status = combine(rep, subject.bug_kind);
  return rep;
}

PutReport verify_put(const Put& put, const Options& opts, const fs::path& work_dir) {
  return verify_subject({put.source, put.trigger, put.non_trigger, put.bug_line, put.bug_kind}, opts, work_dir);
}

Summary verify_batch(const Manifest& manifest, const fs::path& manifest_dir, const Options& opts) {
  if (opts.configs.empty()) throw Error("verify: no compiler configurations");
  Summary sum;
  sum.batch = manifest.batch;
  sum.total = manifest.records.size();
  sum.puts.resize(manifest.records.size());

  std::string tmpl = (manifest_dir / ".putforge-verify-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw Error("cannot create scratch directory in " + manifest_dir.string());
  const fs::path scratch(tmpl);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < manifest.records.size(); i = next++) {
      const auto& rec = manifest.records[i];
      PutReport& rep = sum.puts[i];
      rep.index = rec.index;
      rep.source_path = rec.source_path;
      if (!rec.ok) {
        rep.status = Status::Fail;
        rep.problems.push_back("generation error: " + rec.error);
        continue;
      }
      try {
        const auto source = read_text_file(manifest_dir / rec.source_path);
        if (sha256_hex(source) != rec.source_sha256) {
          rep.status = Status::Fail;
          rep.problems.push_back("source hash does not match the manifest");
          continue;
        }
        const auto dir = scratch / ("put_" + std::to_string(i));
        fs::create_directories(dir);
        auto r = verify_subject({source, rec.trigger, rec.non_trigger, rec.bug_line, rec.bug_kind}, opts, dir);
        r.index = rep.index;
        r.source_path = rep.source_path;
        rep = std::move(r);
        std::error_code ec;
        fs::remove_all(dir, ec);
      } catch (const std::exception& e) {
        rep.status = Status::Fail;
        rep.problems.push_back(e.what());
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs ? opts.jobs : 1,
                                                        static_cast<unsigned>(std::max<std::size_t>(sum.total, 1))));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::error_code ec;
  fs::remove_all(scratch, ec);

  for (const auto& p : sum.puts) {
    switch (p.status) {
      case Status::Pass:
        ++sum.passed;
        break;
      case Status::Fail:
        ++sum.failed;
        break;
      case Status::Inconclusive:
        ++sum.inconclusive;
        break;
      case Status::Skipped:
        ++sum.skipped;
        break;
    }
  }
  sum.pass = sum.failed == 0;
  return sum;
}

std::string summary_to_json(const Summary& s, const Options& opts) {
  ordered_json j;
  j["formatVersion"] = 1;
  j["batch"] = s.batch;
  j["timeoutSeconds"] = opts.timeout_seconds;
  j["configs"] = ordered_json::array();
  for (const auto& c : opts.configs)
    j["configs"].push_back({{"name", c.name}, {"command", c.command}, {"flags", c.flags}, {"sanitizer", c.sanitizer}});
  j["summary"] = {{"total", s.total},   {"passed", s.passed},   {"failed", s.failed},
                  {"inconclusive", s.inconclusive}, {"skipped", s.skipped}, {"pass", s.pass}};
  j["puts"] = ordered_json::array();
  for (const auto& p : s.puts) {
    ordered_json pj;
    pj["index"] = p.index;
    pj["sourcePath"] = p.source_path;
    pj["status"] = status_name(p.status);
    pj["consistent"] = p.consistent;
    pj["problems"] = p.problems;
    pj["configs"] = ordered_json::array();
    for (const auto& c : p.configs) {
      pj["configs"].push_back({{"name", c.config},
                               {"status", status_name(c.status)},
                               {"compileOk", c.compile_ok},
                               {"warningCount", c.warning_count},
                               {"triggerOutcome", run_json(c.trigger)},
                               {"nonTriggerOutcome", run_json(c.non_trigger)},
                               {"sanitizerFindings", c.sanitizer_findings},
                               {"note", c.note}});
    }
    j["puts"].push_back(std::move(pj));
  }
  return j.dump(2) + "\n";
}

}  // namespace putforge::verify
