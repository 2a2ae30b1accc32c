// putforge command-line driver. Talks to the library only through putforge.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "putforge/putforge.h"

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

// Owning wrapper for the C handles.
template <class T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() {
    if (p) Free(p);
  }
  T** out() { return &p; }
  T* get() const { return p; }
};

using Sequence = Handle<pf_sequence, pf_sequence_free>;
using SpecFile = Handle<pf_spec_file, pf_spec_file_free>;
using RangesH = Handle<pf_ranges, pf_ranges_free>;
using PutH = Handle<pf_put, pf_put_free>;
using ManifestH = Handle<pf_manifest, pf_manifest_free>;
using VerifyConfig = Handle<pf_verify_config, pf_verify_config_free>;
using Report = Handle<pf_verify_report, pf_verify_report_free>;

std::string take(char* s) {
  std::string out = s ? s : "";
  pf_string_free(s);
  return out;
}

int report_error(pf_status st, const std::string& context) {
  std::cerr << "putforge: " << context << ": " << pf_last_error() << "\n";
  return st == PF_ERR_INVALID_ARGUMENT ? kUsage : kDomainFailure;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One-line rendering of the ranges for the effective-configuration header.
std::string ranges_line(const pf_ranges* r) {
  char* json = nullptr;
  if (pf_ranges_to_json(r, &json) != PF_OK) return "?";
  std::string text = take(json), out;
  bool in_str = false;
  for (char c : text) {
    if (c == '"') in_str = !in_str;
    if (!in_str && (c == '\n' || c == ' ')) continue;
    out += c;
  }
  return out;
}

std::string quote_vec(const std::vector<const char*>& args) {
  char* s = nullptr;
  if (pf_shell_quote(args.data(), args.size(), &s) != PF_OK) return "?";
  return take(s);
}

std::string trigger_text(const pf_put* put) {
  std::vector<const char*> v;
  for (size_t i = 0; i < pf_put_trigger_count(put); ++i) v.push_back(pf_put_trigger_arg(put, i));
  return quote_vec(v);
}

std::optional<std::string> non_trigger_text(const pf_put* put) {
  if (!pf_put_has_non_trigger(put)) return std::nullopt;
  std::vector<const char*> v;
  for (size_t i = 0; i < pf_put_non_trigger_count(put); ++i) v.push_back(pf_put_non_trigger_arg(put, i));
  return quote_vec(v);
}

pf_argv_policy policy_of(const std::string& s) { return s == "as-written" ? PF_ARGV_AS_WRITTEN : PF_ARGV_DISTINCT; }

pf_bug_kind bug_of(const std::string& s) {
  if (s == "assert") return PF_BUG_ASSERT;
  if (s == "oob") return PF_BUG_OOB;
  return PF_BUG_DEFAULT;
}

struct Common {
  std::uint64_t seed = 0;
  std::string policy = "distinct";
};

// ---- generate ----

struct GenerateArgs {
  Common common;
  std::string spec, preset, out, bug = "default", ranges, batch, kinds;
  std::size_t count = 0;
  int min_len = 1, max_len = 10;
  unsigned jobs = 0;
};

int cmd_generate(const GenerateArgs& a, const CLI::App& sub) {
  const bool have_spec = !a.spec.empty(), have_preset = !a.preset.empty();
  if (have_spec == have_preset) {
    std::cerr << "putforge: generate needs exactly one of --spec and --preset\n";
    return kUsage;
  }
  const bool count_given = sub.count("--count") > 0;
  const bool custom = have_preset && a.preset == "custom";
  if (have_preset && !custom && count_given) {
    std::cerr << "putforge: --count cannot be used with --preset " << a.preset << " (its size is fixed)\n";
    return kUsage;
  }
  if (custom && !count_given) {
    std::cerr << "putforge: --preset custom requires --count\n";
    return kUsage;
  }
  if (!custom && (sub.count("--min-len") || sub.count("--max-len") || sub.count("--kinds"))) {
    std::cerr << "putforge: --min-len/--max-len/--kinds only apply to --preset custom\n";
    return kUsage;
  }

  RangesH ranges;
  pf_status st = a.ranges.empty() ? pf_ranges_default(ranges.out()) : pf_ranges_load(a.ranges.c_str(), ranges.out());
  if (st != PF_OK) return report_error(st, "ranges");

  pf_generate_options opts;
  pf_generate_options_init(&opts);
  opts.batch = a.batch.empty() ? nullptr : a.batch.c_str();
  opts.seed = a.common.seed;
  opts.ranges = ranges.get();
  opts.policy = policy_of(a.common.policy);
  opts.bug = bug_of(a.bug);
  opts.jobs = a.jobs;

  const std::size_t count = count_given ? a.count : 1;
  std::cerr << "# " << pf_version() << ": generate " << (have_spec ? "--spec " + a.spec : "--preset " + a.preset)
            << (have_spec || custom ? " --count " + std::to_string(count) : "") << " --seed " << a.common.seed
            << " --out " << a.out << " --bug " << a.bug << " --policy " << a.common.policy
            << (a.batch.empty() ? "" : " --batch " + a.batch)
            << (custom ? " --min-len " + std::to_string(a.min_len) + " --max-len " + std::to_string(a.max_len) +
                             (a.kinds.empty() ? "" : " --kinds " + a.kinds)
                       : "")
            << "\n# ranges: " << ranges_line(ranges.get()) << "\n";

  ManifestH manifest;
  if (have_spec) {
    const auto text = read_file(a.spec);
    if (!text) {
      std::cerr << "putforge: cannot read spec file " << a.spec << "\n";
      return kUsage;
    }
    SpecFile file;
    if ((st = pf_spec_file_parse(text->c_str(), file.out())) != PF_OK) return report_error(st, a.spec);
    bool bad = false;
    for (size_t i = 0; i < pf_spec_file_count(file.get()); ++i) {
      int line = 0;
      const char* err = nullptr;
      pf_spec_file_entry(file.get(), i, &line, nullptr, &err);
      if (err) {
        std::cerr << a.spec << ":" << line << ": " << err << "\n";
        bad = true;
      }
    }
    if (bad) return kDomainFailure;
    st = pf_generate_specs(file.get(), count, &opts, a.out.c_str(), manifest.out());
  } else if (custom) {
    st = pf_generate_custom(count, a.min_len, a.max_len, a.kinds.empty() ? nullptr : a.kinds.c_str(), &opts,
                            a.out.c_str(), manifest.out());
  } else {
    st = pf_generate_preset(a.preset.c_str(), &opts, a.out.c_str(), manifest.out());
  }
  if (st == PF_ERR_UNKNOWN_PRESET) {
    std::cerr << "putforge: " << pf_last_error() << " (see `putforge presets`)\n";
    return kUsage;
  }
  if (st != PF_OK) return report_error(st, "generate");

  for (size_t i = 0; i < pf_manifest_record_count(manifest.get()); ++i)
    std::cout << pf_manifest_record_summary(manifest.get(), i) << "\n";
  const auto errors = pf_manifest_error_count(manifest.get());
  std::cerr << "# wrote " << pf_manifest_record_count(manifest.get()) << " record(s) to "
            << (std::filesystem::path(pf_manifest_dir(manifest.get())) / "manifest.json").string() << ", " << errors
            << " error(s)\n";
  return errors ? kDomainFailure : kOk;
}

// ---- parse-check ----

int cmd_parse_check(const std::string& spec, const std::string& line) {
  if (spec.empty() == line.empty()) {
    std::cerr << "putforge: parse-check needs exactly one of --spec and --spec-line\n";
    return kUsage;
  }
  std::cerr << "# " << pf_version() << ": parse-check " << (spec.empty() ? "--spec-line" : "--spec " + spec) << "\n";
  if (!line.empty()) {
    Sequence seq;
    if (auto st = pf_sequence_parse(line.c_str(), seq.out()); st != PF_OK) return report_error(st, "spec line");
    char* text = nullptr;
    pf_sequence_print(seq.get(), &text);
    std::cout << take(text) << "\n";
    return kOk;
  }
  const auto text = read_file(spec);
  if (!text) {
    std::cerr << "putforge: cannot read spec file " << spec << "\n";
    return kUsage;
  }
  SpecFile file;
  if (auto st = pf_spec_file_parse(text->c_str(), file.out()); st != PF_OK) return report_error(st, spec);
  int rc = kOk;
  for (size_t i = 0; i < pf_spec_file_count(file.get()); ++i) {
    int ln = 0;
    const pf_sequence* seq = nullptr;
    const char* err = nullptr;
    pf_spec_file_entry(file.get(), i, &ln, &seq, &err);
    if (err) {
      std::cout << spec << ":" << ln << ": error: " << err << "\n";
      rc = kDomainFailure;
    } else {
      char* printed = nullptr;
      pf_sequence_print(seq, &printed);
      std::cout << spec << ":" << ln << ": ok: " << take(printed) << "\n";
    }
  }
  return rc;
}

// ---- derive / metrics on a single spec line ----

int make_put(const std::string& line, const Common& c, const std::string& ranges_path, PutH& put) {
  Sequence seq;
  if (auto st = pf_sequence_parse(line.c_str(), seq.out()); st != PF_OK) return report_error(st, "spec line");
  RangesH ranges;
  pf_status st = ranges_path.empty() ? pf_ranges_default(ranges.out()) : pf_ranges_load(ranges_path.c_str(), ranges.out());
  if (st != PF_OK) return report_error(st, "ranges");
  st = pf_put_generate(seq.get(), ranges.get(), c.seed, policy_of(c.policy), PF_BUG_DEFAULT, put.out());
  if (st != PF_OK) return report_error(st, "derive");
  return kOk;
}

int cmd_derive(const std::string& line, const Common& c, const std::string& ranges, bool leaves) {
  std::cerr << "# " << pf_version() << ": derive --seed " << c.seed << " --policy " << c.policy
            << (ranges.empty() ? "" : " --ranges " + ranges) << "\n";
  PutH put;
  if (int rc = make_put(line, c, ranges, put); rc != kOk) return rc;
  std::cerr << "# instance: " << pf_put_instance_text(put.get()) << "\n";
  std::cout << "trigger: " << trigger_text(put.get()) << "\n";
  const auto nt = non_trigger_text(put.get());
  std::cout << "nontrigger: " << (nt ? *nt : "(none)") << "\n";
  if (leaves) {
    for (size_t i = 0; i < pf_put_leaf_count(put.get()); ++i) {
      int item = 0, hole = 0, reachable = 0;
      const char* argv = nullptr;
      pf_put_leaf(put.get(), i, &item, &hole, &reachable, &argv);
      std::cout << "leaf " << item << "." << hole << ": " << (reachable ? argv : "(unreachable)") << "\n";
    }
  }
  return kOk;
}

int cmd_metrics(const std::string& line, const std::string& manifest_path, const Common& c,
                const std::string& ranges) {
  if (line.empty() == manifest_path.empty()) {
    std::cerr << "putforge: metrics needs exactly one of --spec-line and --manifest\n";
    return kUsage;
  }
  if (!line.empty()) {
    std::cerr << "# " << pf_version() << ": metrics --seed " << c.seed << " --policy " << c.policy
              << (ranges.empty() ? "" : " --ranges " + ranges) << "\n";
    PutH put;
    if (int rc = make_put(line, c, ranges, put); rc != kOk) return rc;
    const auto m = pf_put_metrics(put.get());
    std::cout << "cyclomatic: " << m.cyclomatic << "\npathStatements: " << m.path_statements
              << "\ntransformationCount: " << m.transformation_count << "\n";
    return kOk;
  }
  std::cerr << "# " << pf_version() << ": metrics --manifest " << manifest_path << "\n";
  if (!std::filesystem::exists(manifest_path)) {
    std::cerr << "putforge: no such manifest: " << manifest_path << "\n";
    return kUsage;
  }
  ManifestH m;
  if (auto st = pf_manifest_read(manifest_path.c_str(), m.out()); st != PF_OK) return report_error(st, manifest_path);
  std::int64_t lo = 0, hi = 0, sum = 0;
  std::size_t n = 0;
  for (size_t i = 0; i < pf_manifest_record_count(m.get()); ++i) {
    if (!pf_manifest_record_ok(m.get(), i)) continue;
    const auto mt = pf_manifest_record_metrics(m.get(), i);
    std::cout << "#" << i << " cyclomatic=" << mt.cyclomatic << " pathStatements=" << mt.path_statements
              << " transformationCount=" << mt.transformation_count << "\n";
    lo = n ? std::min(lo, mt.cyclomatic) : mt.cyclomatic;
    hi = n ? std::max(hi, mt.cyclomatic) : mt.cyclomatic;
    sum += mt.cyclomatic;
    ++n;
  }
  if (n)
    std::cout << "cyclomatic min=" << lo << " mean=" << (sum + static_cast<std::int64_t>(n) / 2) / static_cast<std::int64_t>(n)
              << " max=" << hi << " over " << n << " PUT(s)\n";
  return kOk;
}

// ---- verify ----

int cmd_verify(const std::string& manifest, unsigned jobs, const std::string& cc_list, const std::string& config,
               double timeout, bool no_sanitizer, bool timeout_given) {
  if (!cc_list.empty() && !config.empty()) {
    std::cerr << "putforge: --cc-list and --config are mutually exclusive\n";
    return kUsage;
  }
  if (!std::filesystem::exists(manifest)) {
    std::cerr << "putforge: no such manifest: " << manifest << "\n";
    return kUsage;
  }
  VerifyConfig cfg;
  pf_status st = config.empty()
                     ? pf_verify_config_default(cc_list.empty() ? nullptr : cc_list.c_str(), no_sanitizer ? 0 : 1, cfg.out())
                     : pf_verify_config_load(config.c_str(), cfg.out());
  if (st != PF_OK) return report_error(st, "compiler configuration");
  if (timeout_given && (st = pf_verify_config_set_timeout(cfg.get(), timeout)) != PF_OK)
    return report_error(st, "--timeout");

  std::cerr << "# " << pf_version() << ": verify --manifest " << manifest << " --jobs " << jobs << " --timeout "
            << pf_verify_config_timeout(cfg.get()) << "\n";
  for (size_t i = 0; i < pf_verify_config_count(cfg.get()); ++i)
    std::cerr << "# config: " << pf_verify_config_name(cfg.get(), i)
              << (pf_verify_config_available(cfg.get(), i) ? "" : " (not found, skipped)") << "\n";

  Report rep;
  if ((st = pf_verify_manifest(manifest.c_str(), cfg.get(), jobs, rep.out())) != PF_OK)
    return report_error(st, "verify");
  for (size_t i = 0; i < pf_verify_report_put_count(rep.get()); ++i)
    std::cout << pf_verify_report_put_line(rep.get(), i) << "\n";
  const auto c = pf_verify_report_counts(rep.get());
  std::cout << "summary: " << (c.pass ? (c.total && c.skipped == c.total ? "skipped" : "pass") : "fail") << " total=" << c.total
            << " passed=" << c.passed << " failed=" << c.failed << " inconclusive=" << c.inconclusive
            << " skipped=" << c.skipped << "\n";
  return c.pass ? kOk : kDomainFailure;
}

int cmd_presets() {
  for (size_t i = 0; i < pf_preset_count(); ++i) {
    const char* name = nullptr;
    const char* desc = nullptr;
    size_t count = 0;
    pf_preset_info(i, &name, &count, &desc);
    std::printf("%-7s %4zu  %s\n", name, count, desc);
  }
  std::printf("%-7s %4s  %s\n", "custom", "N", "--count N random sequences, --min-len/--max-len/--kinds");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"putforge: generate C programs with one seeded, input-triggered bug"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pf_version());

  auto add_common = [](CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
    sub->add_option("--policy", c.policy, "argv binding for input slots")
        ->check(CLI::IsMember({"distinct", "as-written"}))
        ->capture_default_str();
  };

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "generate a batch of PUTs and its manifest");
  generate->add_option("--spec", gen.spec, "file with one transformation sequence per line");
  generate->add_option("--preset", gen.preset, "preset batch name (see `presets`), or custom");
  generate->add_option("--count", gen.count, "instantiations per spec line, or PUTs for --preset custom");
  generate->add_option("--out", gen.out, "output directory")->required();
  generate->add_option("--bug", gen.bug, "override the seeded bug kind")
      ->check(CLI::IsMember({"default", "assert", "oob"}))
      ->capture_default_str();
  generate->add_option("--ranges", gen.ranges, "JSON file with parameter ranges");
  generate->add_option("--batch", gen.batch, "batch name (defaults to the preset name, or spec)");
  generate->add_option("--jobs", gen.jobs, "worker threads, 0 for all cores")->capture_default_str();
  generate->add_option("--min-len", gen.min_len, "custom preset: minimum sequence length")->capture_default_str();
  generate->add_option("--max-len", gen.max_len, "custom preset: maximum sequence length")->capture_default_str();
  generate->add_option("--kinds", gen.kinds, "custom preset: comma-separated kinds, e.g. IC,PC");
  add_common(generate, gen.common);

  std::string pc_spec, pc_line;
  auto* parse_check = app.add_subcommand("parse-check", "parse and validate sequences, print canonical form");
  parse_check->add_option("--spec", pc_spec, "spec file");
  parse_check->add_option("--spec-line", pc_line, "single sequence");

  Common dcommon;
  std::string d_line, d_ranges;
  bool d_leaves = false;
  auto* derive = app.add_subcommand("derive", "print the triggering and non-triggering inputs of a sequence");
  derive->add_option("--spec-line", d_line, "sequence text")->required();
  derive->add_option("--ranges", d_ranges, "JSON file with parameter ranges");
  derive->add_flag("--leaves", d_leaves, "also print a reaching input for every leaf");
  add_common(derive, dcommon);

  Common mcommon;
  std::string m_line, m_manifest, m_ranges;
  auto* metrics = app.add_subcommand("metrics", "complexity metrics for a sequence or a generated batch");
  metrics->add_option("--spec-line", m_line, "sequence text");
  metrics->add_option("--manifest", m_manifest, "manifest.json of a generated batch");
  metrics->add_option("--ranges", m_ranges, "JSON file with parameter ranges");
  add_common(metrics, mcommon);

  std::string v_manifest, v_cc, v_config;
  unsigned v_jobs = 1;
  double v_timeout = 10.0;
  bool v_no_san = false;
  auto* verify = app.add_subcommand("verify", "compile and run every PUT of a batch");
  verify->add_option("--manifest", v_manifest, "manifest.json")->required();
  verify->add_option("--jobs", v_jobs, "parallel PUTs")->capture_default_str()->check(CLI::PositiveNumber);
  verify->add_option("--cc-list", v_cc, "comma-separated compilers (default: $PUTFORGE_CC_LIST or gcc,clang)");
  verify->add_option("--config", v_config, "JSON compiler configuration file");
  verify->add_option("--timeout", v_timeout, "per-run limit in seconds")->capture_default_str();
  verify->add_flag("--no-sanitizer", v_no_san, "skip the undefined-behavior sanitizer pass");

  auto* presets = app.add_subcommand("presets", "list preset batches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, *generate);
    if (parse_check->parsed()) return cmd_parse_check(pc_spec, pc_line);
    if (derive->parsed()) return cmd_derive(d_line, dcommon, d_ranges, d_leaves);
    if (metrics->parsed()) return cmd_metrics(m_line, m_manifest, mcommon, m_ranges);
    if (verify->parsed())
      return cmd_verify(v_manifest, v_jobs, v_cc, v_config, v_timeout, v_no_san, verify->count("--timeout") > 0);
    if (presets->parsed()) return cmd_presets();
  } catch (const std::exception& e) {
    std::cerr << "putforge: " << e.what() << "\n";
    return kDomainFailure;
  }
  return kUsage;
}
