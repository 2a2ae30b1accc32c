#include "putforge/putforge.h"

#include <stdlib.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "putforge/batch.hpp"
#include "putforge/dsl.hpp"
#include "putforge/manifest.hpp"
#include "putforge/oracle.hpp"
#include "putforge/verify.hpp"

using namespace putforge;
namespace fs = std::filesystem;

struct pf_sequence {
  SequenceSpec spec;
};

struct pf_spec_file {
  std::vector<dsl::SpecLine> lines;
  std::vector<std::unique_ptr<pf_sequence>> seqs;  // null for lines that failed
};

struct pf_ranges {
  Ranges ranges;
};

struct pf_put {
  Put put;
  std::string instance_text;
  std::vector<oracle::LeafInput> leaves;
  std::vector<std::string> leaf_text;
};

struct pf_manifest {
  Manifest manifest;
  std::string dir;
  std::vector<std::string> summaries;
};

struct pf_verify_config {
  verify::Options opts;
};

struct pf_verify_report {
  verify::Summary summary;
  verify::Options opts;
  std::vector<std::string> lines;
};

namespace {

thread_local std::string g_last_error;

pf_status fail(pf_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs `f`, translating exceptions into status codes. `io` marks calls whose
// plain Error failures come from the file system.
template <class F>
pf_status guard(F&& f, bool io = false) {
  try {
    g_last_error.clear();
    return f();
  } catch (const dsl::ParseError& e) {
    return fail(PF_ERR_PARSE, e.what());
  } catch (const ValidationError& e) {
    return fail(PF_ERR_VALIDATION, e.what());
  } catch (const oracle::ConflictError& e) {
    return fail(PF_ERR_CONFLICT, e.what());
  } catch (const VersionError& e) {
    return fail(PF_ERR_VERSION, e.what());
  } catch (const UnknownPresetError& e) {
    return fail(PF_ERR_UNKNOWN_PRESET, e.what());
  } catch (const Error& e) {
    return fail(io ? PF_ERR_IO : PF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PF_ERR_INTERNAL, "unknown exception");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define PF_REQUIRE(cond) \
  if (!(cond)) return fail(PF_ERR_INVALID_ARGUMENT, "invalid argument: " #cond)

std::optional<BugKind> bug_from(pf_bug_kind b) {
  switch (b) {
    case PF_BUG_ASSERT:
      return BugKind::Assert;
    case PF_BUG_OOB:
      return BugKind::OutOfBounds;
    default:
      return std::nullopt;
  }
}

ArgvPolicy policy_from(pf_argv_policy p) { return p == PF_ARGV_AS_WRITTEN ? ArgvPolicy::AsWritten : ArgvPolicy::Distinct; }

GenerateOptions options_from(const pf_generate_options* o, const char* default_batch) {
  GenerateOptions g;
  g.batch = default_batch;
  if (!o) return g;
  if (o->batch && *o->batch) g.batch = o->batch;
  g.seed = o->seed;
  if (o->ranges) g.ranges = o->ranges->ranges;
  if (o->policy != PF_ARGV_DISTINCT && o->policy != PF_ARGV_AS_WRITTEN) throw Error("unknown argv policy");
  g.policy = policy_from(o->policy);
  g.bug = bug_from(o->bug);
  g.jobs = o->jobs;
  return g;
}

void check_batch_name(const std::string& name) {
  if (name.empty() || name == "." || name == ".." || name.find('/') != std::string::npos)
    throw Error("invalid batch name '" + name + "'");
}

pf_manifest* wrap_manifest(Manifest m, const fs::path& dir) {
  auto out = std::make_unique<pf_manifest>();
  out->manifest = std::move(m);
  out->dir = dir.string();
  for (const auto& r : out->manifest.records) out->summaries.push_back(summary_line(r));
  return out.release();
}

pf_status run_batch(const std::vector<BatchItem>& items, const GenerateOptions& g, const char* out_dir,
                    pf_manifest** out) {
  auto m = generate_batch(items, g, out_dir);
  *out = wrap_manifest(std::move(m), fs::path(out_dir) / g.batch);
  return PF_OK;
}

pf_metrics to_c(const Metrics& m) { return {m.cyclomatic, m.path_statements, m.transformation_count}; }

pf_verify_report* wrap_report(verify::Summary s, const verify::Options& opts) {
  auto r = std::make_unique<pf_verify_report>();
  r->summary = std::move(s);
  r->opts = opts;
  for (const auto& p : r->summary.puts) {
    std::string line = "#" + std::to_string(p.index) + " " + (p.source_path.empty() ? "-" : p.source_path) + " " +
                       std::string(verify::status_name(p.status));
    for (std::size_t i = 0; i < p.problems.size(); ++i) line += (i ? "; " : ": ") + p.problems[i];
    r->lines.push_back(std::move(line));
  }
  return r.release();
}

}  // namespace

extern "C" {

const char* pf_last_error(void) { return g_last_error.c_str(); }

const char* pf_status_name(pf_status status) {
  switch (status) {
    case PF_OK:
      return "ok";
    case PF_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case PF_ERR_PARSE:
      return "parse error";
    case PF_ERR_VALIDATION:
      return "validation error";
    case PF_ERR_CONFLICT:
      return "conflict";
    case PF_ERR_IO:
      return "i/o error";
    case PF_ERR_VERSION:
      return "version error";
    case PF_ERR_UNKNOWN_PRESET:
      return "unknown preset";
    case PF_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* pf_version(void) { return kGeneratorVersion.data(); }

void pf_string_free(char* s) { std::free(s); }

// ---- sequences ----

pf_status pf_sequence_parse(const char* text, pf_sequence** out) {
  PF_REQUIRE(text && out);
  return guard([&] {
    auto seq = std::make_unique<pf_sequence>();
    seq->spec = dsl::parse(text);
    *out = seq.release();
    return PF_OK;
  });
}

pf_status pf_sequence_print(const pf_sequence* seq, char** out) {
  PF_REQUIRE(seq && out);
  return guard([&] {
    *out = dup_string(dsl::print(seq->spec));
    return PF_OK;
  });
}

size_t pf_sequence_length(const pf_sequence* seq) { return seq ? seq->spec.items.size() : 0; }

void pf_sequence_free(pf_sequence* seq) { delete seq; }

pf_status pf_spec_file_parse(const char* text, pf_spec_file** out) {
  PF_REQUIRE(text && out);
  return guard([&] {
    auto f = std::make_unique<pf_spec_file>();
    f->lines = dsl::parse_file(text);
    for (auto& l : f->lines) {
      std::unique_ptr<pf_sequence> seq;
      if (l.spec) seq.reset(new pf_sequence{*l.spec});
      f->seqs.push_back(std::move(seq));
    }
    *out = f.release();
    return PF_OK;
  });
}

size_t pf_spec_file_count(const pf_spec_file* file) { return file ? file->lines.size() : 0; }

pf_status pf_spec_file_entry(const pf_spec_file* file, size_t i, int* line, const pf_sequence** seq,
                             const char** error) {
  PF_REQUIRE(file && i < file->lines.size());
  if (line) *line = file->lines[i].line;
  if (seq) *seq = file->seqs[i].get();
  if (error) *error = file->seqs[i] ? nullptr : file->lines[i].error.c_str();
  return PF_OK;
}

void pf_spec_file_free(pf_spec_file* file) { delete file; }

// ---- ranges ----

pf_status pf_ranges_default(pf_ranges** out) {
  PF_REQUIRE(out);
  return guard([&] {
    *out = new pf_ranges{Ranges::defaults()};
    return PF_OK;
  });
}

pf_status pf_ranges_from_json(const char* text, pf_ranges** out) {
  PF_REQUIRE(text && out);
  return guard([&] {
    *out = new pf_ranges{ranges_from_json(text)};
    return PF_OK;
  });
}

pf_status pf_ranges_load(const char* path, pf_ranges** out) {
  PF_REQUIRE(path && out);
  std::string text;
  if (auto st = guard([&] { return text = read_text_file(path), PF_OK; }, true); st != PF_OK) return st;
  return guard([&] {
    *out = new pf_ranges{ranges_from_json(text)};
    return PF_OK;
  });
}

pf_status pf_ranges_set(pf_ranges* ranges, const char* key, int64_t min, int64_t max) {
  PF_REQUIRE(ranges && key);
  return guard([&] {
    Ranges copy = ranges->ranges;
    copy.set(key, {min, max});
    copy.check();
    ranges->ranges = std::move(copy);
    return PF_OK;
  });
}

pf_status pf_ranges_to_json(const pf_ranges* ranges, char** out) {
  PF_REQUIRE(ranges && out);
  return guard([&] {
    *out = dup_string(ranges_to_json(ranges->ranges));
    return PF_OK;
  });
}

void pf_ranges_free(pf_ranges* ranges) { delete ranges; }

// ---- single PUT ----

pf_status pf_put_generate(const pf_sequence* seq, const pf_ranges* ranges, uint64_t seed, pf_argv_policy policy,
                          pf_bug_kind bug, pf_put** out) {
  PF_REQUIRE(seq && out);
  PF_REQUIRE(policy == PF_ARGV_DISTINCT || policy == PF_ARGV_AS_WRITTEN);
  return guard([&] {
    auto p = std::make_unique<pf_put>();
    const Ranges r = ranges ? ranges->ranges : Ranges::defaults();
    r.check();
    p->put = generate_put(seq->spec, r, seed, policy_from(policy), EmitOptions{bug_from(bug)});
    p->instance_text = dsl::print(SequenceSpec{p->put.instance.items});
    p->leaves = oracle::leaf_inputs(p->put.instance);
    for (const auto& l : p->leaves) p->leaf_text.push_back(l.argv ? shell_quote(*l.argv) : std::string());
    *out = p.release();
    return PF_OK;
  });
}

const char* pf_put_source(const pf_put* put) { return put ? put->put.source.c_str() : ""; }
const char* pf_put_instance_text(const pf_put* put) { return put ? put->instance_text.c_str() : ""; }
int pf_put_bug_line(const pf_put* put) { return put ? put->put.bug_line : 0; }
pf_bug_kind pf_put_bug_kind(const pf_put* put) {
  if (!put) return PF_BUG_DEFAULT;
  return put->put.bug_kind == BugKind::Assert ? PF_BUG_ASSERT : PF_BUG_OOB;
}
int pf_put_argv_arity(const pf_put* put) { return put ? put->put.argv_arity : 0; }
size_t pf_put_trigger_count(const pf_put* put) { return put ? put->put.trigger.size() : 0; }
const char* pf_put_trigger_arg(const pf_put* put, size_t i) {
  return put && i < put->put.trigger.size() ? put->put.trigger[i].c_str() : nullptr;
}
int pf_put_has_non_trigger(const pf_put* put) { return put && put->put.non_trigger ? 1 : 0; }
size_t pf_put_non_trigger_count(const pf_put* put) {
  return put && put->put.non_trigger ? put->put.non_trigger->size() : 0;
}
const char* pf_put_non_trigger_arg(const pf_put* put, size_t i) {
  return put && put->put.non_trigger && i < put->put.non_trigger->size() ? (*put->put.non_trigger)[i].c_str()
                                                                         : nullptr;
}
pf_metrics pf_put_metrics(const pf_put* put) { return put ? to_c(put->put.metrics) : pf_metrics{0, 0, 0}; }
size_t pf_put_leaf_count(const pf_put* put) { return put ? put->leaves.size() : 0; }

pf_status pf_put_leaf(const pf_put* put, size_t i, int* item, int* hole, int* reachable, const char** argv_text) {
  PF_REQUIRE(put && i < put->leaves.size());
  const auto& l = put->leaves[i];
  if (item) *item = l.item;
  if (hole) *hole = l.hole;
  if (reachable) *reachable = l.argv ? 1 : 0;
  if (argv_text) *argv_text = put->leaf_text[i].c_str();
  return PF_OK;
}

void pf_put_free(pf_put* put) { delete put; }

pf_status pf_shell_quote(const char* const* argv, size_t argc, char** out) {
  PF_REQUIRE(out && (argv || argc == 0));
  return guard([&] {
    std::vector<std::string> args;
    for (size_t i = 0; i < argc; ++i) {
      if (!argv[i]) throw Error("null argument");
      args.emplace_back(argv[i]);
    }
    *out = dup_string(shell_quote(args));
    return PF_OK;
  });
}

// ---- presets and batches ----

size_t pf_preset_count(void) { return preset_catalog().size(); }

pf_status pf_preset_info(size_t i, const char** name, size_t* count, const char** description) {
  const auto& cat = preset_catalog();
  PF_REQUIRE(i < cat.size());
  if (name) *name = cat[i].name.c_str();
  if (count) *count = cat[i].count;
  if (description) *description = cat[i].description.c_str();
  return PF_OK;
}

void pf_generate_options_init(pf_generate_options* opts) {
  if (!opts) return;
  opts->batch = nullptr;
  opts->seed = 0;
  opts->ranges = nullptr;
  opts->policy = PF_ARGV_DISTINCT;
  opts->bug = PF_BUG_DEFAULT;
  opts->jobs = 0;
}

pf_status pf_generate_preset(const char* preset, const pf_generate_options* opts, const char* out_dir,
                             pf_manifest** out) {
  PF_REQUIRE(preset && out_dir && out);
  GenerateOptions g;
  std::vector<BatchItem> items;
  if (auto st = guard([&] {
        g = options_from(opts, preset);
        check_batch_name(g.batch);
        items = make_batch(preset, g.seed);
        return PF_OK;
      });
      st != PF_OK)
    return st;
  return guard([&] { return run_batch(items, g, out_dir, out); }, true);
}

pf_status pf_generate_custom(size_t count, int min_length, int max_length, const char* kinds,
                             const pf_generate_options* opts, const char* out_dir, pf_manifest** out) {
  PF_REQUIRE(out_dir && out);
  GenerateOptions g;
  std::vector<BatchItem> items;
  if (auto st = guard([&] {
        CustomRecipe recipe;
        recipe.count = count;
        recipe.min_length = min_length;
        recipe.max_length = max_length;
        if (kinds) {
          recipe.kinds.clear();
          std::string_view rest(kinds);
          while (!rest.empty()) {
            const auto comma = rest.find(',');
            const auto word = rest.substr(0, comma);
            const auto kind = kind_from_name(word);
            if (!kind) throw Error("unknown transformation kind '" + std::string(word) + "'");
            if (std::find(recipe.kinds.begin(), recipe.kinds.end(), *kind) == recipe.kinds.end())
              recipe.kinds.push_back(*kind);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
          }
        }
        g = options_from(opts, "custom");
        check_batch_name(g.batch);
        items = make_custom_batch(recipe, g.seed);
        return PF_OK;
      });
      st != PF_OK)
    return st;
  return guard([&] { return run_batch(items, g, out_dir, out); }, true);
}

pf_status pf_generate_specs(const pf_spec_file* file, size_t count, const pf_generate_options* opts,
                            const char* out_dir, pf_manifest** out) {
  PF_REQUIRE(file && out_dir && out);
  for (const auto& l : file->lines)
    if (!l.spec) return fail(PF_ERR_PARSE, "line " + std::to_string(l.line) + ": " + l.error);
  GenerateOptions g;
  std::vector<BatchItem> items;
  if (auto st = guard([&] {
        std::vector<SequenceSpec> specs;
        for (const auto& l : file->lines) specs.push_back(*l.spec);
        g = options_from(opts, "spec");
        check_batch_name(g.batch);
        items = items_from_specs(specs, count, g.seed);
        return PF_OK;
      });
      st != PF_OK)
    return st;
  return guard([&] { return run_batch(items, g, out_dir, out); }, true);
}

pf_status pf_manifest_read(const char* path, pf_manifest** out) {
  PF_REQUIRE(path && out);
  std::string text;
  if (auto st = guard([&] { return text = read_text_file(path), PF_OK; }, true); st != PF_OK) return st;
  return guard([&] {
    auto dir = fs::path(path).parent_path();
    if (dir.empty()) dir = ".";
    *out = wrap_manifest(manifest_from_json(text), dir);
    return PF_OK;
  });
}

size_t pf_manifest_record_count(const pf_manifest* m) { return m ? m->manifest.records.size() : 0; }
int pf_manifest_record_ok(const pf_manifest* m, size_t i) {
  return m && i < m->manifest.records.size() && m->manifest.records[i].ok ? 1 : 0;
}
const char* pf_manifest_record_summary(const pf_manifest* m, size_t i) {
  return m && i < m->summaries.size() ? m->summaries[i].c_str() : nullptr;
}
pf_metrics pf_manifest_record_metrics(const pf_manifest* m, size_t i) {
  return m && i < m->manifest.records.size() ? to_c(m->manifest.records[i].metrics) : pf_metrics{0, 0, 0};
}
size_t pf_manifest_error_count(const pf_manifest* m) {
  if (!m) return 0;
  size_t n = 0;
  for (const auto& r : m->manifest.records) n += r.ok ? 0 : 1;
  return n;
}
const char* pf_manifest_batch(const pf_manifest* m) { return m ? m->manifest.batch.c_str() : ""; }
const char* pf_manifest_dir(const pf_manifest* m) { return m ? m->dir.c_str() : ""; }

pf_status pf_manifest_to_json(const pf_manifest* m, char** out) {
  PF_REQUIRE(m && out);
  return guard([&] {
    *out = dup_string(manifest_to_json(m->manifest));
    return PF_OK;
  });
}

void pf_manifest_free(pf_manifest* m) { delete m; }

// ---- verification ----

pf_status pf_verify_config_default(const char* cc_list, int sanitizer, pf_verify_config** out) {
  PF_REQUIRE(out);
  return guard([&] {
    const auto compilers = cc_list ? verify::split_cc_list(cc_list) : verify::default_compilers();
    if (compilers.empty()) throw Error("empty compiler list");
    auto cfg = std::make_unique<pf_verify_config>();
    cfg->opts.configs = verify::default_configs(compilers, sanitizer != 0);
    *out = cfg.release();
    return PF_OK;
  });
}

pf_status pf_verify_config_load(const char* path, pf_verify_config** out) {
  PF_REQUIRE(path && out);
  return guard(
      [&] {
        const auto file = verify::load_config_file(path);
        auto cfg = std::make_unique<pf_verify_config>();
        cfg->opts.configs = file.configs;
        if (file.timeout_seconds) {
          if (!(*file.timeout_seconds > 0)) throw Error("timeoutSeconds must be positive");
          cfg->opts.timeout_seconds = *file.timeout_seconds;
        }
        *out = cfg.release();
        return PF_OK;
      },
      true);
}

size_t pf_verify_config_count(const pf_verify_config* cfg) { return cfg ? cfg->opts.configs.size() : 0; }
const char* pf_verify_config_name(const pf_verify_config* cfg, size_t i) {
  return cfg && i < cfg->opts.configs.size() ? cfg->opts.configs[i].name.c_str() : nullptr;
}
int pf_verify_config_available(const pf_verify_config* cfg, size_t i) {
  return cfg && i < cfg->opts.configs.size() && verify::compiler_available(cfg->opts.configs[i].command) ? 1 : 0;
}
pf_status pf_verify_config_set_timeout(pf_verify_config* cfg, double seconds) {
  PF_REQUIRE(cfg && seconds > 0);
  cfg->opts.timeout_seconds = seconds;
  return PF_OK;
}
double pf_verify_config_timeout(const pf_verify_config* cfg) { return cfg ? cfg->opts.timeout_seconds : 0; }
void pf_verify_config_free(pf_verify_config* cfg) { delete cfg; }

pf_status pf_verify_manifest(const char* manifest_path, const pf_verify_config* cfg, unsigned jobs,
                             pf_verify_report** out) {
  PF_REQUIRE(manifest_path && cfg && out);
  return guard(
      [&] {
        auto dir = fs::path(manifest_path).parent_path();
        if (dir.empty()) dir = ".";
        const auto manifest = read_manifest(manifest_path);
        auto opts = cfg->opts;
        opts.jobs = jobs ? jobs : 1;
        auto summary = verify::verify_batch(manifest, dir, opts);
        write_text_file(dir / "verification.json", verify::summary_to_json(summary, opts));
        *out = wrap_report(std::move(summary), opts);
        return PF_OK;
      },
      true);
}

pf_status pf_verify_put(const pf_put* put, const pf_verify_config* cfg, const char* work_dir,
                        pf_verify_report** out) {
  PF_REQUIRE(put && cfg && work_dir && out);
  return guard(
      [&] {
        std::string tmpl = (fs::path(work_dir) / "putforge-XXXXXX").string();
        if (!mkdtemp(tmpl.data())) throw Error("cannot create scratch directory in " + std::string(work_dir));
        verify::Summary s;
        try {
          s.puts.push_back(verify::verify_put(put->put, cfg->opts, tmpl));
        } catch (...) {
          std::error_code ec;
          fs::remove_all(tmpl, ec);
          throw;
        }
        std::error_code ec;
        fs::remove_all(tmpl, ec);
        s.total = 1;
        const auto st = s.puts[0].status;
        s.passed = st == verify::Status::Pass;
        s.failed = st == verify::Status::Fail;
        s.inconclusive = st == verify::Status::Inconclusive;
        s.skipped = st == verify::Status::Skipped;
        s.pass = !s.failed;
        *out = wrap_report(std::move(s), cfg->opts);
        return PF_OK;
      },
      true);
}

pf_verify_counts pf_verify_report_counts(const pf_verify_report* r) {
  if (!r) return {0, 0, 0, 0, 0, 0};
  const auto& s = r->summary;
  return {s.total, s.passed, s.failed, s.inconclusive, s.skipped, s.pass ? 1 : 0};
}
size_t pf_verify_report_put_count(const pf_verify_report* r) { return r ? r->lines.size() : 0; }
const char* pf_verify_report_put_line(const pf_verify_report* r, size_t i) {
  return r && i < r->lines.size() ? r->lines[i].c_str() : nullptr;
}
pf_status pf_verify_report_to_json(const pf_verify_report* r, char** out) {
  PF_REQUIRE(r && out);
  return guard([&] {
    *out = dup_string(verify::summary_to_json(r->summary, r->opts));
    return PF_OK;
  });
}
void pf_verify_report_free(pf_verify_report* r) { delete r; }

}  // extern "C"
