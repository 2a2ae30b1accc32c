/* putforge C API.
 *
 * Every fallible call returns a pf_status; on failure pf_last_error() gives a
 * message for the calling thread. Objects are opaque and owned by the caller
 * once returned through an out parameter; release them with the matching
 * *_free function. Strings returned as `const char*` live as long as the
 * object they were read from. Strings returned through `char**` must be
 * released with pf_string_free.
 */
#ifndef PUTFORGE_H
#define PUTFORGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pf_status {
  PF_OK = 0,
  PF_ERR_INVALID_ARGUMENT = 1,
  PF_ERR_PARSE = 2,
  PF_ERR_VALIDATION = 3,
  PF_ERR_CONFLICT = 4,
  PF_ERR_IO = 5,
  PF_ERR_VERSION = 6,
  PF_ERR_UNKNOWN_PRESET = 7,
  PF_ERR_INTERNAL = 99
} pf_status;

typedef enum pf_argv_policy { PF_ARGV_DISTINCT = 0, PF_ARGV_AS_WRITTEN = 1 } pf_argv_policy;

typedef enum pf_bug_kind { PF_BUG_DEFAULT = -1, PF_BUG_ASSERT = 0, PF_BUG_OOB = 1 } pf_bug_kind;

const char* pf_last_error(void);
const char* pf_status_name(pf_status status);
const char* pf_version(void);
void pf_string_free(char* s);

/* ---- sequences ---- */

typedef struct pf_sequence pf_sequence;

pf_status pf_sequence_parse(const char* text, pf_sequence** out);
/* Canonical one-line rendering. */
pf_status pf_sequence_print(const pf_sequence* seq, char** out);
size_t pf_sequence_length(const pf_sequence* seq);
void pf_sequence_free(pf_sequence* seq);

/* One sequence per line; '#' comments and blank lines are skipped. Parsing a
 * file never fails as a whole: bad lines carry an error message. */
typedef struct pf_spec_file pf_spec_file;

pf_status pf_spec_file_parse(const char* text, pf_spec_file** out);
size_t pf_spec_file_count(const pf_spec_file* file);
/* *seq is NULL and *error non-NULL for a line that did not parse. */
pf_status pf_spec_file_entry(const pf_spec_file* file, size_t i, int* line, const pf_sequence** seq,
                             const char** error);
void pf_spec_file_free(pf_spec_file* file);

/* ---- parameter ranges ---- */

typedef struct pf_ranges pf_ranges;

pf_status pf_ranges_default(pf_ranges** out);
pf_status pf_ranges_from_json(const char* text, pf_ranges** out);
pf_status pf_ranges_load(const char* path, pf_ranges** out);
/* Keys: IC.v2, SC.s2, FL.e, PC.n, CC.n, CC.c. */
pf_status pf_ranges_set(pf_ranges* ranges, const char* key, int64_t min, int64_t max);
pf_status pf_ranges_to_json(const pf_ranges* ranges, char** out);
void pf_ranges_free(pf_ranges* ranges);

/* ---- single PUT ---- */

typedef struct pf_put pf_put;

typedef struct pf_metrics {
  int64_t cyclomatic;
  int64_t path_statements;
  int64_t transformation_count;
} pf_metrics;

/* ranges may be NULL for the defaults. Returns PF_ERR_CONFLICT when no input
 * reaches the bug. */
pf_status pf_put_generate(const pf_sequence* seq, const pf_ranges* ranges, uint64_t seed, pf_argv_policy policy,
                          pf_bug_kind bug, pf_put** out);
const char* pf_put_source(const pf_put* put);
/* Instantiated sequence, canonical rendering. */
const char* pf_put_instance_text(const pf_put* put);
int pf_put_bug_line(const pf_put* put);
pf_bug_kind pf_put_bug_kind(const pf_put* put);
int pf_put_argv_arity(const pf_put* put);
size_t pf_put_trigger_count(const pf_put* put);
const char* pf_put_trigger_arg(const pf_put* put, size_t i);
int pf_put_has_non_trigger(const pf_put* put);
size_t pf_put_non_trigger_count(const pf_put* put);
const char* pf_put_non_trigger_arg(const pf_put* put, size_t i);
pf_metrics pf_put_metrics(const pf_put* put);
/* Reaching inputs for every non-NEXT hole, in source order. */
size_t pf_put_leaf_count(const pf_put* put);
/* *reachable is 0 when no input reaches the hole; *argv_text is the
 * shell-quoted vector (empty when unreachable). */
pf_status pf_put_leaf(const pf_put* put, size_t i, int* item, int* hole, int* reachable, const char** argv_text);
void pf_put_free(pf_put* put);

/* Double-quoted, shell-escaped rendering of an argv vector. */
pf_status pf_shell_quote(const char* const* argv, size_t argc, char** out);

/* ---- presets and batches ---- */

size_t pf_preset_count(void);
pf_status pf_preset_info(size_t i, const char** name, size_t* count, const char** description);

typedef struct pf_generate_options {
  const char* batch; /* directory and file-name stem; presets default to their name */
  uint64_t seed;
  const pf_ranges* ranges; /* NULL for defaults */
  pf_argv_policy policy;
  pf_bug_kind bug;
  unsigned jobs; /* 0: hardware concurrency */
} pf_generate_options;

void pf_generate_options_init(pf_generate_options* opts);

typedef struct pf_manifest pf_manifest;

pf_status pf_generate_preset(const char* preset, const pf_generate_options* opts, const char* out_dir,
                             pf_manifest** out);
/* kinds: comma-separated subset of IC,SC,FL,PC,CC, or NULL for all. */
pf_status pf_generate_custom(size_t count, int min_length, int max_length, const char* kinds,
                             const pf_generate_options* opts, const char* out_dir, pf_manifest** out);
/* Fails with PF_ERR_PARSE if any line of the file did not parse. */
pf_status pf_generate_specs(const pf_spec_file* file, size_t count, const pf_generate_options* opts,
                            const char* out_dir, pf_manifest** out);

pf_status pf_manifest_read(const char* path, pf_manifest** out);
size_t pf_manifest_record_count(const pf_manifest* m);
int pf_manifest_record_ok(const pf_manifest* m, size_t i);
const char* pf_manifest_record_summary(const pf_manifest* m, size_t i);
pf_metrics pf_manifest_record_metrics(const pf_manifest* m, size_t i);
size_t pf_manifest_error_count(const pf_manifest* m);
const char* pf_manifest_batch(const pf_manifest* m);
const char* pf_manifest_dir(const pf_manifest* m);
pf_status pf_manifest_to_json(const pf_manifest* m, char** out);
void pf_manifest_free(pf_manifest* m);

/* ---- verification ---- */

typedef struct pf_verify_config pf_verify_config;

/* cc_list: comma-separated compiler commands; NULL uses PUTFORGE_CC_LIST, then
 * "gcc,clang". */
pf_status pf_verify_config_default(const char* cc_list, int sanitizer, pf_verify_config** out);
pf_status pf_verify_config_load(const char* path, pf_verify_config** out);
size_t pf_verify_config_count(const pf_verify_config* cfg);
const char* pf_verify_config_name(const pf_verify_config* cfg, size_t i);
int pf_verify_config_available(const pf_verify_config* cfg, size_t i);
pf_status pf_verify_config_set_timeout(pf_verify_config* cfg, double seconds);
double pf_verify_config_timeout(const pf_verify_config* cfg);
void pf_verify_config_free(pf_verify_config* cfg);

typedef struct pf_verify_report pf_verify_report;

typedef struct pf_verify_counts {
  size_t total;
  size_t passed;
  size_t failed;
  size_t inconclusive;
  size_t skipped;
  int pass;
} pf_verify_counts;

/* Verifies every record and writes verification.json beside the manifest. */
pf_status pf_verify_manifest(const char* manifest_path, const pf_verify_config* cfg, unsigned jobs,
                             pf_verify_report** out);
/* Verifies one in-memory PUT using work_dir as scratch space. */
pf_status pf_verify_put(const pf_put* put, const pf_verify_config* cfg, const char* work_dir,
                        pf_verify_report** out);
pf_verify_counts pf_verify_report_counts(const pf_verify_report* r);
size_t pf_verify_report_put_count(const pf_verify_report* r);
/* "#index path status [problems]" */
const char* pf_verify_report_put_line(const pf_verify_report* r, size_t i);
pf_status pf_verify_report_to_json(const pf_verify_report* r, char** out);
void pf_verify_report_free(pf_verify_report* r);

#ifdef __cplusplus
}
#endif

#endif
