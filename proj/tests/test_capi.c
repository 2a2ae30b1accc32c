/* Exercises the C API from C. Usage: test_capi <scratch-dir> */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "putforge/putforge.h"

static int failures = 0;

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: CHECK failed: %s\n", __FILE__, __LINE__, #cond); \
      failures++;                                                     \
    }                                                                 \
  } while (0)

static const char* kTwoItem = "SC(argv[2], \"hello\", SKIP, NEXT) IC(atoll(argv[1]), 69, FAIL, { return 0; })";

static void test_sequence(void) {
  pf_sequence* seq = NULL;
  char* text = NULL;
  CHECK(pf_sequence_parse(kTwoItem, &seq) == PF_OK);
  CHECK(pf_sequence_length(seq) == 2);
  CHECK(pf_sequence_print(seq, &text) == PF_OK);
  CHECK(text && strcmp(text, kTwoItem) == 0);
  pf_string_free(text);
  pf_sequence_free(seq);

  seq = NULL;
  CHECK(pf_sequence_parse("", &seq) == PF_ERR_PARSE);
  CHECK(seq == NULL);
  CHECK(strlen(pf_last_error()) > 0);
  CHECK(pf_sequence_parse("IC(argv[1], 5, FAIL, SKIP)", &seq) == PF_ERR_VALIDATION);
  CHECK(strstr(pf_last_error(), "v1 requires int-like, got string") != NULL);
  CHECK(pf_sequence_parse(NULL, &seq) == PF_ERR_INVALID_ARGUMENT);
}

static void test_put(void) {
  pf_sequence* seq = NULL;
  pf_put* put = NULL;
  pf_metrics m;
  int item = 0, hole = 0, reachable = 0;
  const char* argv_text = NULL;

  CHECK(pf_sequence_parse(kTwoItem, &seq) == PF_OK);
  CHECK(pf_put_generate(seq, NULL, 7, PF_ARGV_DISTINCT, PF_BUG_DEFAULT, &put) == PF_OK);
  CHECK(pf_put_argv_arity(put) == 2);
  CHECK(pf_put_trigger_count(put) == 2);
  CHECK(strcmp(pf_put_trigger_arg(put, 0), "69") == 0);
  CHECK(strcmp(pf_put_trigger_arg(put, 1), "") == 0);
  CHECK(pf_put_trigger_arg(put, 2) == NULL);
  CHECK(pf_put_has_non_trigger(put) == 1);
  CHECK(pf_put_bug_kind(put) == PF_BUG_ASSERT);
  CHECK(strstr(pf_put_source(put), "assert(0 == 1);") != NULL);
  CHECK(pf_put_bug_line(put) > 0);
  m = pf_put_metrics(put);
  CHECK(m.cyclomatic == 4);
  CHECK(m.transformation_count == 2);
  CHECK(pf_put_leaf_count(put) == 3);
  CHECK(pf_put_leaf(put, 1, &item, &hole, &reachable, &argv_text) == PF_OK);
  CHECK(item == 1 && hole == 0 && reachable == 1);
  CHECK(strcmp(argv_text, "\"69\" \"\"") == 0);
  CHECK(pf_put_leaf(put, 3, &item, &hole, &reachable, &argv_text) == PF_ERR_INVALID_ARGUMENT);
  pf_put_free(put);
  pf_sequence_free(seq);

  put = NULL;
  CHECK(pf_sequence_parse("IC(atoll(argv[1]), 5, NEXT, SKIP) IC(atoll(argv[1]), 7, FAIL, SKIP)", &seq) == PF_OK);
  CHECK(pf_put_generate(seq, NULL, 1, PF_ARGV_AS_WRITTEN, PF_BUG_DEFAULT, &put) == PF_ERR_CONFLICT);
  CHECK(put == NULL);
  pf_sequence_free(seq);

  CHECK(pf_sequence_parse("FL(3, FAIL)", &seq) == PF_OK);
  CHECK(pf_put_generate(seq, NULL, 1, PF_ARGV_DISTINCT, PF_BUG_OOB, &put) == PF_OK);
  CHECK(pf_put_trigger_count(put) == 0);
  CHECK(pf_put_has_non_trigger(put) == 0);
  CHECK(pf_put_bug_kind(put) == PF_BUG_OOB);
  pf_put_free(put);
  pf_sequence_free(seq);
}

static void test_ranges(void) {
  pf_ranges* r = NULL;
  char* json = NULL;
  CHECK(pf_ranges_default(&r) == PF_OK);
  CHECK(pf_ranges_set(r, "FL.e", 1, 2) == PF_OK);
  CHECK(pf_ranges_set(r, "FL.e", 3, 2) == PF_ERR_INVALID_ARGUMENT);
  CHECK(pf_ranges_set(r, "ZZ.q", 1, 2) == PF_ERR_INVALID_ARGUMENT);
  CHECK(pf_ranges_to_json(r, &json) == PF_OK);
  CHECK(strstr(json, "\"FL.e\"") != NULL);
  pf_string_free(json);
  pf_ranges_free(r);
  r = NULL;
  CHECK(pf_ranges_load("/nonexistent/ranges.json", &r) == PF_ERR_IO);
  CHECK(pf_ranges_from_json("{\"FL.e\": {\"min\": 0, \"max\": 1}}", &r) == PF_OK);
  pf_ranges_free(r);
}

static void test_batch(const char* dir) {
  pf_generate_options opts;
  pf_manifest* m = NULL;
  pf_manifest* again = NULL;
  char path[4096];
  char* j1 = NULL;
  char* j2 = NULL;
  size_t i, count = 0;
  const char* name = NULL;

  CHECK(pf_preset_count() == 11);
  CHECK(pf_preset_info(0, &name, &count, NULL) == PF_OK);
  CHECK(strcmp(name, "B1") == 0 && count == 10);

  pf_generate_options_init(&opts);
  opts.seed = 7;
  CHECK(pf_generate_preset("B1", &opts, dir, &m) == PF_OK);
  CHECK(pf_manifest_record_count(m) == 10);
  CHECK(pf_manifest_error_count(m) == 0);
  for (i = 0; i < 10; i++) CHECK(pf_manifest_record_ok(m, i));
  CHECK(strncmp(pf_manifest_record_summary(m, 0), "#0 put_B1_0.c ok", 16) == 0);
  CHECK(strcmp(pf_manifest_batch(m), "B1") == 0);

  snprintf(path, sizeof path, "%s/B1/manifest.json", dir);
  CHECK(pf_manifest_read(path, &again) == PF_OK);
  CHECK(pf_manifest_to_json(m, &j1) == PF_OK);
  CHECK(pf_manifest_to_json(again, &j2) == PF_OK);
  CHECK(j1 && j2 && strcmp(j1, j2) == 0);
  pf_string_free(j1);
  pf_string_free(j2);
  pf_manifest_free(again);
  pf_manifest_free(m);

  m = NULL;
  CHECK(pf_generate_preset("B7", &opts, dir, &m) == PF_ERR_UNKNOWN_PRESET);
  CHECK(pf_generate_custom(0, 1, 3, NULL, &opts, dir, &m) == PF_OK);
  CHECK(pf_manifest_record_count(m) == 0);
  pf_manifest_free(m);
  CHECK(pf_generate_custom(4, 1, 3, "IC,QQ", &opts, dir, &m) == PF_ERR_INVALID_ARGUMENT);
  CHECK(strstr(pf_last_error(), "QQ") != NULL);
  CHECK(pf_generate_custom(4, 3, 1, NULL, &opts, dir, &m) == PF_ERR_INVALID_ARGUMENT);
  CHECK(pf_generate_custom(4, 1, 3, "PC", &opts, dir, &m) == PF_OK);
  CHECK(pf_manifest_record_count(m) == 4);
  pf_manifest_free(m);
  CHECK(pf_manifest_read("/nonexistent/manifest.json", &m) == PF_ERR_IO);
}

static void test_spec_file(const char* dir) {
  pf_spec_file* f = NULL;
  pf_generate_options opts;
  pf_manifest* m = NULL;
  int line = 0;
  const pf_sequence* seq = NULL;
  const char* err = NULL;

  CHECK(pf_spec_file_parse("# c\nFL(1, FAIL)\nIC(argv[1], 5, FAIL, SKIP)\n", &f) == PF_OK);
  CHECK(pf_spec_file_count(f) == 2);
  CHECK(pf_spec_file_entry(f, 0, &line, &seq, &err) == PF_OK);
  CHECK(line == 2 && seq != NULL && err == NULL);
  CHECK(pf_spec_file_entry(f, 1, &line, &seq, &err) == PF_OK);
  CHECK(line == 3 && seq == NULL && err != NULL);
  pf_generate_options_init(&opts);
  CHECK(pf_generate_specs(f, 1, &opts, dir, &m) == PF_ERR_PARSE);
  pf_spec_file_free(f);

  CHECK(pf_spec_file_parse("FL(1, FAIL)\n", &f) == PF_OK);
  opts.batch = "../escape";
  CHECK(pf_generate_specs(f, 1, &opts, dir, &m) == PF_ERR_INVALID_ARGUMENT);
  opts.batch = "mine";
  CHECK(pf_generate_specs(f, 3, &opts, dir, &m) == PF_OK);
  CHECK(pf_manifest_record_count(m) == 3);
  pf_manifest_free(m);
  pf_spec_file_free(f);
}

static void test_verify_config(void) {
  pf_verify_config* cfg = NULL;
  CHECK(pf_verify_config_default("no-such-cc-1,no-such-cc-2", 1, &cfg) == PF_OK);
  CHECK(pf_verify_config_count(cfg) == 5);
  CHECK(strcmp(pf_verify_config_name(cfg, 0), "no-such-cc-1 -O0 -Wall") == 0);
  CHECK(pf_verify_config_available(cfg, 0) == 0);
  CHECK(pf_verify_config_set_timeout(cfg, 2.5) == PF_OK);
  CHECK(pf_verify_config_timeout(cfg) == 2.5);
  CHECK(pf_verify_config_set_timeout(cfg, -1) == PF_ERR_INVALID_ARGUMENT);
  pf_verify_config_free(cfg);
  CHECK(pf_verify_config_default("", 1, &cfg) == PF_ERR_INVALID_ARGUMENT);
}

static void test_verify_skipped(const char* dir) {
  pf_verify_config* cfg = NULL;
  pf_verify_report* rep = NULL;
  pf_verify_counts c;
  char path[4096];
  snprintf(path, sizeof path, "%s/B1/manifest.json", dir);
  CHECK(pf_verify_config_default("no-such-cc-1", 1, &cfg) == PF_OK);
  CHECK(pf_verify_manifest(path, cfg, 2, &rep) == PF_OK);
  c = pf_verify_report_counts(rep);
  CHECK(c.total == 10 && c.skipped == 10 && c.pass == 1);
  CHECK(strstr(pf_verify_report_put_line(rep, 0), "skipped") != NULL);
  pf_verify_report_free(rep);
  pf_verify_config_free(cfg);
}

int main(int argc, char** argv) {
  const char* dir;
  if (argc < 2) {
    fprintf(stderr, "usage: %s <scratch-dir>\n", argv[0]);
    return 2;
  }
  dir = argv[1];
  CHECK(strcmp(pf_status_name(PF_ERR_CONFLICT), "conflict") == 0);
  CHECK(strlen(pf_version()) > 0);
  test_sequence();
  test_put();
  test_ranges();
  test_batch(dir);
  test_spec_file(dir);
  test_verify_config();
  test_verify_skipped(dir);
  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C API: all checks passed\n");
  return 0;
}
