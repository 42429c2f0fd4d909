/*
 * regdialog — registry snapshot diffing and ontology-based interpretation.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed through these functions; every fallible call returns an
 * rd_status and, optionally, a detailed rd_error through its last parameter.
 * Strings and buffers returned through out-parameters are heap-allocated,
 * NUL-terminated, and must be released with rd_string_free().
 */
#ifndef REGDIALOG_H
#define REGDIALOG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rd_status {
    RD_OK = 0,
    RD_ERROR = 1,             /* unspecified failure */
    RD_PARSE_ERROR = 2,       /* malformed input text */
    RD_VALIDATION_ERROR = 3,  /* domain rules violated */
    RD_NOT_FOUND = 4,
    RD_INVALID_ARGUMENT = 5,
    RD_HIVE_MISMATCH = 6,
    RD_CHRONOLOGY_ERROR = 7,
    RD_IO_ERROR = 8,
    RD_LIMIT_EXCEEDED = 9
} rd_status;

typedef struct rd_error rd_error;
typedef struct rd_snapshot rd_snapshot;
typedef struct rd_kb rd_kb;
typedef struct rd_rules rd_rules;
typedef struct rd_diff rd_diff;
typedef struct rd_report rd_report;

const char* rd_version(void);

/* ---- errors ------------------------------------------------------------ */

rd_status rd_error_status(const rd_error* err);
const char* rd_error_message(const rd_error* err); /* valid until rd_error_free */
long rd_error_line(const rd_error* err);           /* 1-based, or -1 */
void rd_error_free(rd_error* err);

void rd_string_free(char* s);

/* ---- snapshots (REGSNAP v1) --------------------------------------------- */

rd_status rd_snapshot_parse(const char* data, size_t len, rd_snapshot** out, rd_error** err);
rd_status rd_snapshot_read_file(const char* path, rd_snapshot** out, rd_error** err);
/* Canonical serialization: deterministic, byte-identical for structurally
 * equal snapshots. */
rd_status rd_snapshot_write(const rd_snapshot* snap, char** out, rd_error** err);
const char* rd_snapshot_hive(const rd_snapshot* snap);
size_t rd_snapshot_key_count(const rd_snapshot* snap);
/* Structural axiom check; returns RD_OK with *out == NULL when clean, or
 * RD_VALIDATION_ERROR with one violation per line in *out. */
rd_status rd_snapshot_validate(const rd_snapshot* snap, char** out, rd_error** err);
void rd_snapshot_free(rd_snapshot* snap);

/* ---- knowledge base ------------------------------------------------------ */

/* The embedded seed: concept taxonomy, key annotations, grouping specs, and
 * the default rule set. */
rd_status rd_kb_load_builtin(rd_kb** out, rd_error** err);
/* Loads <dir>/dialog.onto, <dir>/keys.anno, and optionally <dir>/dialog.rules. */
rd_status rd_kb_load_dir(const char* dir, rd_kb** out, rd_error** err);
/* Loads a bare ONTO-TXT file (no annotations) for ad-hoc inference. */
rd_status rd_kb_load_file(const char* onto_file, rd_kb** out, rd_error** err);
/* Annotation lookup for a key path. RD_NOT_FOUND when neither the key nor an
 * ancestor is annotated; otherwise a JSON object describing the match. */
rd_status rd_kb_lookup(const rd_kb* kb, const char* path, char** out_json, rd_error** err);
/* Consistency check of the fact store; RD_OK with *out == NULL when clean. */
rd_status rd_kb_check(const rd_kb* kb, char** out, rd_error** err);
void rd_kb_free(rd_kb* kb);

/* ---- rules ---------------------------------------------------------------- */

rd_status rd_rules_load_builtin(rd_rules** out, rd_error** err);
rd_status rd_rules_read_file(const char* path, rd_rules** out, rd_error** err);
size_t rd_rules_count(const rd_rules* rules);
void rd_rules_free(rd_rules* rules);

/* Forward-chains the knowledge base's facts with the given rules and renders
 * the derived assertions (text listing or JSON per `as_json`). */
rd_status rd_infer(const rd_kb* kb, const rd_rules* rules, int as_json, char** out,
                   rd_error** err);

/* ---- diffing --------------------------------------------------------------- */

typedef struct rd_diff_options {
    /* Emit Modified records for keys whose values are unchanged but whose
     * timestamp moved. */
    int touch_as_modified;
} rd_diff_options;

rd_status rd_diff_snapshots(const rd_snapshot* older, const rd_snapshot* newer,
                            const rd_diff_options* opts, rd_diff** out, rd_error** err);
size_t rd_diff_record_count(const rd_diff* diff);
rd_status rd_diff_set_ids(rd_diff* diff, const char* older_id, const char* newer_id);
/* "ADDED: \path" / "MODIFIED: \path" / "REM: \path", one line per record. */
rd_status rd_diff_to_text(const rd_diff* diff, char** out, rd_error** err);
rd_status rd_diff_to_json(const rd_diff* diff, char** out, rd_error** err);
void rd_diff_free(rd_diff* diff);

/* ---- analysis --------------------------------------------------------------- */

/* Chain-diffs >= 2 chronologically ordered snapshots, groups the records,
 * annotates them from the knowledge base, runs the rules to fixpoint, and
 * builds the report. `ids` may be NULL (or hold NULL entries) to use
 * captured-at / ordinal labels. `rules` may be NULL to use the knowledge
 * base's own rule set. */
rd_status rd_analyze(const rd_snapshot* const* snapshots, size_t count, const char* const* ids,
                     const rd_kb* kb, const rd_rules* rules, const rd_diff_options* opts,
                     const char* case_id, rd_report** out, rd_error** err);
rd_status rd_report_to_json(const rd_report* report, char** out, rd_error** err);
rd_status rd_report_to_text(const rd_report* report, char** out, rd_error** err);
size_t rd_report_violation_count(const rd_report* report);
void rd_report_free(rd_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* REGDIALOG_H */
