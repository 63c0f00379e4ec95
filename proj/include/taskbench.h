/* taskbench — procedural task-benchmark engine.
 *
 * C interface over the engine: opaque handles, integer status codes, and
 * UTF-8 strings. Every char* returned by the library is owned by the caller
 * and released with tb_string_free; lists with tb_strlist_free; handles with
 * their _close/_free functions. On failure the thread-local message from
 * tb_last_error() describes what went wrong.
 *
 * Handles are immutable after creation, so sharing them across threads is
 * safe; distinct handles never synchronize with each other.
 */

#ifndef TASKBENCH_H
#define TASKBENCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TB_API __declspec(dllexport)
#else
#define TB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tb_status {
  TB_OK = 0,
  TB_ERR_USAGE = 1,   /* bad arguments to an API call */
  TB_ERR_DATA = 2,    /* malformed files, schema mismatches, rejected input */
  TB_ERR_BACKEND = 3, /* store/endpoint failures, unsupported query constructs */
  TB_ERR_PARSE = 4,   /* DSL syntax or unknown-atomic errors */
  TB_ERR_TYPE = 5     /* kind mismatches */
} tb_status;

typedef struct tb_store tb_store;     /* knowledge stores + atomic catalog */
typedef struct tb_expr tb_expr;       /* task expression */
typedef struct tb_dataset tb_dataset; /* built or imported dataset */
typedef struct tb_strlist tb_strlist;

TB_API const char* tb_version(void);
/* Message for the most recent failing call on this thread. */
TB_API const char* tb_last_error(void);

TB_API void tb_string_free(char* s);
TB_API void tb_strlist_free(tb_strlist* list);
TB_API size_t tb_strlist_size(const tb_strlist* list);
TB_API const char* tb_strlist_get(const tb_strlist* list, size_t index);

/* ---- stores ---------------------------------------------------------- */

/* Open from a JSON config file (see README for the schema). */
TB_API tb_status tb_store_open(const char* config_path, tb_store** out);
/* Same, from config text; relative paths resolve against base_dir. */
TB_API tb_status tb_store_open_json(const char* json_text, const char* base_dir,
                                    tb_store** out);
TB_API void tb_store_close(tb_store* store);

/* ---- task expressions ------------------------------------------------ */

TB_API tb_status tb_expr_parse(const tb_store* store, const char* source, tb_expr** out);
TB_API void tb_expr_free(tb_expr* expr);
TB_API char* tb_expr_print(const tb_expr* expr);
TB_API char* tb_expr_canonical(const tb_expr* expr);
/* Signature text like "(relation, word, entity->entity)". */
TB_API tb_status tb_expr_typecheck(const tb_store* store, const tb_expr* expr,
                                   char** signature_out);
/* Map-filter normal form of a sequential expression. */
TB_API tb_status tb_expr_normalize(const tb_store* store, const tb_expr* expr,
                                   tb_expr** map_out, tb_expr** filter_out);
/* Canonical task strings for the depth-2 benchmark universe. */
TB_API tb_status tb_enumerate(const tb_store* store, size_t limit, tb_strlist** out);

/* ---- evaluation against the stores ------------------------------------ */

TB_API tb_status tb_eval_relation(const tb_store* store, const tb_expr* expr,
                                  const char* word, tb_strlist** out);
TB_API tb_status tb_eval_predicate(const tb_store* store, const tb_expr* expr,
                                   const char* word, int* out);
/* Sequential evaluation. Returns JSON:
 *   {"count": N, "count_exact": bool, "alternatives": [[...], ...],
 *    "sequences": [[...], ...] | null}
 * listing the per-position answer sets of the product image; "sequences"
 * is materialized only when the exact count fits the store's product cap. */
TB_API tb_status tb_eval_sequence(const tb_store* store, const tb_expr* expr,
                                  const char* const* words, size_t n_words, char** json_out);

/* ---- SPARQL ----------------------------------------------------------- */

/* mode: "sample" | "function" | "positive-sample" | "negative-sample".
 * input may be NULL; when given, the function query binds it. */
TB_API tb_status tb_compile_sparql(const tb_store* store, const tb_expr* expr,
                                   const char* mode, const char* input, char** query_out);
/* Evaluate a compiled query over the store (local triples when loaded,
 * otherwise the configured endpoint). select_var: "x" or "y". */
TB_API tb_status tb_execute_sparql(const tb_store* store, const char* query_text,
                                   const char* select_var, tb_strlist** out);

/* ---- datasets ---------------------------------------------------------- */

/* config_json: {"seed":0,"train_size":1000,"eval_size":500,"min_samples":100,
 *               "seq_len":8,"seq_keep":null,"product_cap":10000}
 * A rejected task returns TB_OK with *out = NULL and the reason in
 * *rejection_out. */
TB_API tb_status tb_dataset_build(const tb_store* store, const tb_expr* expr,
                                  const char* config_json, tb_dataset** out,
                                  char** rejection_out);
TB_API tb_status tb_dataset_build_balanced_union(const tb_store* store, const tb_expr* easy,
                                                 const tb_expr* hard, const char* config_json,
                                                 tb_dataset** out, char** rejection_out);
TB_API tb_status tb_dataset_with_separators(const tb_dataset* dataset, const char* separator,
                                            tb_dataset** out);
TB_API tb_status tb_dataset_subsample(const tb_dataset* dataset, size_t k,
                                      uint64_t trial_seed, tb_dataset** out);
TB_API tb_status tb_dataset_export(const tb_dataset* dataset, const char* path);
TB_API tb_status tb_dataset_import(const char* path, tb_dataset** out);
TB_API size_t tb_dataset_size(const tb_dataset* dataset);
TB_API char* tb_dataset_task(const tb_dataset* dataset);
TB_API void tb_dataset_free(tb_dataset* dataset);
/* Lowercase hex SHA-256 of a file, or NULL on error. */
TB_API char* tb_file_digest(const char* path);

/* ---- scoring ----------------------------------------------------------- */

/* split: "mem" (train) or "gen" (eval). Returns the report as JSON. */
TB_API tb_status tb_score(const tb_dataset* dataset, const char* predictions_path,
                          const char* split, char** report_json_out);
TB_API tb_status tb_distribution_mass(const tb_store* store, const tb_expr* easy,
                                      const tb_expr* hard, const tb_dataset* dataset,
                                      const char* predictions_path, char** report_json_out);
/* table_jsonl: lines of {"task":…,"function":…,"paradigm":…,"atomic":[…],
 * "comp":…}. Returns the fits as a JSON array. */
TB_API tb_status tb_composition_regression(const char* table_jsonl_path,
                                           int allow_insignificant, char** fits_json_out);

/* ---- run-level workflows ----------------------------------------------- */

/* The subcommand engines behind the CLI; each writes outputs plus
 * manifest.json under out_dir. Options schemas are documented in the
 * README. tb_run_evaluate returns TB_ERR_DATA when prediction coverage is
 * incomplete and allow_partial is not set. */
TB_API tb_status tb_run_enumerate(const tb_store* store, const char* options_json,
                                  const char* out_dir);
TB_API tb_status tb_run_generate(const tb_store* store, const char* options_json,
                                 const char* out_dir);
TB_API tb_status tb_run_compile_sparql(const tb_store* store, const char* options_json,
                                       const char* out_dir);
TB_API tb_status tb_run_evaluate(const tb_store* store, const char* options_json,
                                 const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* TASKBENCH_H */
