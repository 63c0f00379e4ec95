#include "taskbench.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "taskbench/dataset.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/metrics.hpp"
#include "taskbench/runner.hpp"
#include "taskbench/sparql.hpp"
#include "taskbench/util/sha256.hpp"

using namespace taskbench;

extern "C" {
struct tb_store {
  KnowledgeStore rep;
};
struct tb_expr {
  ExprPtr rep;
};
struct tb_dataset {
  Dataset rep;
};
struct tb_strlist {
  std::vector<std::string> rep;
};
}

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tb_status set_error(tb_status code, const std::string& message) {
  t_last_error = message;
  return code;
}

// Translate engine exceptions to status codes, recording the message.
template <typename Fn>
tb_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    return set_error(TB_ERR_PARSE,
                     std::string(e.what()) + " (byte offset " + std::to_string(e.offset) + ")");
  } catch (const TypeError& e) {
    return set_error(TB_ERR_TYPE, e.what());
  } catch (const DataError& e) {
    return set_error(TB_ERR_DATA, e.what());
  } catch (const BackendError& e) {
    return set_error(TB_ERR_BACKEND, e.what());
  } catch (const std::exception& e) {
    return set_error(TB_ERR_DATA, e.what());
  }
}

GenConfig parse_config(const char* config_json) {
  GenConfig cfg;
  if (!config_json || !*config_json) return cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(config_json);
  } catch (const std::exception& e) {
    throw DataError(std::string("bad dataset config: ") + e.what());
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.train_size = j.value("train_size", cfg.train_size);
  cfg.eval_size = j.value("eval_size", cfg.eval_size);
  cfg.min_samples = j.value("min_samples", cfg.min_samples);
  cfg.seq_len = j.value("seq_len", cfg.seq_len);
  if (j.contains("seq_keep") && !j["seq_keep"].is_null())
    cfg.seq_keep = j["seq_keep"].get<std::size_t>();
  cfg.product_cap = j.value("product_cap", cfg.product_cap);
  return cfg;
}

QueryMode parse_mode(const char* mode) {
  std::string m = mode ? mode : "";
  if (m == "sample") return QueryMode::Sample;
  if (m == "function") return QueryMode::Function;
  if (m == "positive-sample") return QueryMode::PositiveSample;
  if (m == "negative-sample") return QueryMode::NegativeSample;
  throw DataError("unknown query mode '" + m + "'");
}

}  // namespace

extern "C" {

const char* tb_version(void) { return "1.0.0"; }

const char* tb_last_error(void) { return t_last_error.c_str(); }

void tb_string_free(char* s) { std::free(s); }

void tb_strlist_free(tb_strlist* list) { delete list; }

size_t tb_strlist_size(const tb_strlist* list) { return list ? list->rep.size() : 0; }

const char* tb_strlist_get(const tb_strlist* list, size_t index) {
  if (!list || index >= list->rep.size()) return nullptr;
  return list->rep[index].c_str();
}

tb_status tb_store_open(const char* config_path, tb_store** out) {
  if (!config_path || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *out = new tb_store{KnowledgeStore::load(config_path)};
    return TB_OK;
  });
}

tb_status tb_store_open_json(const char* json_text, const char* base_dir, tb_store** out) {
  if (!json_text || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *out = new tb_store{
        KnowledgeStore::from_json_text(json_text, base_dir ? base_dir : "")};
    return TB_OK;
  });
}

void tb_store_close(tb_store* store) { delete store; }

tb_status tb_expr_parse(const tb_store* store, const char* source, tb_expr** out) {
  if (!store || !source || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *out = new tb_expr{parse_expr(source, store->rep.catalog())};
    return TB_OK;
  });
}

void tb_expr_free(tb_expr* expr) { delete expr; }

char* tb_expr_print(const tb_expr* expr) {
  if (!expr) return nullptr;
  return dup_string(print_expr(expr->rep));
}

char* tb_expr_canonical(const tb_expr* expr) {
  if (!expr) return nullptr;
  return dup_string(print_expr(canonicalize(expr->rep)));
}

tb_status tb_expr_typecheck(const tb_store* store, const tb_expr* expr, char** signature_out) {
  if (!store || !expr || !signature_out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *signature_out = dup_string(signature_to_string(typecheck(expr->rep, store->rep.catalog())));
    return TB_OK;
  });
}

tb_status tb_expr_normalize(const tb_store* store, const tb_expr* expr, tb_expr** map_out,
                            tb_expr** filter_out) {
  if (!store || !expr || !map_out || !filter_out)
    return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    MapFilterNF nf = normalize(expr->rep, store->rep.catalog());
    *map_out = new tb_expr{nf.map_rel};
    *filter_out = new tb_expr{nf.filter_pred};
    return TB_OK;
  });
}

tb_status tb_enumerate(const tb_store* store, size_t limit, tb_strlist** out) {
  if (!store || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    auto list = new tb_strlist;
    for (const ExprPtr& e : enumerate_depth2(store->rep.catalog(), limit))
      list->rep.push_back(print_expr(e));
    *out = list;
    return TB_OK;
  });
}

tb_status tb_eval_relation(const tb_store* store, const tb_expr* expr, const char* word,
                           tb_strlist** out) {
  if (!store || !expr || !word || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *out = new tb_strlist{eval_relation(store->rep, expr->rep, word)};
    return TB_OK;
  });
}

tb_status tb_eval_predicate(const tb_store* store, const tb_expr* expr, const char* word,
                            int* out) {
  if (!store || !expr || !word || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *out = eval_predicate(store->rep, expr->rep, word) ? 1 : 0;
    return TB_OK;
  });
}

tb_status tb_eval_sequence(const tb_store* store, const tb_expr* expr, const char* const* words,
                           size_t n_words, char** json_out) {
  if (!store || !expr || (!words && n_words) || !json_out)
    return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    MapFilterNF nf = normalize(expr->rep, store->rep.catalog());
    std::vector<std::string> input(words, words + n_words);
    SeqImage image = eval_seq(store->rep, nf, input);
    bool exact = false;
    std::uint64_t count = image.count(&exact);
    nlohmann::ordered_json j;
    j["count"] = count;
    j["count_exact"] = exact;
    j["alternatives"] = image.alts;
    // materialize only under the configured cap; larger images stay lazy
    if (exact && count <= store->rep.product_cap())
      j["sequences"] = image.to_vector(store->rep.product_cap());
    else
      j["sequences"] = nullptr;
    *json_out = dup_string(j.dump());
    return TB_OK;
  });
}

tb_status tb_compile_sparql(const tb_store* store, const tb_expr* expr, const char* mode,
                            const char* input, char** query_out) {
  if (!store || !expr || !mode || !query_out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    SparqlQuery q = compile_sparql(expr->rep, store->rep.catalog(), parse_mode(mode),
                                   input ? input : "");
    *query_out = dup_string(q.text());
    return TB_OK;
  });
}

tb_status tb_execute_sparql(const tb_store* store, const char* query_text,
                            const char* select_var, tb_strlist** out) {
  if (!store || !query_text || !select_var || !out)
    return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    if (store->rep.triples()) {
      *out = new tb_strlist{execute_local_text(*store->rep.triples(), query_text)};
      return TB_OK;
    }
    if (store->rep.endpoint().empty())
      throw BackendError("no triple store or endpoint configured");
    SparqlClient client(store->rep.endpoint(), store->rep.cache_dir());
    *out = new tb_strlist{client.execute_text(query_text, select_var)};
    return TB_OK;
  });
}

tb_status tb_dataset_build(const tb_store* store, const tb_expr* expr, const char* config_json,
                           tb_dataset** out, char** rejection_out) {
  if (!store || !expr || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    BuildOutcome outcome = build_dataset(store->rep, expr->rep, parse_config(config_json));
    if (outcome.accepted()) {
      *out = new tb_dataset{std::move(*outcome.dataset)};
      if (rejection_out) *rejection_out = nullptr;
    } else {
      *out = nullptr;
      if (rejection_out) *rejection_out = dup_string(outcome.rejection);
    }
    return TB_OK;
  });
}

tb_status tb_dataset_build_balanced_union(const tb_store* store, const tb_expr* easy,
                                          const tb_expr* hard, const char* config_json,
                                          tb_dataset** out, char** rejection_out) {
  if (!store || !easy || !hard || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    BuildOutcome outcome =
        build_balanced_union(store->rep, easy->rep, hard->rep, parse_config(config_json));
    if (outcome.accepted()) {
      *out = new tb_dataset{std::move(*outcome.dataset)};
      if (rejection_out) *rejection_out = nullptr;
    } else {
      *out = nullptr;
      if (rejection_out) *rejection_out = dup_string(outcome.rejection);
    }
    return TB_OK;
  });
}

tb_status tb_dataset_with_separators(const tb_dataset* dataset, const char* separator,
                                     tb_dataset** out) {
  if (!dataset || !separator || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *out = new tb_dataset{with_separators(dataset->rep, separator)};
    return TB_OK;
  });
}

tb_status tb_dataset_subsample(const tb_dataset* dataset, size_t k, uint64_t trial_seed,
                               tb_dataset** out) {
  if (!dataset || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *out = new tb_dataset{subsample_fewshot(dataset->rep, k, trial_seed)};
    return TB_OK;
  });
}

tb_status tb_dataset_export(const tb_dataset* dataset, const char* path) {
  if (!dataset || !path) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    export_dataset(dataset->rep, path);
    return TB_OK;
  });
}

tb_status tb_dataset_import(const char* path, tb_dataset** out) {
  if (!path || !out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    *out = new tb_dataset{import_dataset(path)};
    return TB_OK;
  });
}

size_t tb_dataset_size(const tb_dataset* dataset) {
  return dataset ? dataset->rep.examples.size() : 0;
}

char* tb_dataset_task(const tb_dataset* dataset) {
  if (!dataset) return nullptr;
  return dup_string(dataset->rep.task);
}

void tb_dataset_free(tb_dataset* dataset) { delete dataset; }

char* tb_file_digest(const char* path) {
  if (!path) return nullptr;
  try {
    return dup_string(sha256_file_hex(path));
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return nullptr;
  }
}

tb_status tb_score(const tb_dataset* dataset, const char* predictions_path, const char* split,
                   char** report_json_out) {
  if (!dataset || !predictions_path || !split || !report_json_out)
    return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    std::string s = split;
    if (s != "mem" && s != "gen") throw DataError("split must be 'mem' or 'gen'");
    PredictionSet preds = load_predictions(predictions_path);
    EvalReport report =
        score_predictions(dataset->rep, preds, s == "mem" ? Split::Train : Split::Eval);
    nlohmann::ordered_json j;
    j["split"] = report.split;
    j["total"] = report.total;
    j["covered"] = report.covered;
    j["coverage"] = report.coverage;
    j["aggregate"] = report.aggregate;
    j["missing"] = report.missing;
    *report_json_out = dup_string(j.dump());
    return TB_OK;
  });
}

tb_status tb_distribution_mass(const tb_store* store, const tb_expr* easy, const tb_expr* hard,
                               const tb_dataset* dataset, const char* predictions_path,
                               char** report_json_out) {
  if (!store || !easy || !hard || !dataset || !predictions_path || !report_json_out)
    return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    PredictionSet preds = load_predictions(predictions_path);
    DistributionMassReport report =
        distribution_mass(store->rep, easy->rep, hard->rep, dataset->rep, preds);
    nlohmann::ordered_json j;
    j["evaluated"] = report.evaluated;
    j["skipped_out_of_domain"] = report.skipped_out_of_domain;
    j["summed"] = {{"mass_easy", report.summed.mean_easy},
                   {"mass_hard", report.summed.mean_hard},
                   {"se_easy", report.summed.se_easy},
                   {"se_hard", report.summed.se_hard}};
    j["top_candidate"] = {{"mass_easy", report.top.mean_easy},
                          {"mass_hard", report.top.mean_hard},
                          {"se_easy", report.top.se_easy},
                          {"se_hard", report.top.se_hard}};
    *report_json_out = dup_string(j.dump());
    return TB_OK;
  });
}

tb_status tb_composition_regression(const char* table_jsonl_path, int allow_insignificant,
                                    char** fits_json_out) {
  if (!table_jsonl_path || !fits_json_out) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    std::ifstream in(table_jsonl_path);
    if (!in) throw DataError(std::string("cannot open composition table: ") + table_jsonl_path);
    std::vector<CompositionPoint> points;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      try {
        nlohmann::json rec = nlohmann::json::parse(line);
        CompositionPoint p;
        p.task = rec.value("task", "");
        p.function_tag = rec.at("function").get<std::string>();
        p.paradigm_tag = rec.value("paradigm", "");
        p.atomic_adaptabilities = rec.at("atomic").get<std::vector<double>>();
        p.compositional_adaptability = rec.at("comp").get<double>();
        points.push_back(std::move(p));
      } catch (const std::exception& e) {
        throw DataError("composition table line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    std::vector<RegressionFit> fits = composition_regression(points, allow_insignificant != 0);
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const RegressionFit& f : fits) {
      nlohmann::ordered_json j;
      j["function"] = f.function_tag;
      j["paradigm"] = f.paradigm_tag;
      j["points"] = f.n;
      j["defined"] = f.defined;
      if (f.defined) {
        j["slope"] = f.slope;
        j["intercept"] = f.intercept;
        j["r2"] = f.r2;
      }
      j["significant"] = f.significant;
      out.push_back(j);
    }
    *fits_json_out = dup_string(out.dump());
    return TB_OK;
  });
}

tb_status tb_run_enumerate(const tb_store* store, const char* options_json,
                           const char* out_dir) {
  if (!store || !out_dir) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    run_enumerate(store->rep, options_json ? options_json : "", out_dir);
    return TB_OK;
  });
}

tb_status tb_run_generate(const tb_store* store, const char* options_json,
                          const char* out_dir) {
  if (!store || !out_dir) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    run_generate(store->rep, options_json ? options_json : "", out_dir);
    return TB_OK;
  });
}

tb_status tb_run_compile_sparql(const tb_store* store, const char* options_json,
                                const char* out_dir) {
  if (!store || !out_dir) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    run_compile_sparql(store->rep, options_json ? options_json : "", out_dir);
    return TB_OK;
  });
}

tb_status tb_run_evaluate(const tb_store* store, const char* options_json,
                          const char* out_dir) {
  if (!out_dir) return set_error(TB_ERR_USAGE, "null argument");
  return guarded([&] {
    bool coverage_ok =
        run_evaluate(store ? &store->rep : nullptr, options_json ? options_json : "", out_dir);
    if (!coverage_ok)
      return set_error(TB_ERR_DATA, "prediction coverage below 100% (use allow_partial)");
    return TB_OK;
  });
}

}  // extern "C"
