// taskbench command line: enumerate | generate | compile-sparql | evaluate.
// Thin flag layer over the shared library's run-level C API; every knob is a
// flag (or a --config file that sets flags), and each run writes a manifest
// naming inputs, seeds, and digests.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "taskbench.h"

namespace {

// Exit codes: 0 success, 1 usage, 2 data error, 3 backend error.
int exit_code_for(tb_status status) {
  switch (status) {
    case TB_OK:
      return 0;
    case TB_ERR_USAGE:
      return 1;
    case TB_ERR_BACKEND:
      return 3;
    default:
      return 2;  // parse/type/data all count as data errors at the CLI
  }
}

int fail(tb_status status) {
  std::fprintf(stderr, "error: %s\n", tb_last_error());
  return exit_code_for(status);
}

struct StoreHandle {
  tb_store* ptr = nullptr;
  ~StoreHandle() { tb_store_close(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taskbench: compositional task benchmark engine"};
  app.require_subcommand(1);
  app.set_config("--config");

  std::string store_path;
  std::string out_dir = "out";
  app.add_option("--store", store_path, "knowledge store config (JSON)")->configurable(true);
  app.add_option("--out", out_dir, "output directory")->configurable(true);

  // enumerate
  auto* cmd_enum = app.add_subcommand("enumerate", "list benchmark tasks");
  std::size_t limit = 500;
  cmd_enum->add_option("--limit", limit, "maximum number of tasks");

  // generate
  auto* cmd_gen = app.add_subcommand("generate", "build datasets for tasks");
  std::vector<std::string> tasks;
  std::string tasks_file, separator, balanced_easy, balanced_hard;
  std::uint64_t seed = 0;
  std::size_t train_size = 1000, eval_size = 500, min_samples = 100, seq_len = 8;
  std::int64_t seq_keep = -1;
  std::uint64_t product_cap = 10000;
  std::size_t fewshot_k = 0;
  std::vector<std::uint64_t> fewshot_trials;
  int jobs = 1;
  cmd_gen->add_option("--task", tasks, "task expression (repeatable)");
  cmd_gen->add_option("--tasks-file", tasks_file, "file with one task per line");
  cmd_gen->add_option("--seed", seed, "generation seed");
  cmd_gen->add_option("--train-size", train_size, "train split size");
  cmd_gen->add_option("--eval-size", eval_size, "eval split size");
  cmd_gen->add_option("--min-samples", min_samples, "rejection threshold");
  cmd_gen->add_option("--seq-len", seq_len, "words per sequential input (n)");
  cmd_gen->add_option("--seq-keep", seq_keep, "filter-passing words per input (m)");
  cmd_gen->add_option("--product-cap", product_cap, "sequence image materialization cap");
  cmd_gen->add_option("--separator", separator, "explicit word-boundary token");
  cmd_gen->add_option("--balanced-union", [&](const std::vector<std::string>& vals) {
    if (vals.size() != 2) return false;
    balanced_easy = vals[0];
    balanced_hard = vals[1];
    return true;
  }, "easier and harder task for a balanced union dataset")->expected(2);
  cmd_gen->add_option("--fewshot", fewshot_k, "also emit k-example train subsets");
  cmd_gen->add_option("--fewshot-trial", fewshot_trials, "trial seed (repeatable)");
  cmd_gen->add_option("--jobs", jobs, "parallel task builds");

  // compile-sparql
  auto* cmd_sparql = app.add_subcommand("compile-sparql", "emit queries for a factual task");
  std::string sparql_task, sparql_input;
  cmd_sparql->add_option("--task", sparql_task, "factual task expression")->required();
  cmd_sparql->add_option("--input", sparql_input, "entity id to bind in the function query");

  // evaluate
  auto* cmd_eval = app.add_subcommand("evaluate", "score predictions / run analyses");
  std::string dataset_path, predictions_path, split = "gen", analysis, table_path;
  std::string easy_task, hard_task;
  bool allow_partial = false, require_significant = false;
  cmd_eval->add_option("--dataset", dataset_path, "dataset file");
  cmd_eval->add_option("--predictions", predictions_path, "prediction file");
  cmd_eval->add_option("--split", split, "mem (train) or gen (eval)");
  cmd_eval->add_flag("--allow-partial", allow_partial, "tolerate missing predictions");
  cmd_eval->add_option("--analysis", analysis, "composition | distribution");
  cmd_eval->add_option("--table", table_path, "composition analysis input (JSONL)");
  cmd_eval->add_option("--easy", easy_task, "easier task (distribution analysis)");
  cmd_eval->add_option("--hard", hard_task, "harder task (distribution analysis)");
  cmd_eval->add_flag("--require-significant", require_significant,
                     "refuse fits with fewer than 20 points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;  // any flag/subcommand problem is a usage error
  }

  StoreHandle store;
  bool needs_store = cmd_enum->parsed() || cmd_gen->parsed() || cmd_sparql->parsed() ||
                     (cmd_eval->parsed() && analysis == "distribution");
  if (needs_store) {
    if (store_path.empty()) {
      std::fprintf(stderr, "error: --store is required for this subcommand\n");
      return 1;
    }
    tb_status status = tb_store_open(store_path.c_str(), &store.ptr);
    if (status != TB_OK) return fail(status);
  }

  nlohmann::json opts;
  tb_status status = TB_OK;

  if (cmd_enum->parsed()) {
    opts["limit"] = limit;
    status = tb_run_enumerate(store.ptr, opts.dump().c_str(), out_dir.c_str());
  } else if (cmd_gen->parsed()) {
    nlohmann::json cfg;
    cfg["seed"] = seed;
    cfg["train_size"] = train_size;
    cfg["eval_size"] = eval_size;
    cfg["min_samples"] = min_samples;
    cfg["seq_len"] = seq_len;
    if (seq_keep >= 0) cfg["seq_keep"] = seq_keep;
    cfg["product_cap"] = product_cap;
    opts["config"] = cfg;
    if (!tasks.empty()) opts["tasks"] = tasks;
    if (!tasks_file.empty()) opts["tasks_file"] = tasks_file;
    if (!separator.empty()) opts["separator"] = separator;
    if (!balanced_easy.empty())
      opts["balanced_union"] = {{"easy", balanced_easy}, {"hard", balanced_hard}};
    if (fewshot_k > 0) {
      nlohmann::json fs;
      fs["k"] = fewshot_k;
      if (!fewshot_trials.empty()) fs["trials"] = fewshot_trials;
      opts["fewshot"] = fs;
    }
    opts["jobs"] = jobs;
    status = tb_run_generate(store.ptr, opts.dump().c_str(), out_dir.c_str());
  } else if (cmd_sparql->parsed()) {
    opts["task"] = sparql_task;
    if (!sparql_input.empty()) opts["input"] = sparql_input;
    status = tb_run_compile_sparql(store.ptr, opts.dump().c_str(), out_dir.c_str());
  } else if (cmd_eval->parsed()) {
    if (!analysis.empty()) opts["analysis"] = analysis;
    if (!dataset_path.empty()) opts["dataset"] = dataset_path;
    if (!predictions_path.empty()) opts["predictions"] = predictions_path;
    if (!table_path.empty()) opts["table"] = table_path;
    if (!easy_task.empty()) opts["easy"] = easy_task;
    if (!hard_task.empty()) opts["hard"] = hard_task;
    opts["split"] = split;
    opts["allow_partial"] = allow_partial;
    opts["require_significant"] = require_significant;
    status = tb_run_evaluate(store.ptr, opts.dump().c_str(), out_dir.c_str());
  }

  if (status != TB_OK) return fail(status);
  return 0;
}
