#pragma once

#include <string>

#include "taskbench/store.hpp"

namespace taskbench {

// Workflows behind the CLI subcommands. Each writes its output files plus a
// manifest.json under out_dir naming inputs, seeds, and digests; outputs are
// a pure function of (store, options), so reruns are byte-identical.
//
// Options are JSON texts:
//   enumerate: {"limit": 500}
//   generate:  {"config": {"seed":0,"train_size":1000,...},
//               "tasks": ["..."], "tasks_file": "path",
//               "balanced_union": {"easy": "...", "hard": "..."},
//               "separator": "#",
//               "fewshot": {"k": 32, "trials": [0,1,2,3]},
//               "jobs": 1}
//   compile-sparql: {"task": "...", "input": "entity-id"}
//   evaluate:  {"dataset": "path", "predictions": "path", "split": "gen",
//               "allow_partial": false}
//              {"analysis": "composition", "table": "path",
//               "require_significant": false}
//              {"analysis": "distribution", "dataset": "path",
//               "predictions": "path", "easy": "...", "hard": "..."}

void run_enumerate(const KnowledgeStore& store, const std::string& options_json,
                   const std::string& out_dir);

void run_generate(const KnowledgeStore& store, const std::string& options_json,
                  const std::string& out_dir);

void run_compile_sparql(const KnowledgeStore& store, const std::string& options_json,
                        const std::string& out_dir);

// Returns false when prediction coverage is below 100% and allow_partial is
// not set (reports are still written).
bool run_evaluate(const KnowledgeStore* store, const std::string& options_json,
                  const std::string& out_dir);

}  // namespace taskbench
