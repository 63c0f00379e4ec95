#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taskbench/evaluator.hpp"
#include "taskbench/store.hpp"

namespace taskbench {

enum class Split { Train, Eval };

// One input/answer pair. `input_words` holds ground-truth word boundaries;
// a "word" may span several whitespace tokens ("Henry VIII of England").
// Answers are stored per output position: the full answer set is the cross
// product of the alternatives, which is exact for every task the engine
// builds (word-level sets are one-position products).
struct Example {
  std::uint64_t id = 0;
  std::vector<std::string> input_words;
  std::vector<std::vector<std::string>> answer_alts;  // each sorted unique
  std::vector<std::string> label;                     // drawn uniformly from the answer set
  Split split = Split::Train;
  // Balanced-union datasets record which constituent produced the label
  // ("e" or "h"); empty otherwise.
  std::string label_source;
};

struct GenConfig {
  std::uint64_t seed = 0;
  std::size_t train_size = 1000;
  std::size_t eval_size = 500;
  std::size_t min_samples = 100;  // tasks with fewer survivors are rejected
  std::size_t seq_len = 8;        // n: words per sequential input
  // m: words surviving the filter. Defaults to n for const-true filters and
  // n/2 otherwise.
  std::optional<std::size_t> seq_keep;
  std::uint64_t product_cap = 10000;
};

struct Dataset {
  std::string task;  // canonical DSL string
  GenConfig config;
  std::optional<std::string> separator;
  std::vector<Example> examples;

  std::size_t count(Split split) const;
  std::vector<const Example*> split_examples(Split split) const;
};

// Rejection is a value, not an error.
struct BuildOutcome {
  std::optional<Dataset> dataset;
  std::string rejection;  // non-empty iff rejected

  bool accepted() const { return dataset.has_value(); }
};

// Build a dataset for any typechecked task. Inputs come from the task's
// input distribution (vocabulary words, participating entities, or balanced
// predicate pools; sequential tasks use the sequence sampler). Inputs with
// empty answer sets are dropped; fewer than `min_samples` survivors rejects
// the task. Word-level train/eval splits have disjoint input words.
BuildOutcome build_dataset(const KnowledgeStore& store, const ExprPtr& expr,
                           const GenConfig& config);

// Sample one sequence of n words of which exactly m pass the filter and lie
// in the map's domain, in seeded uniform order. Empty required pools make
// the task infeasible (nullopt).
std::optional<std::vector<std::string>> seq_sample(const KnowledgeStore& store,
                                                   const MapFilterNF& nf, std::size_t n,
                                                   std::size_t m, std::uint64_t seed);

// Balanced training set for union(f_e, f_h): inputs drawn from the domain
// intersection first, then topped up equally from each side; every label
// source is tagged. Eval examples are held-out intersection inputs labeled
// from the union. The final example list is shuffled whole.
BuildOutcome build_balanced_union(const KnowledgeStore& store, const ExprPtr& f_easy,
                                  const ExprPtr& f_hard, const GenConfig& config);

// Render word/entity boundaries with an explicit separator token.
// Throws DataError if any input word equals the separator.
Dataset with_separators(const Dataset& ds, const std::string& sep = "#");

// Seeded uniform subset of the train split (the eval split is untouched).
// Throws DataError if k exceeds the train size.
Dataset subsample_fewshot(const Dataset& ds, std::size_t k, std::uint64_t trial_seed);

// Line-delimited serialization: a header record followed by one example per
// line, stable field order, byte-deterministic. export then import is
// lossless.
void export_dataset(const Dataset& ds, const std::string& path);
Dataset import_dataset(const std::string& path);

// Rendered input text for an example (separator applied when set).
std::string render_input(const Dataset& ds, const Example& ex);
std::string render_words(const std::vector<std::string>& words,
                         const std::optional<std::string>& sep);
// Token spans of the ground-truth words within the whitespace token stream
// of the unseparated input text.
std::vector<std::pair<std::size_t, std::size_t>> word_spans(
    const std::vector<std::string>& words);

}  // namespace taskbench
