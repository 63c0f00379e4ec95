#include <algorithm>

#include "taskbench/dataset.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/util/rng.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

std::size_t Dataset::count(Split split) const {
  std::size_t n = 0;
  for (const Example& ex : examples)
    if (ex.split == split) ++n;
  return n;
}

std::vector<const Example*> Dataset::split_examples(Split split) const {
  std::vector<const Example*> out;
  for (const Example& ex : examples)
    if (ex.split == split) out.push_back(&ex);
  return out;
}

std::string render_words(const std::vector<std::string>& words,
                         const std::optional<std::string>& sep) {
  if (!sep) return join(words, " ");
  return join(words, " " + *sep + " ");
}

std::string render_input(const Dataset& ds, const Example& ex) {
  return render_words(ex.input_words, ds.separator);
}

std::vector<std::pair<std::size_t, std::size_t>> word_spans(
    const std::vector<std::string>& words) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t at = 0;
  for (const std::string& w : words) {
    std::size_t tokens = split_ws(w).size();
    spans.emplace_back(at, at + tokens);
    at += tokens;
  }
  return spans;
}

Dataset with_separators(const Dataset& ds, const std::string& sep) {
  if (sep.empty() || split_ws(sep).size() != 1)
    throw DataError("separator must be a single token");
  for (const Example& ex : ds.examples) {
    for (const std::string& w : ex.input_words)
      for (const std::string& atom : split_ws(w))
        if (atom == sep)
          throw DataError("separator '" + sep + "' collides with input word '" + w + "'");
  }
  Dataset out = ds;
  out.separator = sep;
  return out;
}

Dataset subsample_fewshot(const Dataset& ds, std::size_t k, std::uint64_t trial_seed) {
  std::vector<std::size_t> train_idx;
  for (std::size_t i = 0; i < ds.examples.size(); ++i)
    if (ds.examples[i].split == Split::Train) train_idx.push_back(i);
  if (k > train_idx.size())
    throw DataError("few-shot size " + std::to_string(k) + " exceeds train size " +
                    std::to_string(train_idx.size()));

  Rng rng(derive_seed(trial_seed, ds.task));
  std::vector<std::size_t> chosen = sample_indices(rng, train_idx.size(), k);
  std::sort(chosen.begin(), chosen.end());

  Dataset out;
  out.task = ds.task;
  out.config = ds.config;
  out.separator = ds.separator;
  std::size_t next = 0;
  for (std::size_t i = 0; i < ds.examples.size(); ++i) {
    const Example& ex = ds.examples[i];
    if (ex.split == Split::Train) {
      std::size_t pos = std::lower_bound(train_idx.begin(), train_idx.end(), i) -
                        train_idx.begin();
      if (next < chosen.size() && chosen[next] == pos) {
        out.examples.push_back(ex);
        ++next;
      }
    } else {
      out.examples.push_back(ex);
    }
  }
  return out;
}

}  // namespace taskbench
