#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taskbench/dataset.hpp"

namespace taskbench {

// Per-example accuracy: the best answer's fraction of positions matching the
// prediction. Each candidate answer y is scored over its own length;
// positions the prediction does not reach score zero and surplus predicted
// words are ignored.
double token_accuracy(const std::vector<std::string>& pred,
                      const std::vector<std::vector<std::string>>& answers);

// Same metric over a product-form answer set (one alternative set per
// position): position i matches when pred[i] is one of the alternatives.
double token_accuracy_alts(const std::vector<std::string>& pred,
                           const std::vector<std::vector<std::string>>& alts);

struct SegmentResult {
  std::vector<std::string> words;
  double accuracy = 0.0;
};

// Group whitespace atoms into n = alts.size() contiguous words, maximizing
// token accuracy, by dynamic programming over (atoms consumed, words formed).
// With fewer atoms than words, the missing words stay empty and score zero.
SegmentResult segment_align(const std::vector<std::string>& atoms,
                            const std::vector<std::vector<std::string>>& alts);

struct PredictionRecord {
  std::uint64_t id = 0;
  std::string text;
  bool has_candidates = false;
  std::vector<std::pair<std::string, double>> candidates;
};

using PredictionSet = std::map<std::uint64_t, PredictionRecord>;

// Line-delimited records {"id":…, "text":…, "candidates":[[text,prob],…]?}.
// Candidate probabilities must lie in [0,1] and sum to at most 1.
PredictionSet load_predictions(const std::string& path);
PredictionSet parse_predictions_text(const std::string& text);

struct ExampleScore {
  std::uint64_t id = 0;
  double accuracy = 0.0;
  std::vector<std::string> segmentation;
};

struct EvalReport {
  std::string split;
  std::size_t total = 0;    // examples in the split
  std::size_t covered = 0;  // examples with a prediction
  double coverage = 0.0;
  double aggregate = 0.0;  // mean accuracy over covered examples
  std::vector<ExampleScore> per_example;
  std::vector<std::uint64_t> missing;  // example ids without predictions
};

// Score a prediction set against one split of a dataset. Sequential
// predictions are segmented (or split on the dataset separator when one is
// set). Missing predictions are excluded and reported.
EvalReport score_predictions(const Dataset& ds, const PredictionSet& preds, Split split);

// adapt_mem scores against the train split, adapt_gen against eval.
double adaptability(const Dataset& ds, const PredictionSet& preds, Split split);

struct MassStats {
  double mean_easy = 0.0, mean_hard = 0.0;
  double se_easy = 0.0, se_hard = 0.0;  // standard errors over inputs
  std::size_t n = 0;
};

struct DistributionMassReport {
  MassStats summed;  // probability mass summed over every answer in each set
  MassStats top;     // probability of the highest-scoring answer from each set
  std::size_t evaluated = 0;
  std::size_t skipped_out_of_domain = 0;
};

// Probability mass the scored candidates place on answers of the easier and
// harder task, averaged over eval inputs lying in both domains. Answers in
// both sets count toward both masses. Throws DataError when candidate lists
// are missing.
DistributionMassReport distribution_mass(const KnowledgeStore& store, const ExprPtr& f_easy,
                                         const ExprPtr& f_hard, const Dataset& ds,
                                         const PredictionSet& preds);

struct RegressionFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  std::size_t n = 0;
  bool defined = false;      // false when x has no variance
  bool significant = false;  // at least 20 points
  std::string function_tag;
  std::string paradigm_tag;
};

// Ordinary least squares with Pearson r-squared. Requires two points or
// more; zero x-variance leaves the fit undefined.
RegressionFit ols_fit(const std::vector<std::pair<double, double>>& points);

struct CompositionPoint {
  std::string task;
  std::string function_tag;
  std::string paradigm_tag;
  std::vector<double> atomic_adaptabilities;
  double compositional_adaptability = 0.0;
};

// One fit per (composition function, paradigm): x = mean atomic
// adaptability, y = compositional adaptability. Fits on fewer than 20
// points carry significant=false; with allow_insignificant=false they are
// refused (DataError).
std::vector<RegressionFit> composition_regression(const std::vector<CompositionPoint>& points,
                                                  bool allow_insignificant = true);

}  // namespace taskbench
