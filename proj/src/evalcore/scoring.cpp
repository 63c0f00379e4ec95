#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/metrics.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

namespace {

PredictionRecord parse_record(const nlohmann::json& rec, std::size_t lineno) {
  PredictionRecord pr;
  try {
    pr.id = rec.at("id").get<std::uint64_t>();
    pr.text = rec.at("text").get<std::string>();
    if (rec.contains("candidates") && !rec["candidates"].is_null()) {
      pr.has_candidates = true;
      double total = 0.0;
      for (const auto& c : rec["candidates"]) {
        std::string text = c.at(0).get<std::string>();
        double p = c.at(1).get<double>();
        if (p < 0.0 || p > 1.0)
          throw DataError("candidate probability out of [0,1]: " + std::to_string(p));
        total += p;
        pr.candidates.emplace_back(std::move(text), p);
      }
      if (total > 1.0 + 1e-9)
        throw DataError("candidate probabilities sum to " + std::to_string(total));
    }
  } catch (const DataError&) {
    throw;
  } catch (const std::exception& e) {
    throw DataError("predictions line " + std::to_string(lineno) + ": " + e.what());
  }
  return pr;
}

}  // namespace

PredictionSet parse_predictions_text(const std::string& text) {
  PredictionSet out;
  std::size_t lineno = 0;
  for (const std::string& line : split_char(text, '\n')) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const std::exception& e) {
      throw DataError("predictions line " + std::to_string(lineno) + ": " + e.what());
    }
    PredictionRecord pr = parse_record(rec, lineno);
    out[pr.id] = std::move(pr);
  }
  return out;
}

PredictionSet load_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open predictions: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_predictions_text(text);
}

namespace {

// Split a prediction on the dataset separator token, trimming each segment
// to single-space-joined atoms.
std::vector<std::string> separator_words(const std::string& text, const std::string& sep) {
  std::vector<std::string> words;
  std::vector<std::string> current;
  for (const std::string& atom : split_ws(text)) {
    if (atom == sep) {
      words.push_back(join(current, " "));
      current.clear();
    } else {
      current.push_back(atom);
    }
  }
  words.push_back(join(current, " "));
  return words;
}

}  // namespace

EvalReport score_predictions(const Dataset& ds, const PredictionSet& preds, Split split) {
  EvalReport report;
  report.split = split == Split::Train ? "mem" : "gen";
  double sum = 0.0;
  for (const Example& ex : ds.examples) {
    if (ex.split != split) continue;
    ++report.total;
    auto it = preds.find(ex.id);
    if (it == preds.end()) {
      report.missing.push_back(ex.id);
      continue;
    }
    ++report.covered;
    ExampleScore score;
    score.id = ex.id;
    if (ds.separator) {
      score.segmentation = separator_words(it->second.text, *ds.separator);
      score.accuracy = token_accuracy_alts(score.segmentation, ex.answer_alts);
    } else {
      SegmentResult seg = segment_align(split_ws(it->second.text), ex.answer_alts);
      score.segmentation = std::move(seg.words);
      score.accuracy = seg.accuracy;
    }
    sum += score.accuracy;
    report.per_example.push_back(std::move(score));
  }
  report.coverage = report.total == 0
                        ? 1.0
                        : static_cast<double>(report.covered) / static_cast<double>(report.total);
  report.aggregate = report.covered == 0 ? 0.0 : sum / static_cast<double>(report.covered);
  return report;
}

double adaptability(const Dataset& ds, const PredictionSet& preds, Split split) {
  return score_predictions(ds, preds, split).aggregate;
}

DistributionMassReport distribution_mass(const KnowledgeStore& store, const ExprPtr& f_easy,
                                         const ExprPtr& f_hard, const Dataset& ds,
                                         const PredictionSet& preds) {
  DistributionMassReport report;
  std::vector<double> sum_e, sum_h, top_e, top_h;
  std::vector<std::uint64_t> missing_candidates;

  for (const Example& ex : ds.examples) {
    if (ex.split != Split::Eval) continue;
    if (ex.input_words.size() != 1)
      throw DataError("distribution mass applies to word-level datasets");
    const std::string& x = ex.input_words[0];
    std::vector<std::string> easy = eval_relation(store, f_easy, x);
    std::vector<std::string> hard = eval_relation(store, f_hard, x);
    if (easy.empty() || hard.empty()) {
      ++report.skipped_out_of_domain;  // input must lie in both domains
      continue;
    }
    auto it = preds.find(ex.id);
    if (it == preds.end() || !it->second.has_candidates) {
      missing_candidates.push_back(ex.id);
      continue;
    }
    double mass_e = 0.0, mass_h = 0.0, best_e = 0.0, best_h = 0.0;
    for (const auto& [text, p] : it->second.candidates) {
      // an answer in both sets counts toward both masses
      if (std::binary_search(easy.begin(), easy.end(), text)) {
        mass_e += p;
        best_e = std::max(best_e, p);
      }
      if (std::binary_search(hard.begin(), hard.end(), text)) {
        mass_h += p;
        best_h = std::max(best_h, p);
      }
    }
    sum_e.push_back(mass_e);
    sum_h.push_back(mass_h);
    top_e.push_back(best_e);
    top_h.push_back(best_h);
    ++report.evaluated;
  }

  if (!missing_candidates.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < missing_candidates.size() && i < 5; ++i)
      ids += (i ? ", " : "") + std::to_string(missing_candidates[i]);
    throw DataError("missing candidate lists for " +
                    std::to_string(missing_candidates.size()) + " examples (ids " + ids + ")");
  }

  auto fill = [](MassStats& st, const std::vector<double>& e, const std::vector<double>& h) {
    auto mean = [](const std::vector<double>& xs) {
      double s = 0.0;
      for (double x : xs) s += x;
      return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
    };
    auto se = [&](const std::vector<double>& xs) {
      if (xs.size() < 2) return 0.0;
      double m = mean(xs);
      double ss = 0.0;
      for (double x : xs) ss += (x - m) * (x - m);
      return std::sqrt(ss / static_cast<double>(xs.size() - 1) /
                       static_cast<double>(xs.size()));
    };
    st.mean_easy = mean(e);
    st.mean_hard = mean(h);
    st.se_easy = se(e);
    st.se_hard = se(h);
    st.n = e.size();
  };
  fill(report.summed, sum_e, sum_h);
  fill(report.top, top_e, top_h);
  return report;
}

}  // namespace taskbench
