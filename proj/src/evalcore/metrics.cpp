#include <algorithm>

#include "taskbench/errors.hpp"
#include "taskbench/metrics.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

double token_accuracy(const std::vector<std::string>& pred,
                      const std::vector<std::vector<std::string>>& answers) {
  if (answers.empty()) throw DataError("token accuracy needs a non-empty answer set");
  double best = 0.0;
  for (const auto& y : answers) {
    if (y.empty()) continue;
    std::size_t matches = 0;
    for (std::size_t i = 0; i < y.size() && i < pred.size(); ++i)
      if (y[i] == pred[i]) ++matches;
    best = std::max(best, static_cast<double>(matches) / static_cast<double>(y.size()));
  }
  return best;
}

double token_accuracy_alts(const std::vector<std::string>& pred,
                           const std::vector<std::vector<std::string>>& alts) {
  if (alts.empty()) throw DataError("token accuracy needs a non-empty answer set");
  std::size_t matches = 0;
  for (std::size_t i = 0; i < alts.size() && i < pred.size(); ++i)
    if (std::find(alts[i].begin(), alts[i].end(), pred[i]) != alts[i].end()) ++matches;
  return static_cast<double>(matches) / static_cast<double>(alts.size());
}

SegmentResult segment_align(const std::vector<std::string>& atoms,
                            const std::vector<std::vector<std::string>>& alts) {
  const std::size_t t = atoms.size();
  const std::size_t n = alts.size();
  if (n == 0) throw DataError("segmentation needs at least one answer position");
  const bool allow_empty = t < n;  // missing words score zero

  // dp[i][j]: best matches grouping the first i atoms into the first j words
  constexpr double kNeg = -1.0;
  std::vector<std::vector<double>> dp(t + 1, std::vector<double>(n + 1, kNeg));
  std::vector<std::vector<std::size_t>> back(t + 1, std::vector<std::size_t>(n + 1, 0));
  dp[0][0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t i = 0; i <= t; ++i) {
      for (std::size_t k = 0; k <= i; ++k) {
        if (!allow_empty && k == i) continue;  // words must be non-empty
        if (dp[k][j - 1] < 0) continue;
        std::vector<std::string> group(atoms.begin() + k, atoms.begin() + i);
        std::string word = join(group, " ");
        double hit = std::find(alts[j - 1].begin(), alts[j - 1].end(), word) !=
                             alts[j - 1].end()
                         ? 1.0
                         : 0.0;
        if (dp[k][j - 1] + hit > dp[i][j]) {
          dp[i][j] = dp[k][j - 1] + hit;
          back[i][j] = k;
        }
      }
    }
  }

  SegmentResult result;
  if (dp[t][n] < 0) return result;  // no valid segmentation (t < n handled above)
  result.accuracy = dp[t][n] / static_cast<double>(n);
  std::vector<std::string> words(n);
  std::size_t i = t;
  for (std::size_t j = n; j > 0; --j) {
    std::size_t k = back[i][j];
    std::vector<std::string> group(atoms.begin() + k, atoms.begin() + i);
    words[j - 1] = join(group, " ");
    i = k;
  }
  result.words = std::move(words);
  return result;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

RegressionFit ols_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw DataError("regression needs at least two points");
  RegressionFit fit;
  fit.n = points.size();
  double n = static_cast<double>(points.size());
  double sx = 0, sy = 0;
  for (auto [x, y] : points) {
    sx += x;
    sy += y;
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (auto [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) {
    fit.defined = false;  // vertical data: slope undefined
    return fit;
  }
  fit.defined = true;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 0.0 : (sxy * sxy) / (sxx * syy);
  fit.significant = points.size() >= 20;
  return fit;
}

std::vector<RegressionFit> composition_regression(const std::vector<CompositionPoint>& points,
                                                  bool allow_insignificant) {
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> groups;
  for (const CompositionPoint& p : points) {
    if (p.atomic_adaptabilities.empty())
      throw DataError("composition point for '" + p.task + "' lists no atomic adaptabilities");
    double x = mean_of(p.atomic_adaptabilities);
    groups[{p.function_tag, p.paradigm_tag}].emplace_back(x, p.compositional_adaptability);
  }
  std::vector<RegressionFit> fits;
  for (const auto& [key, pts] : groups) {
    RegressionFit fit = ols_fit(pts);
    fit.function_tag = key.first;
    fit.paradigm_tag = key.second;
    if (!fit.significant && !allow_insignificant)
      throw DataError("composition function '" + key.first + "' has " +
                      std::to_string(pts.size()) + " tasks; at least 20 required");
    fits.push_back(std::move(fit));
  }
  return fits;
}

}  // namespace taskbench
