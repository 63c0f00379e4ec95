#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "taskbench/errors.hpp"
#include "taskbench/metrics.hpp"
#include "taskbench/util/rng.hpp"
#include "taskbench/util/text.hpp"
#include "test_util.hpp"

using namespace taskbench;

TEST_CASE("token accuracy: best answer, per-answer length") {
  CHECK(token_accuracy(split_ws("a b c"), {{"a", "b", "c"}}) == 1.0);
  CHECK(token_accuracy(split_ws("a x b x"), {split_ws("a b c d")}) == 0.25);
  // 4 of 8 positions
  CHECK(token_accuracy(split_ws("a b c d x x x x"),
                       {split_ws("a b c d e f g h")}) == 0.5);
  // answers of different lengths score over their own length
  CHECK(token_accuracy(split_ws("a d"), {split_ws("a b"), split_ws("c d")}) == 0.5);
  CHECK(token_accuracy(split_ws("a"), {split_ws("a b b b"), split_ws("x")}) == 0.25);
  // shorter predictions score zero on the missing tail, surplus words are ignored
  CHECK(token_accuracy(split_ws("a"), {split_ws("a b")}) == 0.5);
  CHECK(token_accuracy(split_ws("a b z z z"), {split_ws("a b")}) == 1.0);
  CHECK_THROWS_AS(token_accuracy(split_ws("a"), {}), DataError);
}

TEST_CASE("token accuracy properties: order-free and monotone in answers") {
  Rng rng(77);
  auto random_seq = [&](std::size_t len) {
    std::vector<std::string> seq;
    for (std::size_t i = 0; i < len; ++i)
      seq.push_back(std::string(1, char('a' + rng_below(rng, 4))));
    return seq;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::vector<std::string>> answers;
    std::size_t n = 1 + rng_below(rng, 4);
    for (std::size_t i = 0; i < n; ++i) answers.push_back(random_seq(1 + rng_below(rng, 5)));
    std::vector<std::string> pred = random_seq(1 + rng_below(rng, 5));

    double base = token_accuracy(pred, answers);
    std::vector<std::vector<std::string>> shuffled = answers;
    shuffle_seeded(shuffled, rng);
    CHECK(token_accuracy(pred, shuffled) == base);

    std::vector<std::vector<std::string>> more = answers;
    more.push_back(random_seq(1 + rng_below(rng, 5)));
    CHECK(token_accuracy(pred, more) >= base);
  }
}

TEST_CASE("product-form accuracy agrees with enumerating the product") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + rng_below(rng, 4);
    std::vector<std::vector<std::string>> alts(n);
    for (auto& a : alts) {
      std::size_t k = 1 + rng_below(rng, 3);
      for (std::size_t i = 0; i < k; ++i)
        a.push_back(std::string(1, char('a' + rng_below(rng, 3))));
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    std::vector<std::string> pred;
    for (std::size_t i = 0; i < n; ++i)
      pred.push_back(std::string(1, char('a' + rng_below(rng, 3))));

    // enumerate the product set
    std::vector<std::vector<std::string>> all;
    std::vector<std::size_t> idx(n, 0);
    for (;;) {
      std::vector<std::string> seq(n);
      for (std::size_t i = 0; i < n; ++i) seq[i] = alts[i][idx[i]];
      all.push_back(seq);
      bool rolled = true;
      for (std::size_t pos = n; pos-- > 0;) {
        if (++idx[pos] < alts[pos].size()) {
          rolled = false;
          break;
        }
        idx[pos] = 0;
      }
      if (rolled) break;
    }
    CHECK(token_accuracy_alts(pred, alts) == doctest::Approx(token_accuracy(pred, all)));
  }
}

namespace {

// all ways to group t atoms into n contiguous non-empty words
void enumerate_groupings(const std::vector<std::string>& atoms, std::size_t n,
                         std::size_t from, std::vector<std::string>& current,
                         std::vector<std::vector<std::string>>& out) {
  if (current.size() == n) {
    if (from == atoms.size()) out.push_back(current);
    return;
  }
  std::size_t remaining_words = n - current.size();
  for (std::size_t take = 1; from + take <= atoms.size(); ++take) {
    if (atoms.size() - from - take < remaining_words - 1) break;
    std::vector<std::string> group(atoms.begin() + from, atoms.begin() + from + take);
    current.push_back(join(group, " "));
    enumerate_groupings(atoms, n, from + take, current, out);
    current.pop_back();
  }
}

}  // namespace

TEST_CASE("segmentation picks the accuracy-maximizing grouping") {
  // the worked example: three-token entity followed by a two-token one
  std::vector<std::string> atoms = split_ws("Pauline Payne Whitney Charles Lloyd");
  std::vector<std::vector<std::string>> alts = {{"Pauline Payne Whitney"}, {"Charles Lloyd"}};
  SegmentResult seg = segment_align(atoms, alts);
  CHECK(seg.accuracy == 1.0);
  CHECK(seg.words == std::vector<std::string>{"Pauline Payne Whitney", "Charles Lloyd"});

  // n = t: unique segmentation equals plain accuracy
  std::vector<std::vector<std::string>> unit_alts = {{"a"}, {"x"}, {"c"}};
  SegmentResult unit = segment_align(split_ws("a b c"), unit_alts);
  CHECK(unit.accuracy == doctest::Approx(token_accuracy_alts(split_ws("a b c"), unit_alts)));

  // 6 atoms into 3 words: DP equals brute force over all 10 segmentations
  std::vector<std::string> six = split_ws("a b a b a b");
  std::vector<std::vector<std::string>> three = {{"a b"}, {"a"}, {"b a b", "b"}};
  std::vector<std::vector<std::string>> groupings;
  std::vector<std::string> current;
  enumerate_groupings(six, 3, 0, current, groupings);
  CHECK(groupings.size() == 10);  // C(5,2)
  double best = 0;
  for (const auto& g : groupings) best = std::max(best, token_accuracy_alts(g, three));
  CHECK(segment_align(six, three).accuracy == doctest::Approx(best));

  // fewer atoms than words: missing words score zero
  SegmentResult short_pred = segment_align(split_ws("a"), {{"a"}, {"b"}, {"c"}});
  CHECK(short_pred.accuracy == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("scoring a dataset: oracle, empty, half-correct, missing") {
  KnowledgeStore store = fixture_store();
  GenConfig cfg;
  cfg.seed = 2;
  cfg.train_size = 4;
  cfg.eval_size = 2;
  cfg.min_samples = 2;
  BuildOutcome outcome =
      build_dataset(store, parse_expr("toy-syn[eng]", store.catalog()), cfg);
  REQUIRE(outcome.accepted());
  const Dataset& ds = *outcome.dataset;

  std::string oracle_lines, empty_lines;
  for (const Example& ex : ds.examples) {
    oracle_lines += "{\"id\":" + std::to_string(ex.id) + ",\"text\":\"" +
                    join(ex.label, " ") + "\"}\n";
    empty_lines += "{\"id\":" + std::to_string(ex.id) + ",\"text\":\"\"}\n";
  }
  PredictionSet oracle = parse_predictions_text(oracle_lines);
  CHECK(adaptability(ds, oracle, Split::Train) == 1.0);
  CHECK(adaptability(ds, oracle, Split::Eval) == 1.0);
  PredictionSet empty = parse_predictions_text(empty_lines);
  CHECK(adaptability(ds, empty, Split::Eval) == 0.0);

  // exactly half of the eval examples fully correct
  KnowledgeStore mid = midsize_store();
  GenConfig mcfg;
  mcfg.seed = 9;
  mcfg.train_size = 20;
  mcfg.eval_size = 10;
  mcfg.min_samples = 10;
  BuildOutcome mout = build_dataset(mid, parse_expr("ring-next[eng]", mid.catalog()), mcfg);
  REQUIRE(mout.accepted());
  std::string half_lines;
  std::size_t eval_seen = 0;
  for (const Example& ex : mout.dataset->examples) {
    if (ex.split != Split::Eval) continue;
    bool correct = eval_seen++ % 2 == 0;
    half_lines += "{\"id\":" + std::to_string(ex.id) + ",\"text\":\"" +
                  (correct ? ex.label[0] : std::string("wrong")) + "\"}\n";
  }
  CHECK(adaptability(*mout.dataset, parse_predictions_text(half_lines), Split::Eval) == 0.5);

  // missing predictions are listed, excluded, and flagged by coverage
  PredictionSet partial = parse_predictions_text(half_lines);
  partial.erase(partial.begin());
  EvalReport report = score_predictions(*mout.dataset, partial, Split::Eval);
  CHECK(report.coverage < 1.0);
  CHECK(report.missing.size() == 1);
  CHECK(report.covered == report.total - 1);
  // aggregate equals the mean of per-example accuracies
  double sum = 0;
  for (const ExampleScore& s : report.per_example) sum += s.accuracy;
  CHECK(report.aggregate == doctest::Approx(sum / report.per_example.size()));
}

TEST_CASE("prediction records validate candidate probabilities") {
  CHECK_THROWS_AS(
      parse_predictions_text(R"({"id":0,"text":"a","candidates":[["a",1.5]]})"),
      DataError);
  CHECK_THROWS_AS(
      parse_predictions_text(R"({"id":0,"text":"a","candidates":[["a",0.7],["b",0.7]]})"),
      DataError);
  PredictionSet ok =
      parse_predictions_text(R"({"id":3,"text":"a","candidates":[["a",0.7],["b",0.2]]})");
  CHECK(ok.at(3).has_candidates);
  CHECK(ok.at(3).candidates.size() == 2);
}

TEST_CASE("distribution mass sums candidate probability per answer set") {
  KnowledgeStore store = midsize_store();
  Catalog c = store.catalog();
  ExprPtr easy = parse_expr("ring-next[eng]", c);
  ExprPtr hard = parse_expr("ring-far[eng]", c);

  // hand-built dataset over known inputs: f_e(w000)={w001}, f_h(w000)={w003}
  Dataset ds;
  ds.task = "union(ring-next[eng], ring-far[eng])";
  for (std::uint64_t i = 0; i < 3; ++i) {
    Example ex;
    ex.id = i;
    std::string w = "w00" + std::to_string(i);
    ex.input_words = {w};
    ex.answer_alts = {{"w001"}};
    ex.label = {"w001"};
    ex.split = Split::Eval;
    ds.examples.push_back(ex);
  }

  std::string lines =
      R"({"id":0,"text":"w001","candidates":[["w001",0.4],["w003",0.3],["zzz",0.3]]})"
      "\n"
      R"({"id":1,"text":"w002","candidates":[["w002",0.2],["nope",0.1]]})"
      "\n"
      R"({"id":2,"text":"w003","candidates":[["w004",0.25],["w005",0.25]]})"
      "\n";
  PredictionSet preds = parse_predictions_text(lines);
  DistributionMassReport report = distribution_mass(store, easy, hard, ds, preds);
  CHECK(report.evaluated == 3);
  // id 0: mass 0.4 / 0.3; id 1: candidate w002 = f_e(w001) and w004 = f_h(w001)? no:
  // f_e(w001)={w002} mass 0.2, f_h(w001)={w004} mass 0; id 2: f_e(w002)={w003} = 0,
  // f_h(w002)={w005} mass 0.25
  CHECK(report.summed.mean_easy == doctest::Approx((0.4 + 0.2 + 0.0) / 3));
  CHECK(report.summed.mean_hard == doctest::Approx((0.3 + 0.0 + 0.25) / 3));
  CHECK(report.top.mean_easy == doctest::Approx((0.4 + 0.2 + 0.0) / 3));

  // an answer in both sets counts toward both masses
  KnowledgeStore both_store = midsize_store();
  LexicalStore& lex = both_store.lexical();
  lex.relations["ring-next[eng]"]["w000"] = {"w001"};
  lex.relations["ring-far[eng]"]["w000"] = {"w001"};  // overlap
  Dataset overlap_ds;
  Example ex;
  ex.id = 0;
  ex.input_words = {"w000"};
  ex.answer_alts = {{"w001"}};
  ex.label = {"w001"};
  ex.split = Split::Eval;
  overlap_ds.examples.push_back(ex);
  PredictionSet overlap_preds =
      parse_predictions_text(R"({"id":0,"text":"w001","candidates":[["w001",0.2]]})");
  DistributionMassReport overlap =
      distribution_mass(both_store, easy, hard, overlap_ds, overlap_preds);
  CHECK(overlap.summed.mean_easy == doctest::Approx(0.2));
  CHECK(overlap.summed.mean_hard == doctest::Approx(0.2));

  // candidates are required
  PredictionSet no_cands = parse_predictions_text(R"({"id":0,"text":"w001"})");
  CHECK_THROWS_WITH_AS(distribution_mass(both_store, easy, hard, overlap_ds, no_cands),
                       doctest::Contains("missing candidate"), DataError);
}

TEST_CASE("ols fit matches closed-form solutions") {
  // exact line
  std::vector<std::pair<double, double>> line;
  for (int i = 0; i < 10; ++i) line.emplace_back(i, 2.0 * i + 1.0);
  RegressionFit fit = ols_fit(line);
  CHECK(fit.defined);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));

  // constant y
  std::vector<std::pair<double, double>> flat;
  for (int i = 0; i < 5; ++i) flat.emplace_back(i, 3.0);
  fit = ols_fit(flat);
  CHECK(fit.slope == 0.0);
  CHECK(fit.r2 == 0.0);

  // zero x-variance: undefined
  std::vector<std::pair<double, double>> vertical = {{1, 2}, {1, 5}, {1, 9}};
  CHECK(!ols_fit(vertical).defined);

  // random cloud vs normal equations solved by Cramer's rule
  Rng rng(555);
  auto unit = [&] { return double(rng_below(rng, 10000)) / 10000.0; };
  std::vector<std::pair<double, double>> cloud;
  for (int i = 0; i < 30; ++i) cloud.emplace_back(unit() * 4.0, unit() * 3.0 - 1.0);
  fit = ols_fit(cloud);
  double n = cloud.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : cloud) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double det = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / det;
  double intercept = (sxx * sy - sx * sxy) / det;
  CHECK(std::abs(fit.slope - slope) < 1e-9);
  CHECK(std::abs(fit.intercept - intercept) < 1e-9);

  // r2 is invariant under positive affine rescaling of x
  std::vector<std::pair<double, double>> scaled = cloud;
  for (auto& [x, y] : scaled) x = 2.5 * x + 7.0;
  CHECK(ols_fit(scaled).r2 == doctest::Approx(fit.r2).epsilon(1e-12));
}

TEST_CASE("composition regression groups by function and flags small fits") {
  std::vector<CompositionPoint> points;
  for (int i = 0; i < 25; ++i) {
    CompositionPoint p;
    p.task = "u" + std::to_string(i);
    p.function_tag = "union";
    p.atomic_adaptabilities = {0.1 * i, 0.1 * i + 0.2};
    p.compositional_adaptability = 0.05 * i;  // x = 0.1*i + 0.1, exact line
    points.push_back(p);
  }
  for (int i = 0; i < 5; ++i) {
    CompositionPoint p;
    p.task = "m" + std::to_string(i);
    p.function_tag = "map";
    p.atomic_adaptabilities = {0.2 * i};
    p.compositional_adaptability = 0.1;
    points.push_back(p);
  }
  std::vector<RegressionFit> fits = composition_regression(points);
  REQUIRE(fits.size() == 2);
  const RegressionFit& map_fit = fits[0].function_tag == "map" ? fits[0] : fits[1];
  const RegressionFit& union_fit = fits[0].function_tag == "union" ? fits[0] : fits[1];
  CHECK(union_fit.significant);
  CHECK(union_fit.r2 == doctest::Approx(1.0));
  CHECK(union_fit.slope == doctest::Approx(0.5));
  CHECK(!map_fit.significant);

  CHECK_THROWS_AS(composition_regression(points, /*allow_insignificant=*/false), DataError);
}
