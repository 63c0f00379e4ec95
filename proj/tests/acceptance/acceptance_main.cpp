// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and runs against the bundled
// fixtures or stores constructed in memory.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "taskbench/dataset.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/metrics.hpp"
#include "taskbench/runner.hpp"
#include "taskbench/sparql.hpp"
#include "taskbench/util/rng.hpp"
#include "taskbench/util/sha256.hpp"
#include "taskbench/util/text.hpp"
#include "../test_util.hpp"

using namespace taskbench;

namespace {

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

// ---------------------------------------------------------------------
// 1. Normalization soundness: literal composition semantics equal
//    map-filter-normal-form semantics.
// ---------------------------------------------------------------------

using SeqSet = std::set<std::vector<std::string>>;

SeqSet lit_map(const KnowledgeStore& store, const ExprPtr& body, const SeqSet& in) {
  SeqSet out;
  for (const auto& seq : in) {
    std::vector<std::vector<std::string>> images;
    bool dead = false;
    for (const auto& w : seq) {
      images.push_back(eval_relation(store, body, w));
      if (images.back().empty()) dead = true;
    }
    if (dead) continue;
    std::vector<std::size_t> idx(images.size(), 0);
    for (;;) {
      std::vector<std::string> pick(images.size());
      for (std::size_t i = 0; i < images.size(); ++i) pick[i] = images[i][idx[i]];
      out.insert(std::move(pick));
      std::size_t i = images.size();
      bool done = true;
      while (i > 0) {
        --i;
        if (++idx[i] < images[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (done || images.empty()) break;
    }
    if (images.empty()) out.insert({});
  }
  return out;
}

SeqSet lit_filter(const KnowledgeStore& store, const ExprPtr& body, const SeqSet& in) {
  SeqSet out;
  for (const auto& seq : in) {
    std::vector<std::string> kept;
    for (const auto& w : seq)
      if (eval_predicate(store, body, w)) kept.push_back(w);
    out.insert(std::move(kept));
  }
  return out;
}

SeqSet lit_eval(const KnowledgeStore& store, const ExprPtr& expr, const SeqSet& in) {
  switch (expr->kind) {
    case ExprKind::Map:
      return lit_map(store, expr->a, in);
    case ExprKind::Filter:
      return lit_filter(store, expr->a, in);
    case ExprKind::MapFilter:
      return lit_map(store, expr->a, lit_filter(store, expr->b, in));
    case ExprKind::Chain:
      return lit_eval(store, expr->a, lit_eval(store, expr->b, in));
    default:
      throw Failure{"literal oracle: not a sequential node"};
  }
}

void criterion_normalization(std::string& detail) {
  KnowledgeStore store = fixture_store();
  const Catalog& c = store.catalog();

  // Precondition of the exact rewrite: the toy relations are total class
  // functions between the noun and verb word classes. Totality keeps images
  // non-empty (an empty image annihilates the literal cross product) and
  // class purity keeps every predicate constant on every image set.
  const std::vector<std::string> nouns = {"stone", "river", "cloud", "forest", "ember"};
  const std::vector<std::string> verbs = {"run", "leap", "drift", "glow", "weave"};
  for (const char* rel : {"toy-syn", "toy-rev"}) {
    for (const auto& cls : {nouns, verbs}) {
      for (const auto& w : cls) {
        auto image = eval_relation(store, TaskExpr::atomic(rel, "eng"), w);
        require(!image.empty(), std::string(rel) + " is not total at '" + w + "'");
        bool in_n = false, in_v = false;
        for (const auto& y : image) {
          in_n = in_n || std::count(nouns.begin(), nouns.end(), y);
          in_v = in_v || std::count(verbs.begin(), verbs.end(), y);
        }
        require(!(in_n && in_v), std::string(rel) + " image of '" + w + "' mixes classes");
      }
    }
  }

  std::vector<ExprPtr> rels = {TaskExpr::atomic("toy-syn", "eng"),
                               TaskExpr::atomic("toy-rev", "eng"), TaskExpr::identity()};
  std::vector<ExprPtr> preds = {TaskExpr::atomic("toy-is-n", "eng"),
                                TaskExpr::atomic("toy-is-v", "eng")};
  std::vector<ExprPtr> stages;
  for (const auto& r : rels) stages.push_back(TaskExpr::map(r));
  for (const auto& p : preds) stages.push_back(TaskExpr::filter(p));
  for (const auto& r : rels)
    for (const auto& p : preds) stages.push_back(TaskExpr::map_filter(r, p));

  std::vector<ExprPtr> exprs = stages;  // depth 1
  for (const auto& a : stages)
    for (const auto& b : stages) exprs.push_back(TaskExpr::chain(a, b));  // depth 2
  for (const auto& a : stages)
    for (const auto& b : stages)
      for (const auto& x : stages) {
        exprs.push_back(TaskExpr::chain(a, TaskExpr::chain(b, x)));  // depth 3, right
        exprs.push_back(TaskExpr::chain(TaskExpr::chain(a, b), x));  // depth 3, left
      }

  std::vector<std::vector<std::string>> inputs;
  const std::vector<std::string> alphabet = {"stone", "river", "run"};
  std::vector<std::string> cur;
  std::function<void(std::size_t)> gen = [&](std::size_t len) {
    if (!cur.empty()) inputs.push_back(cur);
    if (len == 4) return;
    for (const auto& w : alphabet) {
      cur.push_back(w);
      gen(len + 1);
      cur.pop_back();
    }
  };
  gen(0);

  auto start = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  for (const ExprPtr& expr : exprs) {
    MapFilterNF nf = normalize(expr, c);
    for (const auto& input : inputs) {
      SeqSet literal = lit_eval(store, expr, {input});
      SeqSet via_nf;
      for (auto& seq : eval_seq(store, nf, input).to_vector(100000))
        via_nf.insert(std::move(seq));
      if (literal != via_nf)
        throw Failure{"mismatch for '" + print_expr(expr) + "' on input '" +
                      join(input, " ") + "'"};
      ++checked;
    }
  }
  auto seconds = std::chrono::duration_cast<std::chrono::seconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  require(seconds < 60, "exhaustive sweep exceeded 60 s");
  detail = std::to_string(exprs.size()) + " expressions x " + std::to_string(inputs.size()) +
           " sequences, " + std::to_string(checked) + " comparisons";
}

// ---------------------------------------------------------------------
// 2. SPARQL oracle equivalence + golden fragment templates.
// ---------------------------------------------------------------------

void criterion_sparql(std::string& detail) {
  KnowledgeStore store = fixture_store();
  const Catalog& c = store.catalog();
  const TripleStore& ts = *store.triples();

  auto frag = [&](const char* src, QueryMode mode = QueryMode::Sample) {
    return compile_sparql(parse_expr(src, c), c, mode).body;
  };
  require(frag("father") == "?x father ?y .", "atomic template");
  require(frag("union(mother, father)") == "{ ?x mother ?y . } UNION { ?x father ?y . }",
          "union template");
  require(frag("intersection(mother, father)") == "?x mother ?y . ?x father ?y .",
          "intersection template");
  require(frag("lor(is-birthplace-london, is-birthplace-nyc)", QueryMode::Function) ==
              "BIND( y1 || y2 AS y ) "
              "BIND( EXISTS { ?x place-of-birth london . } AS y1 ) "
              "BIND( EXISTS { ?x place-of-birth new-york-city . } AS y2 )",
          "lor template");
  require(frag("land(is-occupation-actor, is-birthplace-nyc)", QueryMode::Function) ==
              "BIND( y1 && y2 AS y ) "
              "BIND( EXISTS { ?x occupation actor . } AS y1 ) "
              "BIND( EXISTS { ?x place-of-birth new-york-city . } AS y2 )",
          "land template");

  std::vector<ExprPtr> rels;
  for (const char* base : {"head-of-state", "mother", "father", "child", "occupation",
                           "place-of-birth", "country-of-citizenship", "performer"})
    rels.push_back(TaskExpr::atomic(base));
  for (const char* base : {"head-of-state", "mother", "father", "child"})
    rels.push_back(TaskExpr::atomic(base, "", true));

  std::vector<ExprPtr> preds;
  for (const char* base : {"is-occupation-actor", "is-occupation-politician",
                           "is-birthplace-nyc", "is-birthplace-london", "is-instance-human"})
    preds.push_back(TaskExpr::atomic(base));

  std::vector<ExprPtr> rel_exprs = rels;
  for (const auto& outer : rels)
    for (const auto& inner : rels) rel_exprs.push_back(TaskExpr::chain(outer, inner));
  for (std::size_t i = 0; i < rels.size(); ++i)
    for (std::size_t j = i + 1; j < rels.size(); ++j) {
      rel_exprs.push_back(TaskExpr::set_union(rels[i], rels[j]));
      rel_exprs.push_back(TaskExpr::set_intersection(rels[i], rels[j]));
    }
  std::vector<ExprPtr> pred_exprs = preds;
  for (std::size_t i = 0; i < preds.size(); ++i)
    for (std::size_t j = i + 1; j < preds.size(); ++j) {
      pred_exprs.push_back(TaskExpr::land(preds[i], preds[j]));
      pred_exprs.push_back(TaskExpr::lor(preds[i], preds[j]));
    }

  std::vector<std::string> inputs;
  for (const std::string& id : ts.all_entities()) inputs.push_back(ts.label(id));
  std::sort(inputs.begin(), inputs.end());
  inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
  inputs.push_back("No Such Person");

  std::size_t checked = 0;
  for (const ExprPtr& expr : rel_exprs) {
    for (const std::string& x : inputs) {
      std::vector<std::string> direct = eval_relation(store, expr, x);
      std::vector<std::string> via;
      for (const std::string& id : ts.ids_for_label(x)) {
        SparqlQuery q = compile_sparql(expr, c, QueryMode::Function, id);
        for (const std::string& out : execute_local(ts, q)) via.push_back(ts.label(out));
      }
      std::sort(via.begin(), via.end());
      via.erase(std::unique(via.begin(), via.end()), via.end());
      if (via != direct)
        throw Failure{"relation mismatch for '" + print_expr(expr) + "' on '" + x + "'"};
      ++checked;
    }
  }
  for (const ExprPtr& expr : pred_exprs) {
    for (const std::string& x : inputs) {
      bool direct = eval_predicate(store, expr, x);
      bool via = false;
      for (const std::string& id : ts.ids_for_label(x)) {
        SparqlQuery q = compile_sparql(expr, c, QueryMode::Function, id);
        auto rows = execute_local(ts, q);
        via = via || (rows == std::vector<std::string>{"true"});
      }
      if (via != direct)
        throw Failure{"predicate mismatch for '" + print_expr(expr) + "' on '" + x + "'"};
      ++checked;
    }
  }
  detail = std::to_string(rel_exprs.size() + pred_exprs.size()) + " expressions x " +
           std::to_string(inputs.size()) + " inputs, " + std::to_string(checked) +
           " comparisons; 5 golden templates";
}

// ---------------------------------------------------------------------
// 3. Segmentation optimality: DP equals brute force.
// ---------------------------------------------------------------------

void enumerate_groupings(const std::vector<std::string>& atoms, std::size_t n,
                         std::size_t from, std::vector<std::string>& cur,
                         std::vector<std::vector<std::string>>& out) {
  if (cur.size() == n) {
    if (from == atoms.size()) out.push_back(cur);
    return;
  }
  for (std::size_t take = 1; from + take <= atoms.size(); ++take) {
    if (atoms.size() - from - take < n - cur.size() - 1) break;
    std::vector<std::string> group(atoms.begin() + from, atoms.begin() + from + take);
    cur.push_back(join(group, " "));
    enumerate_groupings(atoms, n, from + take, cur, out);
    cur.pop_back();
  }
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

void criterion_segmentation(std::string& detail) {
  Rng rng(4242);
  std::size_t cases = 0;
  for (std::size_t t = 1; t <= 8; ++t) {
    for (std::size_t n = 1; n <= t; ++n) {
      for (int rep = 0; rep < 60; ++rep) {
        std::vector<std::string> atoms;
        for (std::size_t i = 0; i < t; ++i)
          atoms.push_back(std::string(1, char('a' + rng_below(rng, 2))));
        std::vector<std::vector<std::string>> alts(n);
        for (std::size_t j = 0; j < n; ++j) {
          std::size_t k = 1 + rng_below(rng, 2);
          for (std::size_t v = 0; v < k; ++v) {
            // half the candidates are real contiguous chunks of the atoms
            if (rng_below(rng, 2) == 0) {
              std::size_t from = rng_below(rng, t);
              std::size_t len = 1 + rng_below(rng, t - from);
              std::vector<std::string> chunk(atoms.begin() + from,
                                             atoms.begin() + from + len);
              alts[j].push_back(join(chunk, " "));
            } else {
              std::size_t len = 1 + rng_below(rng, 3);
              std::vector<std::string> synth;
              for (std::size_t q = 0; q < len; ++q)
                synth.push_back(std::string(1, char('a' + rng_below(rng, 2))));
              alts[j].push_back(join(synth, " "));
            }
          }
          std::sort(alts[j].begin(), alts[j].end());
          alts[j].erase(std::unique(alts[j].begin(), alts[j].end()), alts[j].end());
        }

        std::vector<std::vector<std::string>> groupings;
        std::vector<std::string> cur;
        enumerate_groupings(atoms, n, 0, cur, groupings);
        require(groupings.size() == binom(t - 1, n - 1),
                "grouping count != C(t-1, n-1) for t=" + std::to_string(t) +
                    " n=" + std::to_string(n));
        double best = 0.0;
        for (const auto& g : groupings)
          best = std::max(best, token_accuracy_alts(g, alts));
        SegmentResult dp = segment_align(atoms, alts);
        if (dp.accuracy != best)
          throw Failure{"DP " + std::to_string(dp.accuracy) + " != brute force " +
                        std::to_string(best) + " at t=" + std::to_string(t) +
                        " n=" + std::to_string(n)};
        // the reported segmentation must itself reach the reported accuracy
        if (token_accuracy_alts(dp.words, alts) != dp.accuracy)
          throw Failure{"reported segmentation does not score its own accuracy"};
        ++cases;
      }
    }
  }
  detail = std::to_string(cases) + " cases over all t <= 8, n <= t; tolerance 0";
}

// ---------------------------------------------------------------------
// 4. Metric fixtures + oracle adaptability.
// ---------------------------------------------------------------------

PredictionSet oracle_predictions(const Dataset& ds) {
  std::string lines;
  for (const Example& ex : ds.examples) {
    std::string text = render_words(ex.label, ds.separator);
    lines += "{\"id\":" + std::to_string(ex.id) + ",\"text\":\"" + text + "\"}\n";
  }
  return parse_predictions_text(lines);
}

void criterion_metrics(std::string& detail) {
  std::size_t fixtures = 0;
  auto eq = [&fixtures](double got, double want, const char* what) {
    if (got != want)
      throw Failure{std::string(what) + ": got " + std::to_string(got) + ", want " +
                    std::to_string(want)};
    ++fixtures;
  };

  eq(token_accuracy(split_ws("a b c"), {split_ws("a b c")}), 1.0, "exact match");
  eq(token_accuracy(split_ws("a b c d x x x x"), {split_ws("a b c d e f g h")}), 4.0 / 8.0,
     "four of eight");
  eq(token_accuracy(split_ws("a d"), {split_ws("a b"), split_ws("c d")}), 1.0 / 2.0,
     "best of two answers");
  eq(token_accuracy(split_ws("p q r"), {split_ws("p x q x r")}), 1.0 / 5.0,
     "five-long answer, one aligned match");
  eq(token_accuracy(split_ws("a"), {split_ws("a b")}), 1.0 / 2.0, "short prediction");
  eq(token_accuracy(split_ws("a b z z"), {split_ws("a b")}), 1.0, "surplus ignored");
  eq(token_accuracy(split_ws("x"), {split_ws("x y z"), split_ws("x")}), 1.0,
     "answers of different lengths");
  eq(token_accuracy(split_ws("q"), {split_ws("a"), split_ws("b c")}), 0.0, "no match");
  eq(token_accuracy_alts(split_ws("a b c"), {{"a", "z"}, {"q"}, {"c"}}), 2.0 / 3.0,
     "product-form two of three");
  eq(segment_align(split_ws("Pauline Payne Whitney Charles Lloyd"),
                   {{"Pauline Payne Whitney"}, {"Charles Lloyd"}})
         .accuracy,
     1.0, "entity segmentation");
  eq(segment_align(split_ws("a"), {{"a"}, {"b"}, {"c"}}).accuracy, 1.0 / 3.0,
     "missing words score zero");
  eq(token_accuracy_alts(split_ws("true"), {{"true"}}), 1.0, "predicate true");
  require(fixtures >= 10, "need at least 10 fixtures");

  // oracle predictor reaches exactly 1.0 on every generated dataset
  KnowledgeStore store = fixture_store();
  const Catalog& c = store.catalog();
  KnowledgeStore mid = midsize_store();

  std::vector<Dataset> datasets;
  GenConfig small;
  small.seed = 7;
  small.train_size = 4;
  small.eval_size = 2;
  small.min_samples = 2;

  for (const char* src : {"toy-syn[eng]", "union(mother, father)",
                          "map{synonyms[eng]}", "filter{toy-is-n[eng]}",
                          "map{toy-syn[eng]}(filter{toy-is-n[eng]})"}) {
    GenConfig cfg = small;
    cfg.seq_len = 5;
    BuildOutcome outcome = build_dataset(store, parse_expr(src, c), cfg);
    require(outcome.accepted(), std::string("build failed for ") + src);
    datasets.push_back(std::move(*outcome.dataset));
  }
  {
    GenConfig cfg = small;
    cfg.min_samples = 1;
    BuildOutcome chain = build_dataset(store, parse_expr("mother(head-of-state)", c), cfg);
    require(chain.accepted(), "chain dataset");
    datasets.push_back(std::move(*chain.dataset));

    GenConfig mcfg;
    mcfg.seed = 5;
    mcfg.train_size = 30;
    mcfg.eval_size = 10;
    mcfg.min_samples = 20;
    BuildOutcome pred = build_dataset(mid, parse_expr("ring-even[eng]", mid.catalog()), mcfg);
    require(pred.accepted(), "predicate dataset");
    datasets.push_back(std::move(*pred.dataset));

    BuildOutcome balanced = build_balanced_union(
        store, parse_expr("occupation", c), parse_expr("country-of-citizenship", c), small);
    require(balanced.accepted(), "balanced dataset");
    datasets.push_back(std::move(*balanced.dataset));

    // separator variant of a sequential dataset with multi-token entities
    GenConfig scfg = small;
    scfg.seq_len = 3;
    scfg.seq_keep = 3;
    BuildOutcome seq_ds = build_dataset(store, parse_expr("map{occupation}", c), scfg);
    require(seq_ds.accepted(), "factual map dataset");
    datasets.push_back(with_separators(*seq_ds.dataset, "#"));
  }

  for (const Dataset& ds : datasets) {
    PredictionSet oracle = oracle_predictions(ds);
    double mem = adaptability(ds, oracle, Split::Train);
    double gen = adaptability(ds, oracle, Split::Eval);
    if (ds.count(Split::Train) > 0 && mem != 1.0)
      throw Failure{"oracle adapt_mem = " + std::to_string(mem) + " on " + ds.task};
    if (ds.count(Split::Eval) > 0 && gen != 1.0)
      throw Failure{"oracle adapt_gen = " + std::to_string(gen) + " on " + ds.task};
  }
  detail = std::to_string(fixtures) + " hand-computed fixtures; oracle exact on " +
           std::to_string(datasets.size()) + " generated datasets";
}

// ---------------------------------------------------------------------
// 5. Balanced union construction.
// ---------------------------------------------------------------------

void check_balance(const Dataset& ds, std::size_t expect_each) {
  std::size_t from_e = 0, from_h = 0;
  for (const Example& ex : ds.examples) {
    if (ex.split != Split::Train) continue;
    if (ex.label_source == "e") ++from_e;
    if (ex.label_source == "h") ++from_h;
  }
  require(from_e == from_h, "label-source counts differ: " + std::to_string(from_e) + " vs " +
                                std::to_string(from_h));
  if (expect_each) require(from_e == expect_each, "unexpected train size");
}

void criterion_balanced_union(std::string& detail) {
  KnowledgeStore store = fixture_store();
  const Catalog& c = store.catalog();
  ExprPtr easy = parse_expr("occupation", c);
  ExprPtr hard = parse_expr("country-of-citizenship", c);

  auto dom_e = relation_domain(store, easy, typecheck(easy, c));
  auto dom_h = relation_domain(store, hard, typecheck(hard, c));
  std::sort(dom_e.begin(), dom_e.end());
  std::sort(dom_h.begin(), dom_h.end());
  std::vector<std::string> inter;
  std::set_intersection(dom_e.begin(), dom_e.end(), dom_h.begin(), dom_h.end(),
                        std::back_inserter(inter));
  require(inter.size() < dom_e.size() && inter.size() < dom_h.size(),
          "fixture intersection must be strictly smaller than either domain");

  GenConfig cfg;
  cfg.seed = 31;
  cfg.train_size = 4;
  cfg.eval_size = 1;
  cfg.min_samples = 2;
  BuildOutcome outcome = build_balanced_union(store, easy, hard, cfg);
  require(outcome.accepted(), "balanced build rejected");
  check_balance(*outcome.dataset, 2);
  std::set<std::string> inter_set(inter.begin(), inter.end());
  for (const Example& ex : outcome.dataset->examples)
    require(inter_set.count(ex.input_words[0]) == 1,
            "input outside the domain intersection while intersection items remain");

  // larger request: intersection exhausted before any top-up
  KnowledgeStore mid = midsize_store();
  ExprPtr half = parse_expr("ring-half[eng]", mid.catalog());
  ExprPtr tail = parse_expr("ring-tail[eng]", mid.catalog());
  auto dom_half = relation_domain(mid, half, typecheck(half, mid.catalog()));
  auto dom_tail = relation_domain(mid, tail, typecheck(tail, mid.catalog()));
  std::sort(dom_half.begin(), dom_half.end());
  std::sort(dom_tail.begin(), dom_tail.end());
  std::vector<std::string> overlap;
  std::set_intersection(dom_half.begin(), dom_half.end(), dom_tail.begin(), dom_tail.end(),
                        std::back_inserter(overlap));
  require(overlap.size() == 50 && dom_half.size() == 100 && dom_tail.size() == 100,
          "midsize domains not as constructed");

  GenConfig big;
  big.seed = 9;
  big.train_size = 120;
  big.eval_size = 10;
  big.min_samples = 20;
  BuildOutcome mout = build_balanced_union(mid, half, tail, big);
  require(mout.accepted(), "midsize balanced build rejected");
  check_balance(*mout.dataset, 60);
  std::set<std::string> overlap_set(overlap.begin(), overlap.end());
  std::set<std::string> used_inter;
  for (const Example& ex : mout.dataset->examples)
    if (overlap_set.count(ex.input_words[0])) used_inter.insert(ex.input_words[0]);
  require(used_inter.size() == overlap.size(),
          "top-up sampled before the intersection was exhausted");
  for (const Example& ex : mout.dataset->examples)
    if (ex.split == Split::Eval)
      require(overlap_set.count(ex.input_words[0]) == 1, "eval input outside both domains");

  detail = "fixture intersection " + std::to_string(inter.size()) + " < domains " +
           std::to_string(dom_e.size()) + "/" + std::to_string(dom_h.size()) +
           "; counts equal at sizes 4 and 120";
}

// ---------------------------------------------------------------------
// 6. Enumeration scale.
// ---------------------------------------------------------------------

void criterion_enumeration(std::string& detail) {
  Catalog catalog = Catalog::builtin();
  std::vector<ExprPtr> all = enumerate_depth2(catalog, SIZE_MAX);
  std::set<std::string> canon;
  for (const ExprPtr& e : all) canon.insert(print_expr(e));
  require(canon.size() == all.size(), "duplicate canonical forms in enumeration");
  require(all.size() >= 500,
          "universe has only " + std::to_string(all.size()) + " tasks");

  std::vector<ExprPtr> five_hundred = enumerate_depth2(catalog, 500);
  require(five_hundred.size() == 500, "limit 500 produced " +
                                          std::to_string(five_hundred.size()) + " tasks");
  std::vector<ExprPtr> again = enumerate_depth2(catalog, 500);
  for (std::size_t i = 0; i < 500; ++i)
    require(print_expr(five_hundred[i]) == print_expr(again[i]),
            "enumeration is not deterministic at index " + std::to_string(i));
  for (std::size_t i = 0; i < 500; ++i)
    require(print_expr(five_hundred[i]) == print_expr(all[i]),
            "truncation differs from the full enumeration prefix");
  detail = std::to_string(all.size()) + " tasks in the universe; truncates to exactly 500, "
           "deterministic across runs";
}

// ---------------------------------------------------------------------
// 7. Regression module.
// ---------------------------------------------------------------------

void criterion_regression(std::string& detail) {
  Rng rng(99);
  auto unit = [&] { return double(rng_below(rng, 1000000)) / 1000000.0; };
  for (int trial = 0; trial < 20; ++trial) {
    double a = unit() * 6.0 - 3.0;
    double b = unit() * 10.0 - 5.0;
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 25; ++i) {
      double x = unit() * 9.0;
      pts.emplace_back(x, a * x + b);
    }
    RegressionFit fit = ols_fit(pts);
    require(fit.defined, "fit undefined on exact line");
    require(std::abs(fit.slope - a) < 1e-9, "slope off by more than 1e-9");
    require(std::abs(fit.intercept - b) < 1e-9, "intercept off by more than 1e-9");
    require(std::abs(fit.r2 - 1.0) < 1e-9, "r2 off by more than 1e-9");
  }

  for (std::size_t n = 2; n <= 25; ++n) {
    std::vector<CompositionPoint> points;
    for (std::size_t i = 0; i < n; ++i) {
      CompositionPoint p;
      p.function_tag = "chain";
      p.atomic_adaptabilities = {0.01 * double(i)};
      p.compositional_adaptability = 0.02 * double(i);
      points.push_back(p);
    }
    std::vector<RegressionFit> fits = composition_regression(points);
    require(fits.size() == 1, "one group expected");
    require(fits[0].significant == (n >= 20),
            "significance flag wrong at n=" + std::to_string(n));
    bool threw = false;
    try {
      composition_regression(points, /*allow_insignificant=*/false);
    } catch (const DataError&) {
      threw = true;
    }
    require(threw == (n < 20), "strict mode refusal wrong at n=" + std::to_string(n));
  }
  detail = "20 exact lines within 1e-9; significance flag fires exactly below 20 points";
}

// ---------------------------------------------------------------------
// 8. Generation determinism.
// ---------------------------------------------------------------------

void criterion_determinism(std::string& detail) {
  KnowledgeStore store = fixture_store();
  auto dir_a = std::filesystem::temp_directory_path() / "tb-acceptance-det-a";
  auto dir_b = std::filesystem::temp_directory_path() / "tb-acceptance-det-b";
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);

  std::string opts = R"json({
    "config": {"seed": 2718, "train_size": 4, "eval_size": 2, "min_samples": 2,
               "seq_len": 5, "seq_keep": 3},
    "tasks": ["union(mother, father)", "father",
              "map{toy-syn[eng]}(filter{toy-is-n[eng]})",
              "intersection(synonyms[eng], antonyms[eng])"],
    "balanced_union": {"easy": "occupation", "hard": "country-of-citizenship"},
    "fewshot": {"k": 2, "trials": [0, 1]},
    "jobs": 2
  })json";
  run_generate(store, opts, dir_a.string());
  run_generate(store, opts, dir_b.string());

  std::size_t files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir_a)) {
    if (!entry.is_regular_file()) continue;
    auto rel = std::filesystem::relative(entry.path(), dir_a);
    auto twin = dir_b / rel;
    require(std::filesystem::exists(twin), "missing twin for " + rel.string());
    require(sha256_file_hex(entry.path().string()) == sha256_file_hex(twin.string()),
            "byte difference in " + rel.string());
    ++files;
  }
  require(files >= 5, "expected several output files, saw " + std::to_string(files));
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  detail = std::to_string(files) + " files byte-identical across reruns (datasets, "
           "few-shot trials, manifest)";
}

// ---------------------------------------------------------------------
// 9. Sequence sampler property.
// ---------------------------------------------------------------------

void criterion_seq_sampler(std::string& detail) {
  KnowledgeStore store = fixture_store();
  const Catalog& c = store.catalog();
  MapFilterNF nf = normalize(parse_expr("map{toy-syn[eng]}(filter{toy-is-n[eng]})", c), c);

  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t m = 1; m <= n; ++m) {
      for (std::uint64_t seed : {11ull, 22ull, 33ull}) {
        auto sample = seq_sample(store, nf, n, m, seed);
        require(sample.has_value(), "sampler infeasible at n=" + std::to_string(n) +
                                        " m=" + std::to_string(m));
        require(sample->size() == n, "wrong sequence length");
        std::size_t passing = 0;
        for (const std::string& w : *sample) {
          if (eval_predicate(store, nf.filter_pred, w)) {
            require(!eval_relation(store, nf.map_rel, w).empty(),
                    "passing word outside the map domain");
            ++passing;
          }
        }
        require(passing == m, "expected " + std::to_string(m) + " passing words, got " +
                                  std::to_string(passing));
        SeqImage image = eval_seq(store, nf, *sample);
        require(image.alts.size() == m, "output length != m");
        require(!image.empty(), "empty output image");
        ++checked;
      }
    }
  }
  // no word fails const-true, so m < n must be infeasible
  MapFilterNF plain = normalize(parse_expr("map{toy-syn[eng]}", c), c);
  require(!seq_sample(store, plain, 4, 2, 5).has_value(),
          "const-true filter cannot supply failing words");
  detail = std::to_string(checked) + " (n, m, seed) combinations over 0 < m <= n <= 8";
}

struct Criterion {
  int id;
  const char* title;
  void (*fn)(std::string&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "normalization soundness (literal vs normal form)", criterion_normalization},
      {2, "SPARQL oracle equivalence + golden templates", criterion_sparql},
      {3, "segmentation optimality (DP vs brute force)", criterion_segmentation},
      {4, "accuracy fixtures + oracle adaptability", criterion_metrics},
      {5, "balanced union construction", criterion_balanced_union},
      {6, "enumeration scale (500 tasks)", criterion_enumeration},
      {7, "regression module", criterion_regression},
      {8, "generation determinism", criterion_determinism},
      {9, "sequence sampler property", criterion_seq_sampler},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    try {
      criterion.fn(detail);
    } catch (const Failure& f) {
      ok = false;
      detail = f.detail;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("unexpected error: ") + e.what();
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    std::printf("[%s] %d. %s (%lld ms)%s%s\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.title, static_cast<long long>(elapsed),
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
