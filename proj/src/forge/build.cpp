#include <algorithm>

#include "taskbench/dataset.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/sparql.hpp"
#include "taskbench/util/rng.hpp"

namespace taskbench {

namespace {

std::vector<std::string> pick_label(Rng& rng,
                                    const std::vector<std::vector<std::string>>& alts) {
  std::vector<std::string> label;
  label.reserve(alts.size());
  for (const auto& options : alts)
    label.push_back(options[static_cast<std::size_t>(rng_below(rng, options.size()))]);
  return label;
}

// Answer set of a word-level relation for one input. Remote-only factual
// stores go through the compiled function query; everything else evaluates
// directly.
std::vector<std::string> answers_for(const KnowledgeStore& store, const ExprPtr& expr,
                                     const TaskSignature& sig, const std::string& input) {
  if (sig.domain == "entity" && !store.triples()) {
    SparqlQuery q = compile_sparql(expr, store.catalog(), QueryMode::Function, input);
    return execute_sparql(store, q);
  }
  return eval_relation(store, expr, input);
}

// Proportional split sizes when fewer survivors exist than requested.
std::pair<std::size_t, std::size_t> split_sizes(std::size_t survivors, const GenConfig& cfg) {
  std::size_t want = cfg.train_size + cfg.eval_size;
  if (survivors >= want) return {cfg.train_size, cfg.eval_size};
  if (want == 0) return {0, 0};
  std::size_t train = survivors * cfg.train_size / want;
  return {train, survivors - train};
}

BuildOutcome reject(std::string reason) { return {std::nullopt, std::move(reason)}; }

BuildOutcome build_word_relation(const KnowledgeStore& store, const ExprPtr& expr,
                                 const TaskSignature& sig, const GenConfig& cfg,
                                 const std::string& task, Rng& rng) {
  std::vector<std::string> pool = sample_inputs(store, expr, sig);
  shuffle_seeded(pool, rng);

  std::size_t want = cfg.train_size + cfg.eval_size;
  std::vector<std::pair<std::string, std::vector<std::string>>> survivors;
  for (const std::string& x : pool) {
    if (survivors.size() >= want) break;
    std::vector<std::string> answers = answers_for(store, expr, sig, x);
    if (answers.empty()) continue;  // inputs with empty answer sets are dropped
    survivors.emplace_back(x, std::move(answers));
  }
  if (survivors.size() < cfg.min_samples)
    return reject("only " + std::to_string(survivors.size()) +
                  " inputs with non-empty answers (minimum " +
                  std::to_string(cfg.min_samples) + "); task filtered out");

  auto [train_n, eval_n] = split_sizes(survivors.size(), cfg);
  Dataset ds;
  ds.task = task;
  ds.config = cfg;
  for (std::size_t i = 0; i < train_n + eval_n; ++i) {
    Example ex;
    ex.id = i;
    ex.input_words = {survivors[i].first};
    ex.answer_alts = {std::move(survivors[i].second)};
    ex.label = pick_label(rng, ex.answer_alts);
    ex.split = i < train_n ? Split::Train : Split::Eval;
    ds.examples.push_back(std::move(ex));
  }
  return {std::move(ds), ""};
}

BuildOutcome build_word_predicate(const KnowledgeStore& store, const ExprPtr& expr,
                                  const TaskSignature& sig, const GenConfig& cfg,
                                  const std::string& task, Rng& rng) {
  auto [pos, neg] = predicate_pools(store, expr, sig);
  shuffle_seeded(pos, rng);
  shuffle_seeded(neg, rng);

  std::size_t want = cfg.train_size + cfg.eval_size;
  std::size_t per_class = std::min({pos.size(), neg.size(), want / 2});
  if (2 * per_class < cfg.min_samples)
    return reject("balanced predicate pools give " + std::to_string(2 * per_class) +
                  " samples (minimum " + std::to_string(cfg.min_samples) +
                  "); task filtered out");

  // interleave so both splits stay balanced
  std::vector<std::pair<std::string, bool>> inputs;
  for (std::size_t i = 0; i < per_class; ++i) {
    inputs.emplace_back(pos[i], true);
    inputs.emplace_back(neg[i], false);
  }
  auto [train_n, eval_n] = split_sizes(inputs.size(), cfg);
  Dataset ds;
  ds.task = task;
  ds.config = cfg;
  for (std::size_t i = 0; i < train_n + eval_n; ++i) {
    Example ex;
    ex.id = i;
    ex.input_words = {inputs[i].first};
    ex.answer_alts = {{inputs[i].second ? "true" : "false"}};
    ex.label = ex.answer_alts[0];
    ex.split = i < train_n ? Split::Train : Split::Eval;
    ds.examples.push_back(std::move(ex));
  }
  return {std::move(ds), ""};
}

struct SeqPools {
  std::vector<std::string> pass;  // filter-true words inside the map's domain
  std::vector<std::string> fail;  // filter-false words
};

SeqPools sequence_pools(const KnowledgeStore& store, const MapFilterNF& nf,
                        const Catalog& catalog) {
  TaskSignature map_sig = typecheck(nf.map_rel, catalog);
  std::vector<std::string> universe;
  if (map_sig.domain == "entity" || map_sig.domain == "*") {
    const TripleStore* ts = store.triples();
    if (map_sig.domain == "entity") {
      if (!ts) throw BackendError("sequential factual sampling needs a local triple store");
      for (const std::string& id : ts->all_entities()) universe.push_back(ts->label(id));
      std::sort(universe.begin(), universe.end());
      universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    } else {
      // identity map: fall back to the filter's domain vocabulary
      TaskSignature f_sig = typecheck(nf.filter_pred, catalog);
      if (f_sig.domain == "*")
        throw BackendError(
            "sequential task names no vocabulary (identity map with const-true filter)");
      universe = sample_inputs(store, nf.filter_pred, f_sig);
    }
  } else {
    const Vocabulary* vocab = store.vocab(map_sig.domain);
    if (!vocab) throw BackendError("no vocabulary for domain '" + map_sig.domain + "'");
    universe = vocab->words();
  }

  SeqPools pools;
  for (const std::string& w : universe) {
    if (eval_predicate(store, nf.filter_pred, w)) {
      if (!eval_relation(store, nf.map_rel, w).empty()) pools.pass.push_back(w);
    } else {
      pools.fail.push_back(w);
    }
  }
  return pools;
}

std::vector<std::string> draw(Rng& rng, const std::vector<std::string>& pool, std::size_t k) {
  std::vector<std::string> out;
  out.reserve(k);
  if (pool.size() >= k) {
    for (std::size_t i : sample_indices(rng, pool.size(), k)) out.push_back(pool[i]);
  } else {
    // domain smaller than the request: fall back to replacement
    for (std::size_t i = 0; i < k; ++i)
      out.push_back(pool[static_cast<std::size_t>(rng_below(rng, pool.size()))]);
  }
  return out;
}

std::optional<std::vector<std::string>> sample_from_pools(const SeqPools& pools, std::size_t n,
                                                          std::size_t m, std::uint64_t seed) {
  if (m > n) throw DataError("sequence sampler: m must not exceed n");
  if (m > 0 && pools.pass.empty()) return std::nullopt;
  if (m < n && pools.fail.empty()) return std::nullopt;
  Rng rng(seed);
  std::vector<std::string> words = draw(rng, pools.pass, m);
  for (std::string& w : draw(rng, pools.fail, n - m)) words.push_back(std::move(w));
  shuffle_seeded(words, rng);
  return words;
}

std::size_t default_keep(const MapFilterNF& nf, std::size_t n) {
  if (nf.filter_pred->is_const_true()) return n;
  return std::max<std::size_t>(1, n / 2);
}

BuildOutcome build_sequence(const KnowledgeStore& store, const ExprPtr& expr,
                            const GenConfig& cfg, const std::string& task, Rng& rng) {
  MapFilterNF nf = normalize(expr, store.catalog());
  SeqPools pools = sequence_pools(store, nf, store.catalog());
  std::size_t n = cfg.seq_len;
  std::size_t m = cfg.seq_keep.value_or(default_keep(nf, n));
  if (m > n)
    return reject("sequence sampler infeasible: m=" + std::to_string(m) + " exceeds n=" +
                  std::to_string(n));
  if (m > 0 && pools.pass.empty())
    return reject("sequence sampler infeasible: no words pass the filter inside the map domain");
  if (m < n && pools.fail.empty())
    return reject("sequence sampler infeasible: no words fail the filter");

  std::size_t want = cfg.train_size + cfg.eval_size;
  auto [train_n, eval_n] = split_sizes(want, cfg);
  Dataset ds;
  ds.task = task;
  ds.config = cfg;
  for (std::size_t i = 0; i < want; ++i) {
    auto words = sample_from_pools(pools, n, m, rng());
    Example ex;
    ex.id = i;
    ex.input_words = std::move(*words);
    SeqImage image = eval_seq(store, nf, ex.input_words);
    ex.answer_alts = std::move(image.alts);
    ex.label = pick_label(rng, ex.answer_alts);
    ex.split = i < train_n ? Split::Train : Split::Eval;
    ds.examples.push_back(std::move(ex));
  }
  if (ds.examples.size() < cfg.min_samples)
    return reject("only " + std::to_string(ds.examples.size()) + " samples (minimum " +
                  std::to_string(cfg.min_samples) + "); task filtered out");
  return {std::move(ds), ""};
}

}  // namespace

BuildOutcome build_dataset(const KnowledgeStore& store, const ExprPtr& expr,
                           const GenConfig& config) {
  TaskSignature sig = typecheck(expr, store.catalog());
  std::string task = print_expr(canonicalize(expr));
  Rng rng(derive_seed(config.seed, task));

  if (sig.level == SigLevel::Sequence) return build_sequence(store, expr, config, task, rng);
  if (sig.kind == SigKind::Predicate)
    return build_word_predicate(store, expr, sig, config, task, rng);
  return build_word_relation(store, expr, sig, config, task, rng);
}

std::optional<std::vector<std::string>> seq_sample(const KnowledgeStore& store,
                                                   const MapFilterNF& nf, std::size_t n,
                                                   std::size_t m, std::uint64_t seed) {
  SeqPools pools = sequence_pools(store, nf, store.catalog());
  return sample_from_pools(pools, n, m, seed);
}

BuildOutcome build_balanced_union(const KnowledgeStore& store, const ExprPtr& f_easy,
                                  const ExprPtr& f_hard, const GenConfig& config) {
  const Catalog& catalog = store.catalog();
  TaskSignature sig_e = typecheck(f_easy, catalog);
  TaskSignature sig_h = typecheck(f_hard, catalog);
  if (sig_e.kind != SigKind::Relation || sig_e.level != SigLevel::Word ||
      sig_h.kind != SigKind::Relation || sig_h.level != SigLevel::Word)
    throw TypeError("balanced union needs two word-level relations");

  std::string task = print_expr(TaskExpr::set_union(f_easy, f_hard));
  Rng rng(derive_seed(config.seed, task));

  std::vector<std::string> dom_e = relation_domain(store, f_easy, sig_e);
  std::vector<std::string> dom_h = relation_domain(store, f_hard, sig_h);
  std::sort(dom_e.begin(), dom_e.end());
  std::sort(dom_h.begin(), dom_h.end());
  std::vector<std::string> inter, only_e, only_h;
  std::set_intersection(dom_e.begin(), dom_e.end(), dom_h.begin(), dom_h.end(),
                        std::back_inserter(inter));
  std::set_difference(dom_e.begin(), dom_e.end(), inter.begin(), inter.end(),
                      std::back_inserter(only_e));
  std::set_difference(dom_h.begin(), dom_h.end(), inter.begin(), inter.end(),
                      std::back_inserter(only_h));
  if (inter.empty())
    return {std::nullopt, "domain intersection is empty; no balanced dataset possible"};

  shuffle_seeded(inter, rng);
  shuffle_seeded(only_e, rng);
  shuffle_seeded(only_h, rng);

  // Intersection inputs go to training first; held-out intersection inputs
  // form the eval split, since evaluation needs inputs in both domains.
  std::size_t train_inter_want = config.train_size / 2;
  std::size_t eval_n = 0;
  if (inter.size() > train_inter_want)
    eval_n = std::min(config.eval_size, inter.size() - train_inter_want);
  else if (config.eval_size > 0)
    eval_n = std::min(config.eval_size, (inter.size() + 1) / 2);
  std::size_t train_inter = std::min(inter.size() - eval_n, train_inter_want);
  std::size_t topup_each = 0;
  if (config.train_size > 2 * train_inter)
    topup_each = std::min({(config.train_size - 2 * train_inter) / 2, only_e.size(),
                           only_h.size()});

  std::vector<Example> train;
  for (std::size_t i = 0; i < train_inter; ++i) {
    const std::string& x = inter[eval_n + i];
    Example from_e;
    from_e.input_words = {x};
    from_e.answer_alts = {eval_relation(store, f_easy, x)};
    from_e.label = pick_label(rng, from_e.answer_alts);
    from_e.label_source = "e";
    train.push_back(std::move(from_e));
    Example from_h;
    from_h.input_words = {x};
    from_h.answer_alts = {eval_relation(store, f_hard, x)};
    from_h.label = pick_label(rng, from_h.answer_alts);
    from_h.label_source = "h";
    train.push_back(std::move(from_h));
  }
  for (std::size_t i = 0; i < topup_each; ++i) {
    Example from_e;
    from_e.input_words = {only_e[i]};
    from_e.answer_alts = {eval_relation(store, f_easy, only_e[i])};
    from_e.label = pick_label(rng, from_e.answer_alts);
    from_e.label_source = "e";
    train.push_back(std::move(from_e));
    Example from_h;
    from_h.input_words = {only_h[i]};
    from_h.answer_alts = {eval_relation(store, f_hard, only_h[i])};
    from_h.label = pick_label(rng, from_h.answer_alts);
    from_h.label_source = "h";
    train.push_back(std::move(from_h));
  }
  if (train.size() + eval_n < config.min_samples)
    return {std::nullopt,
            "balanced union yields " + std::to_string(train.size() + eval_n) +
                " examples (minimum " + std::to_string(config.min_samples) +
                "); insufficient top-up pool"};

  shuffle_seeded(train, rng);  // the whole dataset is shuffled after pairing

  Dataset ds;
  ds.task = task;
  ds.config = config;
  std::uint64_t next_id = 0;
  for (Example& ex : train) {
    ex.id = next_id++;
    ex.split = Split::Train;
    ds.examples.push_back(std::move(ex));
  }
  for (std::size_t i = 0; i < eval_n; ++i) {
    const std::string& x = inter[i];
    std::vector<std::string> both = eval_relation(store, f_easy, x);
    for (std::string& y : eval_relation(store, f_hard, x)) both.push_back(std::move(y));
    std::sort(both.begin(), both.end());
    both.erase(std::unique(both.begin(), both.end()), both.end());
    Example ex;
    ex.id = next_id++;
    ex.input_words = {x};
    ex.answer_alts = {std::move(both)};
    ex.label = pick_label(rng, ex.answer_alts);
    ex.split = Split::Eval;
    ds.examples.push_back(std::move(ex));
  }
  return {std::move(ds), ""};
}

}  // namespace taskbench
