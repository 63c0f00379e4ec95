#include "taskbench/evaluator.hpp"

#include <algorithm>

#include "taskbench/errors.hpp"
#include "taskbench/sparql.hpp"
#include "taskbench/util/rng.hpp"

namespace taskbench {

namespace {

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Published random-relation mapping: FNV-1a over the seed's little-endian
// bytes followed by the word, indexing the sorted vocabulary.
std::string random_image(std::uint64_t seed, const std::string& word, const Vocabulary& vocab) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(seed >> (8 * i));
  std::uint64_t h = fnv1a64(buf, 8);
  for (unsigned char c : word) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return vocab.words()[h % vocab.size()];
}

std::string lang_of(const AtomicName& name, bool output_side) {
  auto arrow = name.lang_tag.find("->");
  if (arrow == std::string::npos) return name.lang_tag;
  return output_side ? name.lang_tag.substr(arrow + 2) : name.lang_tag.substr(0, arrow);
}

// Table key: canonical print without the [inv] tag.
std::string table_key(const AtomicName& name) {
  AtomicName plain = name;
  plain.inverted = false;
  return print_expr(TaskExpr::atomic(plain));
}

}  // namespace

bool SeqImage::empty() const {
  for (const auto& a : alts)
    if (a.empty()) return true;
  return false;
}

std::uint64_t SeqImage::count(bool* exact) const {
  if (exact) *exact = true;
  std::uint64_t n = 1;
  for (const auto& a : alts) {
    std::uint64_t m = a.size();
    if (m == 0) return 0;
    if (n > UINT64_MAX / m) {
      if (exact) *exact = false;
      return UINT64_MAX;
    }
    n *= m;
  }
  return n;
}

bool SeqImage::contains(const std::vector<std::string>& seq) const {
  if (seq.size() != alts.size()) return false;
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (!std::binary_search(alts[i].begin(), alts[i].end(), seq[i])) return false;
  return true;
}

void SeqImage::for_each(std::uint64_t limit,
                        const std::function<bool(const std::vector<std::string>&)>& fn) const {
  if (empty() || limit == 0) return;
  std::vector<std::size_t> idx(alts.size(), 0);
  std::vector<std::string> seq(alts.size());
  std::uint64_t produced = 0;
  for (;;) {
    for (std::size_t i = 0; i < alts.size(); ++i) seq[i] = alts[i][idx[i]];
    if (!fn(seq)) return;
    if (++produced >= limit) return;
    // odometer increment, last position fastest
    std::size_t i = alts.size();
    while (i > 0) {
      --i;
      if (++idx[i] < alts[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (alts.empty()) return;
  }
}

std::vector<std::vector<std::string>> SeqImage::to_vector(std::uint64_t cap) const {
  bool exact = false;
  std::uint64_t n = count(&exact);
  if (!exact || n > cap)
    throw DataError("sequence image too large to materialize (" +
                    (exact ? std::to_string(n) : std::string(">2^64")) + " > cap " +
                    std::to_string(cap) + ")");
  std::vector<std::vector<std::string>> out;
  out.reserve(static_cast<std::size_t>(n));
  for_each(n, [&](const std::vector<std::string>& seq) {
    out.push_back(seq);
    return true;
  });
  return out;
}

std::vector<std::string> eval_atomic_relation(const KnowledgeStore& store,
                                              const AtomicName& name, const std::string& word) {
  const AtomicEntry* entry = store.catalog().find(name.base);
  if (!entry) throw BackendError("unknown relation '" + name.base + "'");
  if (entry->kind != TaskKind::Relation)
    throw BackendError("'" + name.base + "' is not a relation");

  switch (entry->backend) {
    case Backend::Internal:  // identity
      return {word};
    case Backend::Lexical:
      return store.lexical().image(table_key(name), word, name.inverted);
    case Backend::Random: {
      const std::string lang = lang_of(name, false);
      const Vocabulary* vocab = store.vocab(lang);
      if (!vocab || vocab->size() == 0)
        throw BackendError("no vocabulary '" + lang + "' for random relation");
      if (!name.inverted) {
        if (!vocab->contains(word)) return {};
        return {random_image(entry->seed, word, *vocab)};
      }
      std::vector<std::string> out;  // preimages, by scan
      for (const std::string& w : vocab->words())
        if (random_image(entry->seed, w, *vocab) == word) out.push_back(w);
      return out;
    }
    case Backend::Factual: {
      const TripleStore* ts = store.triples();
      if (!ts) throw BackendError("factual relation '" + name.base + "' needs a triple store");
      std::vector<std::string> out;
      for (const std::string& id : ts->ids_for_label(word)) {
        const auto& hits =
            name.inverted ? ts->subjects(entry->property, id) : ts->objects(id, entry->property);
        for (const std::string& hit : hits) out.push_back(ts->label(hit));
      }
      sort_unique(out);
      return out;
    }
  }
  return {};
}

bool eval_atomic_predicate(const KnowledgeStore& store, const AtomicName& name,
                           const std::string& word) {
  const AtomicEntry* entry = store.catalog().find(name.base);
  if (!entry) throw BackendError("unknown predicate '" + name.base + "'");
  if (entry->kind != TaskKind::Predicate)
    throw BackendError("'" + name.base + "' is not a predicate");

  switch (entry->backend) {
    case Backend::Internal:  // const-true
      return true;
    case Backend::Lexical:
      return store.lexical().predicate(table_key(name), word);
    case Backend::Factual: {
      const TripleStore* ts = store.triples();
      if (!ts) throw BackendError("factual predicate '" + name.base + "' needs a triple store");
      for (const std::string& id : ts->ids_for_label(word))
        if (ts->has(id, entry->property, entry->value)) return true;
      return false;
    }
    case Backend::Random:
      throw BackendError("random tasks are relations");
  }
  return false;
}

std::vector<std::string> eval_relation(const KnowledgeStore& store, const ExprPtr& expr,
                                       const std::string& word) {
  switch (expr->kind) {
    case ExprKind::Atomic:
      return eval_atomic_relation(store, expr->atom, word);
    case ExprKind::Chain: {
      // union over intermediate elements
      std::vector<std::string> out;
      for (const std::string& mid : eval_relation(store, expr->b, word))
        for (std::string& y : eval_relation(store, expr->a, mid)) out.push_back(std::move(y));
      sort_unique(out);
      return out;
    }
    case ExprKind::Union: {
      std::vector<std::string> out = eval_relation(store, expr->a, word);
      for (std::string& y : eval_relation(store, expr->b, word)) out.push_back(std::move(y));
      sort_unique(out);
      return out;
    }
    case ExprKind::Intersection: {
      std::vector<std::string> xs = eval_relation(store, expr->a, word);
      std::vector<std::string> ys = eval_relation(store, expr->b, word);
      std::vector<std::string> out;
      std::set_intersection(xs.begin(), xs.end(), ys.begin(), ys.end(),
                            std::back_inserter(out));
      return out;
    }
    default:
      throw TypeError("not a word-level relation: '" + print_expr(expr) + "'");
  }
}

bool eval_predicate(const KnowledgeStore& store, const ExprPtr& expr, const std::string& word) {
  switch (expr->kind) {
    case ExprKind::Atomic:
      return eval_atomic_predicate(store, expr->atom, word);
    case ExprKind::LAnd:
      return eval_predicate(store, expr->a, word) && eval_predicate(store, expr->b, word);
    case ExprKind::LOr:
      return eval_predicate(store, expr->a, word) || eval_predicate(store, expr->b, word);
    case ExprKind::Chain: {
      // predicate over an image set: true when some element satisfies it
      for (const std::string& mid : eval_relation(store, expr->b, word))
        if (eval_predicate(store, expr->a, mid)) return true;
      return false;
    }
    default:
      throw TypeError("not a word-level predicate: '" + print_expr(expr) + "'");
  }
}

SeqImage eval_seq(const KnowledgeStore& store, const MapFilterNF& nf,
                  const std::vector<std::string>& words) {
  SeqImage image;
  for (const std::string& w : words) {
    if (!eval_predicate(store, nf.filter_pred, w)) continue;
    image.alts.push_back(eval_relation(store, nf.map_rel, w));
  }
  return image;
}

namespace {

bool factual_only(const ExprPtr& expr, const Catalog& catalog) {
  if (expr->kind == ExprKind::Atomic) {
    const AtomicEntry* entry = catalog.find(expr->atom.base);
    return entry && entry->backend == Backend::Factual;
  }
  bool ok = true;
  if (expr->a) ok = ok && factual_only(expr->a, catalog);
  if (expr->b) ok = ok && factual_only(expr->b, catalog);
  return ok;
}

std::vector<std::string> labels_for_ids(const KnowledgeStore& store,
                                        const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  const TripleStore* ts = store.triples();
  for (const std::string& id : ids) out.push_back(ts ? ts->label(id) : id);
  sort_unique(out);
  return out;
}

}  // namespace

std::vector<std::string> sample_inputs(const KnowledgeStore& store, const ExprPtr& expr,
                                       const TaskSignature& sig) {
  if (sig.domain == "entity") {
    if (!factual_only(expr, store.catalog()))
      throw BackendError("entity-domain task mixes non-factual atomics: '" + print_expr(expr) +
                         "'");
    if (sig.kind == SigKind::Predicate) {
      auto pools = predicate_pools(store, expr, sig);
      std::vector<std::string> out = pools.first;
      out.insert(out.end(), pools.second.begin(), pools.second.end());
      sort_unique(out);
      return out;
    }
    SparqlQuery q = compile_sparql(expr, store.catalog(), QueryMode::Sample);
    return labels_for_ids(store, execute_sparql(store, q));
  }
  const Vocabulary* vocab = store.vocab(sig.domain);
  if (!vocab)
    throw BackendError("no vocabulary for domain '" + sig.domain + "' of task '" +
                       print_expr(expr) + "'");
  return vocab->words();
}

std::pair<std::vector<std::string>, std::vector<std::string>> predicate_pools(
    const KnowledgeStore& store, const ExprPtr& expr, const TaskSignature& sig) {
  if (sig.kind != SigKind::Predicate)
    throw TypeError("predicate pools need a predicate task: '" + print_expr(expr) + "'");
  if (sig.domain == "entity") {
    SparqlQuery pos = compile_sparql(expr, store.catalog(), QueryMode::PositiveSample);
    SparqlQuery neg = compile_sparql(expr, store.catalog(), QueryMode::NegativeSample);
    return {labels_for_ids(store, execute_sparql(store, pos)),
            labels_for_ids(store, execute_sparql(store, neg))};
  }
  const Vocabulary* vocab = store.vocab(sig.domain);
  if (!vocab)
    throw BackendError("no vocabulary for domain '" + sig.domain + "' of task '" +
                       print_expr(expr) + "'");
  std::vector<std::string> pos, neg;
  for (const std::string& w : vocab->words())
    (eval_predicate(store, expr, w) ? pos : neg).push_back(w);
  return {std::move(pos), std::move(neg)};
}

std::vector<std::string> relation_domain(const KnowledgeStore& store, const ExprPtr& expr,
                                         const TaskSignature& sig) {
  std::vector<std::string> out;
  for (const std::string& x : sample_inputs(store, expr, sig))
    if (!eval_relation(store, expr, x).empty()) out.push_back(x);
  return out;
}

}  // namespace taskbench
