#include <algorithm>
#include <set>

#include "taskbench/algebra.hpp"

namespace taskbench {

namespace {

struct AtomInfo {
  ExprPtr expr;
  std::string in;
  std::string out;  // relations only
};

bool compatible(const std::string& a, const std::string& b) {
  return a == b || a == "*" || b == "*";
}

}  // namespace

// The benchmark universe: atomic tasks, every well-typed two-atom word-level
// composition (chain in both orders, union/intersection/land/lor once per
// unordered pair), and the sequential version of each word-level task. The
// map(filter) pairing over two atomics is included as well. Symmetric
// operand variants collapse through canonicalization; ordering is the
// bytewise order of canonical prints.
std::vector<ExprPtr> enumerate_depth2(const Catalog& catalog, std::size_t limit) {
  std::vector<AtomInfo> rels, preds;
  for (const AtomicEntry& entry : catalog.entries()) {
    if (entry.internal) continue;
    std::vector<std::string> tags = entry.lang_tags.empty()
                                        ? std::vector<std::string>{""}
                                        : entry.lang_tags;
    for (const std::string& tag : tags) {
      std::string in = Catalog::input_domain(entry, tag);
      std::string out = Catalog::output_domain(entry, tag);
      if (entry.kind == TaskKind::Relation) {
        rels.push_back({TaskExpr::atomic(entry.name, tag), in, out});
        if (entry.invertible)
          rels.push_back({TaskExpr::atomic(entry.name, tag, true), out, in});
      } else {
        preds.push_back({TaskExpr::atomic(entry.name, tag), in, ""});
      }
    }
  }

  std::vector<ExprPtr> word_rels, word_preds;
  for (const auto& r : rels) word_rels.push_back(r.expr);
  for (const auto& p : preds) word_preds.push_back(p.expr);

  for (const auto& outer : rels)
    for (const auto& inner : rels)
      if (compatible(inner.out, outer.in))
        word_rels.push_back(TaskExpr::chain(outer.expr, inner.expr));

  for (std::size_t i = 0; i < rels.size(); ++i)
    for (std::size_t j = i + 1; j < rels.size(); ++j) {
      if (!compatible(rels[i].in, rels[j].in) || !compatible(rels[i].out, rels[j].out))
        continue;
      word_rels.push_back(TaskExpr::set_union(rels[i].expr, rels[j].expr));
      word_rels.push_back(TaskExpr::set_intersection(rels[i].expr, rels[j].expr));
    }

  for (std::size_t i = 0; i < preds.size(); ++i)
    for (std::size_t j = i + 1; j < preds.size(); ++j) {
      if (!compatible(preds[i].in, preds[j].in)) continue;
      word_preds.push_back(TaskExpr::land(preds[i].expr, preds[j].expr));
      word_preds.push_back(TaskExpr::lor(preds[i].expr, preds[j].expr));
    }

  std::vector<ExprPtr> universe;
  universe.reserve(2 * word_rels.size() + 2 * word_preds.size());
  for (const auto& r : word_rels) {
    universe.push_back(r);
    universe.push_back(TaskExpr::map(r));
  }
  for (const auto& p : word_preds) {
    universe.push_back(p);
    universe.push_back(TaskExpr::filter(p));
  }
  for (const auto& r : rels)
    for (const auto& p : preds)
      if (compatible(r.in, p.in))
        universe.push_back(
            TaskExpr::chain(TaskExpr::map(r.expr), TaskExpr::filter(p.expr)));

  std::set<std::string> seen;
  std::vector<std::pair<std::string, ExprPtr>> out;
  for (const auto& e : universe) {
    ExprPtr canon = canonicalize(e);
    std::string key = print_expr(canon);
    if (seen.insert(key).second) out.emplace_back(std::move(key), std::move(canon));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (out.size() > limit) out.resize(limit);

  std::vector<ExprPtr> result;
  result.reserve(out.size());
  for (auto& kv : out) result.push_back(std::move(kv.second));
  return result;
}

}  // namespace taskbench
