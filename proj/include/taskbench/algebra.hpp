#pragma once

#include <memory>
#include <string>
#include <vector>

#include "taskbench/catalog.hpp"

namespace taskbench {

enum class ExprKind {
  Atomic,
  Chain,         // a(b): outer a applied to inner b
  Union,
  Intersection,
  LAnd,
  LOr,
  Map,           // map{a}
  Filter,        // filter{a}
  MapFilter,     // map-filter{a, b}: a maps, b filters
};

struct AtomicName {
  std::string base;      // DSL identifier, e.g. "synonyms", "head-of-state"
  std::string lang_tag;  // "", "eng", "spa", "eng->spa", ...
  bool inverted = false;

  bool operator==(const AtomicName& o) const {
    return base == o.base && lang_tag == o.lang_tag && inverted == o.inverted;
  }
};

class TaskExpr;
using ExprPtr = std::shared_ptr<const TaskExpr>;

// Immutable expression tree. Shared subtrees are fine; all operations over
// expressions are pure.
class TaskExpr {
 public:
  ExprKind kind;
  AtomicName atom;  // Atomic only
  ExprPtr a, b;     // children; Map/Filter use only `a`

  static ExprPtr atomic(AtomicName name);
  static ExprPtr atomic(std::string base, std::string lang_tag = "", bool inverted = false);
  static ExprPtr chain(ExprPtr outer, ExprPtr inner);
  static ExprPtr set_union(ExprPtr x, ExprPtr y);
  static ExprPtr set_intersection(ExprPtr x, ExprPtr y);
  static ExprPtr land(ExprPtr x, ExprPtr y);
  static ExprPtr lor(ExprPtr x, ExprPtr y);
  static ExprPtr map(ExprPtr body);
  static ExprPtr filter(ExprPtr body);
  static ExprPtr map_filter(ExprPtr map_body, ExprPtr filter_body);

  static ExprPtr identity();    // internal atomic: w -> {w}
  static ExprPtr const_true();  // internal atomic: w -> true
  bool is_identity() const;
  bool is_const_true() const;
};

bool expr_equal(const ExprPtr& x, const ExprPtr& y);

// Canonical DSL text. parse(print(e)) reproduces e exactly.
std::string print_expr(const ExprPtr& expr);

// Parse DSL source against a catalog. Accepts the sugar `map{f}` as well as
// the explicit `map{λx. f(x)}` / `map{lambda x. f(x)}` binder form, nested
// application `f(g)` for chaining, bracketed tags `name[eng]` / `name[inv]`,
// quoted printed names ("head of state"), and a trailing `(S)` naming the
// input sequence. Throws ParseError with a byte offset.
ExprPtr parse_expr(const std::string& source, const Catalog& catalog);

enum class SigKind { Relation, Predicate };
enum class SigLevel { Word, Sequence };

struct TaskSignature {
  SigKind kind = SigKind::Relation;
  SigLevel level = SigLevel::Word;
  std::string domain;      // input domain descriptor ("eng", "spa", "entity", "*")
  std::string out_domain;  // relations only; "" for predicates

  bool operator==(const TaskSignature& o) const {
    return kind == o.kind && level == o.level && domain == o.domain &&
           out_domain == o.out_domain;
  }
};

std::string signature_to_string(const TaskSignature& sig);

// Kind/level rules:
//   chain(rel,rel)   word -> (relation, word)
//   chain(pred,rel)  word -> (predicate, word)    [exists y in inner(x) with outer(y)]
//   chain(seq,seq)        -> (relation, sequence) [nested sequential application]
//   union/intersection of two word relations -> (relation, word)
//   land/lor of two word predicates -> (predicate, word)
//   map(word relation)     -> (relation, sequence)
//   filter(word predicate) -> (relation, sequence)
//   map-filter(rel, pred)  -> (relation, sequence)
// Throws TypeError naming the offending node with expected/actual signatures.
TaskSignature typecheck(const ExprPtr& expr, const Catalog& catalog);

// Map-filter normal form: one word-level map relation plus one word-level
// filter predicate.
struct MapFilterNF {
  ExprPtr map_rel;
  ExprPtr filter_pred;
};

// Rewrite any sequential expression into normal form:
//   map{f}            => map-filter{f, const-true}
//   filter{p}         => map-filter{identity, p}
//   map{f'}(mf{f,p})  => map-filter{f'(f), p}
//   filter{p'}(mf{f,p}) => map-filter{f, land(p, p'(f))}
// The filter rewrite applies p' to image sets existentially. Identity maps
// and const-true filters are elided from chains/conjunctions they cannot
// affect.
MapFilterNF normalize(const ExprPtr& expr, const Catalog& catalog);

ExprPtr nf_to_expr(const MapFilterNF& nf);

// Sort operands of commutative operators (union, intersection, land, lor)
// by canonical printed form, bytewise, so symmetric variants collapse to one
// representative. Idempotent.
ExprPtr canonicalize(const ExprPtr& expr);

// All well-typed depth-2 word-level compositions over the catalog's atomics
// plus their sequential versions, deduplicated by canonical form, sorted
// lexicographically by canonical print, truncated at `limit`.
std::vector<ExprPtr> enumerate_depth2(const Catalog& catalog, std::size_t limit);

}  // namespace taskbench
