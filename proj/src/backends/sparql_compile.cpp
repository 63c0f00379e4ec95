#include "taskbench/errors.hpp"
#include "taskbench/sparql.hpp"

namespace taskbench {

namespace {

struct FragmentBuilder {
  const Catalog& catalog;
  const std::string& input_term;  // "?x" or a bound entity id
  int next_temp = 0;

  std::string fresh_temp() { return "t" + std::to_string(++next_temp); }

  const AtomicEntry& factual_entry(const AtomicName& atom) {
    const AtomicEntry* entry = catalog.find(atom.base);
    if (!entry) throw BackendError("unknown atomic task '" + atom.base + "'");
    if (entry->backend != Backend::Factual)
      throw BackendError("non-factual atomic in SPARQL compilation: '" + atom.base + "'");
    return *entry;
  }

  // in_term: "?var" or a constant; out: variable name without sigil.
  std::string relation(const ExprPtr& e, const std::string& in_term, const std::string& out) {
    switch (e->kind) {
      case ExprKind::Atomic: {
        const AtomicEntry& entry = factual_entry(e->atom);
        if (entry.kind != TaskKind::Relation)
          throw BackendError("expected a relation: '" + e->atom.base + "'");
        if (e->atom.inverted) return "?" + out + " " + entry.property + " " + in_term + " .";
        return in_term + " " + entry.property + " ?" + out + " .";
      }
      case ExprKind::Union:
        return "{ " + relation(e->a, in_term, out) + " } UNION { " +
               relation(e->b, in_term, out) + " }";
      case ExprKind::Intersection:
        return relation(e->a, in_term, out) + " " + relation(e->b, in_term, out);
      case ExprKind::Chain: {
        // thread the inner output variable into the outer input position
        std::string t = fresh_temp();
        std::string inner = relation(e->b, in_term, t);
        std::string outer = relation(e->a, "?" + t, out);
        return inner + " " + outer;
      }
      default:
        throw BackendError("unsupported construct in SPARQL compilation: '" + print_expr(e) +
                           "'");
    }
  }

  std::string predicate(const ExprPtr& e, const std::string& in_term, const std::string& out) {
    switch (e->kind) {
      case ExprKind::Atomic: {
        const AtomicEntry& entry = factual_entry(e->atom);
        if (entry.kind != TaskKind::Predicate)
          throw BackendError("expected a predicate: '" + e->atom.base + "'");
        return "BIND( EXISTS { " + in_term + " " + entry.property + " " + entry.value +
               " . } AS " + out + " )";
      }
      case ExprKind::LOr:
      case ExprKind::LAnd: {
        std::string op = e->kind == ExprKind::LOr ? "||" : "&&";
        return "BIND( " + out + "1 " + op + " " + out + "2 AS " + out + " ) " +
               predicate(e->a, in_term, out + "1") + " " + predicate(e->b, in_term, out + "2");
      }
      default:
        throw BackendError("unsupported construct in SPARQL compilation: '" + print_expr(e) +
                           "'");
    }
  }
};

bool expr_is_predicate(const ExprPtr& e, const Catalog& catalog) {
  TaskSignature sig = typecheck(e, catalog);
  if (sig.level != SigLevel::Word)
    throw BackendError("SPARQL compilation requires a word-level task: '" + print_expr(e) + "'");
  return sig.kind == SigKind::Predicate;
}

}  // namespace

std::string SparqlQuery::text() const {
  return "SELECT ?" + select_var + "\nWHERE { " + body + " }";
}

SparqlQuery compile_sparql(const ExprPtr& expr, const Catalog& catalog, QueryMode mode,
                           const std::string& input) {
  bool is_pred = expr_is_predicate(expr, catalog);
  std::string in_term = "?x";
  if (mode == QueryMode::Function && !input.empty()) in_term = input;

  FragmentBuilder fb{catalog, in_term};
  SparqlQuery q;
  q.mode = mode;

  if (is_pred) {
    std::string frag = fb.predicate(expr, in_term, "y");
    switch (mode) {
      case QueryMode::Function:
        q.select_var = "y";
        q.body = frag;
        return q;
      case QueryMode::PositiveSample:
      case QueryMode::NegativeSample: {
        // ground ?x over triple subjects, then filter on the truth value
        const char* truth = mode == QueryMode::PositiveSample ? "true" : "false";
        q.select_var = "x";
        q.body = "?x ?p0 ?o0 . " + frag + " FILTER( y = " + std::string(truth) + " )";
        return q;
      }
      case QueryMode::Sample:
        throw BackendError(
            "predicate tasks use positive/negative sample queries, not a plain sample");
    }
  }

  std::string frag = fb.relation(expr, in_term, "y");
  switch (mode) {
    case QueryMode::Sample:
      q.select_var = "x";
      q.body = frag;
      return q;
    case QueryMode::Function:
      q.select_var = "y";
      q.body = frag;
      return q;
    default:
      throw BackendError("positive/negative sample queries apply to predicate tasks only");
  }
}

}  // namespace taskbench
