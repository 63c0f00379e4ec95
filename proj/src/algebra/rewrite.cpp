#include "taskbench/algebra.hpp"
#include "taskbench/errors.hpp"

namespace taskbench {

namespace {

ExprPtr chain_elide_identity(const ExprPtr& outer, const ExprPtr& inner) {
  if (inner->is_identity()) return outer;
  if (outer->is_identity()) return inner;
  return TaskExpr::chain(outer, inner);
}

ExprPtr land_elide_true(const ExprPtr& p, const ExprPtr& q) {
  if (p->is_const_true()) return q;
  if (q->is_const_true()) return p;
  return TaskExpr::land(p, q);
}

MapFilterNF nf_rec(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Map:
      return {e->a, TaskExpr::const_true()};
    case ExprKind::Filter:
      return {TaskExpr::identity(), e->a};
    case ExprKind::MapFilter:
      return {e->a, e->b};
    case ExprKind::Chain: {
      // mf{f',p'} applied to mf{f,p}  =  mf{ f'(f), land(p, p'(f)) }
      MapFilterNF outer = nf_rec(e->a);
      MapFilterNF inner = nf_rec(e->b);
      ExprPtr composed_map = chain_elide_identity(outer.map_rel, inner.map_rel);
      ExprPtr image_pred = outer.filter_pred->is_const_true()
                               ? TaskExpr::const_true()
                               : chain_elide_identity(outer.filter_pred, inner.map_rel);
      return {composed_map, land_elide_true(inner.filter_pred, image_pred)};
    }
    default:
      throw TypeError("normalize: not a sequential expression: '" + print_expr(e) + "'");
  }
}

}  // namespace

MapFilterNF normalize(const ExprPtr& expr, const Catalog& catalog) {
  TaskSignature sig = typecheck(expr, catalog);
  if (sig.level != SigLevel::Sequence || sig.kind != SigKind::Relation)
    throw TypeError("normalize requires a sequential relation, got " +
                    signature_to_string(sig) + " for '" + print_expr(expr) + "'");
  return nf_rec(expr);
}

ExprPtr canonicalize(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Atomic:
      return e;
    case ExprKind::Union:
    case ExprKind::Intersection:
    case ExprKind::LAnd:
    case ExprKind::LOr: {
      ExprPtr x = canonicalize(e->a);
      ExprPtr y = canonicalize(e->b);
      if (print_expr(y) < print_expr(x)) std::swap(x, y);
      auto out = std::make_shared<TaskExpr>(*e);
      out->a = std::move(x);
      out->b = std::move(y);
      return out;
    }
    case ExprKind::Chain:
    case ExprKind::MapFilter: {
      auto out = std::make_shared<TaskExpr>(*e);
      out->a = canonicalize(e->a);
      out->b = canonicalize(e->b);
      return out;
    }
    case ExprKind::Map:
    case ExprKind::Filter: {
      auto out = std::make_shared<TaskExpr>(*e);
      out->a = canonicalize(e->a);
      return out;
    }
  }
  return e;
}

}  // namespace taskbench
