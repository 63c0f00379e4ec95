#include <utility>

#include "taskbench/algebra.hpp"

namespace taskbench {

namespace {
ExprPtr make(ExprKind kind, ExprPtr a = nullptr, ExprPtr b = nullptr) {
  auto e = std::make_shared<TaskExpr>();
  e->kind = kind;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
}  // namespace

ExprPtr TaskExpr::atomic(AtomicName name) {
  auto e = std::make_shared<TaskExpr>();
  e->kind = ExprKind::Atomic;
  e->atom = std::move(name);
  return e;
}

ExprPtr TaskExpr::atomic(std::string base, std::string lang_tag, bool inverted) {
  return atomic(AtomicName{std::move(base), std::move(lang_tag), inverted});
}

ExprPtr TaskExpr::chain(ExprPtr outer, ExprPtr inner) {
  return make(ExprKind::Chain, std::move(outer), std::move(inner));
}
ExprPtr TaskExpr::set_union(ExprPtr x, ExprPtr y) {
  return make(ExprKind::Union, std::move(x), std::move(y));
}
ExprPtr TaskExpr::set_intersection(ExprPtr x, ExprPtr y) {
  return make(ExprKind::Intersection, std::move(x), std::move(y));
}
ExprPtr TaskExpr::land(ExprPtr x, ExprPtr y) {
  return make(ExprKind::LAnd, std::move(x), std::move(y));
}
ExprPtr TaskExpr::lor(ExprPtr x, ExprPtr y) {
  return make(ExprKind::LOr, std::move(x), std::move(y));
}
ExprPtr TaskExpr::map(ExprPtr body) { return make(ExprKind::Map, std::move(body)); }
ExprPtr TaskExpr::filter(ExprPtr body) { return make(ExprKind::Filter, std::move(body)); }
ExprPtr TaskExpr::map_filter(ExprPtr map_body, ExprPtr filter_body) {
  return make(ExprKind::MapFilter, std::move(map_body), std::move(filter_body));
}

ExprPtr TaskExpr::identity() { return atomic("identity"); }
ExprPtr TaskExpr::const_true() { return atomic("const-true"); }

bool TaskExpr::is_identity() const {
  return kind == ExprKind::Atomic && atom.base == "identity";
}
bool TaskExpr::is_const_true() const {
  return kind == ExprKind::Atomic && atom.base == "const-true";
}

bool expr_equal(const ExprPtr& x, const ExprPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->kind != y->kind) return false;
  if (x->kind == ExprKind::Atomic) return x->atom == y->atom;
  return expr_equal(x->a, y->a) && expr_equal(x->b, y->b);
}

std::string print_expr(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Atomic: {
      std::string s = e->atom.base;
      if (!e->atom.lang_tag.empty() || e->atom.inverted) {
        s += '[';
        if (!e->atom.lang_tag.empty()) {
          s += e->atom.lang_tag;
          if (e->atom.inverted) s += ',';
        }
        if (e->atom.inverted) s += "inv";
        s += ']';
      }
      return s;
    }
    case ExprKind::Chain:
      return print_expr(e->a) + "(" + print_expr(e->b) + ")";
    case ExprKind::Union:
      return "union(" + print_expr(e->a) + ", " + print_expr(e->b) + ")";
    case ExprKind::Intersection:
      return "intersection(" + print_expr(e->a) + ", " + print_expr(e->b) + ")";
    case ExprKind::LAnd:
      return "land(" + print_expr(e->a) + ", " + print_expr(e->b) + ")";
    case ExprKind::LOr:
      return "lor(" + print_expr(e->a) + ", " + print_expr(e->b) + ")";
    case ExprKind::Map:
      return "map{" + print_expr(e->a) + "}";
    case ExprKind::Filter:
      return "filter{" + print_expr(e->a) + "}";
    case ExprKind::MapFilter:
      return "map-filter{" + print_expr(e->a) + ", " + print_expr(e->b) + "}";
  }
  return "";
}

std::string signature_to_string(const TaskSignature& sig) {
  std::string s = "(";
  s += (sig.kind == SigKind::Relation) ? "relation" : "predicate";
  s += ", ";
  s += (sig.level == SigLevel::Word) ? "word" : "sequence";
  if (!sig.domain.empty()) {
    s += ", ";
    s += sig.domain;
    if (!sig.out_domain.empty()) {
      s += "->";
      s += sig.out_domain;
    }
  }
  s += ")";
  return s;
}

ExprPtr nf_to_expr(const MapFilterNF& nf) {
  return TaskExpr::map_filter(nf.map_rel, nf.filter_pred);
}

}  // namespace taskbench
