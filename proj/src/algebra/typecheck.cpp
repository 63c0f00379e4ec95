#include "taskbench/algebra.hpp"
#include "taskbench/errors.hpp"

namespace taskbench {

namespace {

[[noreturn]] void mismatch(const ExprPtr& node, const std::string& expected,
                           const std::string& actual) {
  throw TypeError("kind mismatch at '" + print_expr(node) + "': expected " + expected +
                  ", got " + actual);
}

bool domain_compatible(const std::string& a, const std::string& b) {
  return a == b || a == "*" || b == "*";
}

// Merged descriptor for operators whose operands share an input domain.
std::string merge_domain(const std::string& a, const std::string& b) {
  if (a == "*") return b;
  if (b == "*" || a == b) return a;
  return a < b ? a + "|" + b : b + "|" + a;
}

bool is_word_rel(const TaskSignature& s) {
  return s.kind == SigKind::Relation && s.level == SigLevel::Word;
}
bool is_word_pred(const TaskSignature& s) {
  return s.kind == SigKind::Predicate && s.level == SigLevel::Word;
}

TaskSignature check(const ExprPtr& e, const Catalog& catalog) {
  switch (e->kind) {
    case ExprKind::Atomic: {
      const AtomicEntry* entry = catalog.find(e->atom.base);
      if (!entry) throw TypeError("unknown atomic task '" + e->atom.base + "'");
      TaskSignature sig;
      sig.kind = entry->kind == TaskKind::Relation ? SigKind::Relation : SigKind::Predicate;
      sig.level = SigLevel::Word;
      sig.domain = Catalog::input_domain(*entry, e->atom.lang_tag);
      sig.out_domain = Catalog::output_domain(*entry, e->atom.lang_tag);
      if (e->atom.inverted) {
        if (entry->kind != TaskKind::Relation)
          throw TypeError("[inv] applies only to relation tasks: '" + e->atom.base + "'");
        std::swap(sig.domain, sig.out_domain);
      }
      return sig;
    }
    case ExprKind::Chain: {
      TaskSignature outer = check(e->a, catalog);
      TaskSignature inner = check(e->b, catalog);
      if (inner.kind != SigKind::Relation)
        mismatch(e, "a relation as chain argument", signature_to_string(inner));
      if (outer.level == SigLevel::Word && inner.level == SigLevel::Word) {
        TaskSignature sig;
        sig.kind = outer.kind;  // predicate-over-relation chains are existential
        sig.level = SigLevel::Word;
        sig.domain = inner.domain;
        sig.out_domain = outer.kind == SigKind::Relation ? outer.out_domain : "";
        if (sig.out_domain == "*") sig.out_domain = inner.out_domain;
        return sig;
      }
      if (outer.level == SigLevel::Sequence && inner.level == SigLevel::Sequence &&
          outer.kind == SigKind::Relation) {
        TaskSignature sig;
        sig.kind = SigKind::Relation;
        sig.level = SigLevel::Sequence;
        sig.domain = inner.domain;
        sig.out_domain = outer.out_domain;
        return sig;
      }
      mismatch(e, "two word-level tasks or two sequential relations",
               signature_to_string(outer) + " applied to " + signature_to_string(inner));
    }
    case ExprKind::Union:
    case ExprKind::Intersection: {
      TaskSignature x = check(e->a, catalog);
      TaskSignature y = check(e->b, catalog);
      if (!is_word_rel(x)) mismatch(e->a ? e : e, "(relation, word)", signature_to_string(x));
      if (!is_word_rel(y)) mismatch(e, "(relation, word)", signature_to_string(y));
      TaskSignature sig;
      sig.kind = SigKind::Relation;
      sig.level = SigLevel::Word;
      sig.domain = merge_domain(x.domain, y.domain);
      sig.out_domain = merge_domain(x.out_domain, y.out_domain);
      return sig;
    }
    case ExprKind::LAnd:
    case ExprKind::LOr: {
      TaskSignature x = check(e->a, catalog);
      TaskSignature y = check(e->b, catalog);
      if (!is_word_pred(x)) mismatch(e, "(predicate, word)", signature_to_string(x));
      if (!is_word_pred(y)) mismatch(e, "(predicate, word)", signature_to_string(y));
      TaskSignature sig;
      sig.kind = SigKind::Predicate;
      sig.level = SigLevel::Word;
      sig.domain = merge_domain(x.domain, y.domain);
      return sig;
    }
    case ExprKind::Map: {
      TaskSignature body = check(e->a, catalog);
      if (!is_word_rel(body)) mismatch(e, "(relation, word)", signature_to_string(body));
      TaskSignature sig;
      sig.kind = SigKind::Relation;
      sig.level = SigLevel::Sequence;
      sig.domain = body.domain;
      sig.out_domain = body.out_domain;
      return sig;
    }
    case ExprKind::Filter: {
      TaskSignature body = check(e->a, catalog);
      if (!is_word_pred(body)) mismatch(e, "(predicate, word)", signature_to_string(body));
      TaskSignature sig;
      sig.kind = SigKind::Relation;
      sig.level = SigLevel::Sequence;
      sig.domain = body.domain;
      sig.out_domain = body.domain;  // filtering passes input words through
      return sig;
    }
    case ExprKind::MapFilter: {
      TaskSignature m = check(e->a, catalog);
      TaskSignature f = check(e->b, catalog);
      if (!is_word_rel(m)) mismatch(e, "(relation, word) map body", signature_to_string(m));
      if (!is_word_pred(f)) mismatch(e, "(predicate, word) filter body", signature_to_string(f));
      if (!domain_compatible(m.domain, f.domain))
        mismatch(e, "map and filter over one domain",
                 signature_to_string(m) + " with " + signature_to_string(f));
      TaskSignature sig;
      sig.kind = SigKind::Relation;
      sig.level = SigLevel::Sequence;
      sig.domain = merge_domain(m.domain, f.domain);
      sig.out_domain = m.out_domain;
      return sig;
    }
  }
  throw TypeError("unreachable expression kind");
}

}  // namespace

TaskSignature typecheck(const ExprPtr& expr, const Catalog& catalog) {
  return check(expr, catalog);
}

}  // namespace taskbench
