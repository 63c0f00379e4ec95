#include <algorithm>
#include <map>
#include <variant>

#include "taskbench/errors.hpp"
#include "taskbench/sparql.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

// Evaluator for exactly the fragment language compile_sparql emits: triple
// patterns, binary UNION groups, BIND of &&/|| and EXISTS, and truth-value
// FILTERs. Variables written with a '?' sigil come from triple patterns;
// BIND/FILTER slots name variables without the sigil.

namespace {

using Value = std::variant<std::string, bool>;
using Row = std::map<std::string, Value>;

struct Term {
  bool is_var;
  std::string name;  // variable name without sigil, or constant text
};

struct Element;
using Group = std::vector<Element>;

struct Pattern {
  Term s, p, o;
};
struct UnionElem {
  Group left, right;
};
struct BindOp {
  std::string lhs, rhs, out;
  bool is_and;
};
struct BindExists {
  Group inner;
  std::string out;
};
struct FilterElem {
  std::string var;
  bool want;
};

struct Element {
  std::variant<Pattern, UnionElem, BindOp, BindExists, FilterElem> node;
};

struct TokenStream {
  std::vector<std::string> toks;
  std::size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : toks[pos];
  }
  std::string next() {
    if (done()) throw BackendError("query ended unexpectedly");
    return toks[pos++];
  }
  void expect(const std::string& t) {
    std::string got = next();
    if (got != t) throw BackendError("expected '" + t + "' in query, got '" + got + "'");
  }
};

Term make_term(const std::string& tok) {
  if (!tok.empty() && tok[0] == '?') return {true, tok.substr(1)};
  return {false, tok};
}

// BIND/FILTER slots: bare names are variables.
std::string var_name(const std::string& tok) {
  return (!tok.empty() && tok[0] == '?') ? tok.substr(1) : tok;
}

Group parse_group(TokenStream& ts);

Element parse_element(TokenStream& ts) {
  std::string tok = ts.next();
  if (tok == "{") {
    UnionElem u;
    u.left = parse_group(ts);
    ts.expect("UNION");
    ts.expect("{");
    u.right = parse_group(ts);
    return {std::move(u)};
  }
  if (tok == "BIND(") {
    if (ts.peek() == "EXISTS") {
      ts.next();
      ts.expect("{");
      BindExists b;
      b.inner = parse_group(ts);
      ts.expect("AS");
      b.out = var_name(ts.next());
      ts.expect(")");
      return {std::move(b)};
    }
    BindOp b;
    b.lhs = var_name(ts.next());
    std::string op = ts.next();
    if (op != "&&" && op != "||")
      throw BackendError("unsupported BIND operator '" + op + "'");
    b.is_and = op == "&&";
    b.rhs = var_name(ts.next());
    ts.expect("AS");
    b.out = var_name(ts.next());
    ts.expect(")");
    return {std::move(b)};
  }
  if (tok == "FILTER(") {
    FilterElem f;
    f.var = var_name(ts.next());
    ts.expect("=");
    std::string v = ts.next();
    if (v != "true" && v != "false") throw BackendError("FILTER compares to true/false only");
    f.want = v == "true";
    ts.expect(")");
    return {std::move(f)};
  }
  // triple pattern: tok term term .
  Pattern p;
  p.s = make_term(tok);
  p.p = make_term(ts.next());
  p.o = make_term(ts.next());
  ts.expect(".");
  return {std::move(p)};
}

// Consumes the closing '}' (or stops at end of input for the top level).
Group parse_group(TokenStream& ts) {
  Group g;
  while (!ts.done()) {
    if (ts.peek() == "}") {
      ts.next();
      return g;
    }
    g.push_back(parse_element(ts));
  }
  return g;
}

bool unify(const Term& t, const std::string& value, Row& row) {
  if (!t.is_var) return t.name == value;
  auto it = row.find(t.name);
  if (it == row.end()) {
    row[t.name] = value;
    return true;
  }
  const std::string* s = std::get_if<std::string>(&it->second);
  return s && *s == value;
}

std::vector<Row> eval_group(const TripleStore& store, const Group& group,
                            std::vector<Row> rows);

std::vector<Row> join_pattern(const TripleStore& store, const Pattern& p,
                              const std::vector<Row>& rows) {
  std::vector<Row> out;
  for (const Row& row : rows) {
    for (const Triple& t : store.triples()) {
      Row next = row;
      if (unify(p.s, t.subject, next) && unify(p.p, t.property, next) &&
          unify(p.o, t.object, next))
        out.push_back(std::move(next));
    }
  }
  return out;
}

std::vector<Row> eval_group(const TripleStore& store, const Group& group,
                            std::vector<Row> rows) {
  std::vector<const BindOp*> op_binds;
  std::vector<const BindExists*> exists_binds;
  std::vector<const FilterElem*> filters;

  for (const Element& e : group) {
    if (const Pattern* p = std::get_if<Pattern>(&e.node)) {
      rows = join_pattern(store, *p, rows);
    } else if (const UnionElem* u = std::get_if<UnionElem>(&e.node)) {
      std::vector<Row> merged = eval_group(store, u->left, rows);
      std::vector<Row> right = eval_group(store, u->right, std::move(rows));
      merged.insert(merged.end(), std::make_move_iterator(right.begin()),
                    std::make_move_iterator(right.end()));
      rows = std::move(merged);
    } else if (const BindOp* b = std::get_if<BindOp>(&e.node)) {
      op_binds.push_back(b);
    } else if (const BindExists* b = std::get_if<BindExists>(&e.node)) {
      exists_binds.push_back(b);
    } else {
      filters.push_back(std::get_if<FilterElem>(&e.node));
    }
  }

  // BINDs precede their operand fragments in the emitted text, so apply them
  // to a fixpoint instead of in order.
  for (const BindExists* b : exists_binds) {
    for (Row& row : rows) {
      bool found = !eval_group(store, b->inner, {row}).empty();
      row[b->out] = found;
    }
  }
  std::vector<const BindOp*> pending = op_binds;
  while (!pending.empty()) {
    std::vector<const BindOp*> still;
    for (const BindOp* b : pending) {
      bool applicable = true;
      for (const Row& row : rows)
        if (!row.count(b->lhs) || !row.count(b->rhs)) applicable = false;
      if (!applicable) {
        still.push_back(b);
        continue;
      }
      for (Row& row : rows) {
        const bool* l = std::get_if<bool>(&row.at(b->lhs));
        const bool* r = std::get_if<bool>(&row.at(b->rhs));
        if (!l || !r) throw BackendError("BIND operator over non-boolean values");
        row[b->out] = b->is_and ? (*l && *r) : (*l || *r);
      }
    }
    if (still.size() == pending.size())
      throw BackendError("unresolvable BIND in query (unbound operands)");
    pending = std::move(still);
  }

  for (const FilterElem* f : filters) {
    std::vector<Row> kept;
    for (Row& row : rows) {
      auto it = row.find(f->var);
      if (it == row.end()) throw BackendError("FILTER on unbound variable '" + f->var + "'");
      const bool* v = std::get_if<bool>(&it->second);
      if (!v) throw BackendError("FILTER on non-boolean variable '" + f->var + "'");
      if (*v == f->want) kept.push_back(std::move(row));
    }
    rows = std::move(kept);
  }
  return rows;
}

}  // namespace

std::vector<std::string> execute_local_text(const TripleStore& store, const std::string& text) {
  TokenStream ts{split_ws(text)};
  ts.expect("SELECT");
  std::string select = ts.next();
  if (select.empty() || select[0] != '?')
    throw BackendError("SELECT expects a ?variable, got '" + select + "'");
  std::string var = select.substr(1);
  ts.expect("WHERE");
  ts.expect("{");
  Group group = parse_group(ts);
  if (!ts.done()) throw BackendError("trailing tokens after query body");

  std::vector<Row> rows = eval_group(store, group, {Row{}});
  std::vector<std::string> out;
  for (const Row& row : rows) {
    auto it = row.find(var);
    if (it == row.end()) continue;
    if (const bool* b = std::get_if<bool>(&it->second))
      out.push_back(*b ? "true" : "false");
    else
      out.push_back(std::get<std::string>(it->second));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> execute_local(const TripleStore& store, const SparqlQuery& query) {
  return execute_local_text(store, query.text());
}

std::vector<std::string> execute_sparql(const KnowledgeStore& store, const SparqlQuery& query) {
  if (store.triples()) return execute_local(*store.triples(), query);
  if (!store.endpoint().empty()) {
    SparqlClient client(store.endpoint(), store.cache_dir());
    return client.execute(query);
  }
  throw BackendError("no triple store or endpoint configured for factual queries");
}

}  // namespace taskbench
