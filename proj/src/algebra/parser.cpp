#include <cctype>

#include "taskbench/algebra.hpp"
#include "taskbench/errors.hpp"
#include "taskbench/util/text.hpp"

namespace taskbench {

namespace {

// Marker for the bound variable of a lambda while its body is being parsed.
// Resolved away before parse_expr returns.
const char* kHoleBase = "\x01hole";

bool is_hole(const ExprPtr& e) {
  return e->kind == ExprKind::Atomic && e->atom.base == kHoleBase;
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
}

class Parser {
 public:
  Parser(const std::string& src, const Catalog& catalog) : src_(src), catalog_(catalog) {}

  ExprPtr parse() {
    ExprPtr e = parse_application(/*bound_var=*/"");
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    if (is_hole(e) || contains_hole(e)) fail("unbound variable in expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) {
    throw ParseError(msg, at);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  // Lambda marker: "λ" (UTF-8) or the keyword "lambda".
  bool eat_lambda() {
    skip_ws();
    if (pos_ + 1 < src_.size() && static_cast<unsigned char>(src_[pos_]) == 0xCE &&
        static_cast<unsigned char>(src_[pos_ + 1]) == 0xBB) {
      pos_ += 2;
      return true;
    }
    std::size_t save = pos_;
    std::string id = peek_ident();
    if (id == "lambda") {
      pos_ += id.size();
      return true;
    }
    pos_ = save;
    return false;
  }

  std::string peek_ident() {
    skip_ws();
    std::size_t i = pos_;
    if (i >= src_.size() || !std::isalpha(static_cast<unsigned char>(src_[i]))) return "";
    std::size_t start = i;
    while (i < src_.size() && ident_char(src_[i])) ++i;
    return src_.substr(start, i - start);
  }

  std::string take_ident() {
    std::string id = peek_ident();
    if (id.empty()) fail("expected identifier");
    pos_ += id.size();
    return id;
  }

  // application := primary ( '(' (expr | 'S' | bound-var) ')' )*
  ExprPtr parse_application(const std::string& bound_var) {
    ExprPtr e = parse_primary(bound_var);
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != '(') break;
      ++pos_;
      skip_ws();
      // `t(S)` names the input sequence: the application is t itself.
      std::size_t save = pos_;
      std::string id = peek_ident();
      if (id == "S") {
        pos_ += 1;
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == ')') {
          ++pos_;
          continue;
        }
        pos_ = save;
      }
      ExprPtr arg = parse_application(bound_var);
      expect(')');
      if (is_hole(arg)) {
        // f(x) with x the bound variable: the function itself.
        continue;
      }
      e = TaskExpr::chain(e, arg);
    }
    return e;
  }

  ExprPtr parse_primary(const std::string& bound_var) {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (src_[pos_] == '"') return parse_quoted_atomic();

    std::size_t id_at = pos_;
    std::string id = peek_ident();
    if (id.empty()) fail("expected expression");

    if (id == "union" || id == "intersection" || id == "land" || id == "lor") {
      pos_ += id.size();
      expect('(');
      ExprPtr x = parse_application(bound_var);
      expect(',');
      ExprPtr y = parse_application(bound_var);
      expect(')');
      if (is_hole(x) || is_hole(y)) fail_at("bound variable must be applied, not passed", id_at);
      if (id == "union") return TaskExpr::set_union(x, y);
      if (id == "intersection") return TaskExpr::set_intersection(x, y);
      if (id == "land") return TaskExpr::land(x, y);
      return TaskExpr::lor(x, y);
    }
    if (id == "map" || id == "filter") {
      pos_ += id.size();
      expect('{');
      ExprPtr body = parse_body();
      expect('}');
      return id == "map" ? TaskExpr::map(body) : TaskExpr::filter(body);
    }
    if (id == "map-filter") {
      pos_ += id.size();
      expect('{');
      ExprPtr m = parse_body();
      expect(',');
      ExprPtr f = parse_body();
      expect('}');
      return TaskExpr::map_filter(m, f);
    }
    if (!bound_var.empty() && id == bound_var) {
      pos_ += id.size();
      return TaskExpr::atomic(kHoleBase);
    }
    return parse_atomic();
  }

  // body := λ IDENT '.' expr | expr   (the binder name is ignored beyond
  // marking application sites)
  ExprPtr parse_body() {
    std::size_t save = pos_;
    if (eat_lambda()) {
      std::string var = take_ident();
      expect('.');
      ExprPtr body = parse_application(var);
      if (is_hole(body)) return TaskExpr::identity();  // λx.x
      if (contains_hole(body)) fail_at("bound variable used outside application position", save);
      return body;
    }
    pos_ = save;
    ExprPtr body = parse_application("");
    return body;
  }

  static bool contains_hole(const ExprPtr& e) {
    if (!e) return false;
    if (is_hole(e)) return true;
    return contains_hole(e->a) || contains_hole(e->b);
  }

  ExprPtr parse_quoted_atomic() {
    std::size_t at = pos_;
    ++pos_;  // opening quote
    std::size_t start = pos_;
    while (pos_ < src_.size() && src_[pos_] != '"') ++pos_;
    if (pos_ >= src_.size()) fail_at("unterminated quoted name", at);
    std::string printed = src_.substr(start, pos_ - start);
    ++pos_;  // closing quote
    const AtomicEntry* entry = catalog_.find_printed(printed);
    if (!entry) fail_at("unknown atomic task \"" + printed + "\"", at);
    return finish_atomic(*entry, at);
  }

  ExprPtr parse_atomic() {
    std::size_t at = pos_;
    std::string name = take_ident();
    const AtomicEntry* entry = catalog_.find(name);
    if (!entry) fail_at("unknown atomic task '" + name + "'", at);
    return finish_atomic(*entry, at);
  }

  ExprPtr finish_atomic(const AtomicEntry& entry, std::size_t at) {
    std::string lang;
    bool inverted = false;
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '[') {
      std::size_t close = src_.find(']', pos_);
      if (close == std::string::npos) fail("unterminated tag bracket");
      std::string inside = src_.substr(pos_ + 1, close - pos_ - 1);
      pos_ = close + 1;
      for (const std::string& raw : split_char(inside, ',')) {
        std::string tag = trim(raw);
        if (tag == "inv") {
          inverted = true;
        } else if (!tag.empty()) {
          if (!lang.empty()) fail_at("duplicate language tag on '" + entry.name + "'", at);
          lang = tag;
        }
      }
    }
    if (entry.lang_tags.empty()) {
      if (!lang.empty())
        fail_at("atomic '" + entry.name + "' does not take a language tag", at);
    } else {
      bool ok = false;
      for (const auto& t : entry.lang_tags) ok = ok || t == lang;
      if (!ok)
        fail_at("atomic '" + entry.name + "' requires a language tag from its registry", at);
    }
    if (inverted && entry.kind != TaskKind::Relation)
      fail_at("[inv] applies only to relation tasks: '" + entry.name + "'", at);
    return TaskExpr::atomic(AtomicName{entry.name, lang, inverted});
  }

  const std::string& src_;
  const Catalog& catalog_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(const std::string& source, const Catalog& catalog) {
  return Parser(source, catalog).parse();
}

}  // namespace taskbench
