#include "consfree/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace consfree {

namespace {

struct Token {
  std::string text;
  bool ident = false;
  int line = 0, col = 0;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

const std::set<std::string> kReserved = {"sort", "cons", "fun",   "if",
                                         "then", "else", "choose"};

std::vector<Token> tokenize_line(const std::string& line, int lineno) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '#') break;  // comment
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token t;
    t.line = lineno;
    t.col = static_cast<int>(i) + 1;
    if (ident_char(c)) {
      size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      t.text = line.substr(i, j - i);
      t.ident = true;
      i = j;
    } else if (line.compare(i, 2, "=>") == 0 ||
               line.compare(i, 2, "::") == 0) {
      t.text = line.substr(i, 2);
      i += 2;
    } else if (c == '(' || c == ')' || c == ',' || c == '*' || c == '=' ||
               c == ':') {
      t.text = std::string(1, c);
      ++i;
    } else {
      throw ParseError(lineno, static_cast<int>(i) + 1,
                       std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  return out;
}

// Cursor over one line's tokens.
struct Cursor {
  const std::vector<Token>* toks;
  size_t pos = 0;
  int lineno;

  bool done() const { return pos >= toks->size(); }
  const Token& peek() const {
    if (done())
      throw ParseError(lineno, 0, "unexpected end of line");
    return (*toks)[pos];
  }
  bool at(const std::string& s) const {
    return !done() && (*toks)[pos].text == s && !(*toks)[pos].ident;
  }
  bool at_ident() const { return !done() && (*toks)[pos].ident; }
  Token next() {
    const Token& t = peek();
    ++pos;
    return t;
  }
  void expect(const std::string& s) {
    if (!at(s)) {
      const Token* t = done() ? nullptr : &(*toks)[pos];
      throw ParseError(lineno, t ? t->col : 0,
                       "expected '" + s + "'" +
                           (t ? ", got '" + t->text + "'" : " at end of line"));
    }
    ++pos;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token* t = done() ? nullptr : &(*toks)[pos];
    throw ParseError(lineno, t ? t->col : 0, msg);
  }
};

struct ProgramParser {
  Program prog = base_program();

  // -- types ----------------------------------------------------------------
  TypePtr parse_type(Cursor& c) {
    TypePtr left = parse_product(c);
    if (c.at("=>")) {
      c.next();
      return arrow_type(left, parse_type(c));
    }
    return left;
  }
  TypePtr parse_product(Cursor& c) {
    TypePtr left = parse_type_atom(c);
    if (c.at("*")) {
      c.next();
      return product_type(left, parse_product(c));
    }
    return left;
  }
  TypePtr parse_type_atom(Cursor& c) {
    if (c.at("(")) {
      c.next();
      TypePtr t = parse_type(c);
      c.expect(")");
      return t;
    }
    if (!c.at_ident()) c.fail("expected a type");
    Token t = c.next();
    if (!prog.has_sort(t.text))
      throw ParseError(t.line, t.col, "UnknownIdentifier: sort '" + t.text +
                                          "' is not declared");
    return sort_type(t.text);
  }

  // -- patterns -------------------------------------------------------------
  PatternPtr parse_pattern_atom(Cursor& c) {
    if (c.at("(")) {
      c.next();
      PatternPtr p = parse_pattern_inner(c);
      c.expect(")");
      return p;
    }
    if (!c.at_ident()) c.fail("expected a pattern");
    Token t = c.next();
    if (kReserved.count(t.text))
      throw ParseError(t.line, t.col, "reserved word in pattern: " + t.text);
    if (prog.is_constructor(t.text)) {
      check_cons_count(t, 0);
      return make_pcons(t.text, {});
    }
    return make_pvar(t.text);
  }
  PatternPtr parse_pattern_inner(Cursor& c) {
    PatternPtr left = parse_pattern_cons(c);
    if (c.at(",")) {
      c.next();
      return make_ppair(left, parse_pattern_inner(c));
    }
    return left;
  }
  PatternPtr parse_pattern_cons(Cursor& c) {
    PatternPtr left = parse_pattern_app(c);
    if (c.at("::")) {
      Token op = c.next();
      PatternPtr right = parse_pattern_cons(c);
      return make_pcons("::", {left, right});
    }
    return left;
  }
  PatternPtr parse_pattern_app(Cursor& c) {
    if (c.at_ident() && prog.is_constructor(c.peek().text)) {
      Token t = c.next();
      std::vector<PatternPtr> args;
      while (!c.done() && (c.at_ident() || c.at("(")) ) {
        args.push_back(parse_pattern_atom(c));
      }
      check_cons_count(t, args.size());
      return make_pcons(t.text, std::move(args));
    }
    return parse_pattern_atom(c);
  }
  void check_cons_count(const Token& t, size_t n) {
    const TypePtr* ty = prog.constructor_type(t.text);
    size_t declared = argument_types(*ty).size();
    if (n > declared)
      throw ParseError(t.line, t.col,
                       "constructor " + t.text + " takes " +
                           std::to_string(declared) + " arguments, got " +
                           std::to_string(n));
  }

  // -- expressions ----------------------------------------------------------
  ExprPtr parse_expr(Cursor& c) {
    if (c.at_ident() && c.peek().text == "if") {
      c.next();
      ExprPtr cond = parse_cons_expr(c);
      expect_word(c, "then");
      ExprPtr thn = parse_expr(c);
      expect_word(c, "else");
      ExprPtr els = parse_expr(c);
      return make_if(cond, thn, els);
    }
    return parse_cons_expr(c);
  }
  void expect_word(Cursor& c, const std::string& w) {
    if (!c.at_ident() || c.peek().text != w)
      c.fail("expected '" + w + "'");
    c.next();
  }
  bool at_stop_word(Cursor& c) {
    return c.at_ident() &&
           (c.peek().text == "then" || c.peek().text == "else");
  }
  ExprPtr parse_cons_expr(Cursor& c) {
    ExprPtr left = parse_app_expr(c);
    if (c.at("::")) {
      Token op = c.next();
      ExprPtr right = parse_cons_expr(c);
      return build_cons(op, {left, right});
    }
    return left;
  }
  ExprPtr parse_app_expr(Cursor& c) {
    Token head_tok = c.done() ? Token{} : c.peek();
    ExprPtr head = parse_atom(c);
    std::vector<ExprPtr> args;
    while (!c.done() && !c.at(")") && !c.at(",") && !c.at("::") &&
           !at_stop_word(c)) {
      args.push_back(parse_atom(c));
    }
    if (args.empty()) return head;
    switch (head->kind) {
      case Expr::Kind::ConsApp:
        if (head->args.empty()) {
          head_tok.text = head->name;
          return build_cons(head_tok, std::move(args));
        }
        break;
      case Expr::Kind::FunApp:
        if (head->args.empty()) return make_fun(head->name, std::move(args));
        break;
      default:
        break;
    }
    return make_app(head, std::move(args));
  }
  ExprPtr build_cons(const Token& t, std::vector<ExprPtr> args) {
    Token named = t;
    named.text = t.text;
    check_cons_count(named, args.size());
    return make_cons(t.text, std::move(args));
  }
  ExprPtr parse_atom(Cursor& c) {
    if (c.at("(")) {
      c.next();
      ExprPtr e = parse_paren_inner(c);
      c.expect(")");
      return e;
    }
    if (!c.at_ident()) c.fail("expected an expression");
    if (c.peek().text == "choose") {
      Token t = c.next();
      c.expect("(");
      std::vector<ExprPtr> alts;
      alts.push_back(parse_expr(c));
      while (c.at(",")) {
        c.next();
        alts.push_back(parse_expr(c));
      }
      c.expect(")");
      return make_choose(std::move(alts));
    }
    if (c.peek().text == "if") return parse_expr(c);
    Token t = c.next();
    if (kReserved.count(t.text))
      throw ParseError(t.line, t.col,
                       "reserved word in expression: " + t.text);
    if (prog.is_constructor(t.text)) return make_cons(t.text, {});
    if (prog.is_function(t.text)) return make_fun(t.text, {});
    return make_var(t.text);
  }
  ExprPtr parse_paren_inner(Cursor& c) {
    ExprPtr left = parse_expr(c);
    if (c.at(",")) {
      c.next();
      return make_pair(left, parse_paren_inner(c));
    }
    return left;
  }

  // -- declarations and clauses --------------------------------------------
  void check_fresh_name(const Token& t) {
    if (kReserved.count(t.text))
      throw ParseError(t.line, t.col, "reserved word: " + t.text);
    if (prog.is_constructor(t.text) || prog.is_function(t.text) ||
        prog.has_sort(t.text))
      throw ParseError(t.line, t.col,
                       "DuplicateDeclaration: " + t.text);
  }

  void parse_clause(Cursor& c) {
    Token fn = c.next();
    if (!fn.ident || !prog.is_function(fn.text))
      throw ParseError(fn.line, fn.col,
                       "UnknownIdentifier: '" + fn.text +
                           "' is not a declared function");
    std::vector<PatternPtr> pats;
    while (!c.at("=")) pats.push_back(parse_pattern_atom(c));
    c.expect("=");
    ExprPtr body = parse_expr(c);
    if (!c.done()) c.fail("trailing tokens after clause body");

    // linearity + bound-variable checks
    std::set<std::string> bound;
    collect_pattern_vars(pats, bound, fn);
    check_body_vars(body, bound, fn);

    for (auto& cl : prog.clauses)
      if (cl.function == fn.text && cl.patterns.size() != pats.size())
        throw ParseError(fn.line, fn.col,
                         "clauses of " + fn.text +
                             " disagree on the number of patterns");

    Clause cl;
    cl.function = fn.text;
    cl.patterns = std::move(pats);
    cl.body = std::move(body);
    prog.clauses.push_back(std::move(cl));
  }

  void collect_pattern_vars(const std::vector<PatternPtr>& pats,
                            std::set<std::string>& bound, const Token& at) {
    for (auto& p : pats) collect_pattern_vars_one(p, bound, at);
  }
  void collect_pattern_vars_one(const PatternPtr& p,
                                std::set<std::string>& bound,
                                const Token& at) {
    if (p->kind == Pattern::Kind::Var) {
      if (!bound.insert(p->name).second)
        throw ParseError(at.line, at.col,
                         "NonLinearPattern: variable '" + p->name +
                             "' occurs twice in the left-hand side");
      return;
    }
    for (auto& a : p->args) collect_pattern_vars_one(a, bound, at);
  }
  void check_body_vars(const ExprPtr& e, const std::set<std::string>& bound,
                       const Token& at) {
    if (e->kind == Expr::Kind::Var && !bound.count(e->name))
      throw ParseError(at.line, at.col,
                       "UnknownIdentifier: variable '" + e->name +
                           "' is not bound by the left-hand side");
    if (e->head) check_body_vars(e->head, bound, at);
    for (auto& a : e->args) check_body_vars(a, bound, at);
  }

  Program run(const std::string& text) {
    std::vector<std::vector<Token>> lines;
    {
      std::istringstream in(text);
      std::string line;
      int lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        // pragma lines look like comments
        std::string trimmed;
        for (char ch : line)
          if (!std::isspace(static_cast<unsigned char>(ch))) trimmed += ch;
        if (trimmed == "#terminating") {
          prog.terminating = true;
          lines.emplace_back();
          continue;
        }
        lines.push_back(tokenize_line(line, lineno));
      }
    }

    // pass 1: sorts
    for (auto& toks : lines) {
      if (toks.empty()) continue;
      if (toks[0].ident && toks[0].text == "sort") {
        if (toks.size() != 2 || !toks[1].ident)
          throw ParseError(toks[0].line, toks[0].col,
                           "expected: sort <name>");
        check_fresh_name(toks[1]);
        prog.sorts.push_back(toks[1].text);
      }
    }
    // pass 2: constructor and function declarations
    for (auto& toks : lines) {
      if (toks.empty()) continue;
      const std::string& kw = toks[0].text;
      if (!toks[0].ident || (kw != "cons" && kw != "fun")) continue;
      Cursor c{&toks, 1, toks[0].line};
      if (!c.at_ident()) c.fail("expected a name");
      Token name = c.next();
      check_fresh_name(name);
      c.expect(":");
      TypePtr ty = parse_type(c);
      if (!c.done()) c.fail("trailing tokens after declaration");
      if (kw == "cons") {
        if (type_order(ty) > 1 ||
            final_result_type(ty)->kind != Type::Kind::Sort)
          throw ParseError(name.line, name.col,
                           "constructor type must be a first-order type "
                           "ending in a sort");
        prog.constructors.emplace_back(name.text, ty);
      } else {
        prog.functions.emplace_back(name.text, ty);
        if (prog.main.empty()) prog.main = name.text;
      }
    }
    // pass 3: clauses
    for (auto& toks : lines) {
      if (toks.empty()) continue;
      const std::string& kw = toks[0].text;
      if (toks[0].ident && (kw == "sort" || kw == "cons" || kw == "fun"))
        continue;
      Cursor c{&toks, 0, toks[0].line};
      parse_clause(c);
    }

    if (prog.main.empty())
      throw ParseError(0, 0, "no main function declared");
    return std::move(prog);
  }
};

}  // namespace

Program parse_program(const std::string& text) {
  ProgramParser p;
  return p.run(text);
}

Value parse_input_bits(const std::string& bits) {
  return data_from_bits(bits);
}

}  // namespace consfree
