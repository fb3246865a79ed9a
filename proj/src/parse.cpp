#include "ttl/parse.hpp"

#include <cctype>

namespace ttl {

namespace {

// Grammar, loosest binding first:
//   bor   := dor ( "OR" dor )*
//   dor   := split ( "DOR" split )*
//   split := temp ( "\/" temp )*
//   temp  := conj ( ("U"|"W"|"EU"|"AU"|"EW"|"AW"|"US"|"WS") temp )?
//   conj  := prefix ( "&" prefix )*
//   prefix:= ("!"|"X"|"F"|"G"|"E"|"A"|"NOEX"|"EX"|...|"A1"|...) prefix
//          | primary
struct Parser {
  const std::string& s;
  const GenAtomRegistry& atoms;
  size_t pos = 0;

  Parser(const std::string& text, const GenAtomRegistry& reg)
      : s(text), atoms(reg) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }

  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }

  bool peek_sym(const std::string& sym) {
    skip_ws();
    return s.compare(pos, sym.size(), sym) == 0;
  }

  bool eat_sym(const std::string& sym) {
    if (!peek_sym(sym)) return false;
    pos += sym.size();
    return true;
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '#' || c == '\'';
  }

  std::string peek_word() {
    skip_ws();
    size_t e = pos;
    while (e < s.size() && word_char(s[e])) ++e;
    return s.substr(pos, e - pos);
  }

  bool eat_word(const std::string& w) {
    if (peek_word() != w) return false;
    pos += w.size();
    return true;
  }

  FormulaPtr parse() {
    auto f = bor();
    if (!at_end()) fail("trailing input");
    return f;
  }

  FormulaPtr bor() {
    auto f = dor();
    while (eat_word("OR") || eat_sym("\\ovee")) f = f_bor(f, dor());
    return f;
  }

  FormulaPtr dor() {
    auto f = split();
    while (eat_word("DOR")) f = f_dual_or(f, split());
    return f;
  }

  FormulaPtr split() {
    auto f = temp();
    while (eat_sym("\\/")) f = f_or(f, temp());
    return f;
  }

  FormulaPtr temp() {
    auto f = conj();
    skip_ws();
    std::string w = peek_word();
    if (w == "U" || w == "W") {
      pos += w.size();
      auto rhs = temp();
      return w == "U" ? f_until(f, rhs) : f_wuntil(f, rhs);
    }
    if (w == "EU" || w == "AU" || w == "EW" || w == "AW") {
      pos += w.size();
      auto rhs = temp();
      auto body = (w[1] == 'U') ? f_until(f, rhs) : f_wuntil(f, rhs);
      return w[0] == 'E' ? f_exists(body) : f_forall(body);
    }
    if (w == "US" || w == "WS") {
      if (w == "WS") fail("no synchronized weak-until macro");
      pos += w.size();
      auto rhs = temp();
      return sync_until_tok(f, rhs);
    }
    return f;
  }

  // Synchronized macros default to marker proposition "o".
  FormulaPtr sync_until_tok(FormulaPtr a, FormulaPtr b) {
    return sync_until(std::move(a), std::move(b), "o");
  }

  FormulaPtr conj() {
    auto f = prefix();
    while (true) {
      skip_ws();
      if (pos < s.size() && s[pos] == '&') {
        ++pos;
        f = f_and(f, prefix());
      } else {
        break;
      }
    }
    return f;
  }

  FormulaPtr prefix() {
    skip_ws();
    if (pos < s.size() && s[pos] == '!') {
      // Negation of a propositional formula only.
      if (pos + 1 < s.size() && s[pos + 1] == '[') {
        ++pos;
        return inclusion(true);
      }
      ++pos;
      auto f = prefix();
      if (!is_propositional(f))
        fail("negation is restricted to propositional formulas");
      return f_neg(f);
    }
    std::string w = peek_word();
    auto arg = [&]() {
      pos += w.size();
      return prefix();
    };
    if (w == "X") return f_next(arg());
    if (w == "F") return f_finally(arg());
    if (w == "G") return f_globally(arg());
    if (w == "E") return f_exists(arg());
    if (w == "A") return f_forall(arg());
    if (w == "NOEX") return f_nexists(arg());
    if (w == "EX") return f_exists(f_next(arg()));
    if (w == "AX") return f_forall(f_next(arg()));
    if (w == "EF") return f_exists(f_finally(arg()));
    if (w == "AF") return f_forall(f_finally(arg()));
    if (w == "EG") return f_exists(f_globally(arg()));
    if (w == "AG") return f_forall(f_globally(arg()));
    if (w == "XS") { pos += w.size(); return sync_next(prefix(), "o"); }
    if (w == "FS") { pos += w.size(); return sync_finally(prefix(), "o"); }
    if (w == "GS") { pos += w.size(); return sync_globally(prefix(), "o"); }
    if (w == "A1") return f_a1(arg());
    if (w == "E1") return f_e1(arg());
    if (w == "AS") return f_as(arg());
    if (w == "ES") return f_es(arg());
    return primary();
  }

  FormulaPtr primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    if (s[pos] == '(') {
      ++pos;
      auto f = bor();
      skip_ws();
      if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
      ++pos;
      return f;
    }
    if (s[pos] == '[') return inclusion(false);
    std::string w = peek_word();
    if (w.empty()) fail("expected a formula");
    if (w == "TRUE") { pos += w.size(); return f_true(); }
    if (w == "FALSE") { pos += w.size(); return f_false(); }
    if (w == "NE") { pos += w.size(); return f_ne(); }
    if (w == "dep" || w == "ndep") {
      pos += w.size();
      return dep_atom(w == "ndep");
    }
    if (w == "gen") {
      pos += w.size();
      if (!eat_sym(":")) fail("expected ':' after gen");
      return gen_atom();
    }
    pos += w.size();
    return f_prop(w);
  }

  FormulaPtr dep_atom(bool dual) {
    skip_ws();
    if (!eat_sym("(")) fail("expected '(' after dep");
    std::vector<FormulaPtr> args;
    bool seen_semi = false;
    std::vector<FormulaPtr> params;
    while (true) {
      auto f = bor();
      if (!is_propositional(f))
        fail("atom parameters must be propositional");
      args.push_back(f);
      skip_ws();
      if (eat_sym(";")) {
        if (seen_semi) fail("multiple ';' in dep");
        seen_semi = true;
        params = std::move(args);
        args.clear();
        continue;
      }
      if (eat_sym(",")) continue;
      if (eat_sym(")")) break;
      fail("expected ',', ';' or ')' in dep");
    }
    if (seen_semi) {
      if (args.size() != 1) fail("dep needs exactly one target after ';'");
      return dual ? f_dual_dep(params, args[0]) : f_dep(params, args[0]);
    }
    if (args.size() != 1) fail("use ';' to separate dep parameters");
    return dual ? f_dual_dep({}, args[0]) : f_dep({}, args[0]);
  }

  FormulaPtr inclusion(bool dual_prefixed) {
    skip_ws();
    if (!eat_sym("[")) fail("expected '['");
    std::vector<FormulaPtr> lhs, rhs;
    bool right = false;
    bool dual = dual_prefixed;
    while (true) {
      auto f = bor();
      if (!is_propositional(f))
        fail("inclusion parameters must be propositional");
      (right ? rhs : lhs).push_back(f);
      skip_ws();
      if (eat_sym(",")) continue;
      if (!right && eat_sym("!<=")) {
        right = true;
        dual = true;
        continue;
      }
      if (!right && eat_sym("<=")) {
        right = true;
        continue;
      }
      if (eat_sym("]")) break;
      fail("expected ',', '<=' or ']' in inclusion atom");
    }
    if (!right) fail("inclusion atom needs '<='");
    return dual ? f_dual_incl(lhs, rhs) : f_incl(lhs, rhs);
  }

  FormulaPtr gen_atom() {
    std::string name = peek_word();
    if (name.empty()) fail("expected atom name after gen:");
    pos += name.size();
    auto it = atoms.find(name);
    if (it == atoms.end()) fail("unknown generalized atom: " + name);
    skip_ws();
    if (!eat_sym("(")) fail("expected '(' after atom name");
    std::vector<FormulaPtr> args;
    while (true) {
      auto f = bor();
      if (!is_propositional(f))
        fail("atom parameters must be propositional");
      args.push_back(f);
      skip_ws();
      if (eat_sym(",")) continue;
      if (eat_sym(")")) break;
      fail("expected ',' or ')' in atom");
    }
    return f_genatom(it->second, std::move(args));
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text,
                         const GenAtomRegistry& atoms) {
  Parser p(text, atoms);
  return p.parse();
}

FormulaPtr parse_teamctl(const std::string& text,
                         const GenAtomRegistry& atoms) {
  auto f = parse_formula(text, atoms);
  if (!is_teamctl(f))
    throw ParseError("temporal operators must pair with tef quantifiers", 0);
  return f;
}

}  // namespace ttl
