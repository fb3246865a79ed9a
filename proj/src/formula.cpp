#include "ttl/formula.hpp"

#include <stdexcept>

#include "ttl/model.hpp"

namespace ttl {

bool GenAtomTable::downward_closed() const {
  for (auto& m : members)
    for (uint32_t t : m) {
      std::set<uint32_t> smaller = m;
      smaller.erase(t);
      if (!members.count(smaller)) return false;
    }
  return true;
}

GenAtomTable GenAtomTable::complemented() const {
  GenAtomTable out;
  out.name = name + "~";
  out.arity = arity;
  // All subsets of {0,1}^arity not in the family.
  uint32_t tuples = 1u << arity;
  if (tuples > 16)
    throw std::runtime_error("generalized atom arity too large to complement");
  uint32_t count = 1u << tuples;
  for (uint32_t m = 0; m < count; ++m) {
    std::set<uint32_t> s;
    for (uint32_t t = 0; t < tuples; ++t)
      if (m >> t & 1u) s.insert(t);
    if (!members.count(s)) out.members.insert(std::move(s));
  }
  return out;
}

namespace {

FormulaPtr mk(Kind k, std::vector<FormulaPtr> kids = {},
              std::string prop = {}, GenAtomTablePtr table = nullptr) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->prop = std::move(prop);
  f->kids = std::move(kids);
  f->table = std::move(table);
  return f;
}

void require_propositional(const FormulaPtr& f, const char* where) {
  if (!is_propositional(f))
    throw std::invalid_argument(std::string(where) +
                                " requires a propositional argument");
}

}  // namespace

FormulaPtr f_true() { return mk(Kind::True); }
FormulaPtr f_false() { return mk(Kind::False); }
FormulaPtr f_prop(const std::string& name) {
  return mk(Kind::Prop, {}, name);
}
FormulaPtr f_neg(FormulaPtr p) {
  require_propositional(p, "negation");
  return mk(Kind::Neg, {std::move(p)});
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return mk(Kind::And, {std::move(a), std::move(b)});
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return mk(Kind::Or, {std::move(a), std::move(b)});
}
FormulaPtr f_bor(FormulaPtr a, FormulaPtr b) {
  return mk(Kind::BOr, {std::move(a), std::move(b)});
}
FormulaPtr f_dual_or(FormulaPtr a, FormulaPtr b) {
  return mk(Kind::DualOr, {std::move(a), std::move(b)});
}
FormulaPtr f_next(FormulaPtr a) { return mk(Kind::Next, {std::move(a)}); }
FormulaPtr f_until(FormulaPtr a, FormulaPtr b) {
  return mk(Kind::Until, {std::move(a), std::move(b)});
}
FormulaPtr f_wuntil(FormulaPtr a, FormulaPtr b) {
  return mk(Kind::WUntil, {std::move(a), std::move(b)});
}
FormulaPtr f_finally(FormulaPtr a) { return f_until(f_true(), std::move(a)); }
FormulaPtr f_globally(FormulaPtr a) {
  return f_wuntil(std::move(a), f_false());
}
FormulaPtr f_exists(FormulaPtr a) { return mk(Kind::Exists, {std::move(a)}); }
FormulaPtr f_forall(FormulaPtr a) { return mk(Kind::Forall, {std::move(a)}); }
FormulaPtr f_nexists(FormulaPtr a) {
  return mk(Kind::NExists, {std::move(a)});
}

FormulaPtr f_dep(std::vector<FormulaPtr> params, FormulaPtr target) {
  for (auto& p : params) require_propositional(p, "dep");
  require_propositional(target, "dep");
  params.push_back(std::move(target));
  return mk(Kind::Dep, std::move(params));
}
FormulaPtr f_dual_dep(std::vector<FormulaPtr> params, FormulaPtr target) {
  for (auto& p : params) require_propositional(p, "dual dep");
  require_propositional(target, "dual dep");
  params.push_back(std::move(target));
  return mk(Kind::DualDep, std::move(params));
}

namespace {
FormulaPtr mk_incl(Kind kind, std::vector<FormulaPtr> lhs,
                   std::vector<FormulaPtr> rhs) {
  if (lhs.size() != rhs.size() || lhs.empty())
    throw std::invalid_argument("inclusion sides must have equal arity >= 1");
  for (auto& p : lhs) require_propositional(p, "inclusion");
  for (auto& p : rhs) require_propositional(p, "inclusion");
  std::vector<FormulaPtr> kids = std::move(lhs);
  for (auto& p : rhs) kids.push_back(std::move(p));
  return mk(kind, std::move(kids));
}
}  // namespace

FormulaPtr f_incl(std::vector<FormulaPtr> lhs, std::vector<FormulaPtr> rhs) {
  return mk_incl(Kind::Incl, std::move(lhs), std::move(rhs));
}
FormulaPtr f_dual_incl(std::vector<FormulaPtr> lhs,
                       std::vector<FormulaPtr> rhs) {
  return mk_incl(Kind::DualIncl, std::move(lhs), std::move(rhs));
}

FormulaPtr f_ne() { return mk(Kind::NE); }
FormulaPtr f_a1(FormulaPtr a) { return mk(Kind::A1, {std::move(a)}); }
FormulaPtr f_e1(FormulaPtr a) { return mk(Kind::E1, {std::move(a)}); }
FormulaPtr f_as(FormulaPtr a) { return mk(Kind::AS, {std::move(a)}); }
FormulaPtr f_es(FormulaPtr a) { return mk(Kind::ES, {std::move(a)}); }

FormulaPtr f_genatom(GenAtomTablePtr table, std::vector<FormulaPtr> params) {
  if (!table) throw std::invalid_argument("missing atom table");
  if (params.size() != table->arity)
    throw std::invalid_argument("atom arity mismatch: " + table->name);
  for (auto& p : params) require_propositional(p, "generalized atom");
  return mk(Kind::GenAtom, std::move(params), {}, std::move(table));
}

bool is_propositional(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop:
      return true;
    case Kind::Neg:
    case Kind::And:
    case Kind::Or:
    case Kind::BOr:
      for (auto& k : f->kids)
        if (!is_propositional(k)) return false;
      return true;
    default:
      return false;
  }
}

bool is_pointwise(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop:
      return true;
    case Kind::Neg:
      return true;  // negation is per-trace by definition
    case Kind::And:
    case Kind::Or:
      return is_pointwise(f->kid(0)) && is_pointwise(f->kid(1));
    default:
      return false;
  }
}

bool is_ltl(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop:
      return true;
    case Kind::Neg:
      return is_propositional(f->kid(0));
    case Kind::And:
    case Kind::Or:
    case Kind::BOr:
    case Kind::Next:
    case Kind::Until:
    case Kind::WUntil:
      for (auto& k : f->kids)
        if (!is_ltl(k)) return false;
      return true;
    default:
      return false;
  }
}

bool is_quantifier_free(const FormulaPtr& f) {
  if (f->kind == Kind::Exists || f->kind == Kind::Forall ||
      f->kind == Kind::NExists)
    return false;
  for (auto& k : f->kids)
    if (!is_quantifier_free(k)) return false;
  return true;
}

bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind || a->prop != b->prop ||
      a->kids.size() != b->kids.size())
    return false;
  if (a->kind == Kind::GenAtom &&
      (a->table->name != b->table->name ||
       a->table->members != b->table->members))
    return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!structurally_equal(a->kids[i], b->kids[i])) return false;
  return true;
}

size_t formula_size(const FormulaPtr& f) {
  size_t s = 1;
  for (auto& k : f->kids) s += formula_size(k);
  return s;
}

size_t quantifier_depth(const FormulaPtr& f) {
  size_t m = 0;
  for (auto& k : f->kids) m = std::max(m, quantifier_depth(k));
  if (f->kind == Kind::Exists || f->kind == Kind::Forall ||
      f->kind == Kind::NExists)
    ++m;
  return m;
}

std::set<std::string> props_of(const FormulaPtr& f) {
  std::set<std::string> out;
  if (f->kind == Kind::Prop) out.insert(f->prop);
  for (auto& k : f->kids) {
    auto sub = props_of(k);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

namespace {

// Loosest to tightest: BOr < Or < U/W < And < prefix < atom.
enum Prec { P_BOR = 0, P_OR, P_TEMP, P_AND, P_PREFIX, P_ATOM };

void join(std::string& out, const std::vector<FormulaPtr>& kids, size_t from,
          size_t to, const char* sep);

void render(const FormulaPtr& f, int ctx, std::string& out) {
  auto paren = [&](int mine, auto body) {
    bool need = mine < ctx;
    if (need) out += "(";
    body();
    if (need) out += ")";
  };
  switch (f->kind) {
    case Kind::True: out += "TRUE"; return;
    case Kind::False: out += "FALSE"; return;
    case Kind::Prop: out += f->prop; return;
    case Kind::Neg:
      out += "!";
      render(f->kid(0), P_ATOM, out);
      return;
    case Kind::And:
      paren(P_AND, [&] {
        render(f->kid(0), P_AND, out);
        out += " & ";
        render(f->kid(1), P_AND + 1, out);
      });
      return;
    case Kind::Or:
      paren(P_OR, [&] {
        render(f->kid(0), P_OR, out);
        out += " \\/ ";
        render(f->kid(1), P_OR + 1, out);
      });
      return;
    case Kind::BOr:
      paren(P_BOR, [&] {
        render(f->kid(0), P_BOR, out);
        out += " OR ";
        render(f->kid(1), P_BOR + 1, out);
      });
      return;
    case Kind::DualOr:
      paren(P_BOR, [&] {
        render(f->kid(0), P_BOR + 1, out);
        out += " DOR ";
        render(f->kid(1), P_BOR + 1, out);
      });
      return;
    case Kind::Next:
      out += "X ";
      render(f->kid(0), P_PREFIX, out);
      return;
    case Kind::Until:
    case Kind::WUntil:
      paren(P_TEMP, [&] {
        render(f->kid(0), P_TEMP + 1, out);
        out += f->kind == Kind::Until ? " U " : " W ";
        render(f->kid(1), P_TEMP, out);
      });
      return;
    case Kind::Exists:
      out += "E ";
      render(f->kid(0), P_PREFIX, out);
      return;
    case Kind::Forall:
      out += "A ";
      render(f->kid(0), P_PREFIX, out);
      return;
    case Kind::NExists:
      out += "NOEX ";
      render(f->kid(0), P_PREFIX, out);
      return;
    case Kind::Dep:
    case Kind::DualDep:
      out += f->kind == Kind::Dep ? "dep(" : "ndep(";
      join(out, f->kids, 0, f->kids.size() - 1, ",");
      if (f->kids.size() > 1) out += "; ";
      render(f->kids.back(), P_BOR, out);
      out += ")";
      return;
    case Kind::Incl:
    case Kind::DualIncl: {
      out += "[";
      size_t half = f->kids.size() / 2;
      join(out, f->kids, 0, half, ",");
      out += f->kind == Kind::Incl ? " <= " : " !<= ";
      join(out, f->kids, half, f->kids.size(), ",");
      out += "]";
      return;
    }
    case Kind::NE: out += "NE"; return;
    case Kind::A1:
      out += "A1 ";
      render(f->kid(0), P_PREFIX, out);
      return;
    case Kind::E1:
      out += "E1 ";
      render(f->kid(0), P_PREFIX, out);
      return;
    case Kind::AS:
      out += "AS ";
      render(f->kid(0), P_PREFIX, out);
      return;
    case Kind::ES:
      out += "ES ";
      render(f->kid(0), P_PREFIX, out);
      return;
    case Kind::GenAtom:
      out += "gen:" + f->table->name + "(";
      join(out, f->kids, 0, f->kids.size(), ",");
      out += ")";
      return;
  }
}

void join(std::string& out, const std::vector<FormulaPtr>& kids, size_t from,
          size_t to, const char* sep) {
  for (size_t i = from; i < to; ++i) {
    if (i > from) out += sep;
    render(kids[i], P_BOR, out);
  }
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
  std::string out;
  render(f, P_BOR, out);
  return out;
}

bool prop_value(const FormulaPtr& f, uint32_t letter, const APContext& ap) {
  switch (f->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Prop: {
      auto bit = ap.find(f->prop);
      return bit && (letter >> *bit & 1u);
    }
    case Kind::Neg: return !prop_value(f->kid(0), letter, ap);
    case Kind::And:
      return prop_value(f->kid(0), letter, ap) &&
             prop_value(f->kid(1), letter, ap);
    case Kind::Or:
    case Kind::BOr:
      return prop_value(f->kid(0), letter, ap) ||
             prop_value(f->kid(1), letter, ap);
    default:
      throw std::invalid_argument("not propositional: " + print_formula(f));
  }
}

FormulaPtr boolean_negation(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::True:
      return f_and(f_ne(), f_false());  // holds nowhere
    case Kind::False:
      return f_ne();
    case Kind::Prop:
      return f_or(f_true(), f_and(f_ne(), f_neg(f)));
    case Kind::Neg:
      return f_or(f_true(), f_and(f_ne(), f->kid(0)));
    case Kind::And:
      return f_bor(boolean_negation(f->kid(0)), boolean_negation(f->kid(1)));
    case Kind::BOr:
      return f_and(boolean_negation(f->kid(0)), boolean_negation(f->kid(1)));
    case Kind::Or:
      return f_dual_or(boolean_negation(f->kid(0)),
                       boolean_negation(f->kid(1)));
    case Kind::DualOr:
      return f_or(boolean_negation(f->kid(0)), boolean_negation(f->kid(1)));
    case Kind::Next:
      return f_next(boolean_negation(f->kid(0)));
    case Kind::Until: {
      auto na = boolean_negation(f->kid(0));
      auto nb = boolean_negation(f->kid(1));
      return f_bor(f_until(nb, f_and(na, nb)), f_globally(nb));
    }
    case Kind::WUntil: {
      auto na = boolean_negation(f->kid(0));
      auto nb = boolean_negation(f->kid(1));
      return f_until(nb, f_and(na, nb));
    }
    case Kind::Exists:
      return f_nexists(f->kid(0));
    case Kind::NExists:
      return f_exists(f->kid(0));
    case Kind::Forall:
      return f_exists(boolean_negation(f->kid(0)));
    case Kind::Dep: {
      std::vector<FormulaPtr> params(f->kids.begin(), f->kids.end() - 1);
      return f_dual_dep(std::move(params), f->kids.back());
    }
    case Kind::DualDep: {
      std::vector<FormulaPtr> params(f->kids.begin(), f->kids.end() - 1);
      return f_dep(std::move(params), f->kids.back());
    }
    case Kind::Incl:
    case Kind::DualIncl: {
      size_t half = f->kids.size() / 2;
      std::vector<FormulaPtr> lhs(f->kids.begin(), f->kids.begin() + half);
      std::vector<FormulaPtr> rhs(f->kids.begin() + half, f->kids.end());
      return f->kind == Kind::Incl ? f_dual_incl(lhs, rhs) : f_incl(lhs, rhs);
    }
    case Kind::NE:
      return f_false();  // satisfied exactly by the empty team
    case Kind::A1:
      return f_e1(boolean_negation(f->kid(0)));
    case Kind::E1:
      return f_a1(boolean_negation(f->kid(0)));
    case Kind::AS:
      return f_es(boolean_negation(f->kid(0)));
    case Kind::ES:
      return f_as(boolean_negation(f->kid(0)));
    case Kind::GenAtom: {
      auto table = std::make_shared<GenAtomTable>(f->table->complemented());
      return f_genatom(table, f->kids);
    }
  }
  throw std::logic_error("unreachable");
}

FormulaPtr eliminate_forall(const FormulaPtr& f) {
  if (f->kind == Kind::Forall)
    return f_nexists(boolean_negation(eliminate_forall(f->kid(0))));
  if (f->kids.empty()) return f;
  auto g = std::make_shared<Formula>(*f);
  for (auto& k : g->kids) k = eliminate_forall(k);
  return g;
}

namespace {

bool teamctl_body(const FormulaPtr& f);

// Inside a quantifier: exactly one temporal operator, then back to state
// formulas.
bool teamctl_quantified(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Next:
      return teamctl_body(f->kid(0));
    case Kind::Until:
    case Kind::WUntil:
      return teamctl_body(f->kid(0)) && teamctl_body(f->kid(1));
    default:
      return false;
  }
}

bool teamctl_body(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Next:
    case Kind::Until:
    case Kind::WUntil:
      return false;  // temporal operator without a quantifier
    case Kind::Exists:
    case Kind::Forall:
    case Kind::NExists:
      return teamctl_quantified(f->kid(0));
    default:
      for (auto& k : f->kids)
        if (!teamctl_body(k)) return false;
      return true;
  }
}

}  // namespace

bool is_teamctl(const FormulaPtr& f) { return teamctl_body(f); }

namespace {
void collect_use(const FormulaPtr& f, FragmentUse& u, int quant) {
  switch (f->kind) {
    case Kind::Or: u.split_or = true; break;
    case Kind::BOr: u.bool_or = true; break;
    case Kind::Dep:
    case Kind::DualDep: u.dep = true; break;
    case Kind::Incl:
    case Kind::DualIncl: u.incl = true; break;
    case Kind::NE: u.ne = true; break;
    case Kind::A1:
    case Kind::E1: u.a1 = true; break;
    case Kind::GenAtom: u.genatom = true; break;
    case Kind::Exists: u.exists = true; break;
    case Kind::Forall:
    case Kind::NExists: u.forall = true; break;
    case Kind::Next:
    case Kind::Until:
    case Kind::WUntil:
      if (quant > 0) u.exists_modal = true;
      if (quant < 0) u.forall_modal = true;
      break;
    default: break;
  }
  int inner = 0;
  if (f->kind == Kind::Exists) inner = 1;
  if (f->kind == Kind::Forall || f->kind == Kind::NExists) inner = -1;
  for (auto& k : f->kids) collect_use(k, u, inner);
}
}  // namespace

FragmentUse fragment_use(const FormulaPtr& f) {
  FragmentUse u;
  collect_use(f, u, 0);
  return u;
}

FormulaPtr sync_next(FormulaPtr a, const std::string& o) {
  return f_exists(f_next(f_and(f_dep({}, f_prop(o)), std::move(a))));
}

FormulaPtr sync_until(FormulaPtr a, FormulaPtr b, const std::string& o) {
  auto dep_o = [&] { return f_dep({}, f_prop(o)); };
  return f_exists(
      f_until(f_and(dep_o(), std::move(a)), f_and(dep_o(), std::move(b))));
}

FormulaPtr sync_finally(FormulaPtr a, const std::string& o) {
  return sync_until(f_true(), std::move(a), o);
}

FormulaPtr sync_globally(FormulaPtr a, const std::string& o) {
  return f_exists(
      f_globally(f_and(f_dep({}, f_prop(o)), std::move(a))));
}

}  // namespace ttl
