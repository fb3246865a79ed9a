#include "ttl/reductions.hpp"

#include <stdexcept>

namespace ttl {

namespace {

FormulaPtr marker(const std::string& o) { return f_prop(o); }
FormulaPtr not_marker(const std::string& o) { return f_neg(f_prop(o)); }

FormulaPtr marker_flip_incl(const std::string& o) {
  return f_incl({marker(o)}, {not_marker(o)});
}

}  // namespace

std::map<std::string, FormulaPtr> tef_property_formulas(const std::string& o) {
  auto O = [&] { return marker(o); };
  auto NO = [&] { return not_marker(o); };
  std::map<std::string, FormulaPtr> out;

  out["synch"] = f_globally(f_bor(f_and(O(), f_next(NO())),
                                  f_and(NO(), f_next(O()))));
  out["synch_split"] =
      f_and(O(), f_globally(f_or(f_and(O(), f_next(NO())),
                                 f_and(NO(), f_next(O())))));
  out["fair"] = f_a1(f_globally(f_or(f_and(O(), f_finally(NO())),
                                     f_and(NO(), f_finally(O())))));
  out["defect"] =
      f_bor(f_or(f_and(f_and(f_ne(), O()), f_next(O())), f_true()),
            f_or(f_and(f_and(f_ne(), NO()), f_next(NO())), f_true()));

  out["ctl_synch"] = f_bor(f_and(O(), f_exists(f_next(NO()))),
                           f_and(NO(), f_exists(f_next(O()))));
  out["ctl_synch_split"] = f_or(f_and(O(), f_exists(f_next(NO()))),
                                f_and(NO(), f_exists(f_next(O()))));
  out["ctl_synch_incl"] =
      f_or(f_and(O(), f_forall(f_next(f_or(NO(), marker_flip_incl(o))))),
           f_and(NO(), f_forall(f_next(f_or(O(), marker_flip_incl(o))))));
  return out;
}

namespace {

void require_plain_ltl(const FormulaPtr& f, const std::string& o) {
  if (!is_ltl(f))
    throw std::invalid_argument(
        "embedding input must be a quantifier-free temporal formula");
  if (props_of(f).count(o))
    throw std::invalid_argument("embedding input must not mention " + o);
}

}  // namespace

FormulaPtr embed_sync_ltl_exists(const FormulaPtr& f, const std::string& o,
                                 bool use_split_variant) {
  require_plain_ltl(f, o);
  auto pins = tef_property_formulas(o);
  return f_and(f, use_split_variant ? pins["synch_split"] : pins["synch"]);
}

FormulaPtr embed_sync_ltl_forall(const FormulaPtr& f, const std::string& o) {
  require_plain_ltl(f, o);
  auto pins = tef_property_formulas(o);
  // Boolean disjunction: the defect escape must absorb the whole team on
  // desynchronized tefs and vanish entirely on the synchronous one (the
  // detector is false on empty sub-teams, so a split cannot express this).
  return f_bor(f, f_finally(pins["defect"]));
}

namespace {

FormulaPtr ctl_star_exists(const FormulaPtr& f, const std::string& o) {
  auto dep_o = [&] { return f_dep({}, marker(o)); };
  switch (f->kind) {
    case Kind::Next:
      return f_exists(f_next(f_and(dep_o(), ctl_star_exists(f->kid(0), o))));
    case Kind::Until:
      return f_exists(
          f_until(f_and(ctl_star_exists(f->kid(0), o), dep_o()),
                  f_and(ctl_star_exists(f->kid(1), o), dep_o())));
    case Kind::WUntil:
      return f_exists(
          f_wuntil(f_and(ctl_star_exists(f->kid(0), o), dep_o()),
                   f_and(ctl_star_exists(f->kid(1), o), dep_o())));
    default: {
      if (f->kids.empty()) return f;
      auto g = std::make_shared<Formula>(*f);
      for (auto& k : g->kids) k = ctl_star_exists(k, o);
      return g;
    }
  }
}

FormulaPtr ctl_star_forall(const FormulaPtr& f, const std::string& o) {
  auto escape = [&] { return marker_flip_incl(o); };
  switch (f->kind) {
    case Kind::Next:
      return f_forall(
          f_next(f_or(escape(), ctl_star_forall(f->kid(0), o))));
    case Kind::Until:
      return f_forall(
          f_until(ctl_star_forall(f->kid(0), o),
                  f_or(ctl_star_forall(f->kid(1), o), escape())));
    case Kind::WUntil:
      return f_forall(
          f_wuntil(ctl_star_forall(f->kid(0), o),
                   f_or(ctl_star_forall(f->kid(1), o), escape())));
    default: {
      if (f->kids.empty()) return f;
      auto g = std::make_shared<Formula>(*f);
      for (auto& k : g->kids) k = ctl_star_forall(k, o);
      return g;
    }
  }
}

}  // namespace

FormulaPtr embed_sync_ctl(const FormulaPtr& f, CtlVariant variant,
                          const std::string& o) {
  require_plain_ltl(f, o);
  auto pins = tef_property_formulas(o);
  if (variant == CtlVariant::Exists)
    return f_and(ctl_star_exists(f, o),
                 f_exists(f_globally(pins["ctl_synch"])));
  return f_and(ctl_star_forall(f, o),
               f_and(marker(o),
                     f_forall(f_globally(pins["ctl_synch_incl"]))));
}

void CounterMachine::validate() const {
  if (instrs.empty()) throw std::invalid_argument("machine has no instructions");
  for (auto& in : instrs)
    if (in.goto1 >= instrs.size() || in.goto2 >= instrs.size())
      throw std::invalid_argument("goto target out of range");
}

namespace {

struct N2cBuilder {
  const CounterMachine& m;
  APContext& ap;
  const N2cOptions& opts;
  uint32_t n;
  std::string o = "o";

  N2cBuilder(const CounterMachine& mm, APContext& a, const N2cOptions& oo)
      : m(mm), ap(a), opts(oo), n(static_cast<uint32_t>(mm.instrs.size())) {}

  FormulaPtr label(uint32_t j) { return f_prop("i" + std::to_string(j)); }

  FormulaPtr only(uint32_t j) {
    if (!opts.strict_only) return label(j);
    FormulaPtr f = label(j);
    for (uint32_t k = 0; k < n; ++k)
      if (k != j) f = f_and(f, f_neg(label(k)));
    return f;
  }

  FormulaPtr hash() { return f_prop("#"); }
  FormulaPtr cprop() { return f_prop("c"); }

  FormulaPtr halt() {
    return sync_next(
        sync_until(f_and(f_dep({}, cprop()), f_neg(hash())), hash(), o), o);
  }

  std::string type_name(bool left, int which) {
    return std::string(left ? "l" : "r") + std::to_string(which);
  }
  FormulaPtr type_prop(bool left, int which) {
    return f_prop("p_" + type_name(left, which));
  }
  FormulaPtr ident_prop(bool left, int which) {
    return f_prop("q_" + type_name(left, which));
  }
  FormulaPtr side_prop(bool left) { return f_prop(left ? "t_l" : "t_r"); }

  FormulaPtr counter_inc(bool left) {
    auto stop = f_or(f_and(type_prop(left, 2), f_neg(cprop())),
                     f_and(f_and(type_prop(left, 1), cprop()),
                           sync_next(f_neg(cprop()), o)));
    auto count = sync_next(sync_until(cprop(), stop, o), o);
    return f_or(count, f_and(halt(), side_prop(!left)));
  }

  FormulaPtr counter_dec(bool left) {
    auto stop = f_or(f_and(f_and(type_prop(left, 2), cprop()),
                           sync_next(f_neg(cprop()), o)),
                     f_and(type_prop(left, 1), f_neg(cprop())));
    auto count = sync_next(sync_until(cprop(), stop, o), o);
    return f_or(count, f_and(halt(), side_prop(!left)));
  }

  FormulaPtr next_hash_with(FormulaPtr tail) {
    return f_exists(f_until(f_neg(hash()), f_and(hash(), std::move(tail))));
  }

  FormulaPtr instr_formula(uint32_t i) {
    const CounterInstr& in = m.instrs[i];
    switch (in.op) {
      case CounterInstr::Op::Inc:
      case CounterInstr::Op::Dec: {
        auto base = in.op == CounterInstr::Op::Inc ? counter_inc(in.left)
                                                   : counter_dec(in.left);
        auto targets = f_bor(label(in.goto1), label(in.goto2));
        return f_and(base, sync_next(next_hash_with(targets), o));
      }
      case CounterInstr::Op::IfZero: {
        auto q2 = ident_prop(in.left, 2);
        auto then_side =
            f_and(f_or(f_and(q2, f_neg(cprop())), f_neg(q2)),
                  next_hash_with(label(in.goto1)));
        auto else_side = f_and(f_or(f_and(q2, cprop()), f_neg(q2)),
                               next_hash_with(label(in.goto2)));
        return f_and(sync_next(f_bor(then_side, else_side), o), halt());
      }
    }
    throw std::logic_error("unreachable");
  }

  FormulaPtr valid() {
    FormulaPtr cases = f_and(only(0), instr_formula(0));
    for (uint32_t i = 1; i < n; ++i)
      cases = f_or(cases, f_and(only(i), instr_formula(i)));
    auto body = f_and(f_dep({}, hash()),
                      f_or(f_and(hash(), cases), f_neg(hash())));
    return f_exists(f_globally(body));
  }

  FormulaPtr brec(uint32_t b) {
    return f_exists(f_globally(f_exists(f_finally(label(b)))));
  }

  FormulaPtr single_agreement() {
    FormulaPtr conj = f_dep({}, hash());
    conj = f_and(conj, f_dep({}, cprop()));
    for (uint32_t j = 0; j < n; ++j) conj = f_and(conj, f_dep({}, label(j)));
    return sync_globally(conj, o);
  }

  FormulaPtr struc() {
    FormulaPtr idents = f_exists(f_next(ident_prop(true, 1)));
    idents = f_and(idents, f_exists(f_next(ident_prop(true, 2))));
    idents = f_and(idents, f_exists(f_next(ident_prop(false, 1))));
    idents = f_and(idents, f_exists(f_next(ident_prop(false, 2))));
    auto grouped = f_or(
        f_or(f_and(side_prop(true), single_agreement()),
             f_and(side_prop(false), single_agreement())),
        f_neg(f_prop("p_top")));
    return f_and(idents, grouped);
  }

  FormulaPtr comp(uint32_t b) {
    auto box_run = f_exists(
        f_until(f_prop("box"), f_and(f_prop("fbox"), valid())));
    return f_or(f_neg(f_prop("p_top")),
                f_and(f_and(box_run, brec(b)), label(0)));
  }

  FormulaPtr formula(uint32_t b) {
    auto tail = f_and(struc(), sync_next(sync_next(comp(b), o), o));
    return sync_next(f_or(f_prop("p_top"), tail), o);
  }

  // The structure, before the alternation marker is woven in.
  KripkeStructure structure() {
    KripkeStructure k;
    auto add_state = [&](const std::string& name, PropSet label) {
      k.states.push_back(name);
      k.labels.push_back(label);
      k.succ.emplace_back();
      return static_cast<uint32_t>(k.states.size() - 1);
    };
    auto bit = [&](const std::string& p) { return 1u << ap.intern(p); };
    auto edge = [&](uint32_t a, uint32_t b) { k.succ[a].push_back(b); };

    uint32_t root = add_state("r", 0);
    k.root = root;

    for (bool left : {true, false}) {
      for (int which : {1, 2}) {
        std::string t = type_name(left, which);
        PropSet base = bit("p_top") | bit("p_" + t) | bit(left ? "t_l" : "t_r");
        PropSet other_idents = 0;
        for (bool l2 : {true, false})
          for (int w2 : {1, 2})
            if (!(l2 == left && w2 == which))
              other_idents |= bit("q_" + type_name(l2, w2));
        uint32_t a = add_state("a_" + t, base | other_idents);
        uint32_t bst = add_state("b_" + t, base | bit("q_" + t));
        edge(root, a);
        edge(a, bst);

        // Three hash groups: entry (box), one interval ahead (fbox), and
        // the recurring tail group.
        std::vector<std::vector<uint32_t>> boxes(3);
        std::vector<uint32_t> cst(3), pad(3);
        for (int g = 0; g < 3; ++g) {
          PropSet markbit = g == 0 ? bit("box") : (g == 1 ? bit("fbox") : 0);
          for (uint32_t j = 0; j < n; ++j)
            boxes[g].push_back(add_state(
                "h" + std::to_string(g) + "_" + t + "_" + std::to_string(j),
                base | bit("#") | bit("i" + std::to_string(j)) | markbit));
          cst[g] = add_state("c" + std::to_string(g) + "_" + t,
                             base | bit("c"));
          pad[g] = add_state("n" + std::to_string(g) + "_" + t, base);
        }
        for (uint32_t j = 0; j < n; ++j) edge(bst, boxes[0][j]);
        for (int g = 0; g < 3; ++g) {
          int next = g == 2 ? 2 : g + 1;
          for (uint32_t j = 0; j < n; ++j) {
            edge(boxes[g][j], cst[g]);
            edge(boxes[g][j], pad[g]);
            for (uint32_t j2 = 0; j2 < n; ++j2)
              edge(boxes[g][j], boxes[next][j2]);
          }
          edge(cst[g], cst[g]);
          edge(cst[g], pad[g]);
          edge(pad[g], pad[g]);
          for (uint32_t j2 = 0; j2 < n; ++j2) {
            edge(cst[g], boxes[next][j2]);
            edge(pad[g], boxes[next][j2]);
          }
        }
      }
    }

    // Dummy part: no p_top, every identification proposition up front.
    PropSet all_idents = 0;
    for (bool l2 : {true, false})
      for (int w2 : {1, 2}) all_idents |= bit("q_" + type_name(l2, w2));
    uint32_t d0 = add_state("d0", all_idents);
    uint32_t d1 = add_state("d1", 0);
    edge(root, d0);
    edge(d0, d1);
    edge(d1, d1);
    return k;
  }
};

}  // namespace

N2cEncoding encode_n2c(const CounterMachine& m, uint32_t recurring_label,
                       APContext& ap, const N2cOptions& opts) {
  m.validate();
  if (recurring_label >= m.instrs.size())
    throw std::invalid_argument("recurring label out of range");
  N2cBuilder b(m, ap, opts);
  N2cEncoding out;
  out.recurring_label = recurring_label;
  out.formula = b.formula(recurring_label);
  KripkeStructure base = b.structure();
  out.structure = alternation_transform(base, ap.intern("o"), false);
  out.structure.validate();
  return out;
}

}  // namespace ttl
