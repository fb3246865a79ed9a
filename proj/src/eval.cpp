#include "ttl/eval.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace ttl {

bool ltl_eval(const LassoTrace& t, size_t i, const FormulaPtr& f,
              const APContext& ap) {
  size_t span = t.prefix.size() + t.loop.size();
  auto truth = [&](const FormulaPtr& g, auto&& self) -> std::vector<bool> {
    std::vector<bool> v(span);
    auto next_pos = [&](size_t p) {
      return p + 1 < span ? p + 1 : t.prefix.size();
    };
    switch (g->kind) {
      case Kind::True:
        v.assign(span, true);
        return v;
      case Kind::False:
        return v;
      case Kind::Prop:
      case Kind::Neg:
      case Kind::And:
      case Kind::Or:
      case Kind::BOr: {
        if (is_propositional(g)) {
          for (size_t p = 0; p < span; ++p)
            v[p] = prop_value(g, t.at(p), ap);
          return v;
        }
        auto a = self(g->kid(0), self), b = self(g->kid(1), self);
        for (size_t p = 0; p < span; ++p)
          v[p] = g->kind == Kind::And ? (a[p] && b[p]) : (a[p] || b[p]);
        return v;
      }
      case Kind::Next: {
        auto a = self(g->kid(0), self);
        for (size_t p = 0; p < span; ++p) v[p] = a[next_pos(p)];
        return v;
      }
      case Kind::Until:
      case Kind::WUntil: {
        auto a = self(g->kid(0), self), b = self(g->kid(1), self);
        v.assign(span, g->kind == Kind::WUntil);  // lfp from false, gfp from true
        for (size_t it = 0; it <= span; ++it) {
          bool changed = false;
          for (size_t p = span; p-- > 0;) {
            bool nv = b[p] || (a[p] && v[next_pos(p)]);
            if (nv != v[p]) {
              v[p] = nv;
              changed = true;
            }
          }
          if (!changed) break;
        }
        return v;
      }
      default:
        throw std::invalid_argument("not an LTL formula: " +
                                    print_formula(g));
    }
  };
  auto v = truth(f, truth);
  return v[t.canonical_pos(i)];
}

namespace {

struct Evaluator {
  const Team& team;
  const TefFamily& family;
  const APContext& ap;
  size_t dwell;

  Evaluator(const Team& t, const TefFamily& fam, const APContext& a)
      : team(t), family(fam), ap(a), dwell(default_dwell_bound(t)) {}

  // Positions are threaded alongside the global step to avoid replaying
  // the tef from the start. The family summary (switch budget consumed,
  // synchrony so far) is part of the configuration: quantifier
  // continuations depend on it, so cycle detection must see it too.
  struct At {
    const Tef* tef;
    size_t i;
    std::vector<uint32_t> pos;
    uint32_t switches = 0;  // capped
    int last_trace = -1;
    bool singletons = true;
    bool all_full = true;

    At advanced() const {
      At n = *this;
      ++n.i;
      AdvSet s = tef->step(i);
      AdvSet full = tef->n >= 32 ? ~0u : (1u << tef->n) - 1u;
      for (uint32_t t = 0; t < tef->n; ++t)
        if (s >> t & 1u) ++n.pos[t];
      n.all_full = all_full && s == full;
      if (std::popcount(s) == 1) {
        int d = std::countr_zero(s);
        if (last_trace >= 0 && d != last_trace)
          n.switches = std::min(switches + 1, 1000u);
        n.last_trace = d;
      } else {
        n.singletons = false;
      }
      return n;
    }
  };

  At start(const Tef& tef, size_t i) const {
    At at{&tef, 0, tef.init};
    for (size_t j = 0; j < i; ++j) at = at.advanced();
    return at;
  }

  bool lit_value(const FormulaPtr& g, const At& at, uint32_t t) const {
    return prop_value(g, team.trace(t).at(at.pos[t]), ap);
  }

  // Only the family-relevant part of the history goes into the key:
  // unbounded counters (such as the raw switch count under a family that
  // ignores it) would keep configurations from ever repeating.
  std::vector<uint32_t> config_key(const At& at, uint32_t live) const {
    std::vector<uint32_t> key;
    key.push_back(live);
    for (size_t t = 0; t < team.size(); ++t)
      key.push_back(
          static_cast<uint32_t>(team.trace(t).canonical_pos(at.pos[t])));
    key.push_back(static_cast<uint32_t>(at.tef->phase(at.i)));
    switch (family.kind) {
      case TefFamily::Kind::Synchronous:
        key.push_back(at.all_full);
        break;
      case TefFamily::Kind::KContextBounded:
        key.push_back(std::min(at.switches, family.k + 1));
        key.push_back(static_cast<uint32_t>(at.last_trace + 1));
        key.push_back(at.singletons);
        break;
      default:
        break;  // quantifiers over these families are rejected anyway
    }
    return key;
  }

  bool sat(const At& at, uint32_t live, const FormulaPtr& f) {
    switch (f->kind) {
      case Kind::True:
        return true;
      case Kind::False:
        return live == 0;
      case Kind::NE:
        return live != 0;
      case Kind::Prop:
      case Kind::Neg: {
        for (uint32_t t = 0; t < team.size(); ++t)
          if ((live >> t & 1u) && !lit_value(f, at, t)) return false;
        return true;
      }
      case Kind::And:
        return sat(at, live, f->kid(0)) && sat(at, live, f->kid(1));
      case Kind::BOr:
        return sat(at, live, f->kid(0)) || sat(at, live, f->kid(1));
      case Kind::Or: {
        if (is_pointwise(f)) {
          for (uint32_t t = 0; t < team.size(); ++t)
            if ((live >> t & 1u) && !lit_value(f, at, t)) return false;
          return true;
        }
        for (uint32_t sub = live;; sub = (sub - 1) & live) {
          if (sat(at, sub, f->kid(0)) && sat(at, live & ~sub, f->kid(1)))
            return true;
          if (sub == 0) break;
        }
        return false;
      }
      case Kind::DualOr: {
        for (uint32_t sub = live;; sub = (sub - 1) & live) {
          if (!sat(at, sub, f->kid(0)) && !sat(at, live & ~sub, f->kid(1)))
            return false;
          if (sub == 0) break;
        }
        return true;
      }
      case Kind::Next:
        return sat(at.advanced(), live, f->kid(0));
      case Kind::Until:
      case Kind::WUntil: {
        std::set<std::vector<uint32_t>> seen;
        At cur = at;
        while (true) {
          if (!seen.insert(config_key(cur, live)).second)
            return f->kind == Kind::WUntil;  // cycle: gfp holds, lfp fails
          if (sat(cur, live, f->kid(1))) return true;
          if (!sat(cur, live, f->kid(0))) return false;
          cur = cur.advanced();
        }
      }
      case Kind::Exists: {
        for (auto& cont : continuations(*at.tef, at.i))
          if (sat(start(cont, at.i), live, f->kid(0))) return true;
        return false;
      }
      case Kind::Forall:
      case Kind::NExists: {
        for (auto& cont : continuations(*at.tef, at.i)) {
          bool inner = sat(start(cont, at.i), live, f->kid(0));
          if (f->kind == Kind::NExists) inner = !inner;
          if (!inner) return false;
        }
        return true;
      }
      case Kind::Dep:
      case Kind::DualDep: {
        bool holds = dep_holds(f, at, live);
        return f->kind == Kind::Dep ? holds : !holds;
      }
      case Kind::Incl:
      case Kind::DualIncl: {
        bool holds = incl_holds(f, at, live);
        return f->kind == Kind::Incl ? holds : !holds;
      }
      case Kind::A1: {
        for (uint32_t t = 0; t < team.size(); ++t)
          if ((live >> t & 1u) && !sat(at, 1u << t, f->kid(0))) return false;
        return true;
      }
      case Kind::E1: {
        for (uint32_t t = 0; t < team.size(); ++t)
          if ((live >> t & 1u) && sat(at, 1u << t, f->kid(0))) return true;
        return false;
      }
      case Kind::AS: {
        for (uint32_t sub = live;; sub = (sub - 1) & live) {
          if (!sat(at, sub, f->kid(0))) return false;
          if (sub == 0) break;
        }
        return true;
      }
      case Kind::ES: {
        for (uint32_t sub = live;; sub = (sub - 1) & live) {
          if (sat(at, sub, f->kid(0))) return true;
          if (sub == 0) break;
        }
        return false;
      }
      case Kind::GenAtom: {
        std::set<uint32_t> tuples;
        for (uint32_t t = 0; t < team.size(); ++t) {
          if (!(live >> t & 1u)) continue;
          uint32_t tup = 0;
          for (size_t j = 0; j < f->kids.size(); ++j)
            if (lit_value(f->kid(j), at, t)) tup |= 1u << j;
          tuples.insert(tup);
        }
        return f->table->contains(tuples);
      }
    }
    throw std::logic_error("unreachable");
  }

  bool dep_holds(const FormulaPtr& f, const At& at, uint32_t live) const {
    size_t k = f->kids.size() - 1;
    for (uint32_t a = 0; a < team.size(); ++a) {
      if (!(live >> a & 1u)) continue;
      for (uint32_t b = a + 1; b < team.size(); ++b) {
        if (!(live >> b & 1u)) continue;
        bool agree = true;
        for (size_t j = 0; j < k && agree; ++j)
          agree = lit_value(f->kid(j), at, a) == lit_value(f->kid(j), at, b);
        if (agree && lit_value(f->kids.back(), at, a) !=
                         lit_value(f->kids.back(), at, b))
          return false;
      }
    }
    return true;
  }

  bool incl_holds(const FormulaPtr& f, const At& at, uint32_t live) const {
    size_t half = f->kids.size() / 2;
    for (uint32_t a = 0; a < team.size(); ++a) {
      if (!(live >> a & 1u)) continue;
      bool found = false;
      for (uint32_t b = 0; b < team.size() && !found; ++b) {
        if (!(live >> b & 1u)) continue;
        bool match = true;
        for (size_t j = 0; j < half && match; ++j)
          match = lit_value(f->kid(j), at, a) ==
                  lit_value(f->kid(half + j), at, b);
        found = match;
      }
      if (!found) return false;
    }
    return true;
  }

  std::vector<Tef> continuations(const Tef& tef, size_t i) const {
    return enumerate_continuations(family, tef, i, dwell);
  }
};

}  // namespace

bool eval(const EvalConfig& cfg, const FormulaPtr& f, const TefFamily& family,
          const APContext& ap) {
  if (!cfg.team) throw std::invalid_argument("missing team");
  if (cfg.tef.n != cfg.team->size())
    throw std::invalid_argument("tef size does not match team");
  Evaluator ev(*cfg.team, family, ap);
  return ev.sat(ev.start(cfg.tef, cfg.global_index), cfg.live, f);
}

bool eval_team(const Team& team, const Tef& tef, const FormulaPtr& f,
               const TefFamily& family, const APContext& ap) {
  uint32_t full = team.size() >= 32 ? ~0u : (1u << team.size()) - 1u;
  return eval({&team, tef, 0, full}, f, family, ap);
}

ModeResult check_mode(const Team& team, const FormulaPtr& f, Mode mode,
                      const TefFamily& family, const APContext& ap) {
  std::vector<Tef> initial;
  if (mode == Mode::Synchronous) {
    initial = {Tef::synchronous(static_cast<uint32_t>(team.size()))};
  } else {
    initial = enumerate_family(family, team, default_dwell_bound(team));
  }
  ModeResult res;
  if (mode == Mode::Exists) {
    for (auto& tef : initial)
      if (eval_team(team, tef, f, family, ap)) {
        res.verdict = true;
        res.witness = tef;
        return res;
      }
    res.verdict = false;
    return res;
  }
  for (auto& tef : initial) {
    if (!eval_team(team, tef, f, family, ap)) {
      res.verdict = false;
      res.witness = tef;
      return res;
    }
  }
  res.verdict = true;
  return res;
}

}  // namespace ttl
