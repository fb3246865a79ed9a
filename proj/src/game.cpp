#include "ttl/game.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ttl {

uint32_t GameArena::add(bool automaton_owned, bool accepting,
                        std::string label) {
  verts.push_back({automaton_owned, accepting, std::move(label), {}});
  return static_cast<uint32_t>(verts.size() - 1);
}

void GameArena::check_total() const {
  for (auto& v : verts)
    if (v.succ.empty()) throw std::runtime_error("vertex without successor");
}

std::string GameArena::to_dot() const {
  std::ostringstream os;
  os << "digraph arena {\n";
  for (size_t i = 0; i < verts.size(); ++i) {
    os << "  v" << i << " [shape="
       << (verts[i].automaton_owned ? "ellipse" : "box")
       << (verts[i].accepting ? ",peripheries=2" : "") << ",label=\""
       << (verts[i].label.empty() ? "v" + std::to_string(i) : verts[i].label)
       << "\"];\n";
  }
  for (size_t i = 0; i < verts.size(); ++i)
    for (uint32_t j : verts[i].succ) os << "  v" << i << " -> v" << j << ";\n";
  os << "}\n";
  return os.str();
}

GameSolution solve_buchi_game(const GameArena& arena) {
  arena.check_total();
  size_t nv = arena.verts.size();

  std::vector<std::vector<uint32_t>> succs(nv);
  for (uint32_t v = 0; v < nv; ++v) {
    succs[v] = arena.verts[v].succ;
    std::sort(succs[v].begin(), succs[v].end());
    succs[v].erase(std::unique(succs[v].begin(), succs[v].end()),
                   succs[v].end());
  }
  std::vector<std::vector<uint32_t>> preds(nv);
  for (uint32_t v = 0; v < nv; ++v)
    for (uint32_t w : succs[v]) preds[w].push_back(v);

  GameSolution sol;
  sol.automaton_wins.assign(nv, false);
  sol.strategy.assign(nv, 0);
  for (uint32_t v = 0; v < nv; ++v) sol.strategy[v] = succs[v][0];

  std::vector<bool> active(nv, true);

  auto attract = [&](const std::vector<uint32_t>& base, bool for_automaton,
                     std::vector<uint32_t>& strat) {
    std::vector<bool> in(nv, false);
    std::vector<uint32_t> cnt(nv, 0);
    for (uint32_t v = 0; v < nv; ++v) {
      if (!active[v]) continue;
      for (uint32_t w : succs[v])
        if (active[w]) ++cnt[v];
    }
    std::deque<uint32_t> queue;
    for (uint32_t v : base)
      if (active[v] && !in[v]) {
        in[v] = true;
        queue.push_back(v);
      }
    while (!queue.empty()) {
      uint32_t w = queue.front();
      queue.pop_front();
      for (uint32_t v : preds[w]) {
        if (!active[v] || in[v]) continue;
        bool mine = arena.verts[v].automaton_owned == for_automaton;
        if (mine) {
          in[v] = true;
          strat[v] = w;
          queue.push_back(v);
        } else if (--cnt[v] == 0) {
          in[v] = true;
          queue.push_back(v);
        }
      }
    }
    return in;
  };

  while (true) {
    std::vector<uint32_t> targets;
    for (uint32_t v = 0; v < nv; ++v)
      if (active[v] && arena.verts[v].accepting) targets.push_back(v);

    std::vector<uint32_t> reach_strat(nv, UINT32_MAX);
    auto reach = attract(targets, true, reach_strat);

    std::vector<uint32_t> trap;
    for (uint32_t v = 0; v < nv; ++v)
      if (active[v] && !reach[v]) trap.push_back(v);

    if (trap.empty()) {
      for (uint32_t v = 0; v < nv; ++v) {
        if (!active[v]) continue;
        sol.automaton_wins[v] = true;
        if (!arena.verts[v].automaton_owned) continue;
        if (arena.verts[v].accepting) {
          for (uint32_t w : succs[v])
            if (active[w]) {
              sol.strategy[v] = w;
              break;
            }
        } else if (reach_strat[v] != UINT32_MAX) {
          sol.strategy[v] = reach_strat[v];
        }
      }
      break;
    }

    // Pathfinder keeps the play outside the automaton's reach region.
    for (uint32_t v : trap) {
      if (arena.verts[v].automaton_owned) continue;
      for (uint32_t w : succs[v])
        if (!active[w] || !reach[w]) {
          sol.strategy[v] = w;
          break;
        }
    }
    std::vector<uint32_t> pf_strat(nv, UINT32_MAX);
    std::vector<bool> in_trap(nv, false);
    for (uint32_t v : trap) in_trap[v] = true;
    auto swallowed = attract(trap, false, pf_strat);
    for (uint32_t v = 0; v < nv; ++v) {
      if (!swallowed[v]) continue;
      if (!in_trap[v] && !arena.verts[v].automaton_owned &&
          pf_strat[v] != UINT32_MAX)
        sol.strategy[v] = pf_strat[v];
      active[v] = false;
    }
  }

  sol.automaton_wins_initial = sol.automaton_wins[arena.initial];
  return sol;
}

namespace {

constexpr uint32_t kNoTrace = 0xffffffffu;

struct FamState {
  std::vector<uint32_t> rel;  // k-synchronous relative offsets
  uint32_t last = kNoTrace;   // k-context-bounded advancing trace
  uint32_t switches = 0;

  static FamState initial(const TefFamily& fam, uint32_t n) {
    FamState s;
    if (fam.kind == TefFamily::Kind::KSynchronous) s.rel.assign(n, 0);
    return s;
  }

  bool step(const TefFamily& fam, uint32_t D, uint32_t n) {
    switch (fam.kind) {
      case TefFamily::Kind::Synchronous:
        return D == (n >= 32 ? ~0u : (1u << n) - 1u);
      case TefFamily::Kind::KSynchronous: {
        uint32_t lo = UINT32_MAX, hi = 0;
        for (uint32_t t = 0; t < n; ++t) {
          if (D >> t & 1u) ++rel[t];
          lo = std::min(lo, rel[t]);
          hi = std::max(hi, rel[t]);
        }
        if (hi - lo > fam.k) return false;
        for (uint32_t t = 0; t < n; ++t) rel[t] -= lo;
        return true;
      }
      case TefFamily::Kind::KContextBounded: {
        if (std::popcount(D) != 1) return false;
        uint32_t d = static_cast<uint32_t>(std::countr_zero(D));
        if (last != kNoTrace && d != last) {
          if (switches + 1 > fam.k) return false;
          ++switches;
        }
        last = d;
        return true;
      }
      case TefFamily::Kind::All:
        return true;
    }
    return false;
  }

  void pack(std::vector<uint32_t>& key) const {
    for (uint32_t r : rel) key.push_back(r);
    key.push_back(last);
    key.push_back(switches);
  }
};

struct MoveRecord {
  uint32_t advanced = 0;
  std::vector<PropSet> letters;        // automaton alphabet, full vector
  std::vector<uint32_t> kripke_state;  // per trace, when driving a structure
};

struct Ctx {
  const APContext& team_ap;
  TefFamily family;
  GameInput input;
  std::map<std::vector<uint64_t>, bool> memo;
};

PropSet project_letter(PropSet team_letter, const APContext& team_ap,
                       const std::vector<std::string>& props) {
  PropSet out = 0;
  for (size_t i = 0; i < props.size(); ++i)
    if (team_ap.has(team_letter, props[i])) out |= 1u << i;
  return out;
}

struct ArenaBuilder {
  const Aaba& aut;
  Ctx& ctx;
  uint32_t n;
  bool payload;
  const Gaaba* gaaba = nullptr;
  std::vector<bool> accepting_;
  std::vector<std::vector<bool>> in_set_;

  GameArena arena;
  std::map<std::vector<uint32_t>, uint32_t> ids;
  std::map<std::pair<uint32_t, uint32_t>, MoveRecord> moves;
  uint32_t lose_sink, win_sink;

  struct Config {
    std::vector<uint32_t> src;
    FamState fam;
  };
  std::deque<std::tuple<uint32_t, Config, uint32_t>> work;  // state, cfg, vert

  ArenaBuilder(const Aaba& a, Ctx& c) : aut(a), ctx(c), n(a.base.n) {
    payload = a.base.layer != nullptr;
    accepting_.assign(a.base.num_states, false);
    for (uint32_t q : a.accepting()) accepting_[q] = true;
    if (payload) {
      gaaba = a.degen_of.get();
      if (!gaaba)
        throw std::logic_error("translated automaton lacks its original");
      in_set_.assign(gaaba->accept_sets.size(),
                     std::vector<bool>(gaaba->num_states, false));
      for (size_t i = 0; i < gaaba->accept_sets.size(); ++i)
        for (uint32_t q : gaaba->accept_sets[i]) in_set_[i][q] = true;
    }
    lose_sink = arena.add(true, false, "lose");
    arena.edge(lose_sink, lose_sink);
    win_sink = arena.add(true, true, "win");
    arena.edge(win_sink, win_sink);
  }

  const TransLayer& layer() const { return *aut.base.layer; }

  Config initial_config() const {
    Config c;
    c.src.assign(n, 0);
    if (ctx.input.team)
      for (uint32_t t = 0; t < n; ++t)
        c.src[t] =
            static_cast<uint32_t>(ctx.input.team->trace(t).canonical_pos(0));
    if (ctx.input.kripke) c.src.assign(n, ctx.input.kripke->root);
    c.fam = FamState::initial(ctx.family, n);
    return c;
  }

  std::vector<uint32_t> config_key(uint32_t state, const Config& c) const {
    std::vector<uint32_t> key{state};
    for (uint32_t s : c.src) key.push_back(s);
    c.fam.pack(key);
    return key;
  }

  PropSet expected_letter(const Config& c, uint32_t d) const {
    if (ctx.input.team)
      return project_letter(ctx.input.team->trace(d).at(c.src[d]),
                            ctx.team_ap, aut.base.props);
    if (ctx.input.kripke)
      return project_letter(ctx.input.kripke->labels[c.src[d]], ctx.team_ap,
                            aut.base.props);
    return 0;
  }

  // ---- translated automata --------------------------------------------

  bool claims_valid(const ConSet& cs, const Config& c) {
    if (!ctx.input.free_letters) {
      for (uint32_t d = 0; d < n; ++d)
        if (cs.letters[d] != expected_letter(c, d)) return false;
    }
    for (uint32_t e : layer().space->quantified_entries(cs)) {
      uint32_t fid = layer().closure->entry_formula(e);
      IndexMask m = layer().closure->entry_mask(e);
      const FormulaPtr& f = layer().closure->formula(fid);
      bool inner = solve_nested(*layer().nested.at(fid), m, c, cs.letters);
      if (f->kind == Kind::Exists ? !inner : inner) return false;
    }
    return true;
  }

  bool solve_nested(const Aaba& sub, IndexMask m, const Config& c,
                    const std::vector<PropSet>& letters) {
    std::vector<uint64_t> key{reinterpret_cast<uint64_t>(&sub), m};
    for (uint32_t s : c.src) key.push_back(s);
    std::vector<uint32_t> fk;
    c.fam.pack(fk);
    for (uint32_t v : fk) key.push_back(v);
    for (PropSet l : letters) key.push_back(l);
    auto it = ctx.memo.find(key);
    if (it != ctx.memo.end()) return it->second;

    ArenaBuilder b(sub, ctx);
    b.arena.initial = b.entry_vertex(m, c, letters);
    b.drain();
    bool verdict = solve_buchi_game(b.arena).automaton_wins_initial;
    ctx.memo.emplace(std::move(key), verdict);
    return verdict;
  }

  uint32_t payload_vertex(uint32_t state, const Config& c) {
    auto key = config_key(state, c);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    uint32_t v = arena.add(true, accepting_[state]);
    ids.emplace(std::move(key), v);
    work.push_back({state, c, v});
    return v;
  }

  void drain() {
    while (!work.empty()) {
      auto [state, c, v] = work.front();
      work.pop_front();
      expand_payload(state, c, v);
    }
  }

  void expand_payload(uint32_t state, const Config& c, uint32_t v) {
    uint32_t orig = state / aut.degen_m;
    uint32_t idx = state % aut.degen_m;
    if (orig >= layer().states.size())
      throw std::logic_error("game reached a nested automaton state");
    const ConSet& cs = layer().states[orig];
    uint32_t j_next =
        in_set_[idx][orig] ? (idx + 1) % aut.degen_m : idx;
    bool any = false;
    uint32_t full = n >= 32 ? ~0u : (1u << n) - 1u;
    for (uint32_t D = 1; D <= full; ++D) {
      FamState fam2 = c.fam;
      if (!fam2.step(ctx.family, D, n)) continue;
      std::vector<Config> confs;
      {
        Config base = c;
        base.fam = fam2;
        confs.push_back(std::move(base));
      }
      for (uint32_t d = 0; d < n; ++d) {
        if (!(D >> d & 1u)) continue;
        std::vector<Config> next;
        for (auto& cc : confs) {
          if (ctx.input.team) {
            Config c2 = cc;
            c2.src[d] = static_cast<uint32_t>(
                ctx.input.team->trace(d).canonical_pos(cc.src[d] + 1));
            next.push_back(std::move(c2));
          } else if (ctx.input.kripke) {
            for (uint32_t s2 : ctx.input.kripke->succ[cc.src[d]]) {
              Config c2 = cc;
              c2.src[d] = s2;
              next.push_back(std::move(c2));
            }
          } else {
            next.push_back(cc);
          }
        }
        confs = std::move(next);
      }
      for (auto& c2 : confs) {
        std::vector<std::vector<PropSet>> letter_sets;
        if (ctx.input.free_letters) {
          letter_sets.assign(1, cs.letters);
          for (uint32_t d = 0; d < n; ++d) {
            if (!(D >> d & 1u)) continue;
            std::vector<std::vector<PropSet>> grown;
            for (auto& ls : letter_sets)
              for (PropSet l : layer().alphabet) {
                auto w = ls;
                w[d] = l;
                grown.push_back(std::move(w));
              }
            letter_sets = std::move(grown);
          }
        } else {
          auto ls = cs.letters;
          for (uint32_t d = 0; d < n; ++d)
            if (D >> d & 1u) ls[d] = expected_letter(c2, d);
          letter_sets.assign(1, std::move(ls));
        }
        for (auto& ls : letter_sets) {
          for (auto& s2 : layer().space->successors(cs, D, ls)) {
            auto q2 = layer().find_state(s2);
            if (!q2) continue;
            if (!claims_valid(s2, c2)) continue;
            uint32_t w = payload_vertex(*q2 * aut.degen_m + j_next, c2);
            arena.edge(v, w);
            MoveRecord mr;
            mr.advanced = D;
            mr.letters = ls;
            if (ctx.input.kripke) mr.kripke_state = c2.src;
            moves.emplace(std::make_pair(v, w), std::move(mr));
            any = true;
          }
        }
      }
    }
    if (!any) arena.edge(v, lose_sink);
  }

  // Entry point claiming the layer's root formula over index set m at the
  // given configuration.
  uint32_t entry_vertex(IndexMask m, const Config& c,
                        const std::vector<PropSet>& letters) {
    uint32_t start = arena.add(true, false, "start");
    uint32_t root_entry = layer().closure->entry(layer().closure->root_id(), m);
    bool any = false;
    for (auto& cs : layer().space->generate({root_entry}, letters)) {
      auto q = layer().find_state(cs);
      if (!q) continue;
      if (!claims_valid(cs, c)) continue;
      uint32_t v = payload_vertex(*q * aut.degen_m, c);
      arena.edge(start, v);
      MoveRecord mr;
      mr.advanced = 0;
      mr.letters = cs.letters;
      if (ctx.input.kripke) mr.kripke_state = c.src;
      moves.emplace(std::make_pair(start, v), std::move(mr));
      any = true;
    }
    if (!any) arena.edge(start, lose_sink);
    return start;
  }

  void build_payload_top() {
    Config c = initial_config();
    if (!ctx.input.free_letters) {
      std::vector<PropSet> letters(n, 0);
      for (uint32_t d = 0; d < n; ++d) letters[d] = expected_letter(c, d);
      arena.initial = entry_vertex(layer().closure->full_mask(), c, letters);
      drain();
      return;
    }
    // Free input: the initial letters are part of the automaton's choice.
    uint32_t start = arena.add(true, false, "start");
    arena.initial = start;
    uint32_t root_entry = layer().closure->entry(
        layer().closure->root_id(), layer().closure->full_mask());
    bool any = false;
    std::vector<std::vector<PropSet>> seeds{std::vector<PropSet>(n, 0)};
    for (uint32_t d = 0; d < n; ++d) {
      std::vector<std::vector<PropSet>> grown;
      for (auto& ls : seeds)
        for (PropSet l : layer().alphabet) {
          auto w = ls;
          w[d] = l;
          grown.push_back(std::move(w));
        }
      seeds = std::move(grown);
    }
    for (auto& letters : seeds) {
      for (auto& cs : layer().space->generate({root_entry}, letters)) {
        auto q = layer().find_state(cs);
        if (!q) continue;
        if (!claims_valid(cs, c)) continue;
        uint32_t v = payload_vertex(*q * aut.degen_m, c);
        arena.edge(start, v);
        MoveRecord mr;
        mr.advanced = 0;
        mr.letters = cs.letters;
        moves.emplace(std::make_pair(start, v), std::move(mr));
        any = true;
      }
    }
    if (!any) arena.edge(start, lose_sink);
    drain();
  }

  // ---- generic automata (explicit transition formulas) -----------------

  uint32_t generic_state_vertex(uint32_t state, const Config& c) {
    auto key = config_key(state, c);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    uint32_t v = arena.add(true, accepting_[state]);
    ids.emplace(std::move(key), v);
    expand_generic(state, c, v);
    return v;
  }

  void expand_generic(uint32_t state, const Config& c, uint32_t v) {
    if (ctx.family.kind == TefFamily::Kind::Synchronous && n > 1)
      throw std::runtime_error(
          "synchronous advancement over explicit automata requires n = 1");
    bool any = false;
    for (uint32_t d = 0; d < n; ++d) {
      FamState fam2 = c.fam;
      if (!fam2.step(ctx.family, 1u << d, n)) continue;
      std::vector<PropSet> sigmas;
      if (ctx.input.free_letters) {
        for (PropSet l = 0; l < (1u << aut.base.props.size()); ++l)
          sigmas.push_back(l);
      } else {
        sigmas.push_back(expected_letter(c, d));
      }
      for (PropSet sigma : sigmas) {
        std::vector<Config> confs;
        if (ctx.input.team) {
          Config c2 = c;
          c2.fam = fam2;
          c2.src[d] = static_cast<uint32_t>(
              ctx.input.team->trace(d).canonical_pos(c.src[d] + 1));
          confs.push_back(std::move(c2));
        } else if (ctx.input.kripke) {
          for (uint32_t s2 : ctx.input.kripke->succ[c.src[d]]) {
            Config c2 = c;
            c2.fam = fam2;
            c2.src[d] = s2;
            confs.push_back(std::move(c2));
          }
        } else {
          Config c2 = c;
          c2.fam = fam2;
          confs.push_back(std::move(c2));
        }
        const PosBool& pb = aut.base.trans(state, sigma, d + 1);
        for (auto& c2 : confs) {
          uint32_t w = generic_bool_vertex(pb, c2);
          arena.edge(v, w);
          MoveRecord mr;
          mr.advanced = 1u << d;
          mr.letters.assign(n, 0);
          mr.letters[d] = sigma;
          if (ctx.input.kripke) mr.kripke_state = c2.src;
          moves.emplace(std::make_pair(v, w), std::move(mr));
          any = true;
        }
      }
    }
    if (!any) arena.edge(v, lose_sink);
  }

  uint32_t generic_bool_vertex(const PosBool& pb, const Config& c) {
    switch (pb.node) {
      case PosBool::Node::True:
        return win_sink;
      case PosBool::Node::False:
        return lose_sink;
      case PosBool::Node::State:
        return generic_state_vertex(pb.state, c);
      case PosBool::Node::And:
      case PosBool::Node::Or: {
        uint32_t v = arena.add(pb.node == PosBool::Node::Or, false);
        for (auto& k : pb.kids) arena.edge(v, generic_bool_vertex(k, c));
        return v;
      }
    }
    return lose_sink;
  }

  void build() {
    if (payload) {
      build_payload_top();
    } else {
      Config c = initial_config();
      uint32_t start = arena.add(true, false, "start");
      arena.initial = start;
      arena.edge(start, generic_bool_vertex(aut.base.init, c));
    }
  }
};

GameResult solve_and_extract(ArenaBuilder& b, const Ctx& ctx) {
  GameResult res;
  res.arena_vertices = b.arena.verts.size();
  auto sol = solve_buchi_game(b.arena);
  res.accepted = sol.automaton_wins_initial;
  if (!res.accepted) return res;

  uint32_t n = b.n;
  std::vector<uint32_t> path{b.arena.initial};
  std::map<uint32_t, size_t> seen{{b.arena.initial, 0}};
  while (true) {
    uint32_t cur = path.back();
    uint32_t nxt = b.arena.verts[cur].automaton_owned
                       ? sol.strategy[cur]
                       : b.arena.verts[cur].succ[0];
    if (seen.count(nxt)) {
      path.push_back(nxt);
      break;
    }
    seen.emplace(nxt, path.size());
    path.push_back(nxt);
  }
  size_t loop_at = seen[path.back()];

  std::vector<AdvSet> steps;
  size_t steps_before_loop = 0;
  std::vector<std::vector<PropSet>> adv_letters(n);
  std::vector<std::vector<uint32_t>> adv_states(n);
  std::vector<size_t> adv_before_loop(n, 0);
  std::vector<PropSet> init_letters(n, 0);
  std::vector<uint32_t> init_states(n, 0);
  if (ctx.input.kripke) init_states.assign(n, ctx.input.kripke->root);

  for (size_t i = 0; i + 1 < path.size(); ++i) {
    if (i == loop_at) {
      steps_before_loop = steps.size();
      for (uint32_t d = 0; d < n; ++d)
        adv_before_loop[d] = adv_letters[d].size();
    }
    auto mit = b.moves.find({path[i], path[i + 1]});
    if (mit == b.moves.end()) continue;
    const MoveRecord& mr = mit->second;
    if (mr.advanced == 0) {
      init_letters = mr.letters;
      if (!mr.kripke_state.empty()) init_states = mr.kripke_state;
      continue;
    }
    steps.push_back(mr.advanced);
    for (uint32_t d = 0; d < n; ++d) {
      if (!(mr.advanced >> d & 1u)) continue;
      adv_letters[d].push_back(mr.letters[d]);
      if (!mr.kripke_state.empty()) adv_states[d].push_back(mr.kripke_state[d]);
    }
  }

  uint32_t full = n >= 32 ? ~0u : (1u << n) - 1u;
  {
    std::vector<AdvSet> pre(steps.begin(), steps.begin() + steps_before_loop);
    std::vector<AdvSet> loop(steps.begin() + steps_before_loop, steps.end());
    if (loop.empty()) loop = {full};
    res.witness_tef =
        Tef(n, std::vector<uint32_t>(n, 0), std::move(pre), std::move(loop));
  }

  if (ctx.input.kripke || ctx.input.free_letters) {
    auto to_team_letter = [&](PropSet aletter) {
      PropSet out = 0;
      for (size_t i = 0; i < b.aut.base.props.size(); ++i)
        if (aletter >> i & 1u) {
          auto bit = ctx.team_ap.find(b.aut.base.props[i]);
          if (bit) out |= 1u << *bit;
        }
      return out;
    };
    Team team;
    for (uint32_t d = 0; d < n; ++d) {
      std::vector<PropSet> word;
      if (ctx.input.kripke)
        word.push_back(ctx.input.kripke->labels[init_states[d]]);
      else
        word.push_back(to_team_letter(init_letters[d]));
      for (size_t j = 0; j < adv_letters[d].size(); ++j)
        word.push_back(ctx.input.kripke
                           ? ctx.input.kripke->labels[adv_states[d][j]]
                           : to_team_letter(adv_letters[d][j]));
      size_t pre_len = adv_before_loop[d] + 1;
      std::vector<PropSet> prefix(word.begin(), word.begin() + pre_len);
      std::vector<PropSet> loop(word.begin() + pre_len, word.end());
      if (loop.empty()) {
        if (ctx.input.kripke) {
          // The trace froze; extend with a real cycle of the structure.
          uint32_t at = adv_states[d].empty() ? init_states[d]
                                              : adv_states[d].back();
          std::vector<uint32_t> walk{at};
          std::map<uint32_t, size_t> pos{{at, 0}};
          uint32_t cur = at;
          while (true) {
            cur = ctx.input.kripke->succ[cur][0];
            auto it = pos.find(cur);
            if (it != pos.end()) {
              // Word continues walk[1..], then cycles from walk[p].
              for (size_t j = 1; j < walk.size(); ++j)
                prefix.push_back(ctx.input.kripke->labels[walk[j]]);
              for (size_t j = it->second; j < walk.size(); ++j)
                loop.push_back(ctx.input.kripke->labels[walk[j]]);
              break;
            }
            pos.emplace(cur, walk.size());
            walk.push_back(cur);
          }
        } else {
          loop = {0};
        }
      }
      team.add(d, LassoTrace(std::move(prefix), std::move(loop)));
    }
    res.witness_team = std::move(team);
  }
  return res;
}

}  // namespace

GameArena membership_game(const Aaba& a, const Team& team,
                          const APContext& ap, const TefFamily& family) {
  Ctx ctx{ap, family, GameInput::of_team(team), {}};
  ArenaBuilder b(a, ctx);
  b.build();
  return std::move(b.arena);
}

GameResult run_acceptance(const Aaba& a, const GameInput& input,
                          const APContext& ap, const TefFamily& family) {
  if (!input.team && a.base.layer && !a.base.layer->nested.empty())
    throw std::runtime_error(
        "tef-quantified subformulas are only decided against a fixed team: "
        "a team search would let quantifier sub-runs assume futures the "
        "constructed traces need not have");
  Ctx ctx{ap, family, input, {}};
  ArenaBuilder b(a, ctx);
  b.build();
  return solve_and_extract(b, ctx);
}

GameResult emptiness(const Aaba& a, const TefFamily& family,
                     const GameInput& input, const APContext& ap) {
  if (family.kind == TefFamily::Kind::All)
    throw std::runtime_error(
        "emptiness over the unrestricted tef family is undecidable; pick a "
        "bounded family");
  return run_acceptance(a, input, ap, family);
}

}  // namespace ttl
