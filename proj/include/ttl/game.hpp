#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ttl/automata.hpp"
#include "ttl/eval.hpp"
#include "ttl/model.hpp"
#include "ttl/tef.hpp"

namespace ttl {

/// Two-player Büchi game arena. The automaton player wins a play iff it
/// visits accepting vertices infinitely often. Every vertex must have at
/// least one successor.
struct GameArena {
  struct Vertex {
    bool automaton_owned = true;
    bool accepting = false;
    std::string label;
    std::vector<uint32_t> succ;
  };
  std::vector<Vertex> verts;
  uint32_t initial = 0;

  uint32_t add(bool automaton_owned, bool accepting, std::string label = {});
  void edge(uint32_t from, uint32_t to) { verts[from].succ.push_back(to); }
  void check_total() const;
  std::string to_dot() const;
};

struct GameSolution {
  std::vector<bool> automaton_wins;   // per vertex
  std::vector<uint32_t> strategy;     // winner's positional move per vertex
  bool automaton_wins_initial = false;
};

/// Classical two-fixpoint solver: repeatedly removes the pathfinder
/// attractor of the region from which the automaton cannot reach an
/// accepting vertex any more.
GameSolution solve_buchi_game(const GameArena& arena);

/// What the automaton reads: an explicit team, traces of a Kripke
/// structure (one copy per direction), or freely chosen letters.
struct GameInput {
  const Team* team = nullptr;
  const KripkeStructure* kripke = nullptr;
  bool free_letters = false;
  uint32_t n = 1;

  static GameInput of_team(const Team& t) {
    GameInput in;
    in.team = &t;
    in.n = static_cast<uint32_t>(t.size());
    return in;
  }
  static GameInput of_kripke(const KripkeStructure& k, uint32_t n) {
    GameInput in;
    in.kripke = &k;
    in.n = n;
    return in;
  }
  static GameInput free(uint32_t n) {
    GameInput in;
    in.free_letters = true;
    in.n = n;
    return in;
  }
};

struct GameResult {
  bool accepted = false;
  std::optional<Tef> witness_tef;
  std::optional<Team> witness_team;
  size_t arena_vertices = 0;
};

/// Membership game for an explicit team (the spec's arena-level surface).
GameArena membership_game(const Aaba& a, const Team& team,
                          const APContext& ap, const TefFamily& family);

/// Solves acceptance of the input under the family: is some tuple from
/// the input accepted with all run-tree branches inside the family?
GameResult run_acceptance(const Aaba& a, const GameInput& input,
                          const APContext& ap, const TefFamily& family);

/// L_TE-emptiness over the given inputs; `accepted` means nonempty, and
/// the witness team/tef are extracted from the winning strategy.
GameResult emptiness(const Aaba& a, const TefFamily& family,
                     const GameInput& input, const APContext& ap);

}  // namespace ttl
