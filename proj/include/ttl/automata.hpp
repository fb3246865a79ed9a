#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ttl/conset.hpp"
#include "ttl/formula.hpp"
#include "ttl/posbool.hpp"

namespace ttl {

/// One automaton layer produced by the formula translation: the reachable
/// consistent sets of the layer's closure, plus one nested automaton per
/// quantified subformula occurring in it. States of nested layers are
/// folded into the parent's id space after the parent's own states.
struct TransLayer;
using TransLayerPtr = std::shared_ptr<TransLayer>;

/// Alternating asynchronous automaton with generalized Büchi acceptance
/// (several acceptance sets, each to be visited infinitely often on every
/// run-tree path).
struct Gaaba {
  uint32_t n = 1;                       // directions 1..n
  std::vector<std::string> props;       // alphabet = subsets of these
  uint32_t num_states = 0;
  PosBool init;
  std::map<std::tuple<uint32_t, PropSet, uint32_t>, PosBool> delta;
  std::vector<std::vector<uint32_t>> accept_sets;  // at least one
  std::vector<std::string> state_names;

  // Set when the automaton came out of the formula translation.
  TransLayerPtr layer;

  const PosBool& trans(uint32_t q, PropSet letter, uint32_t dir) const;
  void check() const;
};

/// Büchi special case: exactly one acceptance set.
struct Aaba {
  Gaaba base;  // accept_sets.size() == 1
  const std::vector<uint32_t>& accepting() const { return base.accept_sets[0]; }

  // Present when this automaton was produced by degeneralization:
  // state id = orig * m + index.
  uint32_t degen_m = 1;
  std::shared_ptr<const Gaaba> degen_of;
};

struct TransLayer {
  FormulaPtr formula;          // quantifier bodies are opaque leaves
  std::shared_ptr<const IndexedClosure> closure;
  std::shared_ptr<ConSetSpace> space;
  std::vector<ConSet> states;  // parent-layer states, id = position
  std::map<ConSet, uint32_t> index;
  std::vector<PropSet> alphabet;

  // Quantified subformulas (by closure formula id) -> nested automata,
  // already degeneralized for the game.
  std::map<uint32_t, std::shared_ptr<const Aaba>> nested;
  // Offset of each nested automaton's states in the parent id space.
  std::map<uint32_t, uint32_t> nested_offset;

  uint32_t state_count_with_nested = 0;

  std::optional<uint32_t> find_state(const ConSet& s) const;
};

/// Fischer-Ladner translation of a formula over teams of size n.
/// Universal quantifiers are eliminated via Boolean negation first.
Gaaba build_gaaba(const FormulaPtr& f, uint32_t n,
                  const std::vector<std::string>& props = {});

/// Counting construction: one Büchi set out of m generalized ones, with
/// exactly |Q| * m states.
Aaba degeneralize(const Gaaba& g);

// Text dump format:
//   gaaba n=<n> props=<p,q,...>
//   states <count>
//   name <id> <text...>            (optional)
//   init <posbool>
//   trans <id> {letter} <dir> -> <posbool>
//   acc <i>: <id> <id> ...
void dump_automaton(const Gaaba& g, std::ostream& os);
Gaaba load_automaton(std::istream& is);

}  // namespace ttl
