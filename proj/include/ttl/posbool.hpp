#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ttl {

/// Positive Boolean combination over automaton state ids.
struct PosBool {
  enum class Node { True, False, State, And, Or };
  Node node = Node::False;
  uint32_t state = 0;
  std::vector<PosBool> kids;

  static PosBool t() { return {Node::True, 0, {}}; }
  static PosBool f() { return {Node::False, 0, {}}; }
  static PosBool leaf(uint32_t q) { return {Node::State, q, {}}; }
  static PosBool conj(std::vector<PosBool> ks);
  static PosBool disj(std::vector<PosBool> ks);

  bool is_false() const { return node == Node::False; }

  /// Satisfaction under a valuation of state ids.
  template <typename Pred>
  bool eval(Pred holds) const {
    switch (node) {
      case Node::True: return true;
      case Node::False: return false;
      case Node::State: return holds(state);
      case Node::And:
        for (auto& k : kids)
          if (!k.eval(holds)) return false;
        return true;
      case Node::Or:
        for (auto& k : kids)
          if (k.eval(holds)) return true;
        return false;
    }
    return false;
  }

  void states(std::vector<uint32_t>& out) const;
  PosBool mapped(const std::vector<uint32_t>& state_map) const;
  std::string render() const;  // "(s1 & (s2 | s3))", "true", "false"
};

PosBool parse_posbool(const std::string& text, size_t& pos);

}  // namespace ttl
