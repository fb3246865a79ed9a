#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ttl {

/// Set of atomic propositions, encoded as a bitmask over an APContext.
using PropSet = uint32_t;

/// Interns proposition names to bit positions (at most 32 per context).
class APContext {
public:
  uint32_t intern(const std::string& name);
  std::optional<uint32_t> find(const std::string& name) const;
  const std::string& name(uint32_t bit) const { return names_.at(bit); }
  size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

  bool has(PropSet set, const std::string& name) const;
  std::string render(PropSet set) const;  // "{p,q}" form

private:
  std::vector<std::string> names_;
  std::map<std::string, uint32_t> index_;
};

/// Ultimately periodic infinite word over 2^AP: finite prefix plus a
/// nonempty loop repeated forever.
struct LassoTrace {
  std::vector<PropSet> prefix;
  std::vector<PropSet> loop;  // nonempty

  LassoTrace() : loop{0} {}
  LassoTrace(std::vector<PropSet> p, std::vector<PropSet> l);

  PropSet at(size_t i) const {
    return i < prefix.size() ? prefix[i]
                             : loop[(i - prefix.size()) % loop.size()];
  }
  size_t period_start() const { return prefix.size(); }
  size_t period() const { return loop.size(); }

  /// Position folded into [0, prefix+loop): equal canonical positions see
  /// identical futures.
  size_t canonical_pos(size_t i) const {
    return i < prefix.size()
               ? i
               : prefix.size() + (i - prefix.size()) % loop.size();
  }

  /// Unique representation of the denoted word: primitive loop, minimal
  /// prefix (trailing prefix letters equal to the loop tail are folded in).
  LassoTrace canonical() const;
  bool same_word(const LassoTrace& other) const;

  /// Drops the given proposition bits everywhere.
  LassoTrace without(PropSet bits) const;
};

bool operator==(const LassoTrace& a, const LassoTrace& b);
bool operator<(const LassoTrace& a, const LassoTrace& b);

/// Finite multiset of traces, realized as an indexed family with pairwise
/// distinct indices. Equality ignores the concrete indices.
class Team {
public:
  Team() = default;
  explicit Team(std::vector<LassoTrace> traces);

  void add(uint32_t index, LassoTrace t);
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const LassoTrace& trace(size_t pos) const { return entries_[pos].second; }
  uint32_t index(size_t pos) const { return entries_[pos].first; }
  const std::vector<std::pair<uint32_t, LassoTrace>>& entries() const {
    return entries_;
  }

  /// Multiset equality: some index bijection matches equal words.
  bool same_multiset(const Team& other) const;

  /// Sub-multiset selected by entry positions (bitmask over 0..size-1).
  Team subteam(uint32_t position_mask) const;

  Team with_alternating(const std::string& o, APContext& ap) const;

private:
  std::vector<std::pair<uint32_t, LassoTrace>> entries_;  // sorted by index
};

Team team_disjoint_union(const Team& a, const Team& b);

/// All 2^|team| ordered pairs (T1, T2) with T1 ⊎ T2 = team, as position
/// masks into the team's entry vector.
std::vector<std::pair<uint32_t, uint32_t>> split_enumeration(const Team& team);

/// Adds a fresh proposition to every trace exactly at even positions.
/// Odd loops are doubled first so the parity stays stable.
LassoTrace add_alternating(const LassoTrace& t, uint32_t bit);

struct KripkeStructure {
  std::vector<std::string> states;
  std::vector<std::vector<uint32_t>> succ;  // per state, successor ids
  std::vector<PropSet> labels;
  uint32_t root = 0;

  size_t num_states() const { return states.size(); }
  void validate() const;  // left-total edges, root in range
};

/// Doubles every state into a marked and an unmarked copy so that every
/// trace alternates on the marker, starting marked at the root.
KripkeStructure alternation_transform(const KripkeStructure& k, uint32_t bit,
                                      bool bit_in_use);

/// Rooted lassos of k with bounded prefix and cycle, deduplicated by the
/// denoted state path; distinct paths with equal labelings are all kept.
std::vector<LassoTrace> kripke_lasso_traces(const KripkeStructure& k,
                                            size_t max_prefix,
                                            size_t max_cycle);

}  // namespace ttl
