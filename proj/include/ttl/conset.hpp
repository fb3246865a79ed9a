#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ttl/closure.hpp"
#include "ttl/model.hpp"

namespace ttl {

/// A consistent subset of an indexed closure, stored as an entry bitset
/// together with the letter of each trace it claims. The letter claims
/// determine every propositional entry; temporal and quantified entries
/// are the set's real content.
struct ConSet {
  std::vector<uint64_t> bits;
  std::vector<PropSet> letters;  // one per trace position

  bool test(uint32_t e) const { return bits[e >> 6] >> (e & 63) & 1u; }
  void set(uint32_t e) { bits[e >> 6] |= 1ull << (e & 63); }
  bool operator==(const ConSet& o) const = default;
  bool operator<(const ConSet& o) const {
    return bits != o.bits ? bits < o.bits : letters < o.letters;
  }
};

/// Shared machinery for building and checking consistent sets over one
/// closure.
class ConSetSpace {
 public:
  ConSetSpace(std::shared_ptr<const IndexedClosure> closure, APContext ap);

  const IndexedClosure& closure() const { return *closure_; }
  const APContext& ap() const { return ap_; }
  uint32_t n() const { return closure_->n(); }

  /// All sets satisfying the consistency rules (full enumeration over the
  /// free entries; guarded against blowup). Intended for small closures.
  std::vector<ConSet> all_consistent(const std::vector<PropSet>& letters,
                                     size_t max_bits = 22) const;

  /// Canonical consistent sets that contain the given obligations under
  /// the given letters: branching happens only where an obligation forces
  /// a choice (splits, Boolean disjuncts, until/weak-until unfolding).
  std::vector<ConSet> generate(const std::vector<uint32_t>& obligations,
                               const std::vector<PropSet>& letters) const;

  /// Canonical successors after advancing the traces in `advanced` and
  /// updating their letters: obligations are the stepped next-state
  /// formulas and the still-pending until/weak-until entries.
  std::vector<ConSet> successors(const ConSet& s, uint32_t advanced,
                                 const std::vector<PropSet>& letters) const;

  /// Full consistency check (all rules), for validation and tests.
  bool is_consistent(const ConSet& s) const;

  /// Fills in every determined entry from the letters and the free
  /// entries already present.
  void complete(ConSet& s) const;

  bool determined_value(const ConSet& s, uint32_t formula_id,
                        IndexMask m) const;
  bool prop_entry_value(const ConSet& s, uint32_t formula_id,
                        IndexMask m) const;

  /// Entries of quantified kind contained in the set.
  std::vector<uint32_t> quantified_entries(const ConSet& s) const;
  /// Pending until entries (for acceptance sets): (entry, discharged).
  bool until_discharged(const ConSet& s, uint32_t entry) const;

  std::string render(const ConSet& s) const;

 private:
  std::shared_ptr<const IndexedClosure> closure_;
  APContext ap_;
  std::vector<uint32_t> order_;  // entry evaluation order (height, mask size)
};

}  // namespace ttl
