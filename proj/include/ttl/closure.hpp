#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ttl/formula.hpp"

namespace ttl {

/// Index set over trace positions 1..n, as a bitmask over 0..n-1.
using IndexMask = uint32_t;

/// Subformula closure over n traces: every pair of a (negation-extended)
/// subformula and an index set. Quantified subformulas are kept opaque;
/// their bodies live in closures of their own.
class IndexedClosure {
 public:
  IndexedClosure(FormulaPtr root, uint32_t n, bool opaque_quantifiers = true);

  uint32_t n() const { return n_; }
  IndexMask full_mask() const { return n_ >= 32 ? ~0u : (1u << n_) - 1u; }
  const FormulaPtr& root() const { return root_; }

  size_t num_formulas() const { return formulas_.size(); }
  size_t num_entries() const { return formulas_.size() << n_; }

  const FormulaPtr& formula(uint32_t id) const { return formulas_[id]; }
  uint32_t formula_id(const FormulaPtr& f) const;  // throws if absent
  bool has_formula(const FormulaPtr& f) const;

  uint32_t entry(uint32_t formula_id, IndexMask m) const {
    return (formula_id << n_) | m;
  }
  uint32_t entry_formula(uint32_t e) const { return e >> n_; }
  IndexMask entry_mask(uint32_t e) const { return e & full_mask(); }

  uint32_t root_id() const { return root_id_; }
  const std::vector<FormulaPtr>& formulas() const { return formulas_; }

  /// Ids of formulas of the given kind (used for acceptance sets).
  std::vector<uint32_t> ids_of_kind(Kind k) const;

 private:
  uint32_t add(const FormulaPtr& f);
  void close(const FormulaPtr& f);

  FormulaPtr root_;
  uint32_t n_;
  bool opaque_;
  uint32_t root_id_ = 0;
  std::vector<FormulaPtr> formulas_;
  std::map<std::string, uint32_t> by_text_;
};

}  // namespace ttl
