#pragma once

#include <map>
#include <string>
#include <vector>

#include "ttl/formula.hpp"
#include "ttl/model.hpp"

namespace ttl {

/// Formulas over an alternating marker proposition that pin down tef
/// behaviour: keys "synch", "synch_split", "fair", "defect" (TeamLTL) and
/// "ctl_synch", "ctl_synch_split", "ctl_synch_incl" (TeamCTL step forms).
std::map<std::string, FormulaPtr> tef_property_formulas(
    const std::string& o = "o");

/// Synchronous-mode TeamLTL embedded into existential satisfaction over a
/// marker-alternating team: conjoins the synchrony pin.
FormulaPtr embed_sync_ltl_exists(const FormulaPtr& f, const std::string& o,
                                 bool use_split_variant = false);

/// Synchronous-mode TeamLTL embedded into universal satisfaction:
/// disjoins an eventually-a-defect escape for non-synchronous tefs.
FormulaPtr embed_sync_ltl_forall(const FormulaPtr& f, const std::string& o);

enum class CtlVariant { Exists, Forall };

/// Structural translation into TeamCTL: every modality is replaced by a
/// per-step synchronized variant, then the alternation pin is conjoined.
FormulaPtr embed_sync_ctl(const FormulaPtr& f, CtlVariant variant,
                          const std::string& o);

struct CounterInstr {
  enum class Op { Inc, Dec, IfZero };
  Op op;
  bool left;        // which counter
  uint32_t goto1;   // then-branch for IfZero
  uint32_t goto2;   // else-branch for IfZero
};

struct CounterMachine {
  std::vector<CounterInstr> instrs;
  void validate() const;
};

struct N2cEncoding {
  KripkeStructure structure;
  FormulaPtr formula;
  uint32_t recurring_label = 0;
};

struct N2cOptions {
  /// Emit the label-uniqueness guard as a full mutual-exclusion
  /// conjunction instead of relying on the structure labelling exactly
  /// one instruction per state. The full form grows quadratically.
  bool strict_only = false;
};

/// Structure-and-formula encoding of recurring computations of a
/// nondeterministic two-counter machine. The formula grows linearly in
/// the number of instructions (with default options).
N2cEncoding encode_n2c(const CounterMachine& m, uint32_t recurring_label,
                       APContext& ap, const N2cOptions& opts = {});

}  // namespace ttl
