#pragma once

#include <optional>

#include "ttl/formula.hpp"
#include "ttl/model.hpp"
#include "ttl/tef.hpp"

namespace ttl {

/// Standard single-trace LTL truth of a quantifier-free formula at
/// position i of a lasso. Splitting and Boolean disjunction coincide on
/// one trace and are both read classically.
bool ltl_eval(const LassoTrace& t, size_t i, const FormulaPtr& f,
              const APContext& ap);

/// A configuration: team, tef, global step, and the live sub-team (as a
/// bitmask over team entry positions).
struct EvalConfig {
  const Team* team = nullptr;
  Tef tef;
  size_t global_index = 0;
  uint32_t live = 0;
};

/// Direct evaluator for team semantics at a configuration. Quantifiers
/// range over the given family, which must be enumerable; until/weak-until
/// walks terminate by configuration-cycle detection on the lasso/tef
/// quotient.
bool eval(const EvalConfig& cfg, const FormulaPtr& f, const TefFamily& family,
          const APContext& ap);

/// Convenience: initial configuration over the whole team.
bool eval_team(const Team& team, const Tef& tef, const FormulaPtr& f,
               const TefFamily& family, const APContext& ap);

enum class Mode { Exists, Forall, Synchronous };

struct ModeResult {
  bool verdict = false;
  std::optional<Tef> witness;  // witness for Exists, counterexample for Forall
};

/// Quantifies over the initial tefs of the family (Synchronous ignores the
/// family and uses the unique initial synchronous tef).
ModeResult check_mode(const Team& team, const FormulaPtr& f, Mode mode,
                      const TefFamily& family, const APContext& ap);

}  // namespace ttl
