#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace ttl {

/// Boolean relation family for a generalized team atom of arity k:
/// a finite set of subsets of {0,1}^k. A team satisfies the atom when the
/// set of parameter-value tuples over its traces is a member.
struct GenAtomTable {
  std::string name;
  uint32_t arity = 0;
  std::set<std::set<uint32_t>> members;  // tuples as k-bit masks

  bool contains(const std::set<uint32_t>& tuples) const {
    return members.count(tuples) != 0;
  }
  bool downward_closed() const;
  GenAtomTable complemented() const;
};

using GenAtomTablePtr = std::shared_ptr<const GenAtomTable>;

enum class Kind {
  True,
  False,
  Prop,
  Neg,        // negation of a propositional formula (literal in team terms)
  And,
  Or,         // splitting disjunction
  BOr,        // Boolean disjunction
  DualOr,     // every split satisfies left on one side or right on the other
  Next,
  Until,
  WUntil,
  Exists,     // tef quantifier
  Forall,     // tef quantifier
  NExists,    // no tef continuation satisfies the body (from negation)
  Dep,        // dep(params...; last child)
  DualDep,
  Incl,       // first half of children ⊆ second half
  DualIncl,
  NE,
  A1,         // every singleton subteam
  E1,         // some singleton subteam
  AS,         // every sub-multiset
  ES,         // some sub-multiset
  GenAtom,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  Kind kind;
  std::string prop;                 // Kind::Prop
  std::vector<FormulaPtr> kids;
  GenAtomTablePtr table;            // Kind::GenAtom

  const FormulaPtr& kid(size_t i) const { return kids[i]; }
};

// Constructors. All enforce the structural invariants (negation and atom
// parameters must be propositional).
FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_prop(const std::string& name);
FormulaPtr f_neg(FormulaPtr p);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_bor(FormulaPtr a, FormulaPtr b);
FormulaPtr f_dual_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_next(FormulaPtr a);
FormulaPtr f_until(FormulaPtr a, FormulaPtr b);
FormulaPtr f_wuntil(FormulaPtr a, FormulaPtr b);
FormulaPtr f_finally(FormulaPtr a);   // true U a
FormulaPtr f_globally(FormulaPtr a);  // a W false
FormulaPtr f_exists(FormulaPtr a);
FormulaPtr f_forall(FormulaPtr a);
FormulaPtr f_nexists(FormulaPtr a);
FormulaPtr f_dep(std::vector<FormulaPtr> params, FormulaPtr target);
FormulaPtr f_dual_dep(std::vector<FormulaPtr> params, FormulaPtr target);
FormulaPtr f_incl(std::vector<FormulaPtr> lhs, std::vector<FormulaPtr> rhs);
FormulaPtr f_dual_incl(std::vector<FormulaPtr> lhs,
                       std::vector<FormulaPtr> rhs);
FormulaPtr f_ne();
FormulaPtr f_a1(FormulaPtr a);
FormulaPtr f_e1(FormulaPtr a);
FormulaPtr f_as(FormulaPtr a);
FormulaPtr f_es(FormulaPtr a);
FormulaPtr f_genatom(GenAtomTablePtr table, std::vector<FormulaPtr> params);

bool is_propositional(const FormulaPtr& f);

/// Team satisfaction reduces to a per-trace classical check: free of
/// Boolean disjunction (whose team reading is not pointwise).
bool is_pointwise(const FormulaPtr& f);

bool is_ltl(const FormulaPtr& f);  // no quantifiers or team atoms
bool is_quantifier_free(const FormulaPtr& f);
bool structurally_equal(const FormulaPtr& a, const FormulaPtr& b);

size_t formula_size(const FormulaPtr& f);  // node count
size_t quantifier_depth(const FormulaPtr& f);
std::set<std::string> props_of(const FormulaPtr& f);

/// Concrete syntax round-trippable through the parser.
std::string print_formula(const FormulaPtr& f);

/// Classical truth value of a propositional formula on one letter.
bool prop_value(const FormulaPtr& f, uint32_t letter,
                const class APContext& ap);

/// Exact team-semantic complement: the result holds at a configuration
/// iff the input does not. Output is negation-free except on propositional
/// subformulas and never uses the universal quantifier (it becomes a
/// negated existential).
FormulaPtr boolean_negation(const FormulaPtr& f);

/// Replaces every universal tef quantifier by a negated existential over
/// the complemented body.
FormulaPtr eliminate_forall(const FormulaPtr& f);

/// TeamCTL shape: every temporal operator sits directly under a tef
/// quantifier and vice versa.
bool is_teamctl(const FormulaPtr& f);

struct FragmentUse {
  bool split_or = false, bool_or = false, dep = false, incl = false,
       ne = false, a1 = false, genatom = false, exists = false,
       forall = false, exists_modal = false, forall_modal = false;
};
FragmentUse fragment_use(const FormulaPtr& f);

// Synchronized modality macros over a marker proposition.
FormulaPtr sync_next(FormulaPtr a, const std::string& o);
FormulaPtr sync_until(FormulaPtr a, FormulaPtr b, const std::string& o);
FormulaPtr sync_finally(FormulaPtr a, const std::string& o);
FormulaPtr sync_globally(FormulaPtr a, const std::string& o);

}  // namespace ttl
