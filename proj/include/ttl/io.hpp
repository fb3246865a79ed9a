#pragma once

#include <iosfwd>
#include <string>

#include "ttl/model.hpp"
#include "ttl/parse.hpp"
#include "ttl/reductions.hpp"
#include "ttl/tef.hpp"

namespace ttl {

// Line-oriented text formats; '#' starts a comment anywhere.
//   traces:  trace <id>: <set>* '|' <set>+      sets like {p,q} or {}
//   kripke:  state <name> {props} / edge <a> <b> / root <name>
//   tef:     tef init=<v,...> steps=<set>* '|' <set>+   sets of 1-based ids
//   machine: INC L 2 5 / DEC R 0 0 / IFZ L 3 4
//   atoms:   gen <name> <arity> = {bits,...} {...} ...

Team parse_traces(std::istream& is, APContext& ap);
void render_traces(const Team& team, const APContext& ap, std::ostream& os);

KripkeStructure parse_kripke(std::istream& is, APContext& ap);

Tef parse_tef(std::istream& is, uint32_t n);
std::string render_tef(const Tef& t);

CounterMachine parse_machine(std::istream& is);

GenAtomRegistry parse_atom_tables(std::istream& is);

}  // namespace ttl
