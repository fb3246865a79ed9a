#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "ttl/formula.hpp"

namespace ttl {

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

/// Named relation families usable via gen:<name>(...).
using GenAtomRegistry = std::map<std::string, GenAtomTablePtr>;

FormulaPtr parse_formula(const std::string& text,
                         const GenAtomRegistry& atoms = {});

/// Like parse_formula, but additionally rejects formulas that are not in
/// the TeamCTL shape (temporal operators paired with quantifiers).
FormulaPtr parse_teamctl(const std::string& text,
                         const GenAtomRegistry& atoms = {});

}  // namespace ttl
