#include "ttl/closure.hpp"

#include <stdexcept>

namespace ttl {

IndexedClosure::IndexedClosure(FormulaPtr root, uint32_t n,
                               bool opaque_quantifiers)
    : root_(root), n_(n), opaque_(opaque_quantifiers) {
  if (n < 1) throw std::invalid_argument("closure needs n >= 1");
  if (n > 8) throw std::invalid_argument("closure index width too large");
  close(root_);
  root_id_ = formula_id(root_);
}

uint32_t IndexedClosure::add(const FormulaPtr& f) {
  std::string key = print_formula(f);
  auto it = by_text_.find(key);
  if (it != by_text_.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(formulas_.size());
  formulas_.push_back(f);
  by_text_.emplace(std::move(key), id);
  return id;
}

void IndexedClosure::close(const FormulaPtr& f) {
  uint32_t before = static_cast<uint32_t>(formulas_.size());
  if (add(f) < before) return;  // already present
  switch (f->kind) {
    case Kind::Prop:
      close(f_neg(f));
      return;
    case Kind::Neg:
      close(f->kid(0));
      return;
    case Kind::Dep:
    case Kind::DualDep:
    case Kind::GenAtom:
      // Parameter values per trace drive the atom, so both polarities of
      // every parameter are state material.
      for (auto& k : f->kids) {
        close(k);
        close(f_neg(k));
      }
      return;
    case Kind::Incl:
    case Kind::DualIncl:
      for (auto& k : f->kids) {
        close(k);
        close(f_neg(k));
      }
      return;
    case Kind::Exists:
    case Kind::Forall:
    case Kind::NExists:
      if (!opaque_) close(f->kid(0));
      return;
    default:
      for (auto& k : f->kids) close(k);
      return;
  }
}

uint32_t IndexedClosure::formula_id(const FormulaPtr& f) const {
  auto it = by_text_.find(print_formula(f));
  if (it == by_text_.end())
    throw std::out_of_range("formula not in closure: " + print_formula(f));
  return it->second;
}

bool IndexedClosure::has_formula(const FormulaPtr& f) const {
  return by_text_.count(print_formula(f)) != 0;
}

std::vector<uint32_t> IndexedClosure::ids_of_kind(Kind k) const {
  std::vector<uint32_t> out;
  for (uint32_t i = 0; i < formulas_.size(); ++i)
    if (formulas_[i]->kind == k) out.push_back(i);
  return out;
}

}  // namespace ttl
