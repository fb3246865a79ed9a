#include "ttl/conset.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace ttl {

namespace {

size_t height_of(const FormulaPtr& f) {
  size_t h = 0;
  for (auto& k : f->kids) h = std::max(h, height_of(k));
  return h + 1;
}

bool kind_free(Kind k) {
  return k == Kind::Next || k == Kind::Until || k == Kind::WUntil ||
         k == Kind::Exists || k == Kind::NExists || k == Kind::Forall;
}

// Iterates sub of m downwards, including m and 0.
template <typename Fn>
bool for_submasks(IndexMask m, Fn fn) {
  for (IndexMask sub = m;; sub = (sub - 1) & m) {
    if (!fn(sub)) return false;
    if (sub == 0) break;
  }
  return true;
}

}  // namespace

ConSetSpace::ConSetSpace(std::shared_ptr<const IndexedClosure> closure,
                         APContext ap)
    : closure_(std::move(closure)), ap_(std::move(ap)) {
  std::vector<std::pair<size_t, uint32_t>> keyed;
  for (uint32_t id = 0; id < closure_->num_formulas(); ++id) {
    size_t h = height_of(closure_->formula(id));
    for (IndexMask m = 0; m <= closure_->full_mask(); ++m)
      keyed.emplace_back((h << 8) + std::popcount(m), closure_->entry(id, m));
  }
  std::sort(keyed.begin(), keyed.end());
  for (auto& [k, e] : keyed) order_.push_back(e);
}

bool ConSetSpace::prop_entry_value(const ConSet& s, uint32_t formula_id,
                                   IndexMask m) const {
  const FormulaPtr& f = closure_->formula(formula_id);
  for (uint32_t j = 0; j < n(); ++j)
    if ((m >> j & 1u) && !prop_value(f, s.letters[j], ap_)) return false;
  return true;
}

bool ConSetSpace::determined_value(const ConSet& s, uint32_t fid,
                                   IndexMask m) const {
  const FormulaPtr& f = closure_->formula(fid);
  if (is_pointwise(f)) return prop_entry_value(s, fid, m);
  auto kid_id = [&](size_t i) { return closure_->formula_id(f->kid(i)); };
  switch (f->kind) {
    case Kind::NE:
      return m != 0;
    case Kind::And:
      return s.test(closure_->entry(kid_id(0), m)) &&
             s.test(closure_->entry(kid_id(1), m));
    case Kind::BOr:
      return s.test(closure_->entry(kid_id(0), m)) ||
             s.test(closure_->entry(kid_id(1), m));
    case Kind::Or: {
      uint32_t a = kid_id(0), b = kid_id(1);
      bool found = !for_submasks(m, [&](IndexMask m1) {
        return !(s.test(closure_->entry(a, m1)) &&
                 s.test(closure_->entry(b, m & ~m1)));
      });
      return found;
    }
    case Kind::DualOr: {
      uint32_t a = kid_id(0), b = kid_id(1);
      return for_submasks(m, [&](IndexMask m1) {
        return s.test(closure_->entry(a, m1)) ||
               s.test(closure_->entry(b, m & ~m1));
      });
    }
    case Kind::Dep:
    case Kind::DualDep: {
      size_t k = f->kids.size() - 1;
      bool holds = true;
      for (uint32_t i = 0; i < n() && holds; ++i) {
        if (!(m >> i & 1u)) continue;
        for (uint32_t j = i + 1; j < n() && holds; ++j) {
          if (!(m >> j & 1u)) continue;
          bool agree = true;
          for (size_t l = 0; l < k && agree; ++l)
            agree = prop_value(f->kid(l), s.letters[i], ap_) ==
                    prop_value(f->kid(l), s.letters[j], ap_);
          if (agree)
            holds = prop_value(f->kids.back(), s.letters[i], ap_) ==
                    prop_value(f->kids.back(), s.letters[j], ap_);
        }
      }
      return f->kind == Kind::Dep ? holds : !holds;
    }
    case Kind::Incl:
    case Kind::DualIncl: {
      size_t half = f->kids.size() / 2;
      bool holds = true;
      for (uint32_t i = 0; i < n() && holds; ++i) {
        if (!(m >> i & 1u)) continue;
        bool found = false;
        for (uint32_t j = 0; j < n() && !found; ++j) {
          if (!(m >> j & 1u)) continue;
          bool match = true;
          for (size_t l = 0; l < half && match; ++l)
            match = prop_value(f->kid(l), s.letters[i], ap_) ==
                    prop_value(f->kid(half + l), s.letters[j], ap_);
          found = match;
        }
        holds = found;
      }
      return f->kind == Kind::Incl ? holds : !holds;
    }
    case Kind::A1: {
      uint32_t a = kid_id(0);
      for (uint32_t i = 0; i < n(); ++i)
        if ((m >> i & 1u) && !s.test(closure_->entry(a, 1u << i)))
          return false;
      return true;
    }
    case Kind::E1: {
      uint32_t a = kid_id(0);
      for (uint32_t i = 0; i < n(); ++i)
        if ((m >> i & 1u) && s.test(closure_->entry(a, 1u << i))) return true;
      return false;
    }
    case Kind::AS: {
      uint32_t a = kid_id(0);
      return for_submasks(
          m, [&](IndexMask sub) { return s.test(closure_->entry(a, sub)); });
    }
    case Kind::ES: {
      uint32_t a = kid_id(0);
      return !for_submasks(
          m, [&](IndexMask sub) { return !s.test(closure_->entry(a, sub)); });
    }
    case Kind::GenAtom: {
      std::set<uint32_t> tuples;
      for (uint32_t i = 0; i < n(); ++i) {
        if (!(m >> i & 1u)) continue;
        uint32_t tup = 0;
        for (size_t l = 0; l < f->kids.size(); ++l)
          if (prop_value(f->kid(l), s.letters[i], ap_)) tup |= 1u << l;
        tuples.insert(tup);
      }
      return f->table->contains(tuples);
    }
    default:
      throw std::logic_error("determined_value on a free entry");
  }
}

namespace {

// Tableau expansion of obligations into canonical consistent sets.
struct Gen {
  const ConSetSpace& space;
  const IndexedClosure& cl;
  std::vector<ConSet>& out;
  std::set<ConSet>& dedup;

  Gen(const ConSetSpace& sp, std::vector<ConSet>& o, std::set<ConSet>& d)
      : space(sp), cl(sp.closure()), out(o), dedup(d) {}

  void run(ConSet s, std::vector<uint32_t> todo,
           std::vector<uint64_t> required) {
    while (!todo.empty()) {
      uint32_t e = todo.back();
      todo.pop_back();
      if (required[e >> 6] >> (e & 63) & 1u) continue;
      required[e >> 6] |= 1ull << (e & 63);
      uint32_t fid = cl.entry_formula(e);
      IndexMask m = cl.entry_mask(e);
      const FormulaPtr& f = cl.formula(fid);
      auto push = [&](const FormulaPtr& g, IndexMask mm) {
        todo.push_back(cl.entry(cl.formula_id(g), mm));
      };
      if (is_pointwise(f)) {
        if (!space.prop_entry_value(s, fid, m)) return;
        continue;
      }
      switch (f->kind) {
        case Kind::NE:
          if (m == 0) return;
          continue;
        case Kind::Dep:
        case Kind::DualDep:
        case Kind::Incl:
        case Kind::DualIncl:
        case Kind::GenAtom:
          if (!space.determined_value(s, fid, m)) return;
          continue;
        case Kind::And:
          push(f->kid(0), m);
          push(f->kid(1), m);
          continue;
        case Kind::BOr: {
          for (int side = 0; side < 2; ++side) {
            auto t2 = todo;
            t2.push_back(cl.entry(cl.formula_id(f->kid(side)), m));
            run(s, std::move(t2), required);
          }
          return;
        }
        case Kind::Or: {
          for_submasks(m, [&](IndexMask m1) {
            auto t2 = todo;
            t2.push_back(cl.entry(cl.formula_id(f->kid(0)), m1));
            t2.push_back(cl.entry(cl.formula_id(f->kid(1)), m & ~m1));
            run(s, std::move(t2), required);
            return true;
          });
          return;
        }
        case Kind::DualOr: {
          // One choice per split; all splits must be covered.
          std::vector<IndexMask> splits;
          for_submasks(m, [&](IndexMask m1) {
            splits.push_back(m1);
            return true;
          });
          branch_dual(s, std::move(todo), required, f, m, splits, 0);
          return;
        }
        case Kind::Next:
          s.set(e);
          continue;
        case Kind::Until:
        case Kind::WUntil: {
          s.set(e);
          for (int arm = 1; arm >= 0; --arm) {
            auto t2 = todo;
            t2.push_back(cl.entry(cl.formula_id(f->kid(arm)), m));
            run(s, std::move(t2), required);
          }
          return;
        }
        case Kind::Exists:
        case Kind::NExists:
          s.set(e);
          continue;
        case Kind::A1:
          for (uint32_t i = 0; i < space.n(); ++i)
            if (m >> i & 1u) push(f->kid(0), 1u << i);
          continue;
        case Kind::E1: {
          for (uint32_t i = 0; i < space.n(); ++i) {
            if (!(m >> i & 1u)) continue;
            auto t2 = todo;
            t2.push_back(cl.entry(cl.formula_id(f->kid(0)), 1u << i));
            run(s, std::move(t2), required);
          }
          return;
        }
        case Kind::AS:
          for_submasks(m, [&](IndexMask sub) {
            push(f->kid(0), sub);
            return true;
          });
          continue;
        case Kind::ES: {
          for_submasks(m, [&](IndexMask sub) {
            auto t2 = todo;
            t2.push_back(cl.entry(cl.formula_id(f->kid(0)), sub));
            run(s, std::move(t2), required);
            return true;
          });
          return;
        }
        case Kind::Forall:
          throw std::logic_error(
              "universal quantifier must be eliminated before translation");
        default:
          throw std::logic_error("unexpected kind");
      }
    }
    finish(std::move(s));
  }

  void branch_dual(const ConSet& s, std::vector<uint32_t> todo,
                   const std::vector<uint64_t>& required, const FormulaPtr& f,
                   IndexMask m, const std::vector<IndexMask>& splits,
                   size_t at) {
    if (at == splits.size()) {
      run(s, std::move(todo), required);
      return;
    }
    for (int side = 0; side < 2; ++side) {
      auto t2 = todo;
      IndexMask part = side == 0 ? splits[at] : (m & ~splits[at]);
      t2.push_back(cl.entry(cl.formula_id(f->kid(side)), part));
      branch_dual(s, std::move(t2), required, f, m, splits, at + 1);
    }
  }

  void finish(ConSet s) {
    space.complete(s);
    if (!space.is_consistent(s)) return;
    if (dedup.insert(s).second) out.push_back(std::move(s));
  }
};

}  // namespace

void ConSetSpace::complete(ConSet& s) const {
  for (uint32_t e : order_) {
    uint32_t fid = closure_->entry_formula(e);
    const FormulaPtr& f = closure_->formula(fid);
    if (kind_free(f->kind)) continue;
    if (determined_value(s, fid, closure_->entry_mask(e))) s.set(e);
  }
}

bool ConSetSpace::is_consistent(const ConSet& s) const {
  for (uint32_t e : order_) {
    uint32_t fid = closure_->entry_formula(e);
    IndexMask m = closure_->entry_mask(e);
    const FormulaPtr& f = closure_->formula(fid);
    if (kind_free(f->kind)) {
      if ((f->kind == Kind::Until || f->kind == Kind::WUntil) && s.test(e)) {
        uint32_t a = closure_->formula_id(f->kid(0));
        uint32_t b = closure_->formula_id(f->kid(1));
        if (!s.test(closure_->entry(a, m)) && !s.test(closure_->entry(b, m)))
          return false;
      }
      continue;
    }
    if (s.test(e) != determined_value(s, fid, m)) return false;
  }
  return true;
}

std::vector<ConSet> ConSetSpace::generate(
    const std::vector<uint32_t>& obligations,
    const std::vector<PropSet>& letters) const {
  ConSet base;
  base.bits.assign((closure_->num_entries() + 63) / 64, 0);
  base.letters = letters;
  std::vector<ConSet> out;
  std::set<ConSet> dedup;
  Gen gen(*this, out, dedup);
  std::vector<uint64_t> required(base.bits.size(), 0);
  gen.run(base, obligations, required);
  return out;
}

std::vector<ConSet> ConSetSpace::successors(
    const ConSet& s, uint32_t advanced,
    const std::vector<PropSet>& letters) const {
  std::vector<uint32_t> obligations;
  for (uint32_t e : order_) {
    if (!s.test(e)) continue;
    uint32_t fid = closure_->entry_formula(e);
    IndexMask m = closure_->entry_mask(e);
    const FormulaPtr& f = closure_->formula(fid);
    if (f->kind == Kind::Next) {
      obligations.push_back(
          closure_->entry(closure_->formula_id(f->kid(0)), m));
    } else if (f->kind == Kind::Until || f->kind == Kind::WUntil) {
      uint32_t b = closure_->formula_id(f->kid(1));
      if (!s.test(closure_->entry(b, m))) obligations.push_back(e);
    }
  }
  for (uint32_t j = 0; j < n(); ++j)
    if (!(advanced >> j & 1u) && letters[j] != s.letters[j])
      throw std::logic_error("letters of unadvanced traces must persist");
  return generate(obligations, letters);
}

std::vector<ConSet> ConSetSpace::all_consistent(
    const std::vector<PropSet>& letters, size_t max_bits) const {
  std::vector<uint32_t> free_entries;
  for (uint32_t e : order_)
    if (kind_free(closure_->formula(closure_->entry_formula(e))->kind))
      free_entries.push_back(e);
  if (free_entries.size() > max_bits)
    throw std::runtime_error("consistent-set enumeration too large");
  std::vector<ConSet> out;
  for (uint64_t choice = 0; choice < (1ull << free_entries.size());
       ++choice) {
    ConSet s;
    s.bits.assign((closure_->num_entries() + 63) / 64, 0);
    s.letters = letters;
    for (size_t i = 0; i < free_entries.size(); ++i)
      if (choice >> i & 1u) s.set(free_entries[i]);
    complete(s);
    if (is_consistent(s)) out.push_back(std::move(s));
  }
  return out;
}

std::vector<uint32_t> ConSetSpace::quantified_entries(const ConSet& s) const {
  std::vector<uint32_t> out;
  for (uint32_t e : order_) {
    Kind k = closure_->formula(closure_->entry_formula(e))->kind;
    if ((k == Kind::Exists || k == Kind::NExists) && s.test(e))
      out.push_back(e);
  }
  return out;
}

bool ConSetSpace::until_discharged(const ConSet& s, uint32_t entry) const {
  const FormulaPtr& f = closure_->formula(closure_->entry_formula(entry));
  uint32_t b = closure_->formula_id(f->kid(1));
  return s.test(closure_->entry(b, closure_->entry_mask(entry)));
}

std::string ConSetSpace::render(const ConSet& s) const {
  std::string out = "{";
  bool first = true;
  for (uint32_t e : order_) {
    if (!s.test(e)) continue;
    uint32_t fid = closure_->entry_formula(e);
    const FormulaPtr& f = closure_->formula(fid);
    if (is_propositional(f) && f->kind != Kind::Prop) continue;  // noise
    if (!first) out += ", ";
    out += "(" + print_formula(f) + ",";
    IndexMask m = closure_->entry_mask(e);
    out += "{";
    bool fi = true;
    for (uint32_t i = 0; i < n(); ++i)
      if (m >> i & 1u) {
        if (!fi) out += ",";
        out += std::to_string(i + 1);
        fi = false;
      }
    out += "})";
    first = false;
  }
  return out + "}";
}

}  // namespace ttl
