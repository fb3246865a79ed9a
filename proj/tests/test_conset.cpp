#include <doctest.h>

#include "ttl/conset.hpp"
#include "ttl/parse.hpp"

using namespace ttl;

static ConSetSpace make_space(const std::string& formula, uint32_t n,
                              std::shared_ptr<const IndexedClosure>* out_cl =
                                  nullptr,
                              const GenAtomRegistry& reg = {}) {
  auto cl = std::make_shared<IndexedClosure>(parse_formula(formula, reg), n);
  if (out_cl) *out_cl = cl;
  APContext ap;
  ap.intern("p");
  ap.intern("q");
  return ConSetSpace(cl, ap);
}

TEST_CASE("consistent sets of a bare proposition") {
  std::shared_ptr<const IndexedClosure> cl;
  auto space = make_space("p", 1, &cl);

  auto with_p = space.all_consistent({0b01});
  auto without_p = space.all_consistent({0b00});
  REQUIRE(with_p.size() == 1);
  REQUIRE(without_p.size() == 1);

  uint32_t pid = cl->formula_id(parse_formula("p"));
  uint32_t nid = cl->formula_id(parse_formula("!p"));
  CHECK(with_p[0].test(cl->entry(pid, 1)));
  CHECK(!with_p[0].test(cl->entry(nid, 1)));
  CHECK(without_p[0].test(cl->entry(nid, 1)));
  CHECK(!without_p[0].test(cl->entry(pid, 1)));
  // The empty index set carries every propositional claim.
  CHECK(with_p[0].test(cl->entry(pid, 0)));
  CHECK(with_p[0].test(cl->entry(nid, 0)));
  CHECK(space.is_consistent(with_p[0]));
}

TEST_CASE("nonemptiness claims need a nonempty index set") {
  std::shared_ptr<const IndexedClosure> cl;
  auto space = make_space("NE", 2, &cl);
  uint32_t ne = cl->formula_id(parse_formula("NE"));
  for (auto& s : space.all_consistent({0, 0})) {
    CHECK(!s.test(cl->entry(ne, 0)));
    for (IndexMask m = 1; m <= 3; ++m) CHECK(s.test(cl->entry(ne, m)));
  }
}

TEST_CASE("conjunction claims force both conjuncts with the same set") {
  std::shared_ptr<const IndexedClosure> cl;
  auto space = make_space("p & X q", 1, &cl);
  uint32_t both = cl->formula_id(parse_formula("p & X q"));
  uint32_t xq = cl->formula_id(parse_formula("X q"));
  uint32_t p = cl->formula_id(parse_formula("p"));
  for (auto letters : {uint32_t{0}, uint32_t{1}, uint32_t{2}, uint32_t{3}})
    for (auto& s : space.all_consistent({letters})) {
      if (!s.test(cl->entry(both, 1))) continue;
      CHECK(s.test(cl->entry(xq, 1)));
      CHECK(s.test(cl->entry(p, 1)));
    }
}

TEST_CASE("generation produces exactly the demanded obligations") {
  std::shared_ptr<const IndexedClosure> cl;
  auto space = make_space("X p", 1, &cl);
  uint32_t root = cl->entry(cl->root_id(), 1);
  auto states = space.generate({root}, {0b10});
  REQUIRE(states.size() == 1);
  CHECK(states[0].test(root));
  CHECK(space.is_consistent(states[0]));
}

TEST_CASE("local successors follow the step rules") {
  std::shared_ptr<const IndexedClosure> cl;
  auto space = make_space("X p", 1, &cl);

  uint32_t root = cl->entry(cl->root_id(), 1);
  uint32_t p1 = cl->entry(cl->formula_id(parse_formula("p")), 1);
  auto states = space.generate({root}, {0});
  REQUIRE(states.size() == 1);

  // Reading {p}: the claim steps to p and the letter matches.
  auto succ_p = space.successors(states[0], 1, {0b01});
  REQUIRE(succ_p.size() == 1);
  CHECK(succ_p[0].test(p1));

  // Reading {}: the stepped claim p contradicts the letter, so the run
  // dies here.
  auto succ_none = space.successors(states[0], 1, {0});
  CHECK(succ_none.empty());
  // A state without claims steps to a successor whose letter claims are
  // forced by the letter.
  auto idle = space.generate({}, {0});
  REQUIRE(idle.size() == 1);
  uint32_t np1 = cl->entry(cl->formula_id(parse_formula("!p")), 1);
  CHECK(idle[0].test(np1));
}

TEST_CASE("until obligations persist until discharged") {
  std::shared_ptr<const IndexedClosure> cl;
  auto space = make_space("p U q", 1, &cl);
  uint32_t u1 = cl->entry(cl->root_id(), 1);
  uint32_t q1 = cl->entry(cl->formula_id(parse_formula("q")), 1);

  // Claim the until under a letter with p only: it must persist.
  auto states = space.generate({u1}, {0b01});
  bool found_pending = false;
  for (auto& s : states) {
    if (s.test(q1)) continue;
    found_pending = true;
    CHECK(!space.until_discharged(s, u1));
    for (auto& nxt : space.successors(s, 1, {0b01})) CHECK(nxt.test(u1));
  }
  CHECK(found_pending);

  // Under a letter with q, generation can discharge immediately.
  auto dstates = space.generate({u1}, {0b10});
  bool discharged = false;
  for (auto& s : dstates)
    if (space.until_discharged(s, u1)) discharged = true;
  CHECK(discharged);
}

TEST_CASE("split claims decompose over partitions") {
  std::shared_ptr<const IndexedClosure> cl;
  auto space = make_space("X p \\/ X q", 2, &cl);
  uint32_t root = cl->entry(cl->root_id(), 3);
  uint32_t xp = cl->formula_id(parse_formula("X p"));
  uint32_t xq = cl->formula_id(parse_formula("X q"));
  auto states = space.generate({root}, {0, 0});
  // Each generated state realizes one of the four ordered partitions.
  CHECK(states.size() == 4);
  for (auto& s : states) {
    bool ok = false;
    for (IndexMask m = 0; m <= 3; ++m)
      if (s.test(cl->entry(xp, m)) && s.test(cl->entry(xq, 3 & ~m))) ok = true;
    CHECK(ok);
    CHECK(space.is_consistent(s));
  }
}

TEST_CASE("validator re-accepts every enumerated set") {
  std::shared_ptr<const IndexedClosure> cl;
  auto space =
      make_space("dep(p; q) OR ([p <= q] \\/ A1 (p U q))", 2, &cl);
  size_t count = 0;
  for (PropSet l1 : {0u, 1u, 2u, 3u})
    for (PropSet l2 : {0u, 1u, 2u, 3u})
      for (auto& s : space.all_consistent({l1, l2})) {
        CHECK(space.is_consistent(s));
        ++count;
      }
  CHECK(count > 0);
}
