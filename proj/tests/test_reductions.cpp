#include <doctest.h>

#include <sstream>

#include "ttl/eval.hpp"
#include "ttl/io.hpp"
#include "ttl/parse.hpp"
#include "ttl/reductions.hpp"

using namespace ttl;

namespace {

struct Fixture {
  APContext ap;
  uint32_t p, o;
  Fixture() : p(ap.intern("p")), o(ap.intern("o")) {}
};

Team alternated(const std::vector<LassoTrace>& ts, APContext& ap) {
  Team t(ts);
  return t.with_alternating("o", ap);
}

}  // namespace

TEST_CASE("synchrony pin accepts exactly the synchronous tef") {
  Fixture fx;
  auto pins = tef_property_formulas("o");
  LassoTrace base({}, {1u << fx.p});
  Team team = alternated({base, base}, fx.ap);

  Tef sync = Tef::synchronous(2);
  CHECK(eval_team(team, sync, pins["synch"], TefFamily::sync(), fx.ap));
  CHECK(eval_team(team, sync, pins["synch_split"], TefFamily::sync(), fx.ap));

  // One-step desync breaks it.
  Tef desync(2, {0, 0}, {0b01, 0b10}, {0b11});
  CHECK(!eval_team(team, desync, pins["synch"], TefFamily::sync(), fx.ap));
  CHECK(
      !eval_team(team, desync, pins["synch_split"], TefFamily::sync(), fx.ap));

  // The defect detector fires exactly on non-synchronous steps.
  auto fdefect = f_finally(pins["defect"]);
  CHECK(!eval_team(team, sync, fdefect, TefFamily::sync(), fx.ap));
  CHECK(eval_team(team, desync, fdefect, TefFamily::sync(), fx.ap));
}

TEST_CASE("fairness formula tracks starved traces") {
  Fixture fx;
  LassoTrace base({}, {1u << fx.p});
  Team team = alternated({base, base}, fx.ap);
  auto pins = tef_property_formulas("o");

  Tef fair(2, {0, 0}, {}, {0b01, 0b10});
  CHECK(check_property(fair, TefProp::Fair));
  CHECK(eval_team(team, fair, pins["fair"], TefFamily::sync(), fx.ap));

  Tef starve(2, {0, 0}, {0b10}, {0b01});
  CHECK(!check_property(starve, TefProp::Fair));
  CHECK(!eval_team(team, starve, pins["fair"], TefFamily::sync(), fx.ap));
}

TEST_CASE("randomized tef property agreement") {
  Fixture fx;
  LassoTrace base({}, {1u << fx.p});
  Team team = alternated({base, base, base}, fx.ap);
  auto pins = tef_property_formulas("o");
  auto fdefect = f_finally(pins["defect"]);

  uint64_t seed = 0x5eed;
  auto rnd = [&]() {
    seed = seed * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<uint32_t>(seed >> 33);
  };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<AdvSet> pre, loop;
    size_t np = rnd() % 3, nl = 1 + rnd() % 3;
    for (size_t i = 0; i < np; ++i) pre.push_back(1 + rnd() % 7);
    for (size_t i = 0; i < nl; ++i) loop.push_back(1 + rnd() % 7);
    Tef tef(3, {0, 0, 0}, pre, loop);

    CHECK(eval_team(team, tef, pins["synch"], TefFamily::sync(), fx.ap) ==
          check_property(tef, TefProp::Synchronous));
    CHECK(eval_team(team, tef, pins["fair"], TefFamily::sync(), fx.ap) ==
          check_property(tef, TefProp::Fair));
    bool has_defect = false;
    for (size_t i = 0; i < pre.size() + loop.size(); ++i)
      if (tef.step(i) != 0b111) has_defect = true;
    CHECK(eval_team(team, tef, fdefect, TefFamily::sync(), fx.ap) ==
          has_defect);
  }
}

TEST_CASE("ctl translation emits the displayed shapes") {
  auto xstar = embed_sync_ctl(parse_formula("X p"), CtlVariant::Exists, "o");
  // (X p)* = EX(dep(o) & p), conjoined with the alternation pin.
  CHECK(xstar->kind == Kind::And);
  CHECK(print_formula(xstar->kid(0)) == "E X (dep(o) & p)");

  auto gstar = embed_sync_ctl(parse_formula("G p"), CtlVariant::Forall, "o");
  CHECK(gstar->kind == Kind::And);
  CHECK(print_formula(gstar->kid(0)) == "A (p W (FALSE \\/ [o <= !o]))");

  // Fragment membership: the exists variant uses no inclusion atoms, the
  // forall variant no Boolean disjunction.
  auto eu = fragment_use(
      embed_sync_ctl(parse_formula("p U q"), CtlVariant::Exists, "o"));
  CHECK(!eu.incl);
  CHECK(!eu.forall_modal);
  auto au = fragment_use(
      embed_sync_ctl(parse_formula("p U q"), CtlVariant::Forall, "o"));
  CHECK(!au.bool_or);
  CHECK(!au.dep);
  CHECK(!au.exists_modal);

  auto el = fragment_use(embed_sync_ltl_exists(parse_formula("p U q"), "o"));
  CHECK(!el.ne);
  CHECK(!el.incl);
  CHECK(!el.dep);
  auto al = fragment_use(embed_sync_ltl_forall(parse_formula("p U q"), "o"));
  CHECK(al.ne);
  CHECK(al.bool_or);
  CHECK(!al.incl);

  CHECK_THROWS(embed_sync_ltl_exists(parse_formula("o & p"), "o"));
  CHECK_THROWS(embed_sync_ltl_exists(parse_formula("E X p"), "o"));
}

TEST_CASE("embeddings are exact over the synchronous family") {
  Fixture fx;
  PropSet P = 1u << fx.p;
  std::vector<LassoTrace> lassos{
      LassoTrace({}, {P}),  LassoTrace({}, {0}),    LassoTrace({P}, {0}),
      LassoTrace({0}, {P}), LassoTrace({}, {P, 0}),
  };
  std::vector<FormulaPtr> formulas{
      parse_formula("p"),         parse_formula("X p"),
      parse_formula("p U !p"),    parse_formula("G p"),
      parse_formula("F p"),       parse_formula("p W !p"),
      parse_formula("p \\/ !p"),  parse_formula("X X p"),
  };
  for (auto& f : formulas) {
    auto eplus = embed_sync_ltl_exists(f, "o");
    auto eminus = embed_sync_ltl_forall(f, "o");
    auto cplus = embed_sync_ctl(f, CtlVariant::Exists, "o");
    auto cminus = embed_sync_ctl(f, CtlVariant::Forall, "o");
    for (size_t i = 0; i < lassos.size(); ++i)
      for (size_t j = i; j < lassos.size(); ++j) {
        Team plain({lassos[i], lassos[j]});
        Team marked = plain.with_alternating("o", fx.ap);
        bool lhs = check_mode(plain, f, Mode::Synchronous, TefFamily::sync(),
                              fx.ap)
                       .verdict;
        CAPTURE(print_formula(f));
        CAPTURE(i);
        CAPTURE(j);
        CHECK(lhs == check_mode(marked, eplus, Mode::Exists,
                                TefFamily::sync(), fx.ap)
                         .verdict);
        CHECK(lhs == check_mode(marked, eminus, Mode::Forall,
                                TefFamily::sync(), fx.ap)
                         .verdict);
        CHECK(lhs == check_mode(marked, cplus, Mode::Exists,
                                TefFamily::sync(), fx.ap)
                         .verdict);
        CHECK(lhs == check_mode(marked, cminus, Mode::Forall,
                                TefFamily::sync(), fx.ap)
                         .verdict);
      }
  }
}

TEST_CASE("desynchronized tefs are absorbed in the universal embedding") {
  Fixture fx;
  PropSet P = 1u << fx.p;
  LassoTrace base({}, {P});
  Team marked = alternated({base, base}, fx.ap);
  auto f = parse_formula("G p");
  auto eminus = embed_sync_ltl_forall(f, "o");
  // Every context-bounded (hence desynchronized) tef satisfies the
  // translated formula via the defect escape.
  for (auto& tef :
       enumerate_family(TefFamily::kctx(1), marked, 3))
    CHECK(eval_team(marked, tef, eminus, TefFamily::kctx(1), fx.ap));
  // And the existential embedding finds no witness among them.
  auto eplus = embed_sync_ltl_exists(f, "o");
  for (auto& tef : enumerate_family(TefFamily::kctx(1), marked, 3))
    CHECK(!eval_team(marked, tef, eplus, TefFamily::kctx(1), fx.ap));
}

TEST_CASE("counter machine encoding is linear with zero residual") {
  auto machine = [](uint32_t n) {
    CounterMachine m;
    for (uint32_t i = 0; i < n; ++i)
      m.instrs.push_back({CounterInstr::Op::Inc, true, i % n, (i + 1) % n});
    return m;
  };
  std::vector<uint32_t> ns{1, 2, 4, 8, 16};
  std::vector<size_t> sizes;
  for (uint32_t n : ns) {
    APContext ap;
    auto enc = encode_n2c(machine(n), 0, ap);
    sizes.push_back(formula_size(enc.formula));
    enc.structure.validate();
  }
  // Affine fit through the first two points must hit the rest exactly.
  double slope = double(sizes[1] - sizes[0]) / (ns[1] - ns[0]);
  double icept = double(sizes[0]) - slope * ns[0];
  for (size_t i = 0; i < ns.size(); ++i)
    CHECK(double(sizes[i]) == slope * ns[i] + icept);
}

TEST_CASE("counter machine structure carries the marker alternation") {
  APContext ap;
  CounterMachine m;
  m.instrs.push_back({CounterInstr::Op::Inc, true, 0, 0});
  m.instrs.push_back({CounterInstr::Op::IfZero, false, 0, 1});
  auto enc = encode_n2c(m, 1, ap);
  enc.structure.validate();
  auto o = ap.find("o");
  REQUIRE(o);
  // Every edge flips the marker, and the root carries it.
  bool root_marked = (enc.structure.labels[enc.structure.root] >> *o) & 1u;
  CHECK(root_marked);
  for (size_t i = 0; i < enc.structure.num_states(); ++i)
    for (uint32_t j : enc.structure.succ[i]) {
      bool a = (enc.structure.labels[i] >> *o) & 1u;
      bool b = (enc.structure.labels[j] >> *o) & 1u;
      CHECK(a != b);
    }
  // The formula parses back and mentions the recurring label.
  auto text = print_formula(enc.formula);
  auto back = parse_formula(text);
  CHECK(structurally_equal(back, enc.formula));
  CHECK(props_of(enc.formula).count("i1"));
}

TEST_CASE("one-instruction machine mentions each schema once") {
  APContext ap;
  CounterMachine m;
  m.instrs.push_back({CounterInstr::Op::Dec, false, 0, 0});
  auto enc = encode_n2c(m, 0, ap);
  std::string text = print_formula(enc.formula);
  // only(0) is the bare label under the default encoding.
  CHECK(text.find("i0") != std::string::npos);
  // Strict mutual exclusion is available behind the option.
  N2cOptions strict;
  strict.strict_only = true;
  APContext ap2;
  CounterMachine m2;
  m2.instrs.push_back({CounterInstr::Op::Dec, false, 0, 0});
  m2.instrs.push_back({CounterInstr::Op::Inc, true, 1, 0});
  auto enc2 = encode_n2c(m2, 0, ap2, strict);
  CHECK(formula_size(enc2.formula) >
        formula_size(encode_n2c(m2, 0, ap2).formula));
}

TEST_CASE("machine text format") {
  std::istringstream in(
      "INC L 1 0\n"
      "DEC R 0 0\n"
      "IFZ L 0 1\n");
  auto m = parse_machine(in);
  REQUIRE(m.instrs.size() == 3);
  CHECK(m.instrs[0].op == CounterInstr::Op::Inc);
  CHECK(m.instrs[0].left);
  CHECK(m.instrs[2].op == CounterInstr::Op::IfZero);
  CHECK(!m.instrs[1].left);

  std::istringstream bad("INC L 5 0\n");
  CHECK_THROWS(parse_machine(bad));
}
