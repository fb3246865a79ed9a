#include <doctest.h>

#include <functional>

#include "ttl/eval.hpp"
#include "ttl/parse.hpp"

using namespace ttl;

namespace {

struct Fixture {
  APContext ap;
  uint32_t p, q;
  Fixture() : p(ap.intern("p")), q(ap.intern("q")) {}

  PropSet P() const { return 1u << p; }
  PropSet Q() const { return 1u << q; }
};

// All lassos with prefix length <= 1 and loop length <= 2 over the given
// letters, canonicalized and deduplicated.
std::vector<LassoTrace> small_lassos(const std::vector<PropSet>& letters) {
  std::vector<LassoTrace> out;
  auto push = [&](LassoTrace t) {
    t = t.canonical();
    for (auto& u : out)
      if (u.prefix == t.prefix && u.loop == t.loop) return;
    out.push_back(std::move(t));
  };
  for (PropSet a : letters) push(LassoTrace({}, {a}));
  for (PropSet a : letters)
    for (PropSet b : letters) {
      push(LassoTrace({a}, {b}));
      push(LassoTrace({}, {a, b}));
      for (PropSet c : letters) push(LassoTrace({a}, {b, c}));
    }
  return out;
}

}  // namespace

TEST_CASE("single-trace evaluation matches hand values") {
  Fixture fx;
  LassoTrace t({fx.P()}, {0});
  CHECK(ltl_eval(t, 0, parse_formula("p"), fx.ap));
  CHECK(!ltl_eval(t, 1, parse_formula("p"), fx.ap));

  LassoTrace allp({}, {fx.P()});
  CHECK(ltl_eval(allp, 0, parse_formula("G p"), fx.ap));
  CHECK(!ltl_eval(t, 0, parse_formula("G p"), fx.ap));

  LassoTrace u({fx.P(), fx.P(), fx.Q()}, {0});
  CHECK(ltl_eval(u, 0, parse_formula("p U q"), fx.ap));
  CHECK(!ltl_eval(u, 0, parse_formula("p U (q & X q)"), fx.ap));
  CHECK(ltl_eval(u, 0, parse_formula("p W q"), fx.ap));
  CHECK(ltl_eval(LassoTrace({}, {fx.P()}), 0, parse_formula("p W q"), fx.ap));

  CHECK_THROWS(ltl_eval(t, 0, parse_formula("E X p"), fx.ap));
  CHECK_THROWS(ltl_eval(t, 0, parse_formula("dep(p)"), fx.ap));
}

TEST_CASE("empty team satisfies falsum and refutes NE") {
  Fixture fx;
  Team team;
  Tef tef = Tef::synchronous(0);
  EvalConfig cfg{&team, tef, 0, 0};
  CHECK(eval(cfg, parse_formula("FALSE"), TefFamily::sync(), fx.ap));
  CHECK(!eval(cfg, parse_formula("NE"), TefFamily::sync(), fx.ap));
  CHECK(eval(cfg, parse_formula("p"), TefFamily::sync(), fx.ap));
  CHECK(eval(cfg, parse_formula("!p"), TefFamily::sync(), fx.ap));
  CHECK(eval(cfg, parse_formula("dep(p; q)"), TefFamily::sync(), fx.ap));
  CHECK(eval(cfg, parse_formula("[p <= q]"), TefFamily::sync(), fx.ap));
  CHECK(eval(cfg, parse_formula("A1 NE"), TefFamily::sync(), fx.ap));
}

TEST_CASE("two copies reach further than one") {
  Fixture fx;
  LassoTrace t({fx.P(), fx.P()}, {0});
  Team T({t, t});
  Team S({t});
  auto xxp = parse_formula("X X p");

  auto rT = check_mode(T, xxp, Mode::Exists, TefFamily::kctx(1), fx.ap);
  CHECK(rT.verdict);
  REQUIRE(rT.witness);
  CHECK(is_k_context_bounded(*rT.witness, 1));

  auto rS = check_mode(S, xxp, Mode::Exists, TefFamily::kctx(1), fx.ap);
  CHECK(!rS.verdict);

  // Under the synchronous tef both teams fail.
  CHECK(!check_mode(T, xxp, Mode::Synchronous, TefFamily::sync(), fx.ap)
             .verdict);
}

TEST_CASE("team atoms at a configuration") {
  Fixture fx;
  LassoTrace a({fx.P()}, {0});
  LassoTrace b({fx.P() | fx.Q()}, {0});
  Team team({a, a});
  Tef sync = Tef::synchronous(2);

  CHECK(eval_team(team, sync, parse_formula("dep(p)"), TefFamily::sync(),
                  fx.ap));
  CHECK(eval_team(team, sync, parse_formula("NE"), TefFamily::sync(), fx.ap));

  (void)b;
  // Brute-force the inclusion clause for every pair of traces.
  auto incl = parse_formula("[p <= q]");
  for (auto& t1 : small_lassos({0, fx.P(), fx.Q(), fx.P() | fx.Q()})) {
    for (auto& t2 : small_lassos({0, fx.P(), fx.Q(), fx.P() | fx.Q()})) {
      Team tm({t1, t2});
      bool expect = true;
      for (auto& x : {t1, t2}) {
        bool found = false;
        for (auto& y : {t1, t2})
          if (fx.ap.has(x.at(0), "p") == fx.ap.has(y.at(0), "q")) found = true;
        expect = expect && found;
      }
      CHECK(eval_team(tm, Tef::synchronous(2), incl, TefFamily::sync(),
                      fx.ap) == expect);
    }
  }
}

TEST_CASE("splitting disjunction is a strict partition") {
  Fixture fx;
  LassoTrace hasp({}, {fx.P()});
  LassoTrace hasq({}, {fx.Q()});
  LassoTrace neither({}, {0});
  Tef sync2 = Tef::synchronous(2);

  Team good({hasp, hasq});
  CHECK(eval_team(good, sync2, parse_formula("p \\/ q"), TefFamily::sync(),
                  fx.ap));
  Team bad({hasp, neither});
  CHECK(!eval_team(bad, sync2, parse_formula("p \\/ q"), TefFamily::sync(),
                   fx.ap));
  // NE on both sides forces genuinely nonempty parts.
  Team single({hasp});
  CHECK(!eval_team(single, Tef::synchronous(1),
                   parse_formula("(NE & p) \\/ (NE & p)"), TefFamily::sync(),
                   fx.ap));
}

TEST_CASE("shift coherence between global step and shifted tef") {
  Fixture fx;
  std::vector<PropSet> letters{0, fx.P(), fx.Q(), fx.P() | fx.Q()};
  auto lassos = small_lassos(letters);
  std::vector<FormulaPtr> formulas{
      parse_formula("p"),        parse_formula("p U q"),
      parse_formula("X p"),      parse_formula("p W q"),
      parse_formula("dep(p)"),   parse_formula("NE & !q"),
  };
  Tef tef(2, {0, 0}, {0b01, 0b11}, {0b10, 0b01});
  int checked = 0;
  for (size_t i = 0; i + 1 < lassos.size() && checked < 60; i += 3) {
    Team team({lassos[i], lassos[(i + 7) % lassos.size()]});
    for (auto& f : formulas) {
      for (size_t k = 0; k <= 5; ++k) {
        EvalConfig at{&team, tef, k, 3};
        EvalConfig shifted{&team, tef_shift(tef, k), 0, 3};
        CHECK(eval(at, f, TefFamily::kctx(1), fx.ap) ==
              eval(shifted, f, TefFamily::kctx(1), fx.ap));
      }
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("boolean negation complements the evaluator") {
  Fixture fx;
  std::vector<PropSet> letters{0, fx.P(), fx.Q(), fx.P() | fx.Q()};
  auto lassos = small_lassos(letters);

  std::vector<FormulaPtr> formulas{
      parse_formula("p"),
      parse_formula("!p"),
      parse_formula("p & q"),
      parse_formula("p \\/ q"),
      parse_formula("p OR q"),
      parse_formula("X p"),
      parse_formula("p U q"),
      parse_formula("p W q"),
      parse_formula("NE"),
      parse_formula("dep(p; q)"),
      parse_formula("[p <= q]"),
      parse_formula("A1 (p U q)"),
      parse_formula("TRUE"),
      parse_formula("FALSE"),
      parse_formula("E X p"),
  };

  // Singleton teams: p vs BN(p) over every first letter.
  for (PropSet l : letters) {
    Team team({LassoTrace({l}, {0})});
    Tef s1 = Tef::synchronous(1);
    bool direct = eval_team(team, s1, parse_formula("p"), TefFamily::sync(),
                            fx.ap);
    bool negated = eval_team(team, s1, boolean_negation(parse_formula("p")),
                             TefFamily::sync(), fx.ap);
    CHECK(direct != negated);
  }

  // BN(p) holds on the empty team exactly when p does not (it does).
  {
    Team empty;
    Tef s0 = Tef::synchronous(0);
    CHECK(eval_team(empty, s0, parse_formula("p"), TefFamily::sync(), fx.ap));
    CHECK(!eval_team(empty, s0, boolean_negation(parse_formula("p")),
                     TefFamily::sync(), fx.ap));
  }

  // Complement and double-negation over all small teams of size <= 2.
  size_t step = lassos.size() / 5 + 1;
  for (auto& f : formulas) {
    auto bn = boolean_negation(f);
    auto bnbn = boolean_negation(bn);
    for (size_t i = 0; i < lassos.size(); i += 2)
      for (size_t j = i; j < lassos.size(); j += step) {
        Team team({lassos[i], lassos[j]});
        for (auto fam : {TefFamily::sync(), TefFamily::kctx(1)}) {
          Tef sync = Tef::synchronous(2);
          bool direct = eval_team(team, sync, f, fam, fx.ap);
          CAPTURE(print_formula(f));
          CAPTURE(i);
          CAPTURE(j);
          CHECK(eval_team(team, sync, bn, fam, fx.ap) == !direct);
          CHECK(eval_team(team, sync, bnbn, fam, fx.ap) == direct);
        }
      }
  }
}

TEST_CASE("conservativity on singleton teams") {
  Fixture fx;
  std::vector<PropSet> letters{0, fx.P(), fx.Q(), fx.P() | fx.Q()};
  auto lassos = small_lassos(letters);
  std::vector<FormulaPtr> formulas{
      parse_formula("p"),
      parse_formula("p U q"),
      parse_formula("G (p OR !p)"),
      parse_formula("X (p & q)"),
      parse_formula("p W (q & X p)"),
      parse_formula("F q \\/ G p"),
  };
  for (auto& f : formulas)
    for (auto& t : lassos) {
      Team team({t});
      bool classic = ltl_eval(t, 0, f, fx.ap);
      CHECK(check_mode(team, f, Mode::Exists, TefFamily::kctx(0), fx.ap)
                .verdict == classic);
      CHECK(check_mode(team, f, Mode::Forall, TefFamily::kctx(0), fx.ap)
                .verdict == classic);
      CHECK(check_mode(team, f, Mode::Synchronous, TefFamily::sync(), fx.ap)
                .verdict == classic);
    }
}

TEST_CASE("universal satisfaction is downward closed (spot check)") {
  Fixture fx;
  std::vector<PropSet> letters{0, fx.P()};
  auto lassos = small_lassos(letters);
  std::vector<FormulaPtr> formulas{
      parse_formula("p U !p"),
      parse_formula("X p \\/ G !p"),
      parse_formula("p W !p"),
  };
  for (auto& f : formulas)
    for (size_t i = 0; i < lassos.size(); ++i)
      for (size_t j = i; j < lassos.size(); ++j) {
        Team team({lassos[i], lassos[j]});
        for (auto fam : {TefFamily::sync(), TefFamily::kctx(1)}) {
          if (!check_mode(team, f, Mode::Forall, fam, fx.ap).verdict)
            continue;
          for (uint32_t mask = 0; mask < 4; ++mask) {
            Team sub = team.subteam(mask);
            CHECK(check_mode(sub, f, Mode::Forall, fam, fx.ap).verdict);
          }
        }
      }
}

TEST_CASE("multiset locality under proposition removal") {
  Fixture fx;
  LassoTrace t1({fx.P() | fx.Q(), fx.P()}, {0});
  LassoTrace t2({fx.P(), fx.P()}, {0});
  Team team({t1, t2});
  auto xxp = parse_formula("X X p");
  bool before =
      check_mode(team, xxp, Mode::Exists, TefFamily::kctx(1), fx.ap).verdict;
  // Dropping q keeps both members as distinct multiset entries.
  Team dropped({t1.without(fx.Q()), t2.without(fx.Q())});
  CHECK(dropped.size() == 2);
  bool after =
      check_mode(dropped, xxp, Mode::Exists, TefFamily::kctx(1), fx.ap)
          .verdict;
  CHECK(before == after);
  CHECK(before);
}

TEST_CASE("subteam atoms quantify over sub-multisets") {
  Fixture fx;
  LassoTrace hasp({}, {fx.P()});
  LassoTrace nop({}, {0});
  Tef sync2 = Tef::synchronous(2);

  // Every sub-multiset of an all-p team satisfies p; one stray trace
  // breaks it (the full set is itself a subteam).
  Team allp({hasp, hasp});
  CHECK(eval_team(allp, sync2, f_as(parse_formula("p")), TefFamily::sync(),
                  fx.ap));
  Team mixed({hasp, nop});
  CHECK(!eval_team(mixed, sync2, f_as(parse_formula("p")), TefFamily::sync(),
                   fx.ap));
  // Some nonempty sub-multiset of the mixed team is all-p.
  CHECK(eval_team(mixed, sync2, f_es(parse_formula("NE & p")),
                  TefFamily::sync(), fx.ap));
  Team none({nop, nop});
  CHECK(!eval_team(none, sync2, f_es(parse_formula("NE & p")),
                   TefFamily::sync(), fx.ap));
  // The empty sub-multiset always exists.
  CHECK(eval_team(none, sync2, f_es(parse_formula("FALSE")),
                  TefFamily::sync(), fx.ap));
}

TEST_CASE("temporal walks terminate on switching tefs") {
  Fixture fx;
  LassoTrace allp({}, {fx.P()});
  Team team({allp, allp});
  // The advancing trace alternates forever; the walk must still detect
  // the configuration cycle.
  Tef churn(2, {0, 0}, {}, {0b01, 0b10});
  CHECK(eval_team(team, churn, parse_formula("G p"), TefFamily::sync(),
                  fx.ap));
  CHECK(!eval_team(team, churn, parse_formula("p U q"), TefFamily::sync(),
                   fx.ap));
  CHECK(eval_team(team, churn, parse_formula("G p"), TefFamily::kctx(1),
                  fx.ap));
  CHECK(eval_team(team, churn, parse_formula("G p"), TefFamily::ksync(3),
                  fx.ap));
  // Once the inherited steps have left the family, no continuation
  // remains and existential quantifiers become vacuously false.
  CHECK(!eval_team(team, churn, parse_formula("X X (E X p)"),
                   TefFamily::kctx(0), fx.ap));
  CHECK(eval_team(team, churn, parse_formula("E X p"), TefFamily::kctx(0),
                  fx.ap));
  // Inside the family the quantifier walks terminate and succeed.
  Tef stay(2, {0, 0}, {}, {0b01});
  CHECK(eval_team(team, stay, parse_formula("G (E X p)"), TefFamily::kctx(1),
                  fx.ap));
}
