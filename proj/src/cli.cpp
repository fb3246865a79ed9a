#include "ttl/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ttl/automata.hpp"
#include "ttl/eval.hpp"
#include "ttl/game.hpp"
#include "ttl/io.hpp"
#include "ttl/parse.hpp"
#include "ttl/reductions.hpp"

namespace ttl {

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open " + path);
  return f;
}

// File-format problems are input errors, not engine failures.
template <typename Fn>
auto parse_input(Fn fn) {
  try {
    return fn();
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

// A formula argument starting with '@' names a file holding the text.
std::string resolve_formula_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  auto f = open_file(arg.substr(1));
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

FormulaPtr parse_formula_arg(const std::string& arg,
                             const GenAtomRegistry& atoms) {
  try {
    return parse_formula(resolve_formula_text(arg), atoms);
  } catch (const ParseError& e) {
    throw InputError(e.what());
  }
}

TefFamily make_family(const std::string& name, int k, bool k_given) {
  if (name == "sync") return TefFamily::sync();
  if (name == "ksync" || name == "kctx") {
    if (!k_given)
      throw InputError("family " + name + " needs an explicit -k");
    if (k < 0) throw InputError("-k must be nonnegative");
    return name == "ksync" ? TefFamily::ksync(k) : TefFamily::kctx(k);
  }
  throw InputError("unknown family: " + name + " (ksync|kctx|sync)");
}

Mode make_mode(const std::string& name) {
  if (name == "exists") return Mode::Exists;
  if (name == "forall") return Mode::Forall;
  if (name == "sync") return Mode::Synchronous;
  throw InputError("unknown mode: " + name + " (exists|forall|sync)");
}

struct PathcheckOutcome {
  bool verdict = false;
  std::optional<Tef> tef;  // witness or counterexample
  std::string engine;
};

PathcheckOutcome automata_pathcheck(const FormulaPtr& f, const Team& team,
                                    const APContext& ap, Mode mode,
                                    TefFamily family) {
  PathcheckOutcome out;
  out.engine = "automata";
  uint32_t n = static_cast<uint32_t>(team.size());
  if (n == 0) throw CapabilityError("the automata engine needs n >= 1");
  if (mode == Mode::Synchronous) family = TefFamily::sync();
  FormulaPtr goal = mode == Mode::Forall ? boolean_negation(f) : f;
  Aaba aut = degeneralize(build_gaaba(goal, n));
  GameResult res = run_acceptance(aut, GameInput::of_team(team), ap, family);
  if (mode == Mode::Forall) {
    out.verdict = !res.accepted;
    if (res.accepted) out.tef = res.witness_tef;
  } else {
    out.verdict = res.accepted;
    if (res.accepted) out.tef = res.witness_tef;
  }
  return out;
}

PathcheckOutcome oracle_pathcheck(const FormulaPtr& f, const Team& team,
                                  const APContext& ap, Mode mode,
                                  TefFamily family) {
  PathcheckOutcome out;
  out.engine = "evaluator";
  auto res = check_mode(team, f, mode, family, ap);
  out.verdict = res.verdict;
  out.tef = res.witness;
  return out;
}

int report(bool verdict, const std::string& engine,
           const std::optional<Tef>& tef,
           const std::optional<Team>& team, const APContext& ap, bool json,
           std::ostream& os) {
  if (json) {
    nlohmann::json j;
    j["version"] = 1;
    j["verdict"] = verdict;
    j["engine"] = engine;
    if (tef) j["tef"] = render_tef(*tef);
    if (team) {
      std::ostringstream ts;
      render_traces(*team, ap, ts);
      j["team"] = ts.str();
    }
    os << j.dump(2) << "\n";
  } else {
    os << (verdict ? "true" : "false") << "\n";
    if (tef) os << (verdict ? "witness " : "counterexample ")
                << render_tef(*tef) << "\n";
    if (team) {
      os << "team:\n";
      render_traces(*team, ap, os);
    }
  }
  return verdict ? kExitTrue : kExitFalse;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"temporal team logic toolkit"};
  app.require_subcommand(1);

  std::string formula_text, traces_path, kripke_path, tef_path, atoms_path;
  std::string mode_name = "exists", family_name, dump_path, machine_path;
  std::string variant = "eltl", out_kripke;
  int k = 0, n = 1, b = 0;
  bool k_given = false, cross_check = false, json = false;
  bool degeneralized = false;

  auto add_common = [&](CLI::App* c, bool with_family) {
    c->add_option("-f,--formula", formula_text, "formula text")->required();
    c->add_option("--atoms", atoms_path, "generalized atom tables file");
    c->add_option("--mode", mode_name, "exists|forall|sync");
    if (with_family) {
      c->add_option("--family", family_name, "ksync|kctx|sync");
      c->add_option("-k", k, "family bound")->each([&](const std::string&) {
        k_given = true;
      });
    }
    c->add_flag("--json", json, "JSON output");
    c->add_option("--dump-automaton", dump_path, "write the automaton here");
  };

  auto* pc = app.add_subcommand("pathcheck", "team satisfaction of a formula");
  add_common(pc, true);
  pc->add_option("--traces", traces_path, "trace file")->required();
  pc->add_option("--tef", tef_path, "explicit tef to evaluate under");
  pc->add_flag("--cross-check", cross_check,
               "run evaluator and automata engine and compare");

  auto* mc = app.add_subcommand("mc", "fixed-size model checking");
  add_common(mc, true);
  mc->add_option("--kripke", kripke_path, "structure file")->required();
  mc->add_option("-n", n, "team size")->required();

  auto* sat = app.add_subcommand("sat", "fixed-size satisfiability");
  add_common(sat, true);
  sat->add_option("-n", n, "team size")->required();

  auto* tr = app.add_subcommand("translate", "formula to automaton");
  add_common(tr, false);
  tr->add_option("-n", n, "team size")->required();
  tr->add_flag("--degeneralized", degeneralized, "emit the Büchi automaton");

  auto* em = app.add_subcommand("embed", "synchronous-mode embeddings");
  em->add_option("-f,--formula", formula_text, "formula text")->required();
  em->add_option("--variant", variant, "eltl|altl|ectl|actl");
  em->add_flag("--json", json, "JSON output");

  auto* n2c = app.add_subcommand("encode-n2c",
                                 "counter machine recurrence encoding");
  n2c->add_option("--machine", machine_path, "instruction file")->required();
  n2c->add_option("-b", b, "recurring instruction label")->required();
  n2c->add_option("--out-kripke", out_kripke, "write the structure here");
  n2c->add_flag("--json", json, "JSON output");

  std::vector<char*> argv;
  std::string prog = "teamtl";
  argv.push_back(prog.data());
  std::vector<std::string> copy = args;
  for (auto& a : copy) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      std::ostringstream os;
      app.exit(e, os, os);
      out << os.str();
      return kExitTrue;
    }
    std::ostringstream os;
    app.exit(e, os, os);
    err << os.str();
    return kExitInput;
  }

  try {
    GenAtomRegistry atoms;
    if (!atoms_path.empty()) {
      auto f = open_file(atoms_path);
      atoms = parse_input([&] { return parse_atom_tables(f); });
    }

    if (pc->parsed()) {
      APContext ap;
      auto tf = open_file(traces_path);
      Team team = parse_input([&] { return parse_traces(tf, ap); });
      FormulaPtr f = parse_formula_arg(formula_text, atoms);
      Mode mode = make_mode(mode_name);
      if (!tef_path.empty()) {
        auto tfp = open_file(tef_path);
        Tef tef = parse_input(
            [&] { return parse_tef(tfp, static_cast<uint32_t>(team.size())); });
        TefFamily family = family_name.empty()
                               ? TefFamily::sync()
                               : make_family(family_name, k, k_given);
        if (!is_quantifier_free(f) && !family.enumerable())
          throw CapabilityError(
              "replaying a quantified formula under an explicit tef needs an "
              "enumerable family");
        bool verdict = eval_team(team, tef, f, family, ap);
        return report(verdict, "evaluator", std::nullopt, std::nullopt, ap,
                      json, out);
      }
      if (family_name.empty())
        throw InputError("--family is required (verdicts depend on it)");
      TefFamily family = make_family(family_name, k, k_given);
      PathcheckOutcome res;
      if (!family.enumerable()) {
        if (cross_check)
          throw CapabilityError(
              "--cross-check needs an enumerable family (kctx or sync)");
        res = automata_pathcheck(f, team, ap, mode, family);
      } else if (!cross_check) {
        res = oracle_pathcheck(f, team, ap, mode, family);
      } else {
        res = oracle_pathcheck(f, team, ap, mode, family);
        auto other = automata_pathcheck(f, team, ap, mode, family);
        if (other.verdict != res.verdict)
          throw CapabilityError("engines disagree: evaluator says " +
                                std::to_string(res.verdict) +
                                ", automata say " +
                                std::to_string(other.verdict));
        res.engine = "evaluator+automata";
      }
      if (!dump_path.empty()) {
        std::ofstream df(dump_path);
        FormulaPtr goal = mode == Mode::Forall ? boolean_negation(f) : f;
        dump_automaton(build_gaaba(goal, static_cast<uint32_t>(team.size())),
                       df);
      }
      return report(res.verdict, res.engine, res.tef, std::nullopt, ap, json,
                    out);
    }

    if (mc->parsed()) {
      APContext ap;
      auto kf = open_file(kripke_path);
      KripkeStructure ks = parse_input([&] { return parse_kripke(kf, ap); });
      FormulaPtr f = parse_formula_arg(formula_text, atoms);
      Mode mode = make_mode(mode_name);
      if (n < 1) throw InputError("-n must be >= 1");
      if (mode == Mode::Exists)
        throw CapabilityError(
            "existential-mode model checking interleaves team choice with an "
            "adversarial tef; use mode forall or sync");
      TefFamily family = mode == Mode::Synchronous
                             ? TefFamily::sync()
                             : make_family(family_name, k, k_given);
      Aaba aut = degeneralize(
          build_gaaba(boolean_negation(f), static_cast<uint32_t>(n)));
      if (!dump_path.empty()) {
        std::ofstream df(dump_path);
        dump_automaton(aut.base, df);
      }
      GameResult res = emptiness(aut, family,
                                 GameInput::of_kripke(ks, n), ap);
      bool verdict = !res.accepted;  // no counterexample team
      return report(verdict, "automata", res.accepted ? res.witness_tef
                                                      : std::nullopt,
                    res.accepted ? res.witness_team : std::nullopt, ap, json,
                    out);
    }

    if (sat->parsed()) {
      APContext ap;
      FormulaPtr f = parse_formula_arg(formula_text, atoms);
      for (auto& p : props_of(f)) ap.intern(p);
      Mode mode = make_mode(mode_name);
      if (n < 1) throw InputError("-n must be >= 1");
      if (mode == Mode::Forall)
        throw CapabilityError(
            "universal-mode satisfiability interleaves team choice with an "
            "adversarial tef; use mode exists or sync");
      TefFamily family = mode == Mode::Synchronous
                             ? TefFamily::sync()
                             : make_family(family_name, k, k_given);
      Aaba aut = degeneralize(build_gaaba(f, static_cast<uint32_t>(n)));
      if (!dump_path.empty()) {
        std::ofstream df(dump_path);
        dump_automaton(aut.base, df);
      }
      GameResult res = emptiness(aut, family, GameInput::free(n), ap);
      return report(res.accepted, "automata", res.witness_tef,
                    res.witness_team, ap, json, out);
    }

    if (tr->parsed()) {
      FormulaPtr f = parse_formula_arg(formula_text, atoms);
      Gaaba g = build_gaaba(f, static_cast<uint32_t>(n));
      std::ostringstream buf;
      if (degeneralized)
        dump_automaton(degeneralize(g).base, buf);
      else
        dump_automaton(g, buf);
      if (dump_path.empty()) {
        out << buf.str();
      } else {
        std::ofstream df(dump_path);
        df << buf.str();
      }
      return kExitTrue;
    }

    if (em->parsed()) {
      FormulaPtr f = parse_formula_arg(formula_text, atoms);
      FormulaPtr g;
      if (variant == "eltl")
        g = embed_sync_ltl_exists(f, "o");
      else if (variant == "altl")
        g = embed_sync_ltl_forall(f, "o");
      else if (variant == "ectl")
        g = embed_sync_ctl(f, CtlVariant::Exists, "o");
      else if (variant == "actl")
        g = embed_sync_ctl(f, CtlVariant::Forall, "o");
      else
        throw InputError("unknown variant: " + variant);
      if (json) {
        nlohmann::json j;
        j["version"] = 1;
        j["formula"] = print_formula(g);
        out << j.dump(2) << "\n";
      } else {
        out << print_formula(g) << "\n";
      }
      return kExitTrue;
    }

    if (n2c->parsed()) {
      auto mf = open_file(machine_path);
      CounterMachine m = parse_input([&] { return parse_machine(mf); });
      APContext ap;
      N2cEncoding enc = encode_n2c(m, static_cast<uint32_t>(b), ap);
      if (json) {
        nlohmann::json j;
        j["version"] = 1;
        j["formula"] = print_formula(enc.formula);
        j["states"] = enc.structure.num_states();
        out << j.dump(2) << "\n";
      } else {
        out << print_formula(enc.formula) << "\n";
      }
      std::ostream* ks = &out;
      std::ofstream kf;
      if (!out_kripke.empty()) {
        kf.open(out_kripke);
        ks = &kf;
      }
      for (size_t i = 0; i < enc.structure.num_states(); ++i)
        *ks << "state " << enc.structure.states[i] << " "
            << ap.render(enc.structure.labels[i]) << "\n";
      for (size_t i = 0; i < enc.structure.num_states(); ++i)
        for (uint32_t j : enc.structure.succ[i])
          *ks << "edge " << enc.structure.states[i] << " "
              << enc.structure.states[j] << "\n";
      *ks << "root " << enc.structure.states[enc.structure.root] << "\n";
      return kExitTrue;
    }

    throw InputError("no command given");
  } catch (const CapabilityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitCapability;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    // Unexpected engine errors are capability problems, not verdicts.
    err << "error: " << e.what() << "\n";
    return kExitCapability;
  }
}

}  // namespace ttl
