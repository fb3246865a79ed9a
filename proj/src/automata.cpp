#include "ttl/automata.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ttl {

PosBool PosBool::conj(std::vector<PosBool> ks) {
  for (auto& k : ks)
    if (k.node == Node::False) return f();
  std::erase_if(ks, [](const PosBool& k) { return k.node == Node::True; });
  if (ks.empty()) return t();
  if (ks.size() == 1) return ks[0];
  return {Node::And, 0, std::move(ks)};
}

PosBool PosBool::disj(std::vector<PosBool> ks) {
  for (auto& k : ks)
    if (k.node == Node::True) return t();
  std::erase_if(ks, [](const PosBool& k) { return k.node == Node::False; });
  if (ks.empty()) return f();
  if (ks.size() == 1) return ks[0];
  return {Node::Or, 0, std::move(ks)};
}

void PosBool::states(std::vector<uint32_t>& out) const {
  if (node == Node::State) out.push_back(state);
  for (auto& k : kids) k.states(out);
}

PosBool PosBool::mapped(const std::vector<uint32_t>& state_map) const {
  PosBool out = *this;
  if (node == Node::State) out.state = state_map[state];
  for (auto& k : out.kids) k = k.mapped(state_map);
  return out;
}

std::string PosBool::render() const {
  switch (node) {
    case Node::True: return "true";
    case Node::False: return "false";
    case Node::State: return "s" + std::to_string(state);
    case Node::And:
    case Node::Or: {
      std::string out = "(";
      for (size_t i = 0; i < kids.size(); ++i) {
        if (i) out += node == Node::And ? " & " : " | ";
        out += kids[i].render();
      }
      return out + ")";
    }
  }
  return "false";
}

PosBool parse_posbool(const std::string& text, size_t& pos) {
  auto skip = [&] {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  };
  skip();
  if (pos >= text.size()) throw std::runtime_error("bad posbool");
  if (text[pos] == '(') {
    ++pos;
    std::vector<PosBool> kids;
    kids.push_back(parse_posbool(text, pos));
    skip();
    char op = 0;
    while (pos < text.size() && text[pos] != ')') {
      char c = text[pos];
      if (c != '&' && c != '|') throw std::runtime_error("bad posbool op");
      if (op && op != c) throw std::runtime_error("mixed posbool ops");
      op = c;
      ++pos;
      kids.push_back(parse_posbool(text, pos));
      skip();
    }
    if (pos >= text.size()) throw std::runtime_error("unclosed posbool");
    ++pos;
    if (kids.size() == 1) return kids[0];
    return op == '&' ? PosBool::conj(std::move(kids))
                     : PosBool::disj(std::move(kids));
  }
  if (text.compare(pos, 4, "true") == 0) {
    pos += 4;
    return PosBool::t();
  }
  if (text.compare(pos, 5, "false") == 0) {
    pos += 5;
    return PosBool::f();
  }
  if (text[pos] == 's') {
    ++pos;
    uint32_t v = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
      v = v * 10 + (text[pos] - '0');
      ++pos;
      any = true;
    }
    if (!any) throw std::runtime_error("bad posbool state");
    return PosBool::leaf(v);
  }
  throw std::runtime_error("bad posbool");
}

const PosBool& Gaaba::trans(uint32_t q, PropSet letter, uint32_t dir) const {
  static const PosBool kFalse = PosBool::f();
  auto it = delta.find({q, letter, dir});
  return it == delta.end() ? kFalse : it->second;
}

void Gaaba::check() const {
  if (accept_sets.empty()) throw std::runtime_error("no acceptance sets");
  for (auto& fs : accept_sets)
    for (uint32_t q : fs)
      if (q >= num_states) throw std::runtime_error("acceptance out of range");
  std::vector<uint32_t> used;
  init.states(used);
  for (auto& [key, pb] : delta) pb.states(used);
  for (uint32_t q : used)
    if (q >= num_states) throw std::runtime_error("transition out of range");
}

std::optional<uint32_t> TransLayer::find_state(const ConSet& s) const {
  auto it = index.find(s);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<PropSet> make_alphabet(size_t props) {
  if (props > 10)
    throw std::runtime_error("alphabet too large for explicit translation");
  std::vector<PropSet> out;
  for (PropSet l = 0; l < (1u << props); ++l) out.push_back(l);
  return out;
}

// Letter vectors for the advanced traces, spliced over the previous ones.
void letter_choices(const std::vector<PropSet>& alphabet,
                    const std::vector<PropSet>& base, uint32_t advanced,
                    uint32_t n,
                    std::vector<std::vector<PropSet>>& out) {
  out.assign(1, base);
  for (uint32_t d = 0; d < n; ++d) {
    if (!(advanced >> d & 1u)) continue;
    std::vector<std::vector<PropSet>> next;
    for (auto& v : out)
      for (PropSet l : alphabet) {
        auto w = v;
        w[d] = l;
        next.push_back(std::move(w));
      }
    out = std::move(next);
  }
}

struct Builder {
  uint32_t n;
  std::vector<std::string> props;
  APContext ap;

  explicit Builder(uint32_t n_, std::vector<std::string> props_)
      : n(n_), props(std::move(props_)) {
    for (auto& p : props) ap.intern(p);
  }

  Gaaba build(const FormulaPtr& raw) {
    FormulaPtr f = eliminate_forall(raw);
    auto layer = std::make_shared<TransLayer>();
    layer->formula = f;
    layer->closure = std::make_shared<IndexedClosure>(f, n, true);
    layer->space = std::make_shared<ConSetSpace>(layer->closure, ap);
    layer->alphabet = make_alphabet(props.size());

    // Nested automata for quantified subformulas, shared alphabet.
    for (uint32_t id : layer->closure->ids_of_kind(Kind::Exists))
      add_nested(*layer, id);
    for (uint32_t id : layer->closure->ids_of_kind(Kind::NExists))
      add_nested(*layer, id);

    // Reachable states: seed with the canonical sets claiming the root at
    // any index set under any letter vector, then step in every
    // direction-set/letter combination.
    std::vector<ConSet> todo;
    auto intern_state = [&](const ConSet& s) {
      auto it = layer->index.find(s);
      if (it != layer->index.end()) return it->second;
      uint32_t id = static_cast<uint32_t>(layer->states.size());
      layer->index.emplace(s, id);
      layer->states.push_back(s);
      todo.push_back(s);
      return id;
    };

    uint32_t root_id = layer->closure->root_id();
    std::vector<std::vector<PropSet>> seeds;
    letter_choices(layer->alphabet, std::vector<PropSet>(n, 0),
                   layer->closure->full_mask(), n, seeds);
    for (IndexMask m = 0; m <= layer->closure->full_mask(); ++m)
      for (auto& letters : seeds)
        for (auto& s : layer->space->generate(
                 {layer->closure->entry(root_id, m)}, letters))
          intern_state(s);

    while (!todo.empty()) {
      ConSet s = todo.back();
      todo.pop_back();
      if (layer->states.size() > 100000)
        throw std::runtime_error(
            "translation state space exceeds 100000 states; reduce the "
            "formula, the trace count or the alphabet");
      for (uint32_t D = 1; D <= layer->closure->full_mask(); ++D) {
        std::vector<std::vector<PropSet>> next_letters;
        letter_choices(layer->alphabet, s.letters, D, n, next_letters);
        for (auto& letters : next_letters)
          for (auto& s2 : layer->space->successors(s, D, letters))
            intern_state(s2);
      }
    }

    // Per-direction transition formulas over the layer's own states.
    Gaaba g;
    g.n = n;
    g.props = props;
    g.layer = layer;
    uint32_t own = static_cast<uint32_t>(layer->states.size());
    for (uint32_t q = 0; q < own; ++q) {
      for (uint32_t d = 0; d < n; ++d) {
        for (PropSet l : layer->alphabet) {
          auto letters = layer->states[q].letters;
          letters[d] = l;
          std::vector<PosBool> alts;
          for (auto& s2 :
               layer->space->successors(layer->states[q], 1u << d, letters)) {
            auto id = layer->find_state(s2);
            if (id) alts.push_back(PosBool::leaf(*id));
          }
          PosBool pb = PosBool::disj(std::move(alts));
          if (!pb.is_false()) g.delta[{q, l, d + 1}] = std::move(pb);
        }
      }
    }

    // Fold nested automata into the id space after the layer's states.
    uint32_t total = own;
    for (auto& [fid, aut] : layer->nested) {
      layer->nested_offset[fid] = total;
      uint32_t count = aut->base.num_states;
      std::vector<uint32_t> remap(count);
      for (uint32_t i = 0; i < count; ++i) remap[i] = total + i;
      for (auto& [key, pb] : aut->base.delta) {
        auto [q, l, d] = key;
        g.delta[{total + q, l, d}] = pb.mapped(remap);
      }
      total += count;
    }
    layer->state_count_with_nested = total;
    g.num_states = total;

    std::vector<PosBool> init_alts;
    for (uint32_t q = 0; q < own; ++q)
      if (layer->states[q].test(
              layer->closure->entry(root_id, layer->closure->full_mask())))
        init_alts.push_back(PosBool::leaf(q));
    g.init = PosBool::disj(std::move(init_alts));

    // One acceptance set per indexed until entry that some state leaves
    // pending; nested automata contribute their own sets, widened with
    // every state outside them.
    for (uint32_t uid : layer->closure->ids_of_kind(Kind::Until)) {
      for (IndexMask m = 0; m <= layer->closure->full_mask(); ++m) {
        uint32_t e = layer->closure->entry(uid, m);
        std::vector<uint32_t> fs;
        for (uint32_t q = 0; q < own; ++q)
          if (!layer->states[q].test(e) ||
              layer->space->until_discharged(layer->states[q], e))
            fs.push_back(q);
        if (fs.size() == own) continue;  // no constraint
        for (uint32_t x = own; x < total; ++x) fs.push_back(x);
        g.accept_sets.push_back(std::move(fs));
      }
    }
    for (auto& [fid, aut] : layer->nested) {
      uint32_t off = layer->nested_offset[fid];
      std::vector<uint32_t> fs;
      for (uint32_t x = 0; x < total; ++x)
        if (x < off || x >= off + aut->base.num_states) fs.push_back(x);
      for (uint32_t q : aut->accepting()) fs.push_back(off + q);
      if (fs.size() == total) continue;
      std::sort(fs.begin(), fs.end());
      g.accept_sets.push_back(std::move(fs));
    }
    if (g.accept_sets.empty()) {
      std::vector<uint32_t> all(total);
      for (uint32_t i = 0; i < total; ++i) all[i] = i;
      g.accept_sets.push_back(std::move(all));
    }

    for (uint32_t q = 0; q < own; ++q)
      g.state_names.push_back(layer->space->render(layer->states[q]));
    for (auto& [fid, aut] : layer->nested) {
      for (uint32_t i = 0; i < aut->base.num_states; ++i) {
        std::string inner = i < aut->base.state_names.size()
                                ? aut->base.state_names[i]
                                : "s" + std::to_string(i);
        g.state_names.push_back(
            "sub(" + print_formula(layer->closure->formula(fid)) + ")/" +
            inner);
      }
    }
    return g;
  }

  void add_nested(TransLayer& layer, uint32_t fid) {
    const FormulaPtr& qf = layer.closure->formula(fid);
    Builder sub(n, props);
    Gaaba inner = sub.build(qf->kid(0));
    layer.nested[fid] = std::make_shared<Aaba>(degeneralize(inner));
  }
};

}  // namespace

Gaaba build_gaaba(const FormulaPtr& f, uint32_t n,
                  const std::vector<std::string>& extra_props) {
  if (n < 1) throw std::invalid_argument("need at least one trace");
  std::set<std::string> names = props_of(f);
  for (auto& p : extra_props) names.insert(p);
  Builder b(n, std::vector<std::string>(names.begin(), names.end()));
  return b.build(f);
}

Aaba degeneralize(const Gaaba& g) {
  g.check();
  uint32_t m = static_cast<uint32_t>(g.accept_sets.size());
  std::vector<std::vector<bool>> in_set(m,
                                        std::vector<bool>(g.num_states, false));
  for (uint32_t i = 0; i < m; ++i)
    for (uint32_t q : g.accept_sets[i]) in_set[i][q] = true;

  Aaba out;
  out.degen_m = m;
  out.degen_of = std::make_shared<Gaaba>(g);
  Gaaba& b = out.base;
  b.n = g.n;
  b.props = g.props;
  b.layer = g.layer;
  b.num_states = g.num_states * m;

  auto pack = [&](uint32_t q, uint32_t i) { return q * m + i; };
  std::vector<uint32_t> to_zero(g.num_states);
  for (uint32_t q = 0; q < g.num_states; ++q) to_zero[q] = pack(q, 0);
  b.init = g.init.mapped(to_zero);

  for (auto& [key, pb] : g.delta) {
    auto [q, l, d] = key;
    for (uint32_t i = 0; i < m; ++i) {
      uint32_t j = in_set[i][q] ? (i + 1) % m : i;
      std::vector<uint32_t> remap(g.num_states);
      for (uint32_t q2 = 0; q2 < g.num_states; ++q2) remap[q2] = pack(q2, j);
      b.delta[{pack(q, i), l, d}] = pb.mapped(remap);
    }
  }

  std::vector<uint32_t> acc;
  for (uint32_t q : g.accept_sets[0]) acc.push_back(pack(q, 0));
  std::sort(acc.begin(), acc.end());
  b.accept_sets.push_back(std::move(acc));

  for (uint32_t q = 0; q < g.num_states; ++q)
    for (uint32_t i = 0; i < m; ++i) {
      std::string base_name = q < g.state_names.size()
                                  ? g.state_names[q]
                                  : "s" + std::to_string(q);
      b.state_names.push_back(base_name + "#" + std::to_string(i));
    }
  return out;
}

namespace {

std::string render_letter(PropSet l, const std::vector<std::string>& props) {
  std::string out = "{";
  bool first = true;
  for (size_t i = 0; i < props.size(); ++i)
    if (l >> i & 1u) {
      if (!first) out += ",";
      out += props[i];
      first = false;
    }
  return out + "}";
}

PropSet parse_letter(const std::string& text,
                     const std::vector<std::string>& props) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}')
    throw std::runtime_error("bad letter: " + text);
  PropSet l = 0;
  std::string body = text.substr(1, text.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto it = std::find(props.begin(), props.end(), item);
    if (it == props.end()) throw std::runtime_error("unknown prop: " + item);
    l |= 1u << (it - props.begin());
  }
  return l;
}

}  // namespace

void dump_automaton(const Gaaba& g, std::ostream& os) {
  os << "gaaba n=" << g.n << " props=";
  for (size_t i = 0; i < g.props.size(); ++i)
    os << (i ? "," : "") << g.props[i];
  os << "\n";
  os << "states " << g.num_states << "\n";
  for (size_t q = 0; q < g.state_names.size(); ++q)
    os << "name " << q << " " << g.state_names[q] << "\n";
  os << "init " << g.init.render() << "\n";
  for (auto& [key, pb] : g.delta) {
    auto [q, l, d] = key;
    os << "trans " << q << " " << render_letter(l, g.props) << " " << d
       << " -> " << pb.render() << "\n";
  }
  for (size_t i = 0; i < g.accept_sets.size(); ++i) {
    os << "acc " << i << ":";
    for (uint32_t q : g.accept_sets[i]) os << " " << q;
    os << "\n";
  }
}

Gaaba load_automaton(std::istream& is) {
  Gaaba g;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string tok;
    ss >> tok;
    if (tok == "gaaba") {
      std::string field;
      while (ss >> field) {
        if (field.rfind("n=", 0) == 0) g.n = std::stoul(field.substr(2));
        if (field.rfind("props=", 0) == 0) {
          std::stringstream ps(field.substr(6));
          std::string p;
          while (std::getline(ps, p, ','))
            if (!p.empty()) g.props.push_back(p);
        }
      }
    } else if (tok == "states") {
      ss >> g.num_states;
      g.state_names.assign(g.num_states, "");
    } else if (tok == "name") {
      uint32_t q;
      ss >> q;
      std::string rest;
      std::getline(ss, rest);
      if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
      if (q < g.state_names.size()) g.state_names[q] = rest;
    } else if (tok == "init") {
      std::string rest;
      std::getline(ss, rest);
      size_t pos = 0;
      g.init = parse_posbool(rest, pos);
    } else if (tok == "trans") {
      uint32_t q, d;
      std::string letter, arrow;
      ss >> q >> letter >> d >> arrow;
      if (arrow != "->") throw std::runtime_error("bad trans line");
      std::string rest;
      std::getline(ss, rest);
      size_t pos = 0;
      g.delta[{q, parse_letter(letter, g.props), d}] =
          parse_posbool(rest, pos);
    } else if (tok == "acc") {
      std::string idx;
      ss >> idx;  // "<i>:"
      std::vector<uint32_t> fs;
      uint32_t q;
      while (ss >> q) fs.push_back(q);
      g.accept_sets.push_back(std::move(fs));
    } else {
      throw std::runtime_error("unknown dump line: " + line);
    }
  }
  g.check();
  return g;
}

}  // namespace ttl
