#include "ttl/io.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ttl {

namespace {

std::string strip(const std::string& line) {
  std::string out = line.substr(0, line.find('#'));
  size_t a = out.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = out.find_last_not_of(" \t\r\n");
  return out.substr(a, b - a + 1);
}

// Splits "... {a,b} {} | {c} ..." into prefix/loop token lists.
void parse_set_sequence(const std::string& text,
                        std::vector<std::string>& pre,
                        std::vector<std::string>& loop) {
  std::vector<std::string>* target = &pre;
  size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace((unsigned char)text[pos])) {
      ++pos;
    } else if (text[pos] == '|') {
      if (target == &loop) throw std::runtime_error("two '|' separators");
      target = &loop;
      ++pos;
    } else if (text[pos] == '{') {
      size_t end = text.find('}', pos);
      if (end == std::string::npos) throw std::runtime_error("unclosed '{'");
      target->push_back(text.substr(pos, end - pos + 1));
      pos = end + 1;
    } else {
      throw std::runtime_error("unexpected character in sequence: " +
                               text.substr(pos, 1));
    }
  }
  if (target != &loop || loop.empty())
    throw std::runtime_error("sequence needs '|' and a nonempty loop");
}

PropSet parse_set(const std::string& tok, APContext& ap) {
  PropSet s = 0;
  std::string body = tok.substr(1, tok.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    size_t b = item.find_last_not_of(" \t");
    s |= 1u << ap.intern(item.substr(a, b - a + 1));
  }
  return s;
}

AdvSet parse_index_set(const std::string& tok, uint32_t n) {
  AdvSet s = 0;
  std::string body = tok.substr(1, tok.size() - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    size_t b = item.find_last_not_of(" \t");
    unsigned long v = std::stoul(item.substr(a, b - a + 1));
    if (v < 1 || v > n) throw std::runtime_error("trace id out of range");
    s |= 1u << (v - 1);
  }
  return s;
}

}  // namespace

Team parse_traces(std::istream& is, APContext& ap) {
  Team team;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = strip(line);
    if (t.empty()) continue;
    if (t.rfind("trace", 0) != 0)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": expected 'trace <id>: ...'");
    size_t colon = t.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": missing ':'");
    uint32_t id = std::stoul(strip(t.substr(5, colon - 5)));
    std::vector<std::string> pre, loop;
    parse_set_sequence(t.substr(colon + 1), pre, loop);
    std::vector<PropSet> p, l;
    for (auto& s : pre) p.push_back(parse_set(s, ap));
    for (auto& s : loop) l.push_back(parse_set(s, ap));
    team.add(id, LassoTrace(std::move(p), std::move(l)));
  }
  return team;
}

void render_traces(const Team& team, const APContext& ap, std::ostream& os) {
  for (auto& [idx, tr] : team.entries()) {
    os << "trace " << idx << ":";
    for (PropSet s : tr.prefix) os << " " << ap.render(s);
    os << " |";
    for (PropSet s : tr.loop) os << " " << ap.render(s);
    os << "\n";
  }
}

KripkeStructure parse_kripke(std::istream& is, APContext& ap) {
  KripkeStructure k;
  std::map<std::string, uint32_t> names;
  std::vector<std::pair<std::string, std::string>> edges;
  std::string root_name;
  std::string line;
  while (std::getline(is, line)) {
    std::string t = strip(line);
    if (t.empty()) continue;
    std::stringstream ss(t);
    std::string tok;
    ss >> tok;
    if (tok == "state") {
      std::string name;
      ss >> name;
      std::string rest;
      std::getline(ss, rest);
      rest = strip(rest);
      names[name] = static_cast<uint32_t>(k.states.size());
      k.states.push_back(name);
      k.labels.push_back(rest.empty() ? 0 : parse_set(rest, ap));
      k.succ.emplace_back();
    } else if (tok == "edge") {
      std::string a, b;
      ss >> a >> b;
      edges.emplace_back(a, b);
    } else if (tok == "root") {
      ss >> root_name;
    } else {
      throw std::runtime_error("unknown structure line: " + t);
    }
  }
  auto lookup = [&](const std::string& s) {
    auto it = names.find(s);
    if (it == names.end()) throw std::runtime_error("unknown state: " + s);
    return it->second;
  };
  for (auto& [a, b] : edges) k.succ[lookup(a)].push_back(lookup(b));
  if (root_name.empty()) throw std::runtime_error("missing root");
  k.root = lookup(root_name);
  k.validate();
  return k;
}

Tef parse_tef(std::istream& is, uint32_t n) {
  std::string line;
  while (std::getline(is, line)) {
    std::string t = strip(line);
    if (t.empty()) continue;
    if (t.rfind("tef", 0) != 0)
      throw std::runtime_error("expected 'tef init=... steps=...'");
    size_t ip = t.find("init=");
    size_t sp = t.find("steps=");
    if (ip == std::string::npos || sp == std::string::npos)
      throw std::runtime_error("tef line needs init= and steps=");
    std::string init_part = strip(t.substr(ip + 5, sp - (ip + 5)));
    std::vector<uint32_t> init;
    {
      std::stringstream ss(init_part);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!strip(item).empty()) init.push_back(std::stoul(strip(item)));
    }
    if (init.size() != n)
      throw std::runtime_error("tef init length does not match team size");
    std::vector<std::string> pre, loop;
    parse_set_sequence(t.substr(sp + 6), pre, loop);
    std::vector<AdvSet> p, l;
    for (auto& s : pre) p.push_back(parse_index_set(s, n));
    for (auto& s : loop) l.push_back(parse_index_set(s, n));
    return Tef(n, std::move(init), std::move(p), std::move(l));
  }
  throw std::runtime_error("no tef found");
}

std::string render_tef(const Tef& t) {
  std::ostringstream os;
  os << "tef init=";
  for (uint32_t i = 0; i < t.n; ++i) os << (i ? "," : "") << t.init[i];
  os << " steps=";
  auto render_set = [&](AdvSet s) {
    os << "{";
    bool first = true;
    for (uint32_t i = 0; i < t.n; ++i)
      if (s >> i & 1u) {
        os << (first ? "" : ",") << (i + 1);
        first = false;
      }
    os << "}";
  };
  for (AdvSet s : t.step_prefix) {
    render_set(s);
    os << " ";
  }
  os << "|";
  for (AdvSet s : t.step_loop) {
    os << " ";
    render_set(s);
  }
  return os.str();
}

CounterMachine parse_machine(std::istream& is) {
  CounterMachine m;
  std::string line;
  while (std::getline(is, line)) {
    std::string t = strip(line);
    if (t.empty()) continue;
    std::stringstream ss(t);
    std::string op, side;
    uint32_t a, b;
    ss >> op >> side >> a >> b;
    if (ss.fail()) throw std::runtime_error("bad instruction: " + t);
    CounterInstr in;
    if (op == "INC")
      in.op = CounterInstr::Op::Inc;
    else if (op == "DEC")
      in.op = CounterInstr::Op::Dec;
    else if (op == "IFZ")
      in.op = CounterInstr::Op::IfZero;
    else
      throw std::runtime_error("unknown instruction: " + op);
    if (side != "L" && side != "R")
      throw std::runtime_error("counter must be L or R");
    in.left = side == "L";
    in.goto1 = a;
    in.goto2 = b;
    m.instrs.push_back(in);
  }
  m.validate();
  return m;
}

GenAtomRegistry parse_atom_tables(std::istream& is) {
  GenAtomRegistry reg;
  std::string line;
  while (std::getline(is, line)) {
    std::string t = strip(line);
    if (t.empty()) continue;
    std::stringstream ss(t);
    std::string tok, name, eq;
    uint32_t arity;
    ss >> tok >> name >> arity >> eq;
    if (tok != "gen" || eq != "=")
      throw std::runtime_error("expected 'gen <name> <arity> = ...'");
    auto table = std::make_shared<GenAtomTable>();
    table->name = name;
    table->arity = arity;
    std::string rest;
    std::getline(ss, rest);
    size_t pos = 0;
    while (pos < rest.size()) {
      if (std::isspace((unsigned char)rest[pos])) {
        ++pos;
        continue;
      }
      if (rest[pos] != '{') throw std::runtime_error("expected '{'");
      size_t end = rest.find('}', pos);
      if (end == std::string::npos) throw std::runtime_error("unclosed '{'");
      std::set<uint32_t> member;
      std::stringstream items(rest.substr(pos + 1, end - pos - 1));
      std::string item;
      while (std::getline(items, item, ',')) {
        item = strip(item);
        if (item.empty()) continue;
        if (item.size() != arity)
          throw std::runtime_error("tuple width mismatch in atom " + name);
        uint32_t bits = 0;
        for (size_t i = 0; i < item.size(); ++i) {
          if (item[i] == '1')
            bits |= 1u << i;
          else if (item[i] != '0')
            throw std::runtime_error("tuples are bit strings");
        }
        member.insert(bits);
      }
      table->members.insert(std::move(member));
      pos = end + 1;
    }
    reg[name] = std::move(table);
  }
  return reg;
}

}  // namespace ttl
