#include "ttl/model.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ttl {

uint32_t APContext::intern(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  if (names_.size() >= 32)
    throw std::runtime_error("too many atomic propositions (max 32)");
  uint32_t bit = static_cast<uint32_t>(names_.size());
  names_.push_back(name);
  index_[name] = bit;
  return bit;
}

std::optional<uint32_t> APContext::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool APContext::has(PropSet set, const std::string& name) const {
  auto bit = find(name);
  return bit && (set >> *bit & 1u);
}

std::string APContext::render(PropSet set) const {
  std::string out = "{";
  bool first = true;
  for (uint32_t b = 0; b < names_.size(); ++b) {
    if (!(set >> b & 1u)) continue;
    if (!first) out += ",";
    out += names_[b];
    first = false;
  }
  return out + "}";
}

LassoTrace::LassoTrace(std::vector<PropSet> p, std::vector<PropSet> l)
    : prefix(std::move(p)), loop(std::move(l)) {
  if (loop.empty()) throw std::invalid_argument("lasso loop must be nonempty");
}

LassoTrace LassoTrace::canonical() const {
  LassoTrace t = *this;
  // Primitive loop: collapse w^m to w.
  for (size_t d = 1; d <= t.loop.size() / 2; ++d) {
    if (t.loop.size() % d != 0) continue;
    bool rep = true;
    for (size_t i = d; i < t.loop.size() && rep; ++i)
      rep = t.loop[i] == t.loop[i % d];
    if (rep) {
      t.loop.resize(d);
      break;
    }
  }
  // Fold prefix letters that already match the loop tail.
  while (!t.prefix.empty() && t.prefix.back() == t.loop.back()) {
    t.prefix.pop_back();
    std::rotate(t.loop.begin(), t.loop.end() - 1, t.loop.end());
  }
  return t;
}

bool LassoTrace::same_word(const LassoTrace& other) const {
  LassoTrace a = canonical(), b = other.canonical();
  return a.prefix == b.prefix && a.loop == b.loop;
}

LassoTrace LassoTrace::without(PropSet bits) const {
  LassoTrace t = *this;
  for (auto& s : t.prefix) s &= ~bits;
  for (auto& s : t.loop) s &= ~bits;
  return t;
}

bool operator==(const LassoTrace& a, const LassoTrace& b) {
  return a.same_word(b);
}

bool operator<(const LassoTrace& a, const LassoTrace& b) {
  LassoTrace x = a.canonical(), y = b.canonical();
  if (x.prefix != y.prefix) return x.prefix < y.prefix;
  return x.loop < y.loop;
}

Team::Team(std::vector<LassoTrace> traces) {
  for (size_t i = 0; i < traces.size(); ++i)
    entries_.emplace_back(static_cast<uint32_t>(i), std::move(traces[i]));
}

void Team::add(uint32_t index, LassoTrace t) {
  for (auto& e : entries_)
    if (e.first == index)
      throw std::invalid_argument("duplicate team index");
  entries_.emplace_back(index, std::move(t));
  std::sort(entries_.begin(), entries_.end(),
            [](auto& a, auto& b) { return a.first < b.first; });
}

bool Team::same_multiset(const Team& other) const {
  if (size() != other.size()) return false;
  std::vector<LassoTrace> a, b;
  for (auto& e : entries_) a.push_back(e.second.canonical());
  for (auto& e : other.entries_) b.push_back(e.second.canonical());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a[i].prefix == b[i].prefix && a[i].loop == b[i].loop)) return false;
  return true;
}

Team Team::subteam(uint32_t position_mask) const {
  Team s;
  for (size_t i = 0; i < entries_.size(); ++i)
    if (position_mask >> i & 1u) s.add(entries_[i].first, entries_[i].second);
  return s;
}

Team Team::with_alternating(const std::string& o, APContext& ap) const {
  uint32_t bit = ap.intern(o);
  Team out;
  for (auto& [idx, t] : entries_) {
    for (PropSet s : t.prefix)
      if (s >> bit & 1u)
        throw std::invalid_argument("proposition already used: " + o);
    for (PropSet s : t.loop)
      if (s >> bit & 1u)
        throw std::invalid_argument("proposition already used: " + o);
    out.add(idx, add_alternating(t, bit));
  }
  return out;
}

Team team_disjoint_union(const Team& a, const Team& b) {
  Team out;
  uint32_t next = 0;
  for (auto& e : a.entries()) out.add(next++, e.second);
  for (auto& e : b.entries()) out.add(next++, e.second);
  return out;
}

std::vector<std::pair<uint32_t, uint32_t>> split_enumeration(
    const Team& team) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  uint32_t full = team.size() >= 32 ? ~0u : (1u << team.size()) - 1u;
  if (team.size() >= 32)
    throw std::invalid_argument("team too large to enumerate splits");
  for (uint32_t m = 0;; ++m) {
    out.emplace_back(m, full & ~m);
    if (m == full) break;
  }
  return out;
}

LassoTrace add_alternating(const LassoTrace& t, uint32_t bit) {
  LassoTrace u = t;
  if (u.loop.size() % 2 != 0) {
    // Double so the combined lasso keeps a fixed parity in the loop.
    std::vector<PropSet> l2 = u.loop;
    l2.insert(l2.end(), u.loop.begin(), u.loop.end());
    u.loop = std::move(l2);
  }
  if (u.prefix.size() % 2 != 0) {
    // Shift one loop letter into the prefix to realign parity.
    u.prefix.push_back(u.loop.front());
    std::rotate(u.loop.begin(), u.loop.begin() + 1, u.loop.end());
  }
  for (size_t i = 0; i < u.prefix.size(); ++i)
    if (i % 2 == 0) u.prefix[i] |= 1u << bit;
  for (size_t i = 0; i < u.loop.size(); ++i)
    if ((u.prefix.size() + i) % 2 == 0) u.loop[i] |= 1u << bit;
  return u;
}

void KripkeStructure::validate() const {
  if (states.empty()) throw std::runtime_error("empty structure");
  if (root >= states.size()) throw std::runtime_error("root not a state");
  if (succ.size() != states.size() || labels.size() != states.size())
    throw std::runtime_error("malformed structure");
  for (size_t i = 0; i < succ.size(); ++i) {
    if (succ[i].empty())
      throw std::runtime_error("state without successor: " + states[i]);
    for (uint32_t j : succ[i])
      if (j >= states.size())
        throw std::runtime_error("dangling edge from " + states[i]);
  }
}

KripkeStructure alternation_transform(const KripkeStructure& k, uint32_t bit,
                                      bool bit_in_use) {
  if (bit_in_use)
    throw std::invalid_argument("marker proposition already occurs in labels");
  for (PropSet s : k.labels)
    if (s >> bit & 1u)
      throw std::invalid_argument("marker proposition already occurs in labels");
  KripkeStructure out;
  size_t n = k.num_states();
  out.states.resize(2 * n);
  out.labels.resize(2 * n);
  out.succ.resize(2 * n);
  for (size_t i = 0; i < n; ++i) {
    out.states[2 * i] = k.states[i] + "+";
    out.states[2 * i + 1] = k.states[i] + "-";
    out.labels[2 * i] = k.labels[i] | (1u << bit);
    out.labels[2 * i + 1] = k.labels[i];
    for (uint32_t j : k.succ[i]) {
      out.succ[2 * i].push_back(2 * j + 1);      // marked -> unmarked copy
      out.succ[2 * i + 1].push_back(2 * j);      // unmarked -> marked copy
    }
  }
  out.root = 2 * k.root;  // traces start marked at position 0
  return out;
}

namespace {

struct PathLasso {
  std::vector<uint32_t> stem;   // states before the cycle
  std::vector<uint32_t> cycle;  // nonempty

  void canonicalize() {
    for (size_t d = 1; d <= cycle.size() / 2; ++d) {
      if (cycle.size() % d != 0) continue;
      bool rep = true;
      for (size_t i = d; i < cycle.size() && rep; ++i)
        rep = cycle[i] == cycle[i % d];
      if (rep) {
        cycle.resize(d);
        break;
      }
    }
    while (!stem.empty() && stem.back() == cycle.back()) {
      stem.pop_back();
      std::rotate(cycle.begin(), cycle.end() - 1, cycle.end());
    }
  }

  bool operator<(const PathLasso& o) const {
    if (stem != o.stem) return stem < o.stem;
    return cycle < o.cycle;
  }
};

}  // namespace

std::vector<LassoTrace> kripke_lasso_traces(const KripkeStructure& k,
                                            size_t max_prefix,
                                            size_t max_cycle) {
  if (max_cycle < 1) throw std::invalid_argument("cycle bound must be >= 1");
  k.validate();
  std::set<PathLasso> seen;
  std::vector<LassoTrace> out;

  // Enumerate stems from the root, then cycles from the stem end.
  std::vector<uint32_t> stem{k.root};
  std::vector<uint32_t> cyc;

  auto emit = [&](PathLasso pl) {
    pl.canonicalize();
    if (seen.insert(pl).second) {
      LassoTrace t;
      t.prefix.clear();
      t.loop.clear();
      for (uint32_t s : pl.stem) t.prefix.push_back(k.labels[s]);
      for (uint32_t s : pl.cycle) t.loop.push_back(k.labels[s]);
      out.push_back(std::move(t));
    }
  };

  std::function<void(uint32_t, uint32_t)> grow_cycle =
      [&](uint32_t at, uint32_t target) {
        cyc.push_back(at);
        for (uint32_t nxt : k.succ[at]) {
          if (nxt == target) {
            PathLasso pl;
            pl.stem.assign(stem.begin(), stem.end() - 1);
            pl.cycle = cyc;
            emit(std::move(pl));
          }
          if (cyc.size() < max_cycle) grow_cycle(nxt, target);
        }
        cyc.pop_back();
      };

  std::function<void()> grow_stem = [&]() {
    uint32_t last = stem.back();
    grow_cycle(last, last);
    if (stem.size() <= max_prefix) {
      for (uint32_t nxt : k.succ[last]) {
        stem.push_back(nxt);
        grow_stem();
        stem.pop_back();
      }
    }
  };

  grow_stem();
  return out;
}

}  // namespace ttl
