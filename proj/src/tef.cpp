#include "ttl/tef.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace ttl {

Tef::Tef(uint32_t n_, std::vector<uint32_t> init_, std::vector<AdvSet> pre,
         std::vector<AdvSet> loop, bool stuttering_)
    : n(n_),
      init(std::move(init_)),
      step_prefix(std::move(pre)),
      step_loop(std::move(loop)),
      stuttering(stuttering_) {
  if (init.size() != n) throw std::invalid_argument("init length != n");
  if (step_loop.empty()) throw std::invalid_argument("step loop empty");
  AdvSet full = n >= 32 ? ~0u : (1u << n) - 1u;
  // The empty team has one degenerate tef whose steps are all vacuous.
  bool allow_empty = stuttering || n == 0;
  for (AdvSet s : step_prefix)
    if ((s & ~full) || (!allow_empty && s == 0))
      throw std::invalid_argument("bad advancement set");
  for (AdvSet s : step_loop)
    if ((s & ~full) || (!allow_empty && s == 0))
      throw std::invalid_argument("bad advancement set");
}

Tef Tef::synchronous(uint32_t n) {
  AdvSet full = n >= 32 ? ~0u : (1u << n) - 1u;
  return Tef(n, std::vector<uint32_t>(n, 0), {}, {full});
}

bool Tef::is_initial() const {
  return std::all_of(init.begin(), init.end(), [](uint32_t v) { return v == 0; });
}

std::vector<uint32_t> Tef::positions(size_t i) const {
  std::vector<uint32_t> pos = init;
  // Whole loop passes are batched; the remainder is walked.
  size_t walked = std::min(i, step_prefix.size());
  for (size_t j = 0; j < walked; ++j)
    for (uint32_t t = 0; t < n; ++t)
      if (step_prefix[j] >> t & 1u) ++pos[t];
  if (i > step_prefix.size()) {
    size_t rest = i - step_prefix.size();
    size_t full_passes = rest / step_loop.size();
    size_t rem = rest % step_loop.size();
    if (full_passes > 0) {
      for (uint32_t t = 0; t < n; ++t) {
        uint32_t per_pass = 0;
        for (AdvSet s : step_loop) per_pass += (s >> t) & 1u;
        pos[t] += per_pass * static_cast<uint32_t>(full_passes);
      }
    }
    for (size_t j = 0; j < rem; ++j)
      for (uint32_t t = 0; t < n; ++t)
        if (step_loop[j] >> t & 1u) ++pos[t];
  }
  return pos;
}

uint32_t tef_value(const Tef& t, size_t i, uint32_t trace) {
  if (trace >= t.n) throw std::out_of_range("trace index out of range");
  return t.positions(i)[trace];
}

Tef tef_shift(const Tef& t, size_t k) {
  Tef out = t;
  out.init = t.positions(k);
  if (k <= t.step_prefix.size()) {
    out.step_prefix.assign(t.step_prefix.begin() + k, t.step_prefix.end());
    out.step_loop = t.step_loop;
  } else {
    size_t r = (k - t.step_prefix.size()) % t.step_loop.size();
    out.step_prefix.clear();
    out.step_loop.assign(t.step_loop.begin() + r, t.step_loop.end());
    out.step_loop.insert(out.step_loop.end(), t.step_loop.begin(),
                         t.step_loop.begin() + r);
  }
  return out;
}

bool check_property(const Tef& t, TefProp prop) {
  AdvSet full = t.n >= 32 ? ~0u : (1u << t.n) - 1u;
  auto all_steps = [&](auto pred) {
    for (AdvSet s : t.step_prefix)
      if (!pred(s)) return false;
    for (AdvSet s : t.step_loop)
      if (!pred(s)) return false;
    return true;
  };
  switch (prop) {
    case TefProp::Monotone:
    case TefProp::Stepwise:
      return true;  // guaranteed by the step-set representation
    case TefProp::Strict:
      return all_steps([](AdvSet s) { return s != 0; });
    case TefProp::Fair: {
      // A trace is starved exactly when it misses every loop step.
      AdvSet in_loop = 0;
      for (AdvSet s : t.step_loop) in_loop |= s;
      return in_loop == full;
    }
    case TefProp::NonParallel: {
      if (!t.is_initial()) return false;
      return all_steps([](AdvSet s) { return std::popcount(s) == 1; });
    }
    case TefProp::Synchronous: {
      for (uint32_t v : t.init)
        if (v != t.init[0]) return false;
      return all_steps([&](AdvSet s) { return s == full; });
    }
  }
  return false;
}

bool is_k_synchronous(const Tef& t, uint32_t k) {
  if (t.n <= 1) return true;
  // Unequal per-pass loop counts mean the divergence grows without bound.
  uint32_t count0 = 0;
  for (AdvSet s : t.step_loop) count0 += (s >> 0) & 1u;
  for (uint32_t tr = 1; tr < t.n; ++tr) {
    uint32_t c = 0;
    for (AdvSet s : t.step_loop) c += (s >> tr) & 1u;
    if (c != count0) return false;
  }
  size_t horizon = t.step_prefix.size() + 2 * t.step_loop.size();
  std::vector<uint32_t> pos = t.init;
  for (size_t i = 0;; ++i) {
    auto [lo, hi] = std::minmax_element(pos.begin(), pos.end());
    if (*hi - *lo > k) return false;
    if (i == horizon) break;
    AdvSet s = t.step(i);
    for (uint32_t tr = 0; tr < t.n; ++tr)
      if (s >> tr & 1u) ++pos[tr];
  }
  return true;
}

bool is_k_context_bounded(const Tef& t, uint32_t k) {
  auto singleton = [](AdvSet s) { return std::popcount(s) == 1; };
  for (AdvSet s : t.step_prefix)
    if (!singleton(s)) return false;
  for (AdvSet s : t.step_loop)
    if (!singleton(s)) return false;
  // A non-constant loop switches on every pass, so the total is infinite.
  for (AdvSet s : t.step_loop)
    if (s != t.step_loop[0]) return false;
  uint32_t switches = 0;
  size_t horizon = t.step_prefix.size() + 1;
  for (size_t i = 1; i < horizon; ++i)
    if (t.step(i) != t.step(i - 1)) ++switches;
  return switches <= k;
}

std::string TefFamily::describe() const {
  switch (kind) {
    case Kind::All: return "all";
    case Kind::KSynchronous: return std::to_string(k) + "-synchronous";
    case Kind::KContextBounded: return std::to_string(k) + "-context-bounded";
    case Kind::Synchronous: return "synchronous";
  }
  return "?";
}

size_t default_dwell_bound(const Team& team) {
  size_t pre = 1;
  size_t lcm = 1;
  for (auto& [idx, tr] : team.entries()) {
    pre = std::max(pre, tr.prefix.size());
    lcm = std::lcm(lcm, tr.loop.size());
    if (lcm > 64) {
      lcm = 64;  // cap; enumeration stays finite either way
      break;
    }
  }
  return pre + lcm;
}

namespace {

// Phase sequences: which trace advances, for how long, with at most
// `budget` changes of trace; the last phase runs forever. On the first
// call the ongoing phase (trace `current`) may be extended at no cost;
// afterwards adjacent phases must differ.
void emit_phased(uint32_t n, uint32_t budget, size_t dwell, int current,
                 bool first, std::vector<AdvSet>& pre, std::vector<Tef>& out) {
  for (uint32_t tr = 0; tr < n; ++tr) {
    if (!first && static_cast<int>(tr) == current) continue;
    uint32_t cost =
        (current >= 0 && static_cast<int>(tr) != current) ? 1 : 0;
    if (cost > budget) continue;
    // Final infinite phase on tr.
    out.emplace_back(n, std::vector<uint32_t>(n, 0), pre,
                     std::vector<AdvSet>{1u << tr});
    // Finite dwell, then switch to another trace.
    if (budget - cost >= 1) {
      for (size_t len = 1; len <= dwell; ++len) {
        for (size_t j = 0; j < len; ++j) pre.push_back(1u << tr);
        emit_phased(n, budget - cost, dwell, static_cast<int>(tr), false, pre,
                    out);
        for (size_t j = 0; j < len; ++j) pre.pop_back();
      }
    }
  }
}

}  // namespace

std::vector<Tef> enumerate_family(const TefFamily& family, const Team& team,
                                  size_t dwell_bound) {
  if (dwell_bound < 1) throw std::invalid_argument("dwell bound must be >= 1");
  uint32_t n = static_cast<uint32_t>(team.size());
  switch (family.kind) {
    case TefFamily::Kind::Synchronous:
      return {Tef::synchronous(n)};
    case TefFamily::Kind::KContextBounded: {
      std::vector<Tef> out;
      std::vector<AdvSet> pre;
      emit_phased(n, family.k, dwell_bound, -1, true, pre, out);
      return out;
    }
    case TefFamily::Kind::All:
      throw std::runtime_error(
          "the unrestricted tef family is not enumerable; use the automata "
          "engine");
    case TefFamily::Kind::KSynchronous:
      throw std::runtime_error(
          "k-synchronous quantification is served by the automata engine");
  }
  return {};
}

std::vector<Tef> enumerate_continuations(const TefFamily& family, const Tef& t,
                                         size_t i, size_t dwell_bound) {
  AdvSet full = t.n >= 32 ? ~0u : (1u << t.n) - 1u;
  std::vector<AdvSet> inherited;
  for (size_t j = 0; j < i; ++j) inherited.push_back(t.step(j));

  switch (family.kind) {
    case TefFamily::Kind::Synchronous: {
      // A synchronous whole requires the inherited part to be synchronous.
      for (uint32_t v : t.init)
        if (v != t.init[0]) return {};
      for (AdvSet s : inherited)
        if (s != full) return {};
      return {Tef(t.n, t.init, inherited, {full})};
    }
    case TefFamily::Kind::KContextBounded: {
      for (AdvSet s : inherited)
        if (std::popcount(s) != 1) return {};
      uint32_t used = 0;
      for (size_t j = 1; j < inherited.size(); ++j)
        if (inherited[j] != inherited[j - 1]) ++used;
      if (used > family.k) return {};
      int current = inherited.empty()
                        ? -1
                        : std::countr_zero(inherited.back());
      std::vector<Tef> out;
      std::vector<AdvSet> pre = inherited;
      emit_phased(t.n, family.k - used, dwell_bound, current, true, pre, out);
      for (auto& cand : out) cand.init = t.init;
      return out;
    }
    case TefFamily::Kind::All:
    case TefFamily::Kind::KSynchronous:
      throw std::runtime_error("family not enumerable: " + family.describe());
  }
  return {};
}

}  // namespace ttl
