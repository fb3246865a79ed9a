#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttl/model.hpp"

namespace ttl {

/// Bitmask over team entry positions 0..n-1.
using AdvSet = uint32_t;

/// Time evaluation function for a team of n traces: per-trace initial
/// offsets plus an eventually periodic sequence of advancement sets.
/// Every trace in the step set advances its local clock by one; strict
/// tefs require every step set to be nonempty.
struct Tef {
  uint32_t n = 0;
  std::vector<uint32_t> init;        // length n
  std::vector<AdvSet> step_prefix;   // finite
  std::vector<AdvSet> step_loop;     // nonempty
  bool stuttering = false;           // if true, empty step sets are allowed

  Tef() = default;
  Tef(uint32_t n_, std::vector<uint32_t> init_, std::vector<AdvSet> pre,
      std::vector<AdvSet> loop, bool stuttering_ = false);

  static Tef synchronous(uint32_t n);  // initial, all traces each step

  AdvSet step(size_t i) const {
    return i < step_prefix.size()
               ? step_prefix[i]
               : step_loop[(i - step_prefix.size()) % step_loop.size()];
  }
  size_t phase(size_t i) const {
    return i < step_prefix.size()
               ? i
               : step_prefix.size() +
                     (i - step_prefix.size()) % step_loop.size();
  }
  size_t period_start() const { return step_prefix.size(); }
  size_t period() const { return step_loop.size(); }

  bool is_initial() const;
  std::vector<uint32_t> positions(size_t i) const;  // the tuple at step i
};

uint32_t tef_value(const Tef& t, size_t i, uint32_t trace);

/// The tef looking ahead k steps: new offsets are the positions at k.
Tef tef_shift(const Tef& t, size_t k);

enum class TefProp { Monotone, Strict, Stepwise, Fair, NonParallel, Synchronous };

bool check_property(const Tef& t, TefProp prop);

/// Offsets never diverge by more than k, at any step.
bool is_k_synchronous(const Tef& t, uint32_t k);

/// One trace per step, with at most k changes of the advancing trace.
bool is_k_context_bounded(const Tef& t, uint32_t k);

struct TefFamily {
  enum class Kind { All, KSynchronous, KContextBounded, Synchronous };
  Kind kind = Kind::Synchronous;
  uint32_t k = 0;

  static TefFamily all() { return {Kind::All, 0}; }
  static TefFamily ksync(uint32_t k) { return {Kind::KSynchronous, k}; }
  static TefFamily kctx(uint32_t k) { return {Kind::KContextBounded, k}; }
  static TefFamily sync() { return {Kind::Synchronous, 0}; }

  bool enumerable() const {
    return kind == Kind::Synchronous || kind == Kind::KContextBounded;
  }
  std::string describe() const;
};

/// Horizon after which team configurations repeat: longest prefix plus the
/// lcm of the loop lengths (capped).
size_t default_dwell_bound(const Team& team);

/// All initial tefs of an enumerable family. Context-bounded phases dwell
/// between 1 and dwell_bound steps before the final infinite phase.
std::vector<Tef> enumerate_family(const TefFamily& family, const Team& team,
                                  size_t dwell_bound);

/// Continuations of `t` after global step i that keep the whole tef inside
/// the family (the part up to i is inherited unchanged).
std::vector<Tef> enumerate_continuations(const TefFamily& family, const Tef& t,
                                         size_t i, size_t dwell_bound);

}  // namespace ttl
