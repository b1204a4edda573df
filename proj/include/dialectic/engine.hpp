#pragma once

// The staged d, q and p procedures with full traces and budget-bounded
// limit reporting.

#include <algorithm>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dialectic/codec.hpp"
#include "dialectic/operators.hpp"
#include "dialectic/systems.hpp"

namespace dialectic {

using Stack = std::vector<Code>;
using Stacks = std::vector<Stack>;

enum class Clause {
  Init,     // stage 0
  Extend,   // nothing derives c: propose f(m+1)
  Revise,   // push f-(top) on the least bad slot
  Reset,    // d/q: c in H_s(empty), back to f(0)
  Discard,  // d/q: drop the least bad slot, propose the next axiom
};

inline const char* to_string(Clause c) {
  switch (c) {
    case Clause::Init:
      return "init";
    case Clause::Extend:
      return "extend";
    case Clause::Revise:
      return "revise";
    case Clause::Reset:
      return "reset";
    case Clause::Discard:
      return "discard";
  }
  return "?";
}

/// r_s and m(s); stacks.size() == m + 1 (slots above m are empty).
struct ProcedureState {
  Stacks stacks;
  std::size_t m = 0;

  static ProcedureState initial(const ProposingFunction& f) { return {{Stack{f(0)}}, 0}; }

  /// L_s(x): tops of the nonempty slots below x.
  CodeSet L(std::size_t x) const {
    CodeSet out;
    for (std::size_t y = 0; y < x && y < stacks.size(); ++y)
      if (!stacks[y].empty()) out.insert(stacks[y].back());
    return out;
  }

  /// rho_s(x), if slot x is nonempty.
  std::optional<Code> rho(std::size_t x) const {
    if (x >= stacks.size() || stacks[x].empty()) return std::nullopt;
    return stacks[x].back();
  }

  friend bool operator==(const ProcedureState&, const ProcedureState&) = default;
};

struct StageRecord {
  std::uint64_t s = 0;
  Clause clause = Clause::Init;
  std::optional<std::size_t> z;
  std::size_t m = 0;
  Stacks stacks;  // empty unless stacks are recorded
  CodeSet A;
};

struct SlotHistory {
  std::uint64_t last_change = 0;
  std::size_t max_depth = 0;
  CodeSet tops;
};

struct RunOptions {
  std::uint64_t budget = 100;
  /// Codes whose membership in A_s is computed. Unset: everything below s
  /// for tables, and tracked_window proposals plus atom literals otherwise.
  std::optional<CodeSet> tracked;
  std::size_t tracked_window = 32;
  std::size_t loop_threshold = 32;
  bool record_stacks = true;
};

struct Trace {
  SystemKind kind = SystemKind::P;
  std::uint64_t budget = 0;
  std::size_t loop_threshold = 32;
  std::optional<CodeSet> tracked;
  std::vector<StageRecord> stages;
  std::vector<SlotHistory> slots;
  ProcedureState final_state;
};

namespace detail {

/// Least k <= m with `bad` in H_s(L_s(k+1)); chi_s is monotone in k.
inline std::optional<std::size_t> least_hit(const OperatorHandle& op, std::uint64_t s, const ProcedureState& st,
                                            Code bad, SatSession* session = nullptr) {
  if (const auto* e = op.entailment();
      e && e->options().method == EntailmentMethod::Sat && e->options().premise_cap == 0) {
    std::vector<Code> premises;
    std::vector<std::size_t> slot;
    for (std::size_t y = 0; y <= st.m && y < st.stacks.size(); ++y)
      if (!st.stacks[y].empty() && st.stacks[y].back() < s) {
        premises.push_back(st.stacks[y].back());
        slot.push_back(y);
      }
    const auto n = e->least_entailing_prefix(s, premises, bad, session);
    if (!n) return std::nullopt;
    return *n == 0 ? 0 : slot[*n - 1];
  }
  if (!op.derives(s, st.L(st.m + 1), bad)) return std::nullopt;
  std::size_t lo = 0, hi = st.m;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (op.derives(s, st.L(mid + 1), bad))
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

inline void extend(ProcedureState& st, const ProposingFunction& f) {
  st.stacks.resize(st.m + 1);
  st.stacks.push_back(Stack{f(st.m + 1)});
  ++st.m;
}

inline void revise(ProcedureState& st, std::size_t z, const RevisingFunction& g) {
  st.stacks[z].push_back(g(st.stacks[z].back()));
  st.stacks.resize(z + 1);  // slot z+1 is emptied as well
  st.m = z;
}

inline void discard(ProcedureState& st, std::size_t z, const ProposingFunction& f) {
  st.stacks.resize(z + 2);
  st.stacks[z].clear();
  st.stacks[z + 1] = Stack{f(z + 1)};
  st.m = z + 1;
}

}  // namespace detail

struct StepResult {
  Clause clause = Clause::Extend;
  std::optional<std::size_t> z;
};

/// Stage s -> s+1 of the p procedure; chi is read at stage s.
inline StepResult step_p(ProcedureState& st, const SystemSpec& spec, std::uint64_t s,
                         detail::SatSession* session = nullptr) {
  const auto z = detail::least_hit(spec.op, s, st, spec.c, session);
  if (!z) {
    detail::extend(st, spec.f);
    return {Clause::Extend, std::nullopt};
  }
  detail::revise(st, *z, *spec.f_minus);
  return {Clause::Revise, z};
}

inline StepResult step_d(ProcedureState& st, const SystemSpec& spec, std::uint64_t s,
                         detail::SatSession* session = nullptr) {
  const auto z = detail::least_hit(spec.op, s, st, spec.c, session);
  if (!z) {
    detail::extend(st, spec.f);
    return {Clause::Extend, std::nullopt};
  }
  if (spec.op.derives(s, {}, spec.c)) {
    st = ProcedureState::initial(spec.f);
    return {Clause::Reset, z};
  }
  detail::discard(st, *z, spec.f);
  return {Clause::Discard, z};
}

inline StepResult step_q(ProcedureState& st, const SystemSpec& spec, std::uint64_t s,
                         detail::SatSession* session = nullptr) {
  const auto kc = detail::least_hit(spec.op, s, st, spec.c, session);
  const auto kd = detail::least_hit(spec.op, s, st, spec.c_minus, session);
  if (!kc && !kd) {
    detail::extend(st, spec.f);
    return {Clause::Extend, std::nullopt};
  }
  if (kc && !(kd && *kd < *kc)) {
    if (spec.op.derives(s, {}, spec.c)) {
      st = ProcedureState::initial(spec.f);
      return {Clause::Reset, kc};
    }
    detail::discard(st, *kc, spec.f);
    return {Clause::Discard, kc};
  }
  detail::revise(st, *kd, *spec.f_minus);
  return {Clause::Revise, kd};
}

inline StepResult step(ProcedureState& st, const SystemSpec& spec, std::uint64_t s,
                       detail::SatSession* session = nullptr) {
  switch (spec.kind) {
    case SystemKind::P:
      return step_p(st, spec, s, session);
    case SystemKind::D:
      return step_d(st, spec, s, session);
    case SystemKind::Q:
      return step_q(st, spec, s, session);
  }
  return {};
}

/// Default reporting scope for operators that cannot be applied to all codes.
inline CodeSet default_tracked(const SystemSpec& spec, std::size_t window) {
  CodeSet out;
  for (Code x = 0; x < window; ++x) {
    out.insert(spec.f(x));
    out.insert(atom(x));
    out.insert(neg(atom(x)));
  }
  return out;
}

/// A_s over the tracked codes: H_s(L_s(m(s))), or empty when m(s) = 0.
inline CodeSet provisional_theses(const SystemSpec& spec, const ProcedureState& st, std::uint64_t s,
                                  const std::optional<CodeSet>& tracked, detail::SatSession* session = nullptr) {
  if (st.m == 0) return {};
  if (const auto* e = spec.op.entailment(); e && session && tracked)
    return e->stage_apply(s, st.L(st.m), *tracked, session);
  return spec.op.apply(s, st.L(st.m), tracked);
}

inline Trace run(const SystemSpec& spec, const RunOptions& opts) {
  if (spec.kind != SystemKind::D && !spec.f_minus) throw std::invalid_argument("system needs a revising function");
  Trace trace;
  trace.kind = spec.kind;
  trace.budget = opts.budget;
  trace.loop_threshold = opts.loop_threshold;
  trace.tracked = opts.tracked;
  if (!trace.tracked && !spec.op.table()) trace.tracked = default_tracked(spec, opts.tracked_window);

  // one clause database for the whole run
  std::optional<detail::SatSession> session;
  if (const auto* e = spec.op.entailment(); e && e->options().method == EntailmentMethod::Sat) session.emplace();
  detail::SatSession* sat = session ? &*session : nullptr;

  ProcedureState st = ProcedureState::initial(spec.f);
  auto note_slots = [&](std::uint64_t s, const ProcedureState& before) {
    const std::size_t n = std::max(st.stacks.size(), before.stacks.size());
    if (trace.slots.size() < n) trace.slots.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
      const Stack empty;
      const Stack& now = u < st.stacks.size() ? st.stacks[u] : empty;
      const Stack& was = u < before.stacks.size() ? before.stacks[u] : empty;
      auto& h = trace.slots[u];
      if (now != was) h.last_change = s;
      h.max_depth = std::max(h.max_depth, now.size());
      if (!now.empty()) h.tops.insert(now.back());
    }
  };
  note_slots(0, ProcedureState{});
  trace.stages.push_back({0, Clause::Init, std::nullopt, 0, opts.record_stacks ? st.stacks : Stacks{}, {}});

  for (std::uint64_t s = 0; s < opts.budget; ++s) {
    const ProcedureState before = st;
    const StepResult r = step(st, spec, s, sat);
    note_slots(s + 1, before);
    trace.stages.push_back({s + 1, r.clause, r.z, st.m, opts.record_stacks ? st.stacks : Stacks{},
                            provisional_theses(spec, st, s + 1, trace.tracked, sat)});
  }
  trace.final_state = st;
  return trace;
}

// ---------------------------------------------------------------------------
// Limit reporting

struct LimitReport {
  std::size_t window = 0;
  std::uint64_t half = 0;  // stabilization looks at stages [half, budget]
  std::vector<std::uint64_t> slot_last_change;
  std::vector<std::uint64_t> L_last_change;
  std::vector<bool> stabilized;
  /// Greatest u <= window with slots < u all stabilized.
  std::size_t stable_prefix = 0;
  CodeSet L_stable;  // L(stable_prefix) at the final stage
  std::map<Code, Membership> candidate;
  std::vector<std::size_t> loop_warnings;

  bool all_stabilized() const { return stable_prefix == window; }
};

/// Membership of `code` in A_s for every s in the final half of the trace at
/// which the code is admitted (s > code); unknown if never observed.
inline Membership final_membership(const Trace& trace, Code code, std::uint64_t half) {
  bool in = false, out = false;
  for (const auto& rec : trace.stages) {
    if (rec.s < half || rec.s <= code) continue;
    (rec.A.count(code) ? in : out) = true;
  }
  if (in == out) return Membership::Unknown;
  return in ? Membership::In : Membership::Out;
}

inline LimitReport limit_report(const Trace& trace, std::size_t window) {
  LimitReport rep;
  rep.window = window;
  rep.half = trace.budget / 2;
  std::uint64_t L_change = 0;
  for (std::size_t u = 0; u < window; ++u) {
    const std::uint64_t last = u < trace.slots.size() ? trace.slots[u].last_change : 0;
    rep.slot_last_change.push_back(last);
    rep.L_last_change.push_back(L_change);
    rep.stabilized.push_back(last <= rep.half && trace.budget > 0);
    L_change = std::max(L_change, last);
  }
  while (rep.stable_prefix < window && rep.stabilized[rep.stable_prefix]) ++rep.stable_prefix;
  rep.L_stable = trace.final_state.L(rep.stable_prefix);
  for (std::size_t u = 0; u < trace.slots.size(); ++u)
    if (trace.slots[u].max_depth > trace.loop_threshold) rep.loop_warnings.push_back(u);

  CodeSet universe;
  if (trace.tracked) {
    universe = *trace.tracked;
  } else {
    for (const auto& rec : trace.stages)
      if (rec.s >= rep.half) universe.insert(rec.A.begin(), rec.A.end());
  }
  for (Code x : universe)
    if (x < trace.budget) rep.candidate[x] = final_membership(trace, x, rep.half);
  return rep;
}

// ---------------------------------------------------------------------------
// Characterizations

struct CharacterizationEntry {
  std::size_t slot = 0;
  Code proposal = 0;
  Membership candidate = Membership::Unknown;
  std::optional<bool> predicted;  // c (and c-) outside H(L(x) + {f_x})
  enum class Verdict { Holds, Fails, Unknown } verdict = Verdict::Unknown;
};

inline const char* to_string(CharacterizationEntry::Verdict v) {
  switch (v) {
    case CharacterizationEntry::Verdict::Holds:
      return "holds";
    case CharacterizationEntry::Verdict::Fails:
      return "fails";
    case CharacterizationEntry::Verdict::Unknown:
      return "unknown";
  }
  return "?";
}

/// f_x in A iff c (and, for q, c-) is not in H(L(x) + {f_x}), for every slot
/// x of the window whose L(x) is stable.
inline std::vector<CharacterizationEntry> characterization_check(const SystemSpec& spec, const Trace& trace,
                                                                 const LimitReport& rep) {
  std::vector<CharacterizationEntry> out;
  for (std::size_t x = 0; x < rep.window; ++x) {
    CharacterizationEntry e;
    e.slot = x;
    e.proposal = spec.f(x);
    e.candidate = final_membership(trace, e.proposal, rep.half);
    if (trace.tracked && !trace.tracked->count(e.proposal)) e.candidate = Membership::Unknown;
    if (x <= rep.stable_prefix) {
      CodeSet premises = trace.final_state.L(x);
      premises.insert(e.proposal);
      bool clash = spec.op.limit_derives(premises, spec.c);
      if (spec.kind == SystemKind::Q) clash = clash || spec.op.limit_derives(premises, spec.c_minus);
      e.predicted = !clash;
    }
    if (e.predicted && e.candidate != Membership::Unknown) {
      const bool in = e.candidate == Membership::In;
      e.verdict = in == *e.predicted ? CharacterizationEntry::Verdict::Holds : CharacterizationEntry::Verdict::Fails;
    }
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Export

inline std::string render_code(Code x, bool pretty_codes) { return pretty_codes ? pretty(x) : std::to_string(x); }

inline std::string render_set(const CodeSet& set, bool pretty_codes) {
  std::string out;
  for (Code x : set) {
    if (!out.empty()) out += ",";
    out += render_code(x, pretty_codes);
  }
  return out;
}

/// One line per stage: stage, clause, z, m, A_s.
inline void write_tsv(std::ostream& os, const Trace& trace, bool pretty_codes = false) {
  os << "stage\tclause\tz\tm\tA\n";
  for (const auto& rec : trace.stages) {
    os << rec.s << '\t' << to_string(rec.clause) << '\t' << (rec.z ? std::to_string(*rec.z) : "-") << '\t' << rec.m
       << '\t' << render_set(rec.A, pretty_codes) << '\n';
  }
}

/// Slots as columns, stacks as vertical strings growing upwards.
inline std::string render_stacks(const Stacks& stacks, bool pretty_codes = false) {
  std::size_t width = 3, depth = 0;
  for (const auto& st : stacks) {
    depth = std::max(depth, st.size());
    for (Code x : st) width = std::max(width, render_code(x, pretty_codes).size());
  }
  std::ostringstream os;
  for (std::size_t row = depth; row-- > 0;) {
    for (std::size_t u = 0; u < stacks.size(); ++u) {
      const std::string cell = row < stacks[u].size() ? render_code(stacks[u][row], pretty_codes) : "";
      os << (u ? " " : "") << '|' << std::setw(static_cast<int>(width)) << cell << '|';
    }
    os << '\n';
  }
  for (std::size_t u = 0; u < stacks.size(); ++u) os << (u ? " " : "") << '+' << std::string(width, '-') << '+';
  os << '\n';
  for (std::size_t u = 0; u < stacks.size(); ++u)
    os << (u ? " " : "") << ' ' << std::setw(static_cast<int>(width)) << u << ' ';
  os << '\n';
  return os.str();
}

inline void write_ascii(std::ostream& os, const Trace& trace, bool pretty_codes = false) {
  for (const auto& rec : trace.stages) {
    os << "stage " << rec.s << "  " << to_string(rec.clause);
    if (rec.z) os << " z=" << *rec.z;
    os << "  m=" << rec.m << "  A={" << render_set(rec.A, pretty_codes) << "}\n";
    if (!rec.stacks.empty()) os << render_stacks(rec.stacks, pretty_codes);
    os << '\n';
  }
}

}  // namespace dialectic
