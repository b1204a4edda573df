#pragma once

// Transformations between system classes and the window checks that compare
// their final theses.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dialectic/engine.hpp"

namespace dialectic {

struct WindowComparison {
  std::size_t compared = 0;
  std::size_t unknown = 0;
  std::vector<Code> mismatches;

  bool equal() const { return unknown == 0 && mismatches.empty(); }
};

/// Candidate membership agreement on the codes both reports track.
inline WindowComparison compare_windows(const LimitReport& a, const LimitReport& b) {
  WindowComparison out;
  CodeSet codes;
  for (const auto& [x, m] : a.candidate) codes.insert(x);
  for (const auto& [x, m] : b.candidate) codes.insert(x);
  auto get = [](const LimitReport& r, Code x) {
    auto it = r.candidate.find(x);
    return it == r.candidate.end() ? Membership::Out : it->second;
  };
  for (Code x : codes) {
    const Membership ma = get(a, x), mb = get(b, x);
    ++out.compared;
    if (ma == Membership::Unknown || mb == Membership::Unknown)
      ++out.unknown;
    else if (ma != mb)
      out.mismatches.push_back(x);
  }
  return out;
}

/// Runs of two systems over one reporting scope.
struct PairedRun {
  Trace first, second;
  LimitReport first_report, second_report;
  WindowComparison comparison;
};

inline PairedRun run_pair(const SystemSpec& a, const SystemSpec& b, RunOptions opts, std::size_t window) {
  if (!opts.tracked && !(a.op.table() && b.op.table())) {
    CodeSet t = default_tracked(a, opts.tracked_window);
    const CodeSet u = default_tracked(b, opts.tracked_window);
    t.insert(u.begin(), u.end());
    opts.tracked = t;
  }
  PairedRun out;
  out.first = run(a, opts);
  out.second = run(b, opts);
  out.first_report = limit_report(out.first, window);
  out.second_report = limit_report(out.second, window);
  out.comparison = compare_windows(out.first_report, out.second_report);
  return out;
}

struct TransformCheck {
  PairedRun runs;
  std::vector<std::string> failures;  // violated structural claims
  bool stabilized = false;

  bool passed() const { return stabilized && failures.empty() && runs.comparison.equal(); }
};

inline std::string slot_note(std::size_t u, const std::string& what) { return "slot " + std::to_string(u) + ": " + what; }

inline const Stack& final_stack(const Trace& t, std::size_t u) {
  static const Stack empty;
  return u < t.final_state.stacks.size() ? t.final_state.stacks[u] : empty;
}

// ---------------------------------------------------------------------------
// d -> p

/// f-(z_i) = z_{i+1}, anything else to z_0, for a chain inside H(empty).
inline SystemSpec d_to_p(const SystemSpec& d, const Chain& Z, std::size_t probe = 8) {
  if (d.kind != SystemKind::D) throw std::invalid_argument("d_to_p expects a dialectical system");
  for (Code i = 0; i < probe; ++i)
    if (!d.op.limit_derives({}, chain_at(Z, i)))
      throw std::invalid_argument("chain element " + std::to_string(chain_at(Z, i)) + " is not in H(empty)");
  SystemSpec p = d;
  p.kind = SystemKind::P;
  p.f_minus = RevisingFunction::chain(Z);
  return p;
}

/// Accepted slots agree, discarded slots become <f_u, z_0>, and the final
/// theses agree on the window.
inline TransformCheck check_d_to_p(const SystemSpec& d, const SystemSpec& p, const RunOptions& opts,
                                   std::size_t window) {
  TransformCheck out;
  out.runs = run_pair(d, p, opts, window);
  out.stabilized = out.runs.first_report.all_stabilized() && out.runs.second_report.all_stabilized();
  for (std::size_t u = 0; u < window; ++u) {
    const Stack& rd = final_stack(out.runs.first, u);
    const Stack& rp = final_stack(out.runs.second, u);
    const Code fu = d.f(u);
    if (rd == Stack{fu} && rp != Stack{fu}) out.failures.push_back(slot_note(u, "accepted in d but not in p"));
    if (rd.empty() && rp != Stack{fu, (*p.f_minus)(fu)}) out.failures.push_back(slot_note(u, "discarded in d, p stack differs"));
  }
  return out;
}

// ---------------------------------------------------------------------------
// p -> q

struct PToQ {
  std::optional<SystemSpec> q;
  std::string refusal;
  std::size_t u0 = 0;
  Code z0 = 0, z1 = 0;
};

/// q = <H*, f*, f-, z0, c- = c> from run evidence of p: z0 = f_{u0} is the
/// first rejected proposal other than c, z1 the final top of slot u0.
inline PToQ p_to_q(const SystemSpec& p, const Trace& trace, const LimitReport& rep) {
  PToQ out;
  if (p.kind != SystemKind::P) throw std::invalid_argument("p_to_q expects a p-dialectical system");
  if (!rep.loop_warnings.empty()) {
    out.refusal = "p shows loops (slot " + std::to_string(rep.loop_warnings.front()) + ")";
    return out;
  }
  bool found = false;
  for (std::size_t u = 0; u < rep.stable_prefix && !found; ++u) {
    const Code fu = p.f(u);
    if (fu == p.c || final_membership(trace, fu, rep.half) != Membership::Out) continue;
    if (trace.tracked && !trace.tracked->count(fu)) continue;
    out.u0 = u;
    out.z0 = fu;
    out.z1 = final_stack(trace, u).back();
    found = true;
  }
  if (!found) {
    out.refusal = "every stable proposal other than c is accepted on the window";
    return out;
  }
  SystemSpec q;
  q.kind = SystemKind::Q;
  q.op = OperatorHandle(StarredOperator{std::make_shared<const OperatorHandle>(p.op), out.z0});
  q.f = ProposingFunction({out.z1}, DelegateRule{std::make_shared<const ProposingFunction>(p.f), 1});
  q.f_minus = p.f_minus;
  q.c = out.z0;
  q.c_minus = p.c;
  out.q = q;
  return out;
}

/// X <= H*(X), H*(H*(X)) <= H*(X), and z0 in H*(X) only when z0 in X, at
/// stage s over the codes below s.
inline std::vector<std::string> starred_closure_check(const OperatorHandle& star, std::uint64_t s,
                                                      const std::vector<CodeSet>& samples) {
  std::vector<std::string> failures;
  const auto* st = star.starred();
  if (!st) throw std::invalid_argument("not a starred operator");
  for (const auto& X : samples) {
    const CodeSet once = star.apply(s, X);
    for (Code x : X)
      if (x < s && !once.count(x)) failures.push_back("not extensive at " + std::to_string(x));
    for (Code x : star.apply(s, once))
      if (!once.count(x)) failures.push_back("not idempotent at " + std::to_string(x));
    if (once.count(st->z0) && !X.count(st->z0)) failures.push_back("z0 derived from a set without it");
  }
  return failures;
}

// ---------------------------------------------------------------------------
// q -> d

struct QToD {
  std::optional<SystemSpec> d;
  std::string reason;  // why the evidence was not sufficient
  std::size_t u = 0;   // slot proposing !c-
  std::uint64_t t0 = 0;
  std::size_t v = 0;
  bool revision_after_t0 = false;
};

/// d = <H, g, c> from a stabilized trace of q (recorded stacks required).
inline QToD q_to_d(const SystemSpec& q, const Trace& trace, const LimitReport& rep,
                   const Chain& Z = TautologyChain{}) {
  QToD out;
  if (q.kind != SystemKind::Q) throw std::invalid_argument("q_to_d expects a q-dialectical system");
  if (trace.stages.empty() || (trace.stages.back().stacks.empty() && trace.budget > 0))
    throw std::invalid_argument("q_to_d needs a trace with recorded stacks");
  const Code not_cm = neg(q.c_minus);
  bool found = false;
  for (Code x = 0; x < trace.budget && !found; ++x)
    if (q.f(x) == not_cm) {
      out.u = x;
      found = true;
    }
  if (!found) {
    out.reason = "!c- is not proposed within the budget";
    return out;
  }
  for (std::size_t y = 0; y <= out.u; ++y)
    if (y >= trace.slots.size() || trace.slots[y].last_change > rep.half) {
      out.reason = "L(u+1) not stabilized";
      return out;
    }
  if (final_stack(trace, out.u) != Stack{not_cm}) {
    out.reason = "!c- is not accepted";
    return out;
  }
  std::uint64_t t0 = not_cm + 1;
  for (std::size_t y = 0; y <= out.u; ++y) t0 = std::max(t0, trace.slots[y].last_change);
  std::uint64_t lo = 0, hi = trace.budget + 1;
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (q.op.derives(mid, {q.c_minus, not_cm}, q.c))
      hi = mid;
    else
      lo = mid + 1;
  }
  t0 = std::max(t0, lo);
  if (t0 > trace.budget) {
    out.reason = "t0 not witnessed within the budget";
    return out;
  }
  out.t0 = t0;

  auto L_at = [&](const Stacks& st, std::size_t v) {
    CodeSet o;
    for (std::size_t y = 0; y < v && y < st.size(); ++y)
      if (!st[y].empty()) o.insert(st[y].back());
    return o;
  };
  const Stacks& base = trace.stages[t0].stacks;
  std::size_t v = 0;
  for (std::size_t cand = 1; cand <= base.size(); ++cand) {
    const CodeSet ref = L_at(base, cand);
    bool constant = true;
    for (std::uint64_t s = t0; s <= trace.budget && constant; ++s) constant = L_at(trace.stages[s].stacks, cand) == ref;
    if (!constant) break;
    v = cand;
  }
  out.v = v;
  for (std::uint64_t s = t0 + 1; s <= trace.budget; ++s)
    if (trace.stages[s].clause == Clause::Revise) out.revision_after_t0 = true;

  // the two-case definition of g, kept injective against every earlier value
  std::vector<Code> g;
  CodeSet used;
  Code next_z = 0;
  auto fresh_z = [&] {
    while (used.count(chain_at(Z, next_z))) ++next_z;
    return chain_at(Z, next_z);
  };
  const std::size_t n = std::max<std::size_t>(trace.budget + 1, v + 1);
  for (std::size_t w = 0; w < n; ++w) {
    Code gw;
    if (w < v) {
      const Stack& r = final_stack(trace, w);
      if (r.empty())
        gw = q.f(w);
      else if (!used.count(r.back()))
        gw = r.back();
      else
        gw = fresh_z();
    } else {
      gw = used.count(q.f(w)) ? fresh_z() : q.f(w);
    }
    if (used.count(gw)) gw = fresh_z();
    g.push_back(gw);
    used.insert(gw);
  }
  SystemSpec d;
  d.kind = SystemKind::D;
  d.op = q.op;
  d.f = ProposingFunction(std::move(g), DelegateRule{std::make_shared<const ProposingFunction>(q.f), 0});
  d.c = q.c;
  out.d = d;
  return out;
}

// ---------------------------------------------------------------------------
// dialectical completion -> q

/// q = <H, f, f-, c, c & c> with any revising function; table operators are
/// replaced by their good approximation.
inline SystemSpec d_completion_to_q(const SystemSpec& d, RevisingFunction f_minus = RevisingFunction::chain(TautologyChain{})) {
  if (d.kind != SystemKind::D) throw std::invalid_argument("d_completion_to_q expects a dialectical system");
  SystemSpec q = d;
  q.kind = SystemKind::Q;
  q.c_minus = conj(d.c, d.c);
  q.f_minus = std::move(f_minus);
  if (const auto* t = d.op.table(); t && !(t->identities() && t->closed())) q.op = OperatorHandle(goodify(*t));
  return q;
}

// ---------------------------------------------------------------------------
// p with f- = ! against d

/// Accepted slots agree; a slot discarded by d holds <f_u, !f_u> in p and
/// !f_u follows from L_d(u).
inline TransformCheck p_neg_equals_d_check(const SystemSpec& p, const RunOptions& opts, std::size_t window) {
  SystemSpec d = p;
  d.kind = SystemKind::D;
  d.f_minus.reset();
  TransformCheck out;
  out.runs = run_pair(d, p, opts, window);
  out.stabilized = out.runs.first_report.all_stabilized() && out.runs.second_report.all_stabilized();
  for (std::size_t u = 0; u < window; ++u) {
    const Stack& rd = final_stack(out.runs.first, u);
    const Stack& rp = final_stack(out.runs.second, u);
    const Code fu = p.f(u);
    if (rd == Stack{fu} && rp != Stack{fu}) out.failures.push_back(slot_note(u, "accepted in d but not in p"));
    if (rd.empty()) {
      if (rp != Stack{fu, neg(fu)}) out.failures.push_back(slot_note(u, "discarded in d, p stack differs"));
      if (!p.op.limit_derives(out.runs.first.final_state.L(u), neg(fu)))
        out.failures.push_back(slot_note(u, "negation not derivable from L_d(u)"));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// T_A

struct BernardiReport {
  struct Entry {
    Code index = 0;
    bool in_A = false;
    Membership atom_in_Ad = Membership::Unknown;
    enum class Verdict { Holds, Fails, Unknown } verdict = Verdict::Unknown;
  };
  std::vector<Entry> entries;
  bool passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.verdict == Entry::Verdict::Holds; });
  }
};

/// d over T_A proposing every code in order.
inline SystemSpec bernardi_system(const SetApproximation& a_approx, EntailmentOptions opts = {0, 24, EntailmentMethod::Sat}) {
  SystemSpec d;
  d.kind = SystemKind::D;
  d.op = OperatorHandle(EntailmentOperator(theory_TA(a_approx), opts));
  d.f = ProposingFunction::identity();
  return d;
}

/// i in A implies p_i in A_d, for i below the window.
inline BernardiReport bernardi_check(const SetApproximation& a_approx, const LimitReport& rep, std::size_t window) {
  BernardiReport out;
  const std::set<Code> final_A = a_approx.empty() ? std::set<Code>{} : a_approx.back().second;
  for (Code i = 0; i < window; ++i) {
    BernardiReport::Entry e;
    e.index = i;
    e.in_A = final_A.count(i) > 0;
    auto it = rep.candidate.find(atom(i));
    e.atom_in_Ad = it == rep.candidate.end() ? Membership::Unknown : it->second;
    using V = BernardiReport::Entry::Verdict;
    if (e.atom_in_Ad == Membership::Unknown)
      e.verdict = V::Unknown;
    else
      e.verdict = !e.in_A || e.atom_in_Ad == Membership::In ? V::Holds : V::Fails;
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace dialectic
