#pragma once

// Finite-injury construction of a p-dialectical system with connectives whose
// final theses differ from each listed target set, plus a sample target family.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dialectic/constructs.hpp"

namespace dialectic {

/// Stage approximation of one column: value after each threshold stage.
struct DiagColumn {
  std::optional<Code> x;  // nullopt: default for codes without their own column
  std::vector<std::pair<Stage, bool>> values;
};

/// V_{e,s}: a finite-change approximation of the e-th target set.
struct DiagTarget {
  std::size_t e = 0;
  std::vector<DiagColumn> columns;

  const DiagColumn* column(Code x) const {
    const DiagColumn* fallback = nullptr;
    for (const auto& c : columns) {
      if (c.x == x) return &c;
      if (!c.x) fallback = &c;
    }
    return fallback;
  }

  bool value(Code x, Stage s) const {
    const DiagColumn* c = column(x);
    if (!c) return false;
    bool v = false;
    for (const auto& [t, val] : c->values)
      if (t <= s) v = val;
    return v;
  }

  /// Last stage at which any column changes.
  Stage settling() const {
    Stage out = 0;
    for (const auto& c : columns)
      for (const auto& [t, val] : c.values) out = std::max(out, t);
    return out;
  }

  /// Empty when well formed, else the offending field.
  std::string problem() const {
    int defaults = 0;
    std::set<Code> seen;
    for (const auto& c : columns) {
      if (!c.x) ++defaults;
      if (c.x && !seen.insert(*c.x).second) return "columns: duplicate x " + std::to_string(*c.x);
      for (std::size_t i = 1; i < c.values.size(); ++i)
        if (c.values[i].first <= c.values[i - 1].first) return "columns.values: stages must increase";
    }
    if (defaults > 1) return "columns: more than one default column";
    return {};
  }
};

/// n targets, each column changing at most b times, all settled by `horizon`.
/// With b = 0 every target is the constant set of all codes.
inline std::vector<DiagTarget> omega_ce_family(std::size_t n, std::size_t b, Stage horizon = 400) {
  std::vector<DiagTarget> out;
  for (std::size_t e = 0; e < n; ++e) {
    DiagColumn col;
    const std::size_t flips = b == 0 ? 0 : e % b + 1;
    bool v = b == 0 ? true : e % 2 == 0;
    col.values.emplace_back(0, v);
    for (std::size_t j = 0; j < flips; ++j) {
      v = !v;
      col.values.emplace_back((j + 1) * horizon / (b + 1) + 3 * e, v);
    }
    out.push_back({e, {col}});
  }
  return out;
}

struct DiagOptions {
  Stage budget = 2000;
  std::size_t window = 32;
  std::size_t completion_atoms = 10;
};

struct DiagEntry {
  std::size_t e = 0;
  std::optional<Code> x;
  bool constructed = false;  // A(x_e) at the end of the construction
  Membership in_A = Membership::Unknown;
  bool in_V = false;
  std::optional<bool> diagonalized;
};

struct DiagReport {
  enum class Status { Ok, BudgetExceeded, InternalInvariant } status = Status::Ok;
  std::string reason;
  SystemSpec system;
  Trace trace;
  LimitReport limit;
  std::vector<DiagEntry> entries;
  CompletionReport completion;
  ValidationReport validation;
  std::vector<std::size_t> rho_mismatch;  // stabilized reserved slots where hat rho != rho
  std::size_t axioms = 0;
  Stage last_action = 0;

  bool passed() const {
    if (status != Status::Ok || !completion.passed() || !validation.valid() || !rho_mismatch.empty()) return false;
    return std::all_of(entries.begin(), entries.end(), [](const DiagEntry& d) { return d.diagonalized.value_or(false); });
  }
};

inline const char* to_string(DiagReport::Status s) {
  switch (s) {
    case DiagReport::Status::Ok:
      return "ok";
    case DiagReport::Status::BudgetExceeded:
      return "budget-exceeded";
    case DiagReport::Status::InternalInvariant:
      return "internal-invariant";
  }
  return "?";
}

namespace detail {

class DiagConstruction {
 public:
  DiagConstruction(const std::vector<DiagTarget>& targets) : targets_(targets), req_(targets.size()) {
    for (std::size_t e = 0; e < targets.size(); ++e) {
      reserved_.insert(3 * e);
      reserved_.insert(3 * e + 1);
    }
  }

  void run(Stage budget) {
    for (Stage s = 1; s <= budget; ++s) {
      if (s % 2 == 1)
        odd_stage(s);
      else
        even_stage();
    }
  }

  SystemSpec emit() const {
    std::vector<Code> prefix;
    const std::size_t n = f_.empty() ? 0 : f_.rbegin()->first + 1;
    CodeSet used;
    for (const auto& [u, x] : f_) used.insert(x);
    Code hole = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (auto it = f_.find(u); it != f_.end()) {
        prefix.push_back(it->second);
        continue;
      }
      while (used.count(hole)) ++hole;
      prefix.push_back(hole);
      used.insert(hole);
    }
    SystemSpec p;
    p.kind = SystemKind::P;
    p.op = OperatorHandle(EntailmentOperator(ax_, {0, 24, EntailmentMethod::Sat}));
    p.f = ProposingFunction::prefix_then_complement(std::move(prefix));
    p.f_minus = RevisingFunction::chain(TautologyChain{}, f_minus_);
    return p;
  }

  struct Requirement {
    bool defined = false;
    bool A = false;
    std::vector<Code> hat_y, hat_x;  // r-hat(3e), r-hat(3e+1)
    std::vector<Code> dead_y, dead_x;
  };

  const std::vector<Requirement>& requirements() const { return req_; }
  const AxiomStream& axioms() const { return ax_; }
  Stage last_action() const { return last_action_; }
  bool needs_attention(Stage s) const {
    for (std::size_t e = 0; e < req_.size(); ++e)
      if (requires_attention(e, s)) return true;
    return false;
  }

  std::optional<Code> hat_top(std::size_t u) const {
    const auto& r = req_[u / 3];
    const auto& h = u % 3 == 0 ? r.hat_y : r.hat_x;
    if (h.empty()) return std::nullopt;
    return h.back();
  }

 private:
  Code fresh() {
    Code i = 0;
    while (atoms_.count(i)) ++i;
    atoms_.insert(i);
    return atom(i);
  }
  void mention(Code x) { collect_atoms(x, atoms_); }
  void axiom(Stage s, Code x) {
    ax_.add(s, x);
    mention(x);
  }
  void set_f_minus(Code x, Code y) {
    f_minus_[x] = y;
    mention(x);
    mention(y);
  }
  std::optional<Code> f_minus_at(Code x) const {
    auto it = f_minus_.find(x);
    if (it == f_minus_.end()) return std::nullopt;
    return it->second;
  }
  void assign(std::size_t u, Code x) {
    f_[u] = x;
    range_.insert(x);
    mention(x);
  }

  bool requires_attention(std::size_t e, Stage s) const {
    const auto& r = req_[e];
    if (!r.defined) return true;
    const Code x = r.hat_x.front();
    const bool v = targets_[e].value(x, s);
    const bool blocked = ax_has(neg(conj(r.hat_y.back(), x)));
    return v != blocked;
  }
  bool ax_has(Code x) const { return ax_codes_.count(x) > 0; }

  void odd_stage(Stage s) {
    std::size_t e = 0;
    while (e < req_.size() && !requires_attention(e, s)) ++e;
    if (e == req_.size()) return;
    last_action_ = s;
    auto& r = req_[e];
    if (!r.defined) {
      appoint(e);
    } else {
      const Code x = r.hat_x.front();
      const Code y = r.hat_y.back();
      if (targets_[e].value(x, s)) {
        add_axiom(s, neg(conj(y, x)));
        r.hat_x = {x, *f_minus_at(x)};
        r.A = false;
      } else {
        add_axiom(s, neg(y));
        Code next;
        if (auto known = f_minus_at(y)) {
          next = *known;
        } else {
          next = fresh();
          set_f_minus(y, next);
        }
        r.dead_y.push_back(y);
        r.hat_y = {next};
        r.hat_x = {x};
        r.A = true;
      }
    }
    for (std::size_t k = e + 1; k < req_.size(); ++k) reset(k, s);
  }

  void add_axiom(Stage s, Code x) {
    axiom(s, x);
    ax_codes_.insert(x);
  }

  void appoint(std::size_t e) {
    auto& r = req_[e];
    auto successor = [&](const std::vector<Code>& dead) -> Code {
      if (dead.empty()) return fresh();
      if (auto known = f_minus_at(dead.back())) return *known;
      const Code v = fresh();
      set_f_minus(dead.back(), v);
      return v;
    };
    const Code x = successor(r.dead_x);
    const Code y = successor(r.dead_y);
    if (!f_.count(3 * e)) assign(3 * e, y);
    if (!f_.count(3 * e + 1)) assign(3 * e + 1, x);
    if (!f_minus_at(x)) set_f_minus(x, fresh());
    r.hat_y = {y};
    r.hat_x = {x};
    r.A = true;
    r.defined = true;
  }

  void reset(std::size_t e, Stage s) {
    auto& r = req_[e];
    if (!r.defined) return;
    for (Code v : r.hat_y) {
      add_axiom(s, neg(v));
      r.dead_y.push_back(v);
    }
    for (Code v : r.hat_x) {
      add_axiom(s, neg(v));
      r.dead_x.push_back(v);
    }
    r.hat_y.clear();
    r.hat_x.clear();
    r.defined = false;
    r.A = false;
  }

  void even_stage() {
    while (reserved_.count(next_slot_) || f_.count(next_slot_)) ++next_slot_;
    while (range_.count(next_code_)) ++next_code_;
    assign(next_slot_, next_code_);
  }

  std::vector<DiagTarget> targets_;
  std::vector<Requirement> req_;
  std::set<std::size_t> reserved_;
  std::map<std::size_t, Code> f_;
  CodeSet range_;
  std::map<Code, Code> f_minus_;
  AxiomStream ax_;
  CodeSet ax_codes_;
  std::set<Code> atoms_;  // atom indices mentioned so far
  std::size_t next_slot_ = 0;
  Code next_code_ = 0;
  Stage last_action_ = 0;
};

}  // namespace detail

/// Builds the system stage by stage against the targets, runs it, and reports
/// per requirement whether the final theses disagree with the target at x_e.
inline DiagReport diagonalize(const std::vector<DiagTarget>& targets, const DiagOptions& opts = {}) {
  for (std::size_t e = 0; e < targets.size(); ++e) {
    if (targets[e].e != e) throw std::invalid_argument("targets: e must list 0, 1, ... in order");
    if (auto p = targets[e].problem(); !p.empty()) throw std::invalid_argument(p);
  }
  DiagReport rep;
  detail::DiagConstruction build(targets);
  build.run(opts.budget);
  rep.system = build.emit();
  rep.axioms = build.axioms().entries().size();
  rep.last_action = build.last_action();

  const std::size_t reserved = targets.empty() ? 0 : 3 * targets.size() - 1;
  const std::size_t window = std::max(opts.window, reserved);
  RunOptions ro;
  ro.budget = opts.budget;
  ro.record_stacks = false;
  CodeSet tracked = default_tracked(rep.system, window);
  for (std::size_t i = 0; i < opts.completion_atoms; ++i) {
    tracked.insert(atom(i));
    tracked.insert(neg(atom(i)));
  }
  const auto& reqs = build.requirements();
  for (const auto& r : reqs)
    if (r.defined) tracked.insert(r.hat_x.front());
  ro.tracked = tracked;
  rep.trace = run(rep.system, ro);
  rep.limit = limit_report(rep.trace, window);
  rep.completion = completion_check(rep.limit.candidate, opts.completion_atoms);
  rep.validation = validate(rep.system, opts.budget);

  for (std::size_t e = 0; e < targets.size(); ++e) {
    DiagEntry d;
    d.e = e;
    d.constructed = reqs[e].A;
    if (reqs[e].defined) {
      d.x = reqs[e].hat_x.front();
      d.in_V = targets[e].value(*d.x, opts.budget);
      d.in_A = rep.limit.candidate.at(*d.x);
      if (d.in_A != Membership::Unknown) d.diagonalized = (d.in_A == Membership::In) != d.in_V;
    }
    rep.entries.push_back(d);
  }
  for (std::size_t u = 0; u < reserved; ++u) {
    if (u % 3 == 2 || !rep.limit.stabilized[u]) continue;
    const auto hat = build.hat_top(u);
    const auto real = rep.trace.final_state.rho(u);
    if (hat != real) rep.rho_mismatch.push_back(u);
  }

  const Stage quarter = opts.budget / 4;
  for (const auto& t : targets)
    if (t.settling() > quarter) {
      rep.status = DiagReport::Status::BudgetExceeded;
      rep.reason = "target " + std::to_string(t.e) + " settles at stage " + std::to_string(t.settling()) +
                   ", after a quarter of the budget";
      return rep;
    }
  if (build.needs_attention(opts.budget)) {
    rep.status = DiagReport::Status::BudgetExceeded;
    rep.reason = "a requirement still needs attention at the end of the budget";
    return rep;
  }
  if (!rep.rho_mismatch.empty()) {
    rep.status = DiagReport::Status::InternalInvariant;
    rep.reason = "construction and procedure disagree at slot " + std::to_string(rep.rho_mismatch.front());
  }
  return rep;
}

}  // namespace dialectic
