#pragma once

// Enumeration operators presented by staged axiom tables, the (.)^omega
// closure of a finite table, and good approximations.

#include <algorithm>
#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dialectic/codec.hpp"
#include "dialectic/logic.hpp"

namespace dialectic {

using Stage = std::uint64_t;

/// <conclusion, premises>; premises are kept sorted and duplicate free.
struct Axiom {
  Code conclusion = 0;
  std::vector<Code> premises;

  Axiom() = default;
  Axiom(Code x, std::vector<Code> d) : conclusion(x), premises(std::move(d)) {
    std::sort(premises.begin(), premises.end());
    premises.erase(std::unique(premises.begin(), premises.end()), premises.end());
  }

  friend auto operator<=>(const Axiom&, const Axiom&) = default;
  friend bool operator==(const Axiom&, const Axiom&) = default;
};

using AxiomTable = std::set<Axiom>;

/// One application: {x : <x, D> in table, D subset of X}.
inline CodeSet apply_table(const AxiomTable& table, const CodeSet& X) {
  CodeSet out;
  for (const auto& ax : table)
    if (std::includes(X.begin(), X.end(), ax.premises.begin(), ax.premises.end())) out.insert(ax.conclusion);
  return out;
}

/// G^omega: for each mentioned conclusion, one axiom per minimal set of leaves
/// of a derivation in G. Applying it once equals the least fixpoint of
/// Y -> G(X u Y).
inline AxiomTable closure_omega(const AxiomTable& table) {
  using Support = std::vector<Code>;
  std::map<Code, std::set<Support>> supports;
  auto add_support = [&](Code x, Support s) {
    auto& known = supports[x];
    for (const auto& t : known)
      if (std::includes(s.begin(), s.end(), t.begin(), t.end())) return false;
    for (auto it = known.begin(); it != known.end();) {
      if (std::includes(it->begin(), it->end(), s.begin(), s.end()))
        it = known.erase(it);
      else
        ++it;
    }
    known.insert(std::move(s));
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& ax : table) {
      // every premise is either a leaf itself or replaced by one of its supports
      std::vector<Support> partial{{}};
      for (Code d : ax.premises) {
        std::vector<Support> options{{d}};
        if (auto it = supports.find(d); it != supports.end())
          options.insert(options.end(), it->second.begin(), it->second.end());
        std::set<Support> next;
        for (const auto& p : partial)
          for (const auto& o : options) {
            Support merged;
            std::set_union(p.begin(), p.end(), o.begin(), o.end(), std::back_inserter(merged));
            next.insert(std::move(merged));
          }
        partial.assign(next.begin(), next.end());
      }
      for (auto& s : partial) changed |= add_support(ax.conclusion, std::move(s));
    }
  }
  AxiomTable out;
  for (const auto& [x, ss] : supports)
    for (const auto& s : ss) out.insert(Axiom(x, s));
  return out;
}

/// Staged finite axiom tables H_0 <= H_1 <= ... given as deltas, plus the
/// structural families that a finite listing cannot hold at every stage.
class Approximation {
 public:
  Approximation() = default;

  /// Deltas; stage s sees every delta at a stage <= s.
  void add(Stage s, Axiom ax) { deltas_[s].insert(std::move(ax)); }

  /// From stage e+1 on, <x, {e}> for every x < s.
  void add_explosive(Code e) { explosive_.insert(e); }

  /// Builds from full per-stage snapshots; rejects a sequence that shrinks.
  static Approximation from_snapshots(const std::vector<std::pair<Stage, AxiomTable>>& snapshots) {
    Approximation out;
    AxiomTable previous;
    Stage previous_stage = 0;
    for (const auto& [s, table] : snapshots) {
      if (s < previous_stage) throw std::invalid_argument("approximation stages out of order");
      if (!std::includes(table.begin(), table.end(), previous.begin(), previous.end()))
        throw std::invalid_argument("approximation is not monotone at stage " + std::to_string(s));
      for (const auto& ax : table)
        if (!previous.count(ax)) out.add(s, ax);
      previous = table;
      previous_stage = s;
    }
    return out;
  }

  const std::map<Stage, AxiomTable>& deltas() const { return deltas_; }
  const std::set<Code>& explosive() const { return explosive_; }
  bool identities() const { return identities_; }
  bool closed() const { return closed_; }
  void set_identities(bool on) { identities_ = on; }
  void set_closed(bool on) { closed_ = on; }

  Stage last_stage() const { return deltas_.empty() ? 0 : deltas_.rbegin()->first; }

  /// Union of the deltas up to s, without the structural families.
  AxiomTable listed(Stage s) const {
    AxiomTable out;
    for (auto it = deltas_.begin(); it != deltas_.end() && it->first <= s; ++it)
      out.insert(it->second.begin(), it->second.end());
    return out;
  }

  /// Materialized H_s.
  AxiomTable table(Stage s) const {
    AxiomTable out = listed(s);
    if (identities_)
      for (Code i = 0; i < s; ++i) out.insert(Axiom(i, {i}));
    for (Code e : explosive_)
      if (e < s)
        for (Code x = 0; x < s; ++x) out.insert(Axiom(x, {e}));
    return closed_ ? closure_omega(out) : out;
  }

  /// H_s(X) without materializing the structural families.
  CodeSet apply(Stage s, const CodeSet& X) const {
    const AxiomTable base = listed(s);
    auto once = [&](const CodeSet& from) {
      CodeSet out = apply_table(base, from);
      if (identities_) out.insert(from.begin(), from.lower_bound(s));
      for (Code e : explosive_)
        if (e < s && from.count(e)) {
          for (Code x = 0; x < s; ++x) out.insert(x);
          break;
        }
      return out;
    };
    CodeSet result = once(X);
    if (!closed_) return result;
    for (;;) {
      CodeSet extended = X;
      extended.insert(result.begin(), result.end());
      CodeSet next = once(extended);
      if (next == result) return result;
      result = std::move(next);
    }
  }

  /// A stage from which H_s(X) contains all of H(X) at or below x.
  Stage settled_stage(const CodeSet& X, Code x) const {
    Stage s = std::max<Stage>(last_stage(), x + 1);
    if (!X.empty()) s = std::max<Stage>(s, *X.rbegin() + 1);
    if (!explosive_.empty()) s = std::max<Stage>(s, *explosive_.rbegin() + 1);
    return s;
  }

 private:
  std::map<Stage, AxiomTable> deltas_;
  std::set<Code> explosive_;
  bool identities_ = false;
  bool closed_ = false;
};

/// Good approximation with the same limit operator: each axiom waits until
/// its codes are below the stage, identity axioms <i,{i}> for i < s are
/// added, and every stage table is closed.
inline Approximation goodify(const Approximation& alpha) {
  Approximation out;
  for (const auto& [s, table] : alpha.deltas())
    for (const auto& ax : table) {
      Stage at = std::max<Stage>(s, ax.conclusion + 1);
      if (!ax.premises.empty()) at = std::max<Stage>(at, ax.premises.back() + 1);
      out.add(at, ax);
    }
  for (Code e : alpha.explosive()) out.add_explosive(e);
  out.set_identities(true);
  out.set_closed(true);
  return out;
}

inline Approximation goodify(const std::vector<std::pair<Stage, AxiomTable>>& snapshots) {
  return goodify(Approximation::from_snapshots(snapshots));
}

struct GoodnessViolation {
  enum class Kind { NotExtensive, NotIdempotent } kind;
  Stage stage = 0;
  CodeSet sample;
  Code witness = 0;
};

/// Checks X <= H_s(X) (for max X < s) and H_s(H_s(X)) <= H_s(X) for s <= stage_bound.
inline std::optional<GoodnessViolation> is_good(const Approximation& alpha, Stage stage_bound,
                                                const std::vector<CodeSet>& samples) {
  for (Stage s = 0; s <= stage_bound; ++s) {
    for (const auto& X : samples) {
      const CodeSet once = alpha.apply(s, X);
      if (!X.empty() && *X.rbegin() < s)
        for (Code x : X)
          if (!once.count(x)) return GoodnessViolation{GoodnessViolation::Kind::NotExtensive, s, X, x};
      for (Code x : alpha.apply(s, once))
        if (!once.count(x)) return GoodnessViolation{GoodnessViolation::Kind::NotIdempotent, s, X, x};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

class OperatorHandle;

/// H* = (H minus {<z0, D> : z0 not in D}) plus {<x, {z0}> : x}: z0 is only
/// derivable from itself and derives everything.
struct StarredOperator {
  std::shared_ptr<const OperatorHandle> base;
  Code z0 = 0;
};

/// The deduction operator of a system, either an explicit staged table or
/// propositional entailment; the procedures only query stage applications.
class OperatorHandle {
 public:
  using Variant = std::variant<Approximation, EntailmentOperator, StarredOperator>;

  OperatorHandle() = default;
  OperatorHandle(Approximation a) : v_(std::move(a)) {}
  OperatorHandle(EntailmentOperator e) : v_(std::move(e)) {}
  OperatorHandle(StarredOperator s) : v_(std::move(s)) {}

  const Variant& variant() const { return v_; }
  const Approximation* table() const { return std::get_if<Approximation>(&v_); }
  const EntailmentOperator* entailment() const { return std::get_if<EntailmentOperator>(&v_); }
  const StarredOperator* starred() const { return std::get_if<StarredOperator>(&v_); }

  bool derives(Stage s, const CodeSet& X, Code x) const {
    return std::visit(
        [&](const auto& op) -> bool {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, Approximation>) {
            return op.apply(s, X).count(x) > 0;
          } else if constexpr (std::is_same_v<T, EntailmentOperator>) {
            return op.derives(s, X, x);
          } else {
            if (x >= s) return false;
            if (op.z0 < s && X.count(op.z0)) return true;
            return x != op.z0 && op.base->derives(s, X, x);
          }
        },
        v_);
  }

  /// H_s(X), restricted to `candidates` when given.
  CodeSet apply(Stage s, const CodeSet& X, const std::optional<CodeSet>& candidates = std::nullopt) const {
    return std::visit(
        [&](const auto& op) -> CodeSet {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, Approximation>) {
            CodeSet all = op.apply(s, X);
            if (!candidates) return all;
            CodeSet out;
            std::set_intersection(all.begin(), all.end(), candidates->begin(), candidates->end(),
                                  std::inserter(out, out.end()));
            return out;
          } else if constexpr (std::is_same_v<T, EntailmentOperator>) {
            return candidates ? op.stage_apply(s, X, *candidates) : op.stage_apply(s, X);
          } else {
            CodeSet out;
            if (op.z0 < s && X.count(op.z0)) {
              if (candidates) {
                out.insert(candidates->begin(), candidates->lower_bound(s));
              } else {
                for (Code x = 0; x < s; ++x) out.insert(x);
              }
              return out;
            }
            out = op.base->apply(s, X, candidates);
            out.erase(op.z0);
            return out;
          }
        },
        v_);
  }

  Stage settled_stage(const CodeSet& X, Code x) const {
    return std::visit(
        [&](const auto& op) -> Stage {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, StarredOperator>)
            return std::max<Stage>(op.base->settled_stage(X, x), op.z0 + 1);
          else
            return op.settled_stage(X, x);
        },
        v_);
  }

  /// Membership in the limit operator H(X).
  bool limit_derives(const CodeSet& X, Code x) const {
    if (const auto* e = entailment()) return e->limit_derives(X, x);
    if (const auto* st = starred()) {
      if (X.count(st->z0)) return true;
      return x != st->z0 && st->base->limit_derives(X, x);
    }
    return derives(settled_stage(X, x), X, x);
  }

 private:
  Variant v_;
};

}  // namespace dialectic
