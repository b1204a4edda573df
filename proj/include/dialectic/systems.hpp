#pragma once

// Dialectical (d), q-dialectical (q) and p-dialectical (p) system
// specifications and their budget-bounded validation.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "dialectic/codec.hpp"
#include "dialectic/operators.hpp"

namespace dialectic {

// ---------------------------------------------------------------------------
// Proposing functions

/// f(x) = x.
struct IdentityRule {};
/// f(x) = code of atom p_x.
struct AtomRule {};
/// Beyond the prefix, the naturals missing from the prefix in ascending order.
struct ComplementRule {};
class ProposingFunction;
/// Beyond the prefix, f(x) = base(x - offset).
struct DelegateRule {
  std::shared_ptr<const ProposingFunction> base;
  Code offset = 0;
};

class ProposingFunction {
 public:
  using Rule = std::variant<IdentityRule, AtomRule, ComplementRule, DelegateRule>;

  ProposingFunction() = default;
  ProposingFunction(std::vector<Code> prefix, Rule rule) : prefix_(std::move(prefix)), rule_(std::move(rule)) {
    if (std::holds_alternative<ComplementRule>(rule_)) sorted_prefix_ = CodeSet(prefix_.begin(), prefix_.end());
  }

  static ProposingFunction identity() { return {{}, IdentityRule{}}; }
  static ProposingFunction atoms() { return {{}, AtomRule{}}; }
  static ProposingFunction prefix_then_complement(std::vector<Code> prefix) {
    return {std::move(prefix), ComplementRule{}};
  }

  const std::vector<Code>& prefix() const { return prefix_; }
  const Rule& rule() const { return rule_; }

  Code operator()(Code x) const {
    if (x < prefix_.size()) return prefix_[x];
    return std::visit(
        [&](const auto& r) -> Code {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, IdentityRule>) {
            return x;
          } else if constexpr (std::is_same_v<T, AtomRule>) {
            return atom(x);
          } else if constexpr (std::is_same_v<T, ComplementRule>) {
            // the k-th natural not in the prefix
            Code k = x - prefix_.size();
            Code candidate = k;
            for (Code p : sorted_prefix_) {
              if (p > candidate) break;
              ++candidate;
            }
            return candidate;
          } else {
            return (*r.base)(x - r.offset);
          }
        },
        rule_);
  }

 private:
  std::vector<Code> prefix_;
  Rule rule_ = IdentityRule{};
  CodeSet sorted_prefix_;
};

// ---------------------------------------------------------------------------
// Revising functions

/// a_i = start + i * step.
struct ArithmeticChain {
  Code start = 0;
  Code step = 1;
};
/// a_i = p_i -> p_i, each a tautology.
struct TautologyChain {};

using Chain = std::variant<ArithmeticChain, TautologyChain>;

inline Code chain_at(const Chain& chain, Code i) {
  if (const auto* a = std::get_if<ArithmeticChain>(&chain))
    return detail::checked_add(a->start, detail::checked_mul(i, a->step));
  return imp(atom(i), atom(i));
}

/// Index i with a_i = x, if any.
inline std::optional<Code> chain_index(const Chain& chain, Code x) {
  if (const auto* a = std::get_if<ArithmeticChain>(&chain)) {
    if (x < a->start || a->step == 0 || (x - a->start) % a->step != 0) return std::nullopt;
    return (x - a->start) / a->step;
  }
  const Formula f = decode(x);
  if (f.shape != Connective::Imp || f.left != f.right || decode(f.left).shape != Connective::Atom)
    return std::nullopt;
  return decode(f.left).left;
}

/// a_i -> a_{i+1}; anything off the chain -> a_0.
struct ChainRule {
  Chain chain;
};
/// x -> !x.
struct NegRule {};
/// x -> x & x.
struct PadRule {};
/// x -> x + k, k > 0.
struct OffsetRule {
  Code k = 1;
};

class RevisingFunction {
 public:
  using Rule = std::variant<ChainRule, NegRule, PadRule, OffsetRule>;

  RevisingFunction() = default;
  explicit RevisingFunction(Rule rule, std::map<Code, Code> table = {})
      : table_(std::move(table)), rule_(std::move(rule)) {}

  static RevisingFunction chain(Chain c, std::map<Code, Code> table = {}) {
    return RevisingFunction(ChainRule{c}, std::move(table));
  }
  static RevisingFunction negation() { return RevisingFunction(NegRule{}); }

  const std::map<Code, Code>& table() const { return table_; }
  const Rule& rule() const { return rule_; }

  Code operator()(Code x) const {
    if (auto it = table_.find(x); it != table_.end()) return it->second;
    return std::visit(
        [&](const auto& r) -> Code {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, ChainRule>) {
            auto i = chain_index(r.chain, x);
            return i ? chain_at(r.chain, *i + 1) : chain_at(r.chain, 0);
          } else if constexpr (std::is_same_v<T, NegRule>) {
            return neg(x);
          } else if constexpr (std::is_same_v<T, PadRule>) {
            return conj(x, x);
          } else {
            return detail::checked_add(x, r.k);
          }
        },
        rule_);
  }

 private:
  std::map<Code, Code> table_;
  Rule rule_ = NegRule{};
};

// ---------------------------------------------------------------------------

enum class SystemKind { D, Q, P };

inline const char* to_string(SystemKind k) {
  switch (k) {
    case SystemKind::D:
      return "d";
    case SystemKind::Q:
      return "q";
    case SystemKind::P:
      return "p";
  }
  return "?";
}

struct SystemSpec {
  SystemKind kind = SystemKind::P;
  OperatorHandle op;
  ProposingFunction f;
  std::optional<RevisingFunction> f_minus;
  Code c = kContradiction;
  Code c_minus = 0;
};

struct ValidationReport {
  enum class Status { Valid, Invalid, Unknown } status = Status::Valid;
  std::string reason;
  std::vector<Code> witness;

  bool valid() const { return status == Status::Valid; }
};

inline const char* to_string(ValidationReport::Status s) {
  switch (s) {
    case ValidationReport::Status::Valid:
      return "valid";
    case ValidationReport::Status::Invalid:
      return "invalid";
    case ValidationReport::Status::Unknown:
      return "unknown";
  }
  return "?";
}

/// Injectivity of f and acyclicity of f- on [0, budget), a witness of
/// H(empty) != empty by stage budget, and c- outside the explored f- image.
inline ValidationReport validate(const SystemSpec& spec, std::uint64_t budget) {
  using S = ValidationReport::Status;
  std::map<Code, Code> preimage;
  for (Code x = 0; x < budget; ++x) {
    const Code fx = spec.f(x);
    auto [it, fresh] = preimage.emplace(fx, x);
    if (!fresh) return {S::Invalid, "injectivity", {it->second, x}};
  }

  const bool revises = spec.kind != SystemKind::D;
  if (revises && !spec.f_minus) return {S::Invalid, "missing revising function", {}};
  if (!revises && spec.f_minus) return {S::Invalid, "dialectical systems take no revising function", {}};
  if (revises) {
    const RevisingFunction& g = *spec.f_minus;
    std::unordered_set<Code> cleared;  // orbits already scanned without a repeat
    for (Code x = budget; x-- > 0;) {
      std::vector<Code> orbit{x};
      std::unordered_set<Code> seen{x};
      Code cur = x;
      for (std::uint64_t step = 0; step < budget; ++step) {
        if (cleared.count(cur) && step > 0) break;
        try {
          cur = g(cur);
        } catch (const std::overflow_error&) {
          break;  // orbits that outgrow the code range cannot return
        }
        orbit.push_back(cur);
        if (!seen.insert(cur).second) return {S::Invalid, "acyclicity", orbit};
      }
      cleared.insert(x);
      if (spec.kind == SystemKind::Q && g(x) == spec.c_minus) return {S::Invalid, "counterexample in range", {x}};
    }
  }

  bool nonempty = false;
  if (const auto* t = spec.op.table()) {
    nonempty = !t->apply(budget, {}).empty();
  } else {
    for (Code x = 0; x < budget && !nonempty; ++x) nonempty = spec.op.derives(budget, {}, x);
  }
  if (!nonempty) return {S::Unknown, "H(empty) not witnessed nonempty", {}};
  return {};
}

struct ConsistencyReport {
  enum class Status { Consistent, InconsistentAt, UnknownWithinBudget } status = Status::UnknownWithinBudget;
  std::uint64_t stage = 0;
  Code witness = 0;
};

inline const char* to_string(ConsistencyReport::Status s) {
  switch (s) {
    case ConsistencyReport::Status::Consistent:
      return "consistent";
    case ConsistencyReport::Status::InconsistentAt:
      return "inconsistent";
    case ConsistencyReport::Status::UnknownWithinBudget:
      return "unknown";
  }
  return "?";
}

/// Least stage <= budget at which c (or c- for q) lies in H_s(empty); the
/// system is reported consistent only once the budget passes the stage where
/// the operator has settled on these codes.
inline ConsistencyReport consistency(const SystemSpec& spec, std::uint64_t budget) {
  std::vector<Code> bad{spec.c};
  if (spec.kind == SystemKind::Q) bad.push_back(spec.c_minus);
  ConsistencyReport best;
  bool found = false;
  for (Code b : bad) {
    if (!spec.op.derives(budget, {}, b)) continue;
    std::uint64_t lo = 0, hi = budget;  // derives at hi, stages are monotone
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (spec.op.derives(mid, {}, b))
        hi = mid;
      else
        lo = mid + 1;
    }
    if (!found || lo < best.stage) best = {ConsistencyReport::Status::InconsistentAt, lo, b};
    found = true;
  }
  if (found) return best;
  for (Code b : bad)
    if (spec.op.settled_stage({}, b) > budget) return {};
  return {ConsistencyReport::Status::Consistent, 0, 0};
}

}  // namespace dialectic
