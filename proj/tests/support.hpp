#pragma once

// Shared by the unit tests and the acceptance runner: random tiny systems,
// an independent simulator of the procedures, and a brute-force truth table.

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "dialectic/engine.hpp"

namespace testkit {

using dialectic::Code;
using dialectic::CodeSet;

// ---------------------------------------------------------------------------
// Brute-force propositional semantics

inline bool eval(Code n, const std::map<Code, bool>& v) {
  const auto f = dialectic::decode(n);
  switch (f.shape) {
    case dialectic::Connective::Atom:
      return v.at(f.left);
    case dialectic::Connective::Not:
      return !eval(f.left, v);
    case dialectic::Connective::Imp:
      return !eval(f.left, v) || eval(f.right, v);
    case dialectic::Connective::And:
      return eval(f.left, v) && eval(f.right, v);
    case dialectic::Connective::Or:
      return eval(f.left, v) || eval(f.right, v);
  }
  return false;
}

/// Every assignment to the occurring atoms; meant for at most a handful.
inline bool brute_entails(const CodeSet& premises, Code x, const CodeSet& extras = {}) {
  std::set<Code> atoms;
  for (Code p : premises) dialectic::collect_atoms(p, atoms);
  for (Code p : extras) dialectic::collect_atoms(p, atoms);
  dialectic::collect_atoms(x, atoms);
  const std::vector<Code> idx(atoms.begin(), atoms.end());
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << idx.size()); ++bits) {
    std::map<Code, bool> v;
    for (std::size_t i = 0; i < idx.size(); ++i) v[idx[i]] = (bits >> i) & 1;
    bool all = true;
    for (Code p : premises) all = all && eval(p, v);
    for (Code p : extras) all = all && eval(p, v);
    if (all && !eval(x, v)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tiny table systems

struct RawAxiom {
  std::uint64_t stage = 0;
  Code conclusion = 0;
  std::vector<Code> premises;
};

/// A system over an explicit table, kept in raw form so the simulator below
/// does not share any code with the library's operator machinery.
struct TinySystem {
  dialectic::SystemKind kind = dialectic::SystemKind::P;
  std::vector<RawAxiom> axioms;
  std::vector<Code> prefix;  // f: prefix, then the complement in ascending order
  Code revise_start = 20;    // f-: a_i = revise_start + i, off-chain to a_0
  Code c = 11;
  Code c_minus = 10;

  Code f(Code x) const {
    if (x < prefix.size()) return prefix[x];
    Code k = x - prefix.size(), cand = 0;
    for (;; ++cand) {
      if (std::find(prefix.begin(), prefix.end(), cand) != prefix.end()) continue;
      if (k == 0) return cand;
      --k;
    }
  }
  Code f_minus(Code x) const { return x >= revise_start ? x + 1 : revise_start; }

  /// Goodified stage operator: axioms wait until their codes are below s,
  /// X below s is kept, c derives everything below s; closed by iteration.
  CodeSet H(std::uint64_t s, const CodeSet& X) const {
    CodeSet Y;
    for (Code x : X)
      if (x < s) Y.insert(x);
    for (bool grew = true; grew;) {
      grew = false;
      if (c < s && Y.count(c)) {
        for (Code x = 0; x < s; ++x) grew |= Y.insert(x).second;
      }
      for (const auto& ax : axioms) {
        std::uint64_t at = std::max<std::uint64_t>(ax.stage, ax.conclusion + 1);
        for (Code d : ax.premises) at = std::max<std::uint64_t>(at, d + 1);
        if (at > s) continue;
        bool ok = true;
        for (Code d : ax.premises) ok = ok && Y.count(d);
        if (ok) grew |= Y.insert(ax.conclusion).second;
      }
    }
    return Y;
  }

  dialectic::SystemSpec spec() const {
    using namespace dialectic;
    Approximation a;
    for (const auto& ax : axioms) a.add(ax.stage, Axiom(ax.conclusion, ax.premises));
    a.add_explosive(c);
    SystemSpec out;
    out.kind = kind;
    out.op = OperatorHandle(goodify(a));
    out.f = ProposingFunction::prefix_then_complement(prefix);
    if (kind != SystemKind::D) out.f_minus = RevisingFunction::chain(ArithmeticChain{revise_start, 1});
    out.c = c;
    out.c_minus = c_minus;
    return out;
  }
};

inline TinySystem random_tiny(std::mt19937_64& rng, dialectic::SystemKind kind) {
  TinySystem t;
  t.kind = kind;
  std::vector<Code> perm{0, 1, 2, 3, 4};
  std::shuffle(perm.begin(), perm.end(), rng);
  t.prefix = perm;
  const std::vector<Code> pool{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 20, 21, 22};
  auto pick = [&] { return pool[rng() % pool.size()]; };
  const int n = 4 + static_cast<int>(rng() % 9);  // at most 12 axioms
  for (int i = 0; i < n; ++i) {
    RawAxiom ax;
    ax.stage = rng() % 20;
    // bias towards conclusions that matter: c, c-, and small codes
    const auto roll = rng() % 6;
    ax.conclusion = roll == 0 ? t.c : roll == 1 ? t.c_minus : pick();
    for (int k = static_cast<int>(rng() % 3); k > 0; --k) ax.premises.push_back(pick());
    t.axioms.push_back(ax);
  }
  return t;
}

/// The same limit table listed in a different order: every axiom moves to
/// another stage below 20.
inline TinySystem restaged(const TinySystem& t, std::mt19937_64& rng) {
  TinySystem out = t;
  for (auto& ax : out.axioms) ax.stage = rng() % 20;
  return out;
}

/// Consistent and free of loops once the chain leaves the axiom pool.
inline bool well_behaved(const TinySystem& t, std::uint64_t budget) {
  const auto spec = t.spec();
  const auto rep = dialectic::consistency(spec, budget);
  return rep.status == dialectic::ConsistencyReport::Status::Consistent;
}

// ---------------------------------------------------------------------------
// Systems with connectives

/// T_A for a random A inside {0, 2, 3, 4, 5} with entry stages below 40, plus
/// up to two axioms p_i -> !p_j between atoms outside A. c = 13, c- = p_1.
inline dialectic::SystemSpec connective_system(std::mt19937_64& rng, dialectic::SystemKind kind) {
  using namespace dialectic;
  const std::vector<Code> pool{0, 2, 3, 4, 5};
  std::map<std::uint64_t, std::set<Code>> entries;
  std::set<Code> members;
  for (Code i : pool)
    if (rng() % 2) {
      members.insert(i);
      entries[rng() % 40].insert(i);
    }
  SetApproximation approx;
  std::set<Code> so_far;
  for (const auto& [stage, add] : entries) {
    so_far.insert(add.begin(), add.end());
    approx.emplace_back(stage, so_far);
  }
  AxiomStream stream = theory_TA(approx);
  std::vector<Code> outside;
  for (Code i : pool)
    if (!members.count(i)) outside.push_back(i);
  for (int k = static_cast<int>(rng() % 3); k > 0 && outside.size() >= 2; --k) {
    const Code i = outside[rng() % outside.size()], j = outside[rng() % outside.size()];
    if (i != j) stream.add(rng() % 40, imp(atom(i), neg(atom(j))));
  }
  SystemSpec out;
  out.kind = kind;
  out.op = OperatorHandle(EntailmentOperator(stream, {0, 24, EntailmentMethod::Sat}));
  std::vector<Code> prefix{0, 1, 2, 3, 4, 5, 6, 7};
  std::shuffle(prefix.begin(), prefix.end(), rng);
  out.f = ProposingFunction::prefix_then_complement(prefix);
  if (kind == SystemKind::P)
    out.f_minus = rng() % 2 ? RevisingFunction::negation() : RevisingFunction::chain(TautologyChain{});
  if (kind == SystemKind::Q) out.f_minus = RevisingFunction::chain(TautologyChain{});
  out.c = dialectic::kContradiction;
  out.c_minus = atom(1);
  return out;
}

struct OracleStage {
  std::vector<std::vector<Code>> stacks;
  std::size_t m = 0;
  CodeSet A;
};

/// Straight transcription of the procedures; chi is recomputed from scratch
/// for every k, with no search shortcuts.
inline std::vector<OracleStage> simulate(const TinySystem& t, std::uint64_t budget) {
  using dialectic::SystemKind;
  std::vector<std::vector<Code>> r{{t.f(0)}};
  std::size_t m = 0;
  auto L = [&](std::size_t x) {
    CodeSet out;
    for (std::size_t y = 0; y < x && y < r.size(); ++y)
      if (!r[y].empty()) out.insert(r[y].back());
    return out;
  };
  auto chi = [&](std::uint64_t s, std::size_t i) { return t.H(s, L(i + 1)); };
  auto normalize = [&] {
    while (r.size() > m + 1) r.pop_back();
    while (r.size() < m + 1) r.emplace_back();
  };
  std::vector<OracleStage> out{{r, 0, {}}};
  for (std::uint64_t s = 0; s < budget; ++s) {
    std::optional<std::size_t> kc, kd;
    for (std::size_t k = 0; k <= m; ++k) {
      const CodeSet x = chi(s, k);
      if (!kc && x.count(t.c)) kc = k;
      if (t.kind == SystemKind::Q && !kd && x.count(t.c_minus)) kd = k;
    }
    const bool clause2 = kc && !(kd && *kd < *kc);
    const bool clause3 = kd && !clause2;
    if (!kc && !kd) {
      r.resize(m + 1);
      r.push_back({t.f(m + 1)});
      m = m + 1;
    } else if (t.kind == SystemKind::P || clause3) {
      const std::size_t z = t.kind == SystemKind::P ? *kc : *kd;
      r[z].push_back(t.f_minus(r[z].back()));
      m = z;
    } else {
      const std::size_t z = *kc;
      if (t.H(s, {}).count(t.c)) {
        r = {{t.f(0)}};
        m = 0;
      } else {
        r.resize(z + 2);
        r[z].clear();
        r[z + 1] = {t.f(z + 1)};
        m = z + 1;
      }
    }
    normalize();
    out.push_back({r, m, m == 0 ? CodeSet{} : t.H(s + 1, L(m))});
  }
  return out;
}

/// First stage at which engine and simulator disagree, if any.
inline std::optional<std::uint64_t> first_mismatch(const TinySystem& t, std::uint64_t budget) {
  dialectic::RunOptions opts;
  opts.budget = budget;
  const auto trace = dialectic::run(t.spec(), opts);
  const auto oracle = simulate(t, budget);
  for (std::uint64_t s = 0; s <= budget; ++s) {
    const auto& e = trace.stages[s];
    const auto& o = oracle[s];
    if (e.m != o.m || e.stacks != o.stacks || e.A != o.A) return s;
  }
  return std::nullopt;
}

}  // namespace testkit
