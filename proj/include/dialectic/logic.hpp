#pragma once

// Classical propositional consequence over coded sentences, the staged
// deduction operator built from it, and the checks for the connective laws
// and for completions.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dialectic/codec.hpp"

namespace dialectic {

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EntailmentMethod { TruthTable, Sat };

struct EntailmentOptions {
  /// Largest premise subset considered by stage applications; 0 = unbounded.
  std::size_t premise_cap = 8;
  /// Largest atom count of one independent component in truth-table mode.
  std::size_t atom_cap = 24;
  EntailmentMethod method = EntailmentMethod::TruthTable;
};

namespace detail {

// Sentences compiled into a shared DAG, children before parents.
class Circuit {
 public:
  struct Node {
    Connective op;
    std::uint32_t a = 0, b = 0;  // child node ids, or atom slot for Atom
  };

  std::uint32_t add(Code code) {
    if (auto it = ids_.find(code); it != ids_.end()) return it->second;
    // iterative post-order so deep sentences do not recurse
    std::vector<std::pair<Code, bool>> todo{{code, false}};
    while (!todo.empty()) {
      auto [cur, expanded] = todo.back();
      todo.pop_back();
      if (ids_.count(cur)) continue;
      const Formula f = decode(cur);
      if (f.shape == Connective::Atom) {
        const auto slot = atom_slot(f.left);
        intern(cur, {Connective::Atom, slot, 0});
        continue;
      }
      if (!expanded) {
        todo.push_back({cur, true});
        todo.push_back({f.left, false});
        if (f.shape != Connective::Not) todo.push_back({f.right, false});
        continue;
      }
      const auto a = ids_.at(f.left);
      const auto b = f.shape == Connective::Not ? 0u : ids_.at(f.right);
      intern(cur, {f.shape, a, b});
    }
    return ids_.at(code);
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Code>& atoms() const { return atoms_; }

 private:
  std::uint32_t atom_slot(Code index) {
    auto [it, inserted] = atom_slots_.try_emplace(index, static_cast<std::uint32_t>(atoms_.size()));
    if (inserted) atoms_.push_back(index);
    return it->second;
  }
  void intern(Code code, Node n) {
    ids_.emplace(code, static_cast<std::uint32_t>(nodes_.size()));
    nodes_.push_back(n);
  }

  std::unordered_map<Code, std::uint32_t> ids_;
  std::unordered_map<Code, std::uint32_t> atom_slots_;
  std::vector<Node> nodes_;
  std::vector<Code> atoms_;
};

// Bit-parallel truth table: is there an assignment making every `must_true`
// node true and every `must_false` node false?
inline bool truth_table_satisfiable(const Circuit& circuit, const std::vector<std::uint32_t>& must_true,
                                    const std::vector<std::uint32_t>& must_false) {
  static constexpr std::uint64_t kPatterns[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull,
                                                 0xF0F0F0F0F0F0F0F0ull, 0xFF00FF00FF00FF00ull,
                                                 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  const std::size_t n_atoms = circuit.atoms().size();
  const auto& nodes = circuit.nodes();
  const std::uint64_t blocks = n_atoms <= 6 ? 1 : (std::uint64_t{1} << (n_atoms - 6));
  const std::uint64_t live = n_atoms >= 6 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (std::uint64_t{1} << n_atoms)) - 1);
  std::vector<std::uint64_t> value(nodes.size());
  for (std::uint64_t block = 0; block < blocks; ++block) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& nd = nodes[i];
      switch (nd.op) {
        case Connective::Atom:
          value[i] = nd.a < 6 ? kPatterns[nd.a] : (((block >> (nd.a - 6)) & 1) ? ~std::uint64_t{0} : 0);
          break;
        case Connective::Not:
          value[i] = ~value[nd.a];
          break;
        case Connective::Imp:
          value[i] = ~value[nd.a] | value[nd.b];
          break;
        case Connective::And:
          value[i] = value[nd.a] & value[nd.b];
          break;
        case Connective::Or:
          value[i] = value[nd.a] | value[nd.b];
          break;
      }
    }
    std::uint64_t ok = live;
    for (auto t : must_true) ok &= value[t];
    for (auto f : must_false) ok &= ~value[f];
    if (ok) return true;
  }
  return false;
}

// DPLL with two watched literals over a Tseitin encoding of the circuit.
class Dpll {
 public:
  explicit Dpll(const Circuit& circuit) : circuit_(circuit) { sync(); }

  /// Adds the clauses of circuit nodes created since the last call. Call
  /// only with no assignments (fresh or after reset).
  void sync() {
    const auto& nodes = circuit_.nodes();
    if (known_ == nodes.size()) return;
    value_.resize(nodes.size(), -1);
    watches_.resize(2 * nodes.size());
    clauses_.reserve(clauses_.size() + 3 * (nodes.size() - known_));
    for (std::uint32_t v = static_cast<std::uint32_t>(known_); v < nodes.size(); ++v) {
      const auto& nd = nodes[v];
      const int x = pos(v), a = pos(nd.a), b = pos(nd.b);
      switch (nd.op) {
        case Connective::Atom:
          break;
        case Connective::Not:
          add({neg(x), neg(a)});
          add({x, a});
          break;
        case Connective::And:
          add({neg(x), a});
          add({neg(x), b});
          add({x, neg(a), neg(b)});
          break;
        case Connective::Or:
          add({neg(x), a, b});
          add({x, neg(a)});
          add({x, neg(b)});
          break;
        case Connective::Imp:
          add({neg(x), neg(a), b});
          add({x, a});
          add({x, neg(b)});
          break;
      }
    }
    known_ = nodes.size();
    // atoms first: with full-equivalence clauses every gate is then forced
    order_.clear();
    for (std::uint32_t v = 0; v < nodes.size(); ++v)
      if (nodes[v].op == Connective::Atom) order_.push_back(v);
    for (std::uint32_t v = 0; v < nodes.size(); ++v)
      if (nodes[v].op != Connective::Atom) order_.push_back(v);
  }

  bool solve(const std::vector<std::uint32_t>& must_true, const std::vector<std::uint32_t>& must_false) {
    for (auto t : must_true)
      if (!assign(pos(t))) return false;
    for (auto f : must_false)
      if (!assign(neg(pos(f)))) return false;
    if (!propagate()) return false;
    struct Level {
      std::size_t trail_size;
      int lit;
      bool flipped;
    };
    std::vector<Level> levels;
    const auto& order = order_;
    std::size_t cursor = 0;
    for (;;) {
      while (cursor < order.size() && value_[order[cursor]] != -1) ++cursor;
      if (cursor == order.size()) return true;
      const int lit = neg(pos(order[cursor]));
      levels.push_back({trail_.size(), lit, false});
      assign(lit);
      while (!propagate()) {
        while (!levels.empty() && levels.back().flipped) levels.pop_back();
        if (levels.empty()) return false;
        auto& top = levels.back();
        undo_to(top.trail_size);
        top.flipped = true;
        top.lit = neg(top.lit);
        assign(top.lit);
        cursor = 0;
      }
    }
  }

  /// Clears every assignment so the clause database can be reused.
  void reset() { undo_to(0); }

  /// Atom assignment of the last satisfying run, indexed like circuit.atoms().
  std::vector<bool> atom_model() const {
    std::vector<bool> out(circuit_.atoms().size(), false);
    for (std::uint32_t v = 0; v < circuit_.nodes().size(); ++v) {
      const auto& nd = circuit_.nodes()[v];
      if (nd.op == Connective::Atom) out[nd.a] = value_[v] == 1;
    }
    return out;
  }

 private:
  static int pos(std::uint32_t v) { return static_cast<int>(2 * v); }
  static int neg(int lit) { return lit ^ 1; }
  int lit_value(int lit) const {
    const int v = value_[lit >> 1];
    return v < 0 ? -1 : (v ^ (lit & 1));
  }

  struct Clause {
    std::array<int, 3> lit;
    std::size_t n;
    int& operator[](std::size_t i) { return lit[i]; }
    std::size_t size() const { return n; }
  };

  void add(std::initializer_list<int> lits) {
    Clause c{{0, 0, 0}, lits.size()};
    std::copy(lits.begin(), lits.end(), c.lit.begin());
    const auto id = clauses_.size();
    watches_[c[0]].push_back(id);
    watches_[c[1]].push_back(id);
    clauses_.push_back(c);
  }

  bool assign(int lit) {
    const int cur = lit_value(lit);
    if (cur == 1) return true;
    if (cur == 0) return false;
    value_[lit >> 1] = static_cast<std::int8_t>((lit & 1) ? 0 : 1);
    trail_.push_back(lit);
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      value_[trail_.back() >> 1] = -1;
      trail_.pop_back();
    }
    head_ = std::min(head_, size);
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      const int false_lit = neg(trail_[head_++]);
      auto& ws = watches_[false_lit];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto cid = ws[i];
        auto& c = clauses_[cid];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (lit_value(c[0]) == 1) {
          ws[keep++] = cid;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (lit_value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1]].push_back(cid);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = cid;
        if (!assign(c[0])) {
          for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
          ws.resize(keep);
          return false;
        }
      }
      ws.resize(keep);
    }
    return true;
  }

  const Circuit& circuit_;
  std::vector<Clause> clauses_;
  std::vector<std::uint32_t> order_;
  std::size_t known_ = 0;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<std::int8_t> value_;
  std::vector<int> trail_;
  std::size_t head_ = 0;
};

/// One growing clause database shared by the queries of a run; premises and
/// goals enter each query as assumptions.
class SatSession {
 public:
  SatSession() = default;
  SatSession(const SatSession&) = delete;
  SatSession& operator=(const SatSession&) = delete;

  std::uint32_t node(Code code) { return circuit_.add(code); }
  const Circuit& circuit() const { return circuit_; }

  /// The solver, cleared and holding every node's clauses.
  Dpll& solver() {
    solver_.reset();
    solver_.sync();
    return solver_;
  }

  std::map<Code, bool> model() const {
    std::map<Code, bool> out;
    const auto bits = solver_.atom_model();
    for (std::size_t i = 0; i < bits.size(); ++i) out[circuit_.atoms()[i]] = bits[i];
    return out;
  }

 private:
  Circuit circuit_;
  Dpll solver_{circuit_};
};

inline bool eval_under(Code code, const std::map<Code, bool>& atoms, std::unordered_map<Code, bool>& memo) {
  if (auto it = memo.find(code); it != memo.end()) return it->second;
  const Formula f = decode(code);
  bool v = false;
  switch (f.shape) {
    case Connective::Atom: {
      auto it = atoms.find(f.left);
      v = it != atoms.end() && it->second;
      break;
    }
    case Connective::Not:
      v = !eval_under(f.left, atoms, memo);
      break;
    case Connective::Imp:
      v = !eval_under(f.left, atoms, memo) || eval_under(f.right, atoms, memo);
      break;
    case Connective::And:
      v = eval_under(f.left, atoms, memo) && eval_under(f.right, atoms, memo);
      break;
    case Connective::Or:
      v = eval_under(f.left, atoms, memo) || eval_under(f.right, atoms, memo);
      break;
  }
  memo.emplace(code, v);
  return v;
}

struct UnionFind {
  std::map<Code, Code> parent;
  Code find(Code x) {
    auto [it, inserted] = parent.try_emplace(x, x);
    if (it->second == x) return x;
    const Code root = find(it->second);
    parent[x] = root;
    return root;
  }
  void unite(Code a, Code b) { parent[find(a)] = find(b); }
};

// Satisfiability of {t : t in must_true} + {!g : g in must_false}.
inline bool satisfiable(const std::vector<Code>& must_true, const std::vector<Code>& must_false,
                        const EntailmentOptions& opts) {
  if (opts.method == EntailmentMethod::Sat) {
    Circuit circuit;
    std::vector<std::uint32_t> t, f;
    for (Code c : must_true) t.push_back(circuit.add(c));
    for (Code c : must_false) f.push_back(circuit.add(c));
    return Dpll(circuit).solve(t, f);
  }
  // truth tables run per atom-connected component
  struct Item {
    Code code;
    bool positive;
    std::set<Code> atoms;
  };
  std::vector<Item> items;
  UnionFind uf;
  for (Code c : must_true) items.push_back({c, true, atoms_of(c)});
  for (Code c : must_false) items.push_back({c, false, atoms_of(c)});
  for (const auto& it : items) {
    const Code first = *it.atoms.begin();
    for (Code a : it.atoms) uf.unite(a, first);
  }
  std::map<Code, std::vector<const Item*>> components;
  for (const auto& it : items) components[uf.find(*it.atoms.begin())].push_back(&it);
  for (const auto& [root, members] : components) {
    Circuit circuit;
    std::vector<std::uint32_t> t, f;
    for (const Item* m : members) (m->positive ? t : f).push_back(circuit.add(m->code));
    if (circuit.atoms().size() > opts.atom_cap)
      throw ResourceError("truth table over " + std::to_string(circuit.atoms().size()) + " atoms exceeds cap " +
                          std::to_string(opts.atom_cap));
    if (!truth_table_satisfiable(circuit, t, f)) return false;
  }
  return true;
}

}  // namespace detail

/// Does every assignment satisfying premises and extra_axioms satisfy x?
template <class PremiseRange, class ExtraRange>
bool entails(const PremiseRange& premises, Code x, const ExtraRange& extra_axioms,
             const EntailmentOptions& opts = {}) {
  std::vector<Code> t(premises.begin(), premises.end());
  t.insert(t.end(), extra_axioms.begin(), extra_axioms.end());
  return !detail::satisfiable(t, {x}, opts);
}

inline bool entails(const CodeSet& premises, Code x, const EntailmentOptions& opts = {}) {
  return entails(premises, x, CodeSet{}, opts);
}

/// Stage-indexed c.e. list of axioms added to classical propositional calculus.
class AxiomStream {
 public:
  AxiomStream() = default;

  /// Codes become axioms from stage s on; repeated stages accumulate.
  void add(std::uint64_t stage, Code code) {
    entries_.emplace(stage, code);
    if (stage > last_stage_) last_stage_ = stage;
  }

  CodeSet extras_at(std::uint64_t stage) const {
    CodeSet out;
    for (auto it = entries_.begin(); it != entries_.end() && it->first <= stage; ++it) out.insert(it->second);
    return out;
  }

  CodeSet all() const {
    CodeSet out;
    for (const auto& [s, c] : entries_) out.insert(c);
    return out;
  }

  const std::multimap<std::uint64_t, Code>& entries() const { return entries_; }
  std::uint64_t last_stage() const { return last_stage_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::multimap<std::uint64_t, Code> entries_;
  std::uint64_t last_stage_ = 0;
};

/// Stage-indexed membership of a c.e. set: snapshot at stage s is A_s.
using SetApproximation = std::vector<std::pair<std::uint64_t, std::set<Code>>>;

/// T_A: classical calculus plus the atoms {p_i : i in A}.
inline AxiomStream theory_TA(const SetApproximation& a_approx) {
  AxiomStream stream;
  std::set<Code> previous;
  std::uint64_t previous_stage = 0;
  bool first = true;
  for (const auto& [stage, members] : a_approx) {
    if (!first && stage < previous_stage) throw std::invalid_argument("theory_TA: stages out of order");
    if (!std::includes(members.begin(), members.end(), previous.begin(), previous.end()))
      throw std::invalid_argument("theory_TA: approximation is not monotone at stage " + std::to_string(stage));
    for (Code i : members)
      if (!previous.count(i)) stream.add(stage, atom(i));
    previous = members;
    previous_stage = stage;
    first = false;
  }
  return stream;
}

/// H(X) = consequences of X plus the stream; stage s admits codes below s and
/// premise subsets of bounded size.
class EntailmentOperator {
 public:
  EntailmentOperator() = default;
  explicit EntailmentOperator(AxiomStream stream, EntailmentOptions opts = {})
      : stream_(std::move(stream)), opts_(opts) {}

  const AxiomStream& stream() const { return stream_; }
  const EntailmentOptions& options() const { return opts_; }

  bool derives(std::uint64_t s, const CodeSet& X, Code x) const {
    if (x >= s) return false;
    return derives_unbounded(restrict(X, s), x, stream_.extras_at(s));
  }

  /// {x in candidates : x in H_s(X)}. A session, if given, is reused
  /// across calls (SAT only).
  CodeSet stage_apply(std::uint64_t s, const CodeSet& X, const CodeSet& candidates,
                      detail::SatSession* session = nullptr) const {
    CodeSet out;
    const CodeSet premises = restrict(X, s);
    const CodeSet extras = stream_.extras_at(s);
    const bool single = opts_.premise_cap == 0 || premises.size() <= opts_.premise_cap;
    if (single && opts_.method == EntailmentMethod::Sat) {
      std::optional<detail::SatSession> local;
      if (!session) session = &local.emplace();
      // every model found refutes the candidates it falsifies
      std::vector<std::uint32_t> t;
      for (Code c : premises) t.push_back(session->node(c));
      for (Code c : extras) t.push_back(session->node(c));
      std::vector<std::pair<Code, std::uint32_t>> open;
      for (Code x : candidates)
        if (x < s) open.emplace_back(x, session->node(x));
      if (!session->solver().solve(t, {})) {
        for (const auto& [x, id] : open) out.insert(x);
        return out;
      }
      auto refute = [&] {
        const auto model = session->model();
        std::unordered_map<Code, bool> memo;
        std::erase_if(open, [&](const auto& c) { return !detail::eval_under(c.first, model, memo); });
      };
      refute();
      while (!open.empty()) {
        const auto [x, id] = open.back();
        if (session->solver().solve(t, {id})) {
          refute();
        } else {
          out.insert(x);
          open.pop_back();
        }
      }
      return out;
    }
    for (Code x : candidates)
      if (x < s && derives_unbounded(premises, x, extras)) out.insert(x);
    return out;
  }

  /// Least n such that the first n premises, with the stage-s axioms, give x
  /// in H_s; premises at or above s are the caller's to drop. SAT only.
  std::optional<std::size_t> least_entailing_prefix(std::uint64_t s, const std::vector<Code>& premises, Code x,
                                                    detail::SatSession* session = nullptr) const {
    if (x >= s) return std::nullopt;
    std::optional<detail::SatSession> local;
    if (!session) session = &local.emplace();
    std::vector<std::uint32_t> base, ids;
    for (Code c : stream_.extras_at(s)) base.push_back(session->node(c));
    for (Code c : premises) ids.push_back(session->node(c));
    const std::uint32_t goal = session->node(x);
    // first n premises plus not-x; on success, the number of premises the model satisfies
    auto open_prefix = [&](std::size_t n) -> std::optional<std::size_t> {
      std::vector<std::uint32_t> t = base;
      t.insert(t.end(), ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n));
      if (!session->solver().solve(t, {goal})) return std::nullopt;
      const auto model = session->model();
      std::unordered_map<Code, bool> memo;
      while (n < premises.size() && detail::eval_under(premises[n], model, memo)) ++n;
      return n;
    };
    std::size_t lo = 0, hi = premises.size();
    if (const auto n = open_prefix(0)) {
      if (*n == hi) return std::nullopt;
      lo = *n + 1;
    } else {
      return 0;
    }
    if (open_prefix(hi)) return std::nullopt;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (const auto n = open_prefix(mid))
        lo = *n + 1;
      else
        hi = mid;
    }
    return lo;
  }

  /// Full stage application {x < s : x in H_s(X)}.
  CodeSet stage_apply(std::uint64_t s, const CodeSet& X) const {
    CodeSet all;
    for (Code x = 0; x < s; ++x) all.insert(x);
    return stage_apply(s, X, all);
  }

  /// Membership in the limit operator H(X).
  bool limit_derives(const CodeSet& X, Code x) const { return derives_unbounded(X, x, stream_.all()); }

  /// Least stage at which every code involved is admitted and the stream is complete.
  std::uint64_t settled_stage(const CodeSet& X, Code x) const {
    std::uint64_t s = std::max<std::uint64_t>(stream_.last_stage(), x + 1);
    if (!X.empty()) s = std::max<std::uint64_t>(s, *X.rbegin() + 1);
    return s;
  }

 private:
  static CodeSet restrict(const CodeSet& X, std::uint64_t s) { return CodeSet(X.begin(), X.lower_bound(s)); }

  bool derives_unbounded(const CodeSet& premises, Code x, const CodeSet& extras) const {
    if (opts_.premise_cap == 0 || premises.size() <= opts_.premise_cap) return entails(premises, x, extras, opts_);
    // monotone: only the maximal subsets need checking
    std::vector<Code> pool(premises.begin(), premises.end());
    std::vector<bool> pick(pool.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(opts_.premise_cap), true);
    do {
      std::vector<Code> d;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (pick[i]) d.push_back(pool[i]);
      if (entails(d, x, extras, opts_)) return true;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return false;
  }

  AxiomStream stream_;
  EntailmentOptions opts_;
};

// ---------------------------------------------------------------------------
// Connective laws

struct LawViolation {
  int law = 0;
  std::string detail;
};

struct LawReport {
  std::size_t samples = 0;
  std::vector<LawViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Random sentence over atoms [0, atom_count) with nesting at most depth.
template <class Rng>
Code random_sentence(Rng& rng, std::size_t atom_count, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 0 : 4);
  const int shape = pick(rng);
  if (shape == 0) return atom(std::uniform_int_distribution<Code>(0, atom_count - 1)(rng));
  const Code a = random_sentence(rng, atom_count, depth - 1);
  if (shape == 1) return neg(a);
  const Code b = random_sentence(rng, atom_count, depth - 1);
  switch (shape) {
    case 2:
      return imp(a, b);
    case 3:
      return conj(a, b);
    default:
      return disj(a, b);
  }
}

/// Checks the six laws of a deduction operator with connectives on sampled
/// instances. H is any callable (const CodeSet&, Code) -> bool giving
/// membership in the limit operator.
template <class Oracle, class Rng>
LawReport connective_laws_check(const Oracle& H, Rng& rng, std::size_t samples, std::size_t atom_count = 6,
                                Code c = kContradiction) {
  LawReport report;
  auto note = [&](int law, const std::string& what) { report.violations.push_back({law, what}); };
  for (std::size_t i = 0; i < samples; ++i) {
    const Code x = random_sentence(rng, atom_count, 2);
    const Code y = random_sentence(rng, atom_count, 2);
    CodeSet X;
    const auto size = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int k = 0; k < size; ++k) X.insert(random_sentence(rng, atom_count, 2));
    std::vector<Code> queries{x, y, neg(x), c, conj(x, y), disj(x, y), imp(y, x)};
    for (int k = 0; k < 4; ++k) queries.push_back(random_sentence(rng, atom_count, 2));
    const std::string tag = "x=" + std::to_string(x) + " y=" + std::to_string(y);
    auto with = [](CodeSet s, Code extra) {
      s.insert(extra);
      return s;
    };

    if (!H(CodeSet{x, neg(x)}, c)) note(1, tag);
    for (Code q : queries)
      if (H(CodeSet{neg(neg(x))}, q) != H(CodeSet{x}, q)) note(2, tag + " q=" + std::to_string(q));
    if (!H(CodeSet{}, disj(x, neg(x)))) note(3, tag);
    for (Code q : queries) {
      const bool lhs = H(with(X, disj(x, y)), q);
      const bool rhs = H(with(X, x), q) && H(with(X, y), q);
      if (lhs != rhs) note(4, tag + " q=" + std::to_string(q));
    }
    if (H(with(X, x), c) && !H(X, neg(x))) note(5, tag);
    if (H(with(X, y), x) != H(X, imp(y, x))) note(6, tag);
    ++report.samples;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Completions

enum class Membership { In, Out, Unknown };

struct CompletionEntry {
  Code sentence = 0;
  Membership positive = Membership::Unknown;
  Membership negative = Membership::Unknown;
  enum class Verdict { ExactlyOne, Neither, Both, Unknown } verdict = Verdict::Unknown;
};

struct CompletionReport {
  std::vector<CompletionEntry> entries;
  bool passed() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const auto& e) { return e.verdict == CompletionEntry::Verdict::ExactlyOne; });
  }
  std::optional<Code> first_failure() const {
    for (const auto& e : entries)
      if (e.verdict != CompletionEntry::Verdict::ExactlyOne) return e.sentence;
    return std::nullopt;
  }
};

/// Exactly-one check of {x, !x} for the first `atom_window` atoms. Codes absent
/// from the candidate map count as Unknown.
inline CompletionReport completion_check(const std::map<Code, Membership>& candidate, std::size_t atom_window) {
  CompletionReport report;
  auto lookup = [&](Code code) {
    auto it = candidate.find(code);
    return it == candidate.end() ? Membership::Unknown : it->second;
  };
  for (Code i = 0; i < atom_window; ++i) {
    CompletionEntry e;
    e.sentence = atom(i);
    e.positive = lookup(e.sentence);
    e.negative = lookup(neg(e.sentence));
    using V = CompletionEntry::Verdict;
    if (e.positive == Membership::Unknown || e.negative == Membership::Unknown)
      e.verdict = V::Unknown;
    else if (e.positive == Membership::In && e.negative == Membership::In)
      e.verdict = V::Both;
    else if (e.positive == Membership::Out && e.negative == Membership::Out)
      e.verdict = V::Neither;
    else
      e.verdict = V::ExactlyOne;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace dialectic
