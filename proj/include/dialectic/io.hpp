#pragma once

// JSON forms of specs, approximations, axiom streams, targets, traces and
// reports. Parse errors name the offending field.

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dialectic/diagonalize.hpp"

namespace dialectic::io {

using nlohmann::json;

struct SchemaError : std::runtime_error {
  SchemaError(const std::string& field, const std::string& what) : std::runtime_error(field + ": " + what), field(field) {}
  std::string field;
};

namespace detail {

inline std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "(root)" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(at(path, key), "missing");
  return *it;
}

inline Code natural(const json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    throw SchemaError(path, "expected a natural number");
  return j.get<Code>();
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

inline std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

inline std::vector<Code> naturals(const json& j, const std::string& path) {
  std::vector<Code> out;
  const json& a = array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(natural(a[i], at(path, i)));
  return out;
}

inline bool flag(const json& j, const std::string& path) {
  if (j.is_boolean()) return j.get<bool>();
  const Code v = natural(j, path);
  if (v > 1) throw SchemaError(path, "expected 0 or 1");
  return v == 1;
}

}  // namespace detail

inline json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string(), e.what());
  }
}

// ---------------------------------------------------------------------------
// Approximations and axiom streams

inline Approximation approximation_from_json(const json& j, const std::string& path = "") {
  using namespace detail;
  Approximation out;
  const std::string sp = at(path, "stages");
  const json& stages = array(field(j, "stages", path), sp);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const std::string ip = at(sp, i);
    const Stage s = natural(field(stages[i], "s", ip), at(ip, "s"));
    const std::string ap = at(ip, "axioms");
    const json& axioms = array(field(stages[i], "axioms", ip), ap);
    for (std::size_t k = 0; k < axioms.size(); ++k) {
      const std::string kp = at(ap, k);
      if (!axioms[k].is_array() || axioms[k].size() != 2) throw SchemaError(kp, "expected [conclusion, [premises]]");
      out.add(s, Axiom(natural(axioms[k][0], at(kp, 0)), naturals(axioms[k][1], at(kp, 1))));
    }
  }
  if (j.contains("explosive"))
    for (Code e : naturals(j["explosive"], at(path, "explosive"))) out.add_explosive(e);
  if (j.contains("identities")) out.set_identities(flag(j["identities"], at(path, "identities")));
  if (j.contains("closed")) out.set_closed(flag(j["closed"], at(path, "closed")));
  return out;
}

inline json to_json(const Approximation& a) {
  json stages = json::array();
  for (const auto& [s, table] : a.deltas()) {
    json axioms = json::array();
    for (const auto& ax : table) axioms.push_back({ax.conclusion, ax.premises});
    stages.push_back({{"s", s}, {"axioms", axioms}});
  }
  json out{{"stages", stages}};
  if (!a.explosive().empty()) out["explosive"] = a.explosive();
  if (a.identities()) out["identities"] = true;
  if (a.closed()) out["closed"] = true;
  return out;
}

inline AxiomStream stream_from_json(const json& j, const std::string& path = "") {
  using namespace detail;
  AxiomStream out;
  const std::string ep = at(path, "extras");
  const json& extras = array(field(j, "extras", path), ep);
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string ip = at(ep, i);
    const Stage s = natural(field(extras[i], "s", ip), at(ip, "s"));
    for (Code c : naturals(field(extras[i], "codes", ip), at(ip, "codes"))) out.add(s, c);
  }
  return out;
}

inline json to_json(const AxiomStream& stream) {
  std::map<std::uint64_t, std::vector<Code>> by_stage;
  for (const auto& [s, c] : stream.entries()) by_stage[s].push_back(c);
  json extras = json::array();
  for (const auto& [s, codes] : by_stage) extras.push_back({{"s", s}, {"codes", codes}});
  return {{"extras", extras}};
}

// ---------------------------------------------------------------------------
// Operators, f, f- and specs

/// Relative "path" references resolve against `base_dir`.
inline OperatorHandle operator_from_json(const json& j, const std::string& path, const std::filesystem::path& base_dir) {
  using namespace detail;
  const std::string type = text(field(j, "type", path), at(path, "type"));
  auto source = [&](auto parse) {
    if (j.contains("path")) {
      const auto file = base_dir / text(j["path"], at(path, "path"));
      return parse(read_file(file), std::string());
    }
    return parse(j, path);
  };
  if (type == "table") {
    Approximation a = source([](const json& v, const std::string& p) { return approximation_from_json(v, p); });
    if (j.contains("goodify") && flag(j["goodify"], at(path, "goodify"))) a = goodify(a);
    return a;
  }
  EntailmentOptions opts{0, 24, EntailmentMethod::Sat};
  if (j.contains("premise_cap")) opts.premise_cap = natural(j["premise_cap"], at(path, "premise_cap"));
  if (j.contains("atom_cap")) opts.atom_cap = natural(j["atom_cap"], at(path, "atom_cap"));
  if (j.contains("method")) {
    const std::string m = text(j["method"], at(path, "method"));
    if (m == "sat")
      opts.method = EntailmentMethod::Sat;
    else if (m == "truth-table")
      opts.method = EntailmentMethod::TruthTable;
    else
      throw SchemaError(at(path, "method"), "expected \"sat\" or \"truth-table\"");
  }
  if (type == "entailment") {
    AxiomStream s = j.contains("extras") || j.contains("path")
                        ? source([](const json& v, const std::string& p) { return stream_from_json(v, p); })
                        : AxiomStream{};
    return EntailmentOperator(std::move(s), opts);
  }
  if (type == "TA") {
    const std::string ap = at(path, "A");
    const json& snaps = array(field(j, "A", path), ap);
    SetApproximation approx;
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      const std::string ip = at(ap, i);
      if (!snaps[i].is_array() || snaps[i].size() != 2) throw SchemaError(ip, "expected [stage, [members]]");
      const auto members = naturals(snaps[i][1], at(ip, 1));
      approx.emplace_back(natural(snaps[i][0], at(ip, 0)), std::set<Code>(members.begin(), members.end()));
    }
    try {
      return EntailmentOperator(theory_TA(approx), opts);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(ap, e.what());
    }
  }
  if (type == "starred") {
    const auto base = operator_from_json(field(j, "base", path), at(path, "base"), base_dir);
    return StarredOperator{std::make_shared<const OperatorHandle>(base), natural(field(j, "z0", path), at(path, "z0"))};
  }
  throw SchemaError(at(path, "type"), "unknown operator type \"" + type + "\"");
}

inline json to_json(const OperatorHandle& op) {
  if (const auto* t = op.table()) {
    json out = to_json(*t);
    out["type"] = "table";
    return out;
  }
  auto opts_json = [](json& out, const EntailmentOptions& o) {
    out["premise_cap"] = o.premise_cap;
    out["atom_cap"] = o.atom_cap;
    out["method"] = o.method == EntailmentMethod::Sat ? "sat" : "truth-table";
  };
  if (const auto* e = op.entailment()) {
    json out = to_json(e->stream());
    out["type"] = "entailment";
    opts_json(out, e->options());
    return out;
  }
  const auto* s = op.starred();
  return {{"type", "starred"}, {"z0", s->z0}, {"base", to_json(*s->base)}};
}

inline ProposingFunction proposing_from_json(const json& j, const std::string& path) {
  using namespace detail;
  std::vector<Code> prefix;
  if (j.contains("prefix")) prefix = naturals(j["prefix"], at(path, "prefix"));
  const std::string rule = j.contains("rule") ? text(j["rule"], at(path, "rule")) : "complement";
  if (rule == "identity") return {prefix, IdentityRule{}};
  if (rule == "atoms") return {prefix, AtomRule{}};
  if (rule == "complement") return ProposingFunction::prefix_then_complement(prefix);
  if (rule == "delegate") {
    auto base = std::make_shared<const ProposingFunction>(proposing_from_json(field(j, "base", path), at(path, "base")));
    const Code offset = j.contains("offset") ? natural(j["offset"], at(path, "offset")) : 0;
    return {prefix, DelegateRule{base, offset}};
  }
  throw SchemaError(at(path, "rule"), "unknown proposing rule \"" + rule + "\"");
}

inline json to_json(const ProposingFunction& f) {
  json out{{"prefix", f.prefix()}};
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IdentityRule>) {
          out["rule"] = "identity";
        } else if constexpr (std::is_same_v<T, AtomRule>) {
          out["rule"] = "atoms";
        } else if constexpr (std::is_same_v<T, ComplementRule>) {
          out["rule"] = "complement";
        } else {
          out["rule"] = "delegate";
          out["offset"] = r.offset;
          out["base"] = to_json(*r.base);
        }
      },
      f.rule());
  return out;
}

inline Chain chain_from_json(const json& j, const std::string& path) {
  using namespace detail;
  const std::string type = text(field(j, "type", path), at(path, "type"));
  if (type == "tautology") return TautologyChain{};
  if (type == "arithmetic") {
    ArithmeticChain a;
    a.start = natural(field(j, "start", path), at(path, "start"));
    if (j.contains("step")) a.step = natural(j["step"], at(path, "step"));
    if (a.step == 0) throw SchemaError(at(path, "step"), "must be positive");
    return a;
  }
  throw SchemaError(at(path, "type"), "unknown chain type \"" + type + "\"");
}

inline json to_json(const Chain& c) {
  if (const auto* a = std::get_if<ArithmeticChain>(&c)) return {{"type", "arithmetic"}, {"start", a->start}, {"step", a->step}};
  return {{"type", "tautology"}};
}

inline RevisingFunction revising_from_json(const json& j, const std::string& path) {
  using namespace detail;
  std::map<Code, Code> table;
  if (j.contains("table")) {
    const std::string tp = at(path, "table");
    const json& rows = array(j["table"], tp);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != 2) throw SchemaError(at(tp, i), "expected [x, f-(x)]");
      table[natural(rows[i][0], at(at(tp, i), 0))] = natural(rows[i][1], at(at(tp, i), 1));
    }
  }
  const std::string rule = text(field(j, "rule", path), at(path, "rule"));
  if (rule == "chain") {
    const Chain c = j.contains("chain") ? chain_from_json(j["chain"], at(path, "chain")) : Chain{TautologyChain{}};
    return RevisingFunction::chain(c, std::move(table));
  }
  if (rule == "negation") return RevisingFunction(NegRule{}, std::move(table));
  if (rule == "pad") return RevisingFunction(PadRule{}, std::move(table));
  if (rule == "offset") {
    const Code k = j.contains("k") ? natural(j["k"], at(path, "k")) : 1;
    if (k == 0) throw SchemaError(at(path, "k"), "must be positive");
    return RevisingFunction(OffsetRule{k}, std::move(table));
  }
  throw SchemaError(at(path, "rule"), "unknown revising rule \"" + rule + "\"");
}

inline json to_json(const RevisingFunction& g) {
  json out;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ChainRule>) {
          out["rule"] = "chain";
          out["chain"] = to_json(r.chain);
        } else if constexpr (std::is_same_v<T, NegRule>) {
          out["rule"] = "negation";
        } else if constexpr (std::is_same_v<T, PadRule>) {
          out["rule"] = "pad";
        } else {
          out["rule"] = "offset";
          out["k"] = r.k;
        }
      },
      g.rule());
  if (!g.table().empty()) {
    json rows = json::array();
    for (const auto& [x, y] : g.table()) rows.push_back({x, y});
    out["table"] = rows;
  }
  return out;
}

inline SystemKind kind_from_json(const json& j, const std::string& path) {
  const std::string k = detail::text(j, path);
  if (k == "d") return SystemKind::D;
  if (k == "q") return SystemKind::Q;
  if (k == "p") return SystemKind::P;
  throw SchemaError(path, "expected \"d\", \"q\" or \"p\"");
}

inline SystemSpec spec_from_json(const json& j, const std::filesystem::path& base_dir = ".") {
  using namespace detail;
  SystemSpec s;
  s.kind = kind_from_json(field(j, "kind", ""), "kind");
  s.op = operator_from_json(field(j, "operator", ""), "operator", base_dir);
  s.f = j.contains("f") ? proposing_from_json(j["f"], "f") : ProposingFunction::identity();
  if (j.contains("f_minus") && !j["f_minus"].is_null()) s.f_minus = revising_from_json(j["f_minus"], "f_minus");
  if (j.contains("c")) s.c = natural(j["c"], "c");
  if (j.contains("c_minus")) s.c_minus = natural(j["c_minus"], "c_minus");
  if (s.kind != SystemKind::D && !s.f_minus) throw SchemaError("f_minus", "missing for a " + std::string(to_string(s.kind)) + "-system");
  if (s.kind == SystemKind::Q && !j.contains("c_minus")) throw SchemaError("c_minus", "missing for a q-system");
  return s;
}

inline SystemSpec read_spec(const std::filesystem::path& path) {
  return spec_from_json(read_file(path), path.parent_path());
}

inline json to_json(const SystemSpec& s) {
  json out{{"kind", to_string(s.kind)}, {"operator", to_json(s.op)}, {"f", to_json(s.f)}, {"c", s.c}};
  if (s.f_minus) out["f_minus"] = to_json(*s.f_minus);
  if (s.kind == SystemKind::Q) out["c_minus"] = s.c_minus;
  return out;
}

// ---------------------------------------------------------------------------
// Diagonalization targets

inline DiagTarget target_from_json(const json& j, const std::string& path) {
  using namespace detail;
  DiagTarget t;
  t.e = natural(field(j, "e", path), at(path, "e"));
  const std::string cp = at(path, "columns");
  const json& cols = array(field(j, "columns", path), cp);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const std::string ip = at(cp, i);
    DiagColumn col;
    if (!cols[i].is_object()) throw SchemaError(ip, "expected an object");
    if (cols[i].contains("x")) {
      if (!cols[i]["x"].is_string() || cols[i]["x"] != "default") col.x = natural(cols[i]["x"], at(ip, "x"));
    }
    const std::string vp = at(ip, "values");
    const json& vals = array(field(cols[i], "values", ip), vp);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const std::string kp = at(vp, k);
      if (!vals[k].is_array() || vals[k].size() != 2) throw SchemaError(kp, "expected [stage, 0|1]");
      col.values.emplace_back(natural(vals[k][0], at(kp, 0)), flag(vals[k][1], at(kp, 1)));
    }
    t.columns.push_back(std::move(col));
  }
  if (auto p = t.problem(); !p.empty()) throw SchemaError(at(path, p.substr(0, p.find(':'))), p.substr(p.find(':') + 2));
  return t;
}

/// A single target object, an array of them, or {"targets": [...]}.
inline std::vector<DiagTarget> targets_from_json(const json& j) {
  const bool wrapped = j.is_object() && j.contains("targets");
  const json& list = wrapped ? j["targets"] : j;
  const std::string base = wrapped ? "targets" : "";
  std::vector<DiagTarget> out;
  if (list.is_object()) {
    out.push_back(target_from_json(list, base));
  } else {
    detail::array(list, base.empty() ? "(root)" : base);
    for (std::size_t i = 0; i < list.size(); ++i) out.push_back(target_from_json(list[i], detail::at(base, i)));
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    if (out[i].e != i) throw SchemaError(detail::at(detail::at(base, i), "e"), "targets must be listed as e = 0, 1, ...");
  return out;
}

inline json to_json(const DiagTarget& t) {
  json cols = json::array();
  for (const auto& c : t.columns) {
    json vals = json::array();
    for (const auto& [s, v] : c.values) vals.push_back({s, v ? 1 : 0});
    json col{{"values", vals}};
    col["x"] = c.x ? json(*c.x) : json("default");
    cols.push_back(col);
  }
  return {{"e", t.e}, {"columns", cols}};
}

// ---------------------------------------------------------------------------
// Traces and reports

/// Codes as decimal naturals, or as formula strings in pretty mode.
class CodeWriter {
 public:
  explicit CodeWriter(bool pretty_codes) : pretty_(pretty_codes) {}
  json operator()(Code x) const { return pretty_ ? json(pretty(x)) : json(x); }
  json set(const CodeSet& xs) const {
    json out = json::array();
    for (Code x : xs) out.push_back((*this)(x));
    return out;
  }
  json stacks(const Stacks& st) const {
    json out = json::array();
    for (const auto& s : st) {
      json col = json::array();
      for (Code x : s) col.push_back((*this)(x));
      out.push_back(col);
    }
    return out;
  }

 private:
  bool pretty_;
};

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::In:
      return "in";
    case Membership::Out:
      return "out";
    case Membership::Unknown:
      return "unknown";
  }
  return "?";
}

inline json to_json(const LimitReport& r, const CodeWriter& w) {
  json candidate = json::array();
  for (const auto& [x, m] : r.candidate) candidate.push_back({w(x), to_string(m)});
  json stabilized = json::array();
  for (bool b : r.stabilized) stabilized.push_back(b);
  return {{"window", r.window},
          {"half", r.half},
          {"stable_prefix", r.stable_prefix},
          {"stabilized", stabilized},
          {"slot_last_change", r.slot_last_change},
          {"L_stable", w.set(r.L_stable)},
          {"candidate", candidate},
          {"loop_warnings", r.loop_warnings}};
}

inline json to_json(const Trace& t, const CodeWriter& w) {
  json stages = json::array();
  for (const auto& rec : t.stages) {
    json row{{"s", rec.s}, {"clause", to_string(rec.clause)}, {"m", rec.m}, {"A", w.set(rec.A)}};
    row["z"] = rec.z ? json(*rec.z) : json(nullptr);
    if (!rec.stacks.empty()) row["stacks"] = w.stacks(rec.stacks);
    stages.push_back(row);
  }
  return {{"kind", to_string(t.kind)},
          {"budget", t.budget},
          {"stages", stages},
          {"final", {{"m", t.final_state.m}, {"stacks", w.stacks(t.final_state.stacks)}}}};
}

inline json to_json(const WindowComparison& c, const CodeWriter& w) {
  json mm = json::array();
  for (Code x : c.mismatches) mm.push_back(w(x));
  return {{"compared", c.compared}, {"unknown", c.unknown}, {"mismatches", mm}, {"equal", c.equal()}};
}

inline json to_json(const CompletionReport& r, const CodeWriter& w) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    const char* v = e.verdict == CompletionEntry::Verdict::ExactlyOne ? "exactly-one"
                    : e.verdict == CompletionEntry::Verdict::Neither  ? "neither"
                    : e.verdict == CompletionEntry::Verdict::Both     ? "both"
                                                                      : "unknown";
    entries.push_back({{"atom", w(e.sentence)}, {"positive", to_string(e.positive)}, {"negative", to_string(e.negative)}, {"verdict", v}});
  }
  return {{"passed", r.passed()}, {"entries", entries}};
}

inline json to_json(const ValidationReport& v) {
  return {{"status", to_string(v.status)}, {"reason", v.reason}, {"witness", v.witness}};
}

inline json to_json(const DiagReport& r, const CodeWriter& w) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json row{{"e", e.e}, {"A_p", to_string(e.in_A)}, {"V", e.in_V ? 1 : 0}, {"constructed", e.constructed ? 1 : 0}};
    row["x"] = e.x ? w(*e.x) : json(nullptr);
    row["diagonalized"] = e.diagonalized ? json(*e.diagonalized) : json(nullptr);
    entries.push_back(row);
  }
  return {{"status", to_string(r.status)},
          {"reason", r.reason},
          {"passed", r.passed()},
          {"entries", entries},
          {"completion", to_json(r.completion, w)},
          {"validation", to_json(r.validation)},
          {"rho_mismatch", r.rho_mismatch},
          {"axioms", r.axioms},
          {"last_action", r.last_action}};
}

}  // namespace dialectic::io
