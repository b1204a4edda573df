// Command-line front end: run, transform, diagonalize, check.
//
// Exit codes: 0 ok, 1 validation / schema / verification failure,
// 2 unknown within budget or budget exceeded.

#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "dialectic/io.hpp"

using namespace dialectic;
using dialectic::io::json;

namespace {

enum Exit { kOk = 0, kFail = 1, kUnknown = 2 };

struct Common {
  std::string spec_path;
  std::string approx_path;
  bool goodify_table = false;
  std::uint64_t budget = 100;
  std::size_t window = 10;
  std::string format = "tsv";
  bool pretty_codes = false;
  std::size_t loop_depth = 32;
  std::size_t atom_cap = 24;
  std::string out_path;
};

void add_common(CLI::App* cmd, Common& c, bool with_spec = true) {
  if (with_spec) cmd->add_option("--spec", c.spec_path, "system spec JSON")->required()->check(CLI::ExistingFile);
  cmd->add_option("--approx", c.approx_path, "approximation JSON replacing the spec's table")->check(CLI::ExistingFile);
  cmd->add_flag("--goodify", c.goodify_table, "use the good approximation of a table operator");
  cmd->add_option("--budget", c.budget, "stages to run")->check(CLI::PositiveNumber);
  cmd->add_option("--window", c.window, "slots reported")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "tsv | ascii | json")->check(CLI::IsMember({"tsv", "ascii", "json"}));
  cmd->add_flag("--pretty", c.pretty_codes, "render codes as formulas");
  cmd->add_option("--loop-depth", c.loop_depth, "stack depth reported as a loop");
  cmd->add_option("--atom-cap", c.atom_cap, "truth-table atom cap per component");
}

SystemSpec load_spec(const Common& c) {
  SystemSpec spec = io::read_spec(c.spec_path);
  if (!c.approx_path.empty()) spec.op = io::approximation_from_json(io::read_file(c.approx_path));
  if (c.goodify_table)
    if (const auto* t = spec.op.table()) spec.op = goodify(*t);
  if (const auto* e = spec.op.entailment()) {
    EntailmentOptions o = e->options();
    o.atom_cap = c.atom_cap;
    spec.op = EntailmentOperator(e->stream(), o);
  }
  return spec;
}

RunOptions run_options(const Common& c) {
  RunOptions o;
  o.budget = c.budget;
  o.loop_threshold = c.loop_depth;
  o.tracked_window = std::max<std::size_t>(c.window, 10);
  return o;
}

/// Writes to --out when given, otherwise stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out_path);
  if (!out) throw std::runtime_error("cannot write " + c.out_path);
  out << text;
}

std::string membership_word(Membership m) { return io::to_string(m); }

std::string limit_summary(const LimitReport& rep, bool pretty_codes) {
  std::ostringstream os;
  os << "# window " << rep.window << ", stabilized " << rep.stable_prefix << "/" << rep.window << ", half " << rep.half
     << "\n";
  os << "# L " << render_set(rep.L_stable, pretty_codes) << "\n";
  if (!rep.loop_warnings.empty()) {
    os << "# loop warning at slots";
    for (auto u : rep.loop_warnings) os << " " << u;
    os << "\n";
  }
  return os.str();
}

int cmd_run(const Common& c) {
  const SystemSpec spec = load_spec(c);
  const auto v = validate(spec, c.budget);
  if (v.status == ValidationReport::Status::Invalid) {
    std::cerr << "invalid spec: " << v.reason << "\n";
    return kFail;
  }
  const Trace trace = run(spec, run_options(c));
  const LimitReport rep = limit_report(trace, c.window);
  std::ostringstream os;
  if (c.format == "json") {
    const io::CodeWriter w(c.pretty_codes);
    json out{{"validation", io::to_json(v)}, {"trace", io::to_json(trace, w)}, {"limit", io::to_json(rep, w)}};
    os << out.dump(2) << "\n";
  } else {
    if (c.format == "tsv")
      write_tsv(os, trace, c.pretty_codes);
    else
      write_ascii(os, trace, c.pretty_codes);
    os << limit_summary(rep, c.pretty_codes);
  }
  emit(c, os.str());
  return rep.all_stabilized() ? kOk : kUnknown;
}

int cmd_transform(const std::string& kind, const Common& c) {
  const SystemSpec src = load_spec(c);
  const RunOptions opts = run_options(c);
  const io::CodeWriter w(c.pretty_codes);
  json report;
  std::optional<SystemSpec> target;
  int code = kOk;

  if (kind == "d2p") {
    target = d_to_p(src, TautologyChain{});
    const auto check = check_d_to_p(src, *target, opts, c.window);
    report = {{"stabilized", check.stabilized}, {"failures", check.failures}, {"window", io::to_json(check.runs.comparison, w)}};
    code = !check.failures.empty() || !check.runs.comparison.mismatches.empty() ? kFail : check.passed() ? kOk : kUnknown;
  } else if (kind == "p2q") {
    const Trace trace = run(src, opts);
    const auto rep = limit_report(trace, c.window);
    const auto res = p_to_q(src, trace, rep);
    if (!res.q) {
      std::cerr << "refused: " << res.refusal << "\n";
      return kUnknown;
    }
    target = res.q;
    const auto pair = run_pair(src, *target, opts, c.window);
    report = {{"u0", res.u0}, {"z0", w(res.z0)}, {"z1", w(res.z1)}, {"window", io::to_json(pair.comparison, w)}};
    code = !pair.comparison.mismatches.empty() ? kFail : pair.comparison.equal() ? kOk : kUnknown;
  } else if (kind == "q2d") {
    RunOptions o = opts;
    o.record_stacks = true;
    const Trace trace = run(src, o);
    const auto res = q_to_d(src, trace, limit_report(trace, c.window));
    if (!res.d) {
      std::cerr << "no witness: " << res.reason << "\n";
      return kUnknown;
    }
    target = res.d;
    const auto pair = run_pair(src, *target, opts, c.window);
    report = {{"u", res.u}, {"t0", res.t0}, {"v", res.v}, {"revision_after_t0", res.revision_after_t0},
              {"window", io::to_json(pair.comparison, w)}};
    code = !pair.comparison.mismatches.empty() ? kFail : pair.comparison.equal() ? kOk : kUnknown;
  } else {
    target = d_completion_to_q(src);
    const auto pair = run_pair(src, *target, opts, c.window);
    report = {{"window", io::to_json(pair.comparison, w)}};
    code = !pair.comparison.mismatches.empty() ? kFail : pair.comparison.equal() ? kOk : kUnknown;
  }
  json out{{"spec", io::to_json(*target)}, {"report", report}};
  emit(c, out.dump(2) + "\n");
  return code;
}

int cmd_diagonalize(const std::string& targets_path, std::size_t family_n, std::size_t family_b, const Common& c) {
  std::vector<DiagTarget> targets;
  if (!targets_path.empty())
    targets = io::targets_from_json(io::read_file(targets_path));
  else
    targets = omega_ce_family(family_n, family_b);
  DiagOptions o;
  o.budget = c.budget;
  o.window = std::max<std::size_t>(c.window, 10);
  const DiagReport rep = diagonalize(targets, o);
  const io::CodeWriter w(c.pretty_codes);
  std::ostringstream os;
  if (c.format == "json") {
    json out{{"spec", io::to_json(rep.system)}, {"report", io::to_json(rep, w)}};
    os << out.dump(2) << "\n";
  } else {
    os << "e\tx_e\tA_p(x_e)\tV_e(x_e)\tdiagonalized\n";
    for (const auto& e : rep.entries) {
      os << e.e << "\t" << (e.x ? render_code(*e.x, c.pretty_codes) : "-") << "\t" << membership_word(e.in_A) << "\t"
         << (e.in_V ? 1 : 0) << "\t" << (e.diagonalized ? (*e.diagonalized ? "yes" : "no") : "unknown") << "\n";
    }
    os << "# status " << to_string(rep.status);
    if (!rep.reason.empty()) os << " (" << rep.reason << ")";
    os << "\n# completion " << (rep.completion.passed() ? "pass" : "fail") << ", validation "
       << to_string(rep.validation.status) << ", axioms " << rep.axioms << ", last action at stage " << rep.last_action
       << "\n";
  }
  emit(c, os.str());
  if (rep.status == DiagReport::Status::BudgetExceeded) return kUnknown;
  if (rep.passed()) return kOk;
  const bool unknown = std::any_of(rep.entries.begin(), rep.entries.end(), [](const DiagEntry& e) { return !e.diagonalized; });
  return unknown && rep.rho_mismatch.empty() && rep.validation.status != ValidationReport::Status::Invalid ? kUnknown : kFail;
}

int cmd_check(const std::string& kind, const Common& c, std::size_t samples, std::size_t atoms, std::uint64_t seed) {
  std::ostringstream os;
  int code = kOk;
  if (kind == "laws") {
    EntailmentOperator op({}, {0, c.atom_cap, EntailmentMethod::TruthTable});
    if (!c.spec_path.empty()) {
      const SystemSpec spec = load_spec(c);
      if (const auto* e = spec.op.entailment()) op = *e;
      else throw std::invalid_argument("laws need an entailment operator");
    }
    std::mt19937_64 rng(seed);
    auto H = [&](const CodeSet& X, Code x) { return op.limit_derives(X, x); };
    const auto rep = connective_laws_check(H, rng, samples, atoms == 0 ? 6 : atoms);
    os << "samples\t" << rep.samples << "\nviolations\t" << rep.violations.size() << "\n";
    for (const auto& v : rep.violations) os << "law " << v.law << "\t" << v.detail << "\n";
    code = rep.ok() ? kOk : kFail;
  } else {
    if (c.spec_path.empty()) throw std::invalid_argument("--spec is required for " + kind);
    const SystemSpec spec = load_spec(c);
    const Trace trace = run(spec, run_options(c));
    const LimitReport rep = limit_report(trace, c.window);
    if (kind == "completion") {
      const auto comp = completion_check(rep.candidate, atoms == 0 ? 10 : atoms);
      os << "atom\tpositive\tnegative\tverdict\n";
      for (const auto& e : comp.entries) {
        const char* v = e.verdict == CompletionEntry::Verdict::ExactlyOne ? "exactly-one"
                        : e.verdict == CompletionEntry::Verdict::Neither  ? "neither"
                        : e.verdict == CompletionEntry::Verdict::Both     ? "both"
                                                                          : "unknown";
        os << render_code(e.sentence, c.pretty_codes) << "\t" << membership_word(e.positive) << "\t"
           << membership_word(e.negative) << "\t" << v << "\n";
      }
      const bool unknown = std::any_of(comp.entries.begin(), comp.entries.end(), [](const CompletionEntry& e) {
        return e.verdict == CompletionEntry::Verdict::Unknown;
      });
      code = comp.passed() ? kOk : unknown ? kUnknown : kFail;
    } else {
      const auto entries = characterization_check(spec, trace, rep);
      os << "slot\tproposal\tcandidate\tpredicted\tverdict\n";
      bool fails = false, unknown = false;
      for (const auto& e : entries) {
        os << e.slot << "\t" << render_code(e.proposal, c.pretty_codes) << "\t" << membership_word(e.candidate) << "\t"
           << (e.predicted ? (*e.predicted ? "in" : "out") : "-") << "\t" << to_string(e.verdict) << "\n";
        fails |= e.verdict == CharacterizationEntry::Verdict::Fails;
        unknown |= e.verdict == CharacterizationEntry::Verdict::Unknown;
      }
      code = fails ? kFail : unknown ? kUnknown : kOk;
    }
  }
  emit(c, os.str());
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staged dialectical, q- and p-dialectical systems"};
  app.require_subcommand(1);

  Common run_c, tr_c, diag_c, check_c;
  auto* run_cmd = app.add_subcommand("run", "run the procedure of a system");
  add_common(run_cmd, run_c);
  run_cmd->add_option("--out", run_c.out_path, "write output here");

  std::string tr_kind;
  auto* tr_cmd = app.add_subcommand("transform", "build an equivalent system of another class");
  tr_cmd->add_option("kind", tr_kind, "d2p | p2q | q2d | dc2q")->required()->check(CLI::IsMember({"d2p", "p2q", "q2d", "dc2q"}));
  add_common(tr_cmd, tr_c);
  tr_c.budget = 300;
  tr_cmd->add_option("--out", tr_c.out_path, "write the emitted spec and report here");

  std::string targets_path;
  std::size_t family_n = 3, family_b = 2;
  auto* diag_cmd = app.add_subcommand("diagonalize", "build a p-system with connectives avoiding the targets");
  diag_cmd->add_option("--targets", targets_path, "target JSON")->check(CLI::ExistingFile);
  diag_cmd->add_option("--family", family_n, "without --targets: number of generated targets");
  diag_cmd->add_option("--changes", family_b, "without --targets: change bound of generated targets");
  add_common(diag_cmd, diag_c, false);
  diag_c.budget = 2000;
  diag_cmd->add_option("--out", diag_c.out_path, "write output here");

  std::string check_kind;
  std::size_t samples = 500, atoms = 0;
  std::uint64_t seed = 1;
  auto* check_cmd = app.add_subcommand("check", "verify connective laws, completions or the characterization");
  check_cmd->add_option("kind", check_kind, "laws | completion | characterization")
      ->required()
      ->check(CLI::IsMember({"laws", "completion", "characterization"}));
  check_cmd->add_option("--spec", check_c.spec_path, "system spec JSON")->check(CLI::ExistingFile);
  add_common(check_cmd, check_c, false);
  check_cmd->add_option("--samples", samples, "law samples");
  check_cmd->add_option("--atoms", atoms, "atoms: law samples draw from this many (default 6), completion checks this many (default 10)");
  check_cmd->add_option("--seed", seed, "sampling seed");
  check_cmd->add_option("--out", check_c.out_path, "write output here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run_c);
    if (*tr_cmd) return cmd_transform(tr_kind, tr_c);
    if (*diag_cmd) return cmd_diagonalize(targets_path, family_n, family_b, diag_c);
    return cmd_check(check_kind, check_c, samples, atoms, seed);
  } catch (const io::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
}
