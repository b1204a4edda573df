#include <catch_amalgamated.hpp>

#include <random>

#include "dialectic/logic.hpp"

using namespace dialectic;

namespace {

// Brute-force oracle: recursive evaluation under every assignment of the
// atoms that occur, written without the circuit or the solvers.
bool eval(Code n, const std::map<Code, bool>& v) {
  const Formula f = decode(n);
  switch (f.shape) {
    case Connective::Atom:
      return v.at(f.left);
    case Connective::Not:
      return !eval(f.left, v);
    case Connective::Imp:
      return !eval(f.left, v) || eval(f.right, v);
    case Connective::And:
      return eval(f.left, v) && eval(f.right, v);
    case Connective::Or:
      return eval(f.left, v) || eval(f.right, v);
  }
  return false;
}

bool brute_entails(const std::vector<Code>& premises, Code x) {
  std::set<Code> atoms;
  for (Code p : premises) collect_atoms(p, atoms);
  collect_atoms(x, atoms);
  const std::vector<Code> idx(atoms.begin(), atoms.end());
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << idx.size()); ++bits) {
    std::map<Code, bool> v;
    for (std::size_t i = 0; i < idx.size(); ++i) v[idx[i]] = (bits >> i) & 1;
    bool all = true;
    for (Code p : premises) all = all && eval(p, v);
    if (all && !eval(x, v)) return false;
  }
  return true;
}

const EntailmentOptions kTT{};
const EntailmentOptions kSat{8, 24, EntailmentMethod::Sat};

}  // namespace

TEST_CASE("entailment examples") {
  for (const auto& opts : {kTT, kSat}) {
    CHECK(entails(CodeSet{0}, disj(0, 5), opts));
    CHECK(entails(CodeSet{}, disj(0, neg(0)), opts));
    CHECK(entails(CodeSet{0, neg(0)}, 13, opts));
    CHECK(entails(CodeSet{13}, 987654, opts));
    CHECK_FALSE(entails(CodeSet{}, 0, opts));
    CHECK_FALSE(entails(CodeSet{disj(0, 5)}, 0, opts));
  }
}

TEST_CASE("entailment agrees with brute force on six atoms") {
  std::mt19937_64 rng(3);
  int positives = 0;
  for (int i = 0; i < 3000; ++i) {
    std::vector<Code> premises;
    const int n = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int k = 0; k < n; ++k) premises.push_back(random_sentence(rng, 6, 3));
    const Code x = random_sentence(rng, 6, 3);
    const bool expected = brute_entails(premises, x);
    positives += expected;
    REQUIRE(entails(premises, x, std::vector<Code>{}, kTT) == expected);
    REQUIRE(entails(premises, x, std::vector<Code>{}, kSat) == expected);
  }
  CHECK(positives > 100);
}

TEST_CASE("atom cap raises a resource error") {
  // a chain of implications ties 31 atoms into one component
  CodeSet chain;
  for (Code i = 0; i < 30; ++i) chain.insert(imp(atom(i), atom(i + 1)));
  chain.insert(atom(0));
  const Code big = atom(30);
  CHECK_THROWS_AS(entails(chain, big, EntailmentOptions{0, 24, EntailmentMethod::TruthTable}), ResourceError);
  CHECK(entails(chain, big, EntailmentOptions{0, 24, EntailmentMethod::Sat}));
}

TEST_CASE("independent components do not count toward the cap") {
  CodeSet premises;
  for (Code i = 0; i < 40; ++i) premises.insert(atom(i));
  CHECK(entails(premises, conj(atom(3), atom(39)), EntailmentOptions{0, 24, EntailmentMethod::TruthTable}));
}

TEST_CASE("stage application") {
  const EntailmentOperator op{AxiomStream{}};
  const CodeSet got = op.stage_apply(2000, CodeSet{0});
  for (Code k = 0; k < 20; ++k)
    if (disj(0, atom(k)) < 2000) CHECK(got.count(disj(0, atom(k))));
  CHECK(op.stage_apply(1, CodeSet{}).empty());
  const CodeSet all = op.stage_apply(60, CodeSet{13});
  CHECK(all.size() == 60);
  CHECK_FALSE(op.derives(13, CodeSet{13}, 13));
}

TEST_CASE("stage application is monotone in stage and premises") {
  std::mt19937_64 rng(5);
  const EntailmentOperator op{AxiomStream{}, kSat};
  for (int i = 0; i < 20; ++i) {
    CodeSet X{random_sentence(rng, 4, 1), random_sentence(rng, 4, 1)};
    CodeSet Y = X;
    Y.insert(random_sentence(rng, 4, 1));
    const CodeSet a = op.stage_apply(150, X), b = op.stage_apply(300, X), c = op.stage_apply(300, Y);
    CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    CHECK(std::includes(c.begin(), c.end(), b.begin(), b.end()));
  }
}

TEST_CASE("premise cap only limits stages, not the single-subset answer") {
  const EntailmentOperator capped{AxiomStream{}, EntailmentOptions{1, 24, EntailmentMethod::TruthTable}};
  const Code both = conj(atom(0), atom(1));
  CHECK_FALSE(capped.derives(1000, CodeSet{0, 5}, both));
  CHECK(capped.derives(1000, CodeSet{0, 5}, disj(0, 5)));
  const EntailmentOperator open{AxiomStream{}, EntailmentOptions{0, 24, EntailmentMethod::TruthTable}};
  CHECK(open.derives(1000, CodeSet{0, 5}, both));
}

TEST_CASE("connective laws hold on sampled instances") {
  const EntailmentOperator op{AxiomStream{}, kSat};
  auto H = [&](const CodeSet& X, Code x) { return op.limit_derives(X, x); };
  std::mt19937_64 rng(17);
  const auto report = connective_laws_check(H, rng, 200);
  CHECK(report.samples == 200);
  CHECK(report.ok());
  CHECK(H(CodeSet{0}, neg(neg(0))));
  CHECK(H(CodeSet{}, imp(0, 0)));
}

TEST_CASE("connective laws catch a broken operator") {
  // drops excluded middle and every other consequence of the empty set
  const EntailmentOperator op{AxiomStream{}, kTT};
  auto broken = [&](const CodeSet& X, Code x) { return !X.empty() && op.limit_derives(X, x); };
  std::mt19937_64 rng(2);
  const auto report = connective_laws_check(broken, rng, 20);
  CHECK_FALSE(report.ok());
}

TEST_CASE("theory T_A") {
  CHECK(theory_TA({}).empty());
  const auto stream = theory_TA({{0, {}}, {3, {0, 2}}});
  CHECK(stream.extras_at(2).empty());
  CHECK(stream.extras_at(3) == CodeSet{0, 10});
  std::set<Code> evens;
  for (Code i = 0; i < 10; i += 2) evens.insert(i);
  CHECK(theory_TA({{1, evens}}).all().size() == 5);
  CHECK_THROWS_AS(theory_TA({{1, {1, 2}}, {2, {1}}}), std::invalid_argument);

  const EntailmentOperator op{theory_TA({{0, {1}}})};
  CHECK(op.limit_derives({}, atom(1)));
  CHECK_FALSE(op.limit_derives({}, neg(atom(1))));
  CHECK_FALSE(op.limit_derives({}, atom(0)));
}

TEST_CASE("completion check verdicts") {
  std::map<Code, Membership> m{{atom(0), Membership::In}, {neg(atom(0)), Membership::In},
                               {atom(1), Membership::In}, {neg(atom(1)), Membership::Out}};
  auto report = completion_check(m, 2);
  CHECK_FALSE(report.passed());
  CHECK(report.first_failure() == Code{0});
  CHECK(report.entries[0].verdict == CompletionEntry::Verdict::Both);
  CHECK(report.entries[1].verdict == CompletionEntry::Verdict::ExactlyOne);
  m[neg(atom(0))] = Membership::Out;
  CHECK(completion_check(m, 2).passed());
  CHECK(completion_check(m, 3).entries[2].verdict == CompletionEntry::Verdict::Unknown);
}

TEST_CASE("least entailing prefix agrees with a linear scan") {
  std::mt19937_64 rng(23);
  AxiomStream stream;
  stream.add(3, imp(atom(0), atom(1)));
  stream.add(9, neg(atom(2)));
  const EntailmentOperator op{stream, kSat};
  for (int i = 0; i < 300; ++i) {
    std::vector<Code> premises;
    for (int k = static_cast<int>(rng() % 8); k > 0; --k) premises.push_back(random_sentence(rng, 4, 2));
    const Code x = rng() % 3 ? random_sentence(rng, 4, 1) : kContradiction;
    const std::uint64_t s = 5000 + rng() % 20 - 10;
    std::vector<Code> kept;
    for (Code p : premises)
      if (p < s) kept.push_back(p);
    std::optional<std::size_t> expected;
    for (std::size_t n = 0; n <= kept.size() && !expected; ++n)
      if (op.derives(s, CodeSet(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(n)), x)) expected = n;
    CHECK(op.least_entailing_prefix(s, kept, x) == expected);
  }
}
