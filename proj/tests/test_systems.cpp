#include <catch_amalgamated.hpp>

#include "dialectic/systems.hpp"

using namespace dialectic;

namespace {

SystemSpec entailment_p() {
  SystemSpec spec;
  spec.kind = SystemKind::P;
  spec.op = OperatorHandle(EntailmentOperator(AxiomStream{}, EntailmentOptions{0, 24, EntailmentMethod::Sat}));
  spec.f = ProposingFunction::identity();
  return spec;
}

}  // namespace

TEST_CASE("proposing functions") {
  const auto id = ProposingFunction::identity();
  CHECK(id(17) == 17);
  CHECK(ProposingFunction::atoms()(3) == 15);
  const auto comp = ProposingFunction::prefix_then_complement({5, 0, 9});
  std::vector<Code> got;
  for (Code x = 0; x < 10; ++x) got.push_back(comp(x));
  CHECK(got == std::vector<Code>{5, 0, 9, 1, 2, 3, 4, 6, 7, 8});
  const auto base = std::make_shared<const ProposingFunction>(comp);
  const ProposingFunction shifted({42}, DelegateRule{base, 1});
  CHECK(shifted(0) == 42);
  CHECK(shifted(5) == comp(4));
}

TEST_CASE("revising functions") {
  const auto taut = RevisingFunction::chain(TautologyChain{});
  CHECK(taut(0) == imp(atom(0), atom(0)));
  CHECK(taut(imp(atom(3), atom(3))) == imp(atom(4), atom(4)));
  const auto arith = RevisingFunction::chain(ArithmeticChain{100, 3}, {{7, 8}});
  CHECK(arith(5) == 100);
  CHECK(arith(103) == 106);
  CHECK(arith(7) == 8);
  CHECK(RevisingFunction::negation()(0) == 1);
  CHECK(RevisingFunction(PadRule{})(13) == conj(13, 13));
}

TEST_CASE("validation examples") {
  constexpr std::uint64_t budget = 60;
  auto spec = entailment_p();
  spec.f_minus = RevisingFunction::chain(ArithmeticChain{budget, 1});
  CHECK(validate(spec, budget).status == ValidationReport::Status::Valid);

  auto bad_f = spec;
  bad_f.f = ProposingFunction({7, 7}, IdentityRule{});
  const auto r1 = validate(bad_f, budget);
  CHECK(r1.status == ValidationReport::Status::Invalid);
  CHECK(r1.reason == "injectivity");
  CHECK(r1.witness == std::vector<Code>{0, 1});

  auto bad_g = spec;
  bad_g.f_minus = RevisingFunction(NegRule{}, {{4, 4}});
  const auto r2 = validate(bad_g, budget);
  CHECK(r2.reason == "acyclicity");
  CHECK(r2.witness == std::vector<Code>{4, 4});

  auto q = spec;
  q.kind = SystemKind::Q;
  q.c_minus = budget;
  CHECK(validate(q, budget).reason == "counterexample in range");

  auto d = spec;
  d.kind = SystemKind::D;
  CHECK(validate(d, budget).status == ValidationReport::Status::Invalid);
  d.f_minus.reset();
  CHECK(validate(d, budget).valid());
}

TEST_CASE("validation reports an unwitnessed H(empty) as unknown") {
  SystemSpec spec;
  spec.kind = SystemKind::D;
  Approximation a;
  a.add(0, Axiom(3, {1}));
  spec.op = OperatorHandle(goodify(a));
  spec.f = ProposingFunction::identity();
  CHECK(validate(spec, 20).status == ValidationReport::Status::Unknown);
}

TEST_CASE("consistency examples") {
  auto spec = entailment_p();
  spec.f_minus = RevisingFunction::negation();
  CHECK(consistency(spec, 50).status == ConsistencyReport::Status::Consistent);

  Approximation a;
  a.add(14, Axiom(13, {}));
  spec.op = OperatorHandle(goodify(a));
  const auto r = consistency(spec, 40);
  CHECK(r.status == ConsistencyReport::Status::InconsistentAt);
  CHECK(r.stage == 14);

  Approximation quiet;
  quiet.add(10, Axiom(4, {}));
  spec.op = OperatorHandle(goodify(quiet));
  CHECK(consistency(spec, 5).status == ConsistencyReport::Status::UnknownWithinBudget);
  CHECK(consistency(spec, 20).status == ConsistencyReport::Status::Consistent);

  SystemSpec q = entailment_p();
  q.kind = SystemKind::Q;
  q.op = OperatorHandle(EntailmentOperator(theory_TA({{3, {0}}}), EntailmentOptions{0, 24, EntailmentMethod::Sat}));
  q.c_minus = atom(0);
  const auto rq = consistency(q, 30);
  CHECK(rq.status == ConsistencyReport::Status::InconsistentAt);
  CHECK(rq.stage == 3);
  CHECK(rq.witness == atom(0));
}
