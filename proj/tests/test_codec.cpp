#include <catch_amalgamated.hpp>

#include <random>

#include "dialectic/codec.hpp"

using namespace dialectic;

namespace {

// Reference pairing by walking diagonals.
std::pair<Code, Code> unpair_by_walk(Code n) {
  Code a = 0, b = 0, k = 0;
  while (k < n) {
    if (a == 0) {
      a = b + 1;
      b = 0;
    } else {
      --a;
      ++b;
    }
    ++k;
  }
  return {a, b};
}

// Recursive subformula walk, independent of collect_atoms.
void atoms_by_recursion(Code n, std::set<Code>& out) {
  const Code tag = n % 5, payload = n / 5;
  if (tag == 0) {
    out.insert(payload);
  } else if (tag == 1) {
    atoms_by_recursion(payload, out);
  } else {
    auto [a, b] = unpair_by_walk(payload);
    atoms_by_recursion(a, out);
    atoms_by_recursion(b, out);
  }
}

}  // namespace

TEST_CASE("pairing closed form and inverse") {
  CHECK(pair(0, 0) == 0);
  CHECK(pair(1, 2) == 8);
  CHECK(unpair(8) == std::pair<Code, Code>{1, 2});
  for (Code n = 0; n < 2000; ++n) {
    CHECK(unpair(n) == unpair_by_walk(n));
    auto [a, b] = unpair(n);
    CHECK(pair(a, b) == n);
  }
}

TEST_CASE("pairing rejects overflow") {
  CHECK_THROWS_AS(pair(Code{1} << 40, Code{1} << 40), std::overflow_error);
  const Code big = std::numeric_limits<Code>::max();
  auto [a, b] = unpair(big);
  CHECK(pair(a, b) == big);
}

TEST_CASE("decode and encode examples") {
  CHECK(decode(15) == Formula{Connective::Atom, 3, 0});
  CHECK(decode(1) == Formula{Connective::Not, 0, 0});
  CHECK(decode(0) == Formula{Connective::Atom, 0, 0});
  CHECK(encode({Connective::And, atom(0), neg(atom(0))}) == 13);
  CHECK(neg(0) == 1);
  CHECK(conj(0, 1) == 13);
  CHECK(neg(neg(0)) == 6);
  CHECK(kContradiction == conj(0, neg(0)));
}

TEST_CASE("round trip on an initial segment") {
  for (Code n = 0; n < 100000; ++n) REQUIRE(encode(decode(n)) == n);
}

TEST_CASE("connectives are injective and pairwise disjoint") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Code> d(0, 5000);
  std::map<Code, std::tuple<int, Code, Code>> seen;
  for (int i = 0; i < 20000; ++i) {
    const Code a = d(rng), b = d(rng);
    const std::tuple<int, Code, Code> keys[] = {{1, a, 0}, {2, a, b}, {3, a, b}, {4, a, b}};
    const Code codes[] = {neg(a), imp(a, b), conj(a, b), disj(a, b)};
    for (int k = 0; k < 4; ++k) {
      auto [it, fresh] = seen.emplace(codes[k], keys[k]);
      if (!fresh) REQUIRE(it->second == keys[k]);
    }
  }
}

TEST_CASE("fresh atom") {
  CHECK(fresh_atom(std::vector<Code>{}) == 0);
  CHECK(fresh_atom(std::vector<Code>{0, 1}) == 5);
  CHECK(fresh_atom(std::vector<Code>{13}) == 5);
  std::set<Code> oracle;
  atoms_by_recursion(13, oracle);
  CHECK(oracle == std::set<Code>{0});

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Code> d(0, 200000);
  for (int i = 0; i < 300; ++i) {
    std::vector<Code> used;
    for (int k = 0; k < 4; ++k) used.push_back(d(rng));
    const Code f = fresh_atom(used);
    std::set<Code> all;
    for (Code u : used) atoms_by_recursion(u, all);
    REQUIRE(decode(f).shape == Connective::Atom);
    CHECK_FALSE(all.count(decode(f).left));
    for (Code i2 = 0; i2 < decode(f).left; ++i2) CHECK(all.count(i2));
  }
}

TEST_CASE("pretty printer and parser agree") {
  CHECK(pretty(13) == "(p0 & !p0)");
  CHECK(pretty(15) == "p3");
  CHECK(parse_pretty("(p0 & !p0)") == 13);
  CHECK(parse_pretty(" ( p1 -> p2 ) ") == imp(atom(1), atom(2)));
  for (Code n = 0; n < 5000; ++n) REQUIRE(parse_pretty(pretty(n)) == n);
  CHECK_THROWS_AS(parse_pretty("(p0 &"), std::invalid_argument);
  CHECK_THROWS_AS(parse_pretty("q1"), std::invalid_argument);
}
