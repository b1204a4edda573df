#pragma once

// Goedel numbering of propositional sentences.
//
// Every natural number is a sentence: n mod 5 selects the connective and
// n div 5 carries the payload (an atom index, a single child, or a Cantor
// pair of two children). The numbering is a bijection between the naturals
// and the formula trees, so sets of codes are sets of sentences.

#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dialectic {

using Code = std::uint64_t;
using CodeSet = std::set<Code>;

enum class Connective : std::uint8_t { Atom = 0, Not = 1, Imp = 2, And = 3, Or = 4 };

struct Formula {
  Connective shape = Connective::Atom;
  Code left = 0;   // atom index for Atom, child for Not, left child otherwise
  Code right = 0;  // right child for Imp/And/Or

  friend bool operator==(const Formula&, const Formula&) = default;
};

namespace detail {

inline Code checked_add(Code a, Code b) {
  if (a > std::numeric_limits<Code>::max() - b) throw std::overflow_error("sentence code overflow");
  return a + b;
}

inline Code checked_mul(Code a, Code b) {
  if (a != 0 && b > std::numeric_limits<Code>::max() / a) throw std::overflow_error("sentence code overflow");
  return a * b;
}

}  // namespace detail

/// Cantor pairing: pair(a, b) = (a+b)(a+b+1)/2 + b. Throws std::overflow_error
/// when the result does not fit in 64 bits.
inline Code pair(Code a, Code b) {
  const Code sum = detail::checked_add(a, b);
  const Code s1 = detail::checked_add(sum, 1);
  // one of sum, sum+1 is even
  const Code tri = (sum % 2 == 0) ? detail::checked_mul(sum / 2, s1) : detail::checked_mul(sum, s1 / 2);
  return detail::checked_add(tri, b);
}

inline std::pair<Code, Code> unpair(Code n) {
  // largest w with w(w+1)/2 <= n
  auto tri = [](Code w) -> unsigned __int128 { return static_cast<unsigned __int128>(w) * (w + 1) / 2; };
  Code lo = 0, hi = 1;
  while (tri(hi) <= n) hi *= 2;
  while (hi - lo > 1) {
    const Code mid = lo + (hi - lo) / 2;
    (tri(mid) <= n ? lo : hi) = mid;
  }
  const Code b = n - static_cast<Code>(tri(lo));
  return {lo - b, b};
}

inline Formula decode(Code n) {
  const auto tag = static_cast<Connective>(n % 5);
  const Code payload = n / 5;
  switch (tag) {
    case Connective::Atom:
    case Connective::Not:
      return {tag, payload, 0};
    default: {
      auto [a, b] = unpair(payload);
      return {tag, a, b};
    }
  }
}

inline Code encode(const Formula& f) {
  Code payload = 0;
  switch (f.shape) {
    case Connective::Atom:
    case Connective::Not:
      payload = f.left;
      break;
    default:
      payload = pair(f.left, f.right);
  }
  return detail::checked_add(detail::checked_mul(payload, 5), static_cast<Code>(f.shape));
}

inline Code atom(Code index) { return encode({Connective::Atom, index, 0}); }
inline Code neg(Code a) { return encode({Connective::Not, a, 0}); }
inline Code imp(Code a, Code b) { return encode({Connective::Imp, a, b}); }
inline Code conj(Code a, Code b) { return encode({Connective::And, a, b}); }
inline Code disj(Code a, Code b) { return encode({Connective::Or, a, b}); }

/// The canonical contradiction p0 & !p0.
inline constexpr Code kContradiction = 13;

/// Atom indices occurring in the sentence with code n.
inline void collect_atoms(Code n, std::set<Code>& out) {
  std::vector<Code> todo{n};
  std::set<Code> seen;
  while (!todo.empty()) {
    const Code cur = todo.back();
    todo.pop_back();
    if (!seen.insert(cur).second) continue;
    const Formula f = decode(cur);
    switch (f.shape) {
      case Connective::Atom:
        out.insert(f.left);
        break;
      case Connective::Not:
        todo.push_back(f.left);
        break;
      default:
        todo.push_back(f.left);
        todo.push_back(f.right);
    }
  }
}

inline std::set<Code> atoms_of(Code n) {
  std::set<Code> out;
  collect_atoms(n, out);
  return out;
}

/// Code of the least atom whose index occurs in none of the given sentences.
template <class Range>
Code fresh_atom(const Range& used) {
  std::set<Code> taken;
  for (Code c : used) collect_atoms(c, taken);
  Code i = 0;
  for (Code t : taken) {
    if (t != i) break;
    ++i;
  }
  return atom(i);
}

/// Renders with atoms p0, p1, ... and connectives ! -> & |, fully parenthesized
/// binary nodes.
inline std::string pretty(Code n) {
  const Formula f = decode(n);
  switch (f.shape) {
    case Connective::Atom:
      return "p" + std::to_string(f.left);
    case Connective::Not:
      return "!" + pretty(f.left);
    case Connective::Imp:
      return "(" + pretty(f.left) + " -> " + pretty(f.right) + ")";
    case Connective::And:
      return "(" + pretty(f.left) + " & " + pretty(f.right) + ")";
    case Connective::Or:
      return "(" + pretty(f.left) + " | " + pretty(f.right) + ")";
  }
  return {};
}

/// Parser for the pretty-printer's own grammar:
///   f := 'p' digits | '!' f | '(' f op f ')'     op := '->' | '&' | '|'
inline Code parse_pretty(const std::string& text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && text[pos] == ' ') ++pos;
  };
  auto fail = [&](const char* what) {
    throw std::invalid_argument(std::string("formula parse error at ") + std::to_string(pos) + ": " + what);
  };
  auto parse = [&](auto& self) -> Code {
    skip();
    if (pos >= text.size()) fail("unexpected end");
    const char ch = text[pos];
    if (ch == 'p') {
      ++pos;
      const std::size_t start = pos;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
      if (start == pos) fail("atom index expected");
      return atom(std::stoull(text.substr(start, pos - start)));
    }
    if (ch == '!') {
      ++pos;
      return neg(self(self));
    }
    if (ch == '(') {
      ++pos;
      const Code a = self(self);
      skip();
      Connective op{};
      if (text.compare(pos, 2, "->") == 0) {
        op = Connective::Imp;
        pos += 2;
      } else if (pos < text.size() && text[pos] == '&') {
        op = Connective::And;
        ++pos;
      } else if (pos < text.size() && text[pos] == '|') {
        op = Connective::Or;
        ++pos;
      } else {
        fail("connective expected");
      }
      const Code b = self(self);
      skip();
      if (pos >= text.size() || text[pos] != ')') fail("')' expected");
      ++pos;
      return encode({op, a, b});
    }
    fail("unexpected character");
    return 0;
  };
  const Code result = parse(parse);
  skip();
  if (pos != text.size()) fail("trailing input");
  return result;
}

}  // namespace dialectic
