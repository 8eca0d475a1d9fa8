#pragma once

#include <array>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "csp/errors.hpp"

namespace csp {

enum class Quantifier { Exists, Forall };

// Literal: +i is x_i, -i is its negation (1-based).
using Literal = int;
using Clause = std::array<Literal, 3>;

struct QFormula {
  int n = 0;
  std::vector<Quantifier> prefix;  // prefix[i] quantifies x_{i+1}
  std::vector<Clause> clauses;

  int m() const { return static_cast<int>(clauses.size()); }
};

inline bool operator==(const QFormula& a, const QFormula& b) {
  return a.n == b.n && a.prefix == b.prefix && a.clauses == b.clauses;
}

inline Quantifier expected_quantifier(int var) { return var % 2 == 1 ? Quantifier::Exists : Quantifier::Forall; }

// Format:
//   c comment
//   p q3cnf <n> <m>
//   q e a e a ...        (n tokens, alternating, starting with e)
//   <l1> <l2> <l3> 0     (m clause lines)
inline QFormula parse_q3sat(const std::string& text) {
  QFormula f;
  bool have_header = false, have_prefix = false;
  int declared_m = 0;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;

  struct Token {
    std::string text;
    int column;
  };
  auto tokenize = [](const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i >= s.size()) break;
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({s.substr(i, j - i), static_cast<int>(i) + 1});
      i = j;
    }
    return out;
  };
  auto to_int = [&](const Token& t) {
    char* end = nullptr;
    long v = std::strtol(t.text.c_str(), &end, 10);
    if (t.text.empty() || *end != '\0') throw ParseError(line_no, t.column, "expected integer, got '" + t.text + "'");
    return static_cast<int>(v);
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokenize(line);
    if (toks.empty() || toks[0].text == "c") continue;
    if (toks[0].text == "p") {
      if (have_header) throw ParseError(line_no, 1, "duplicate header");
      if (toks.size() != 4 || toks[1].text != "q3cnf")
        throw ParseError(line_no, 1, "malformed header, expected 'p q3cnf <n> <m>'");
      f.n = to_int(toks[2]);
      declared_m = to_int(toks[3]);
      if (f.n < 1) throw ParseError(line_no, toks[2].column, "header: n must be positive");
      if (declared_m < 0) throw ParseError(line_no, toks[3].column, "header: m must be non-negative");
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, 1, "malformed header: expected 'p q3cnf <n> <m>' first");
    if (toks[0].text == "q") {
      if (have_prefix) throw ParseError(line_no, 1, "duplicate quantifier line");
      if (static_cast<int>(toks.size()) - 1 != f.n)
        throw ParseError(line_no, 1, "prefix must list " + std::to_string(f.n) + " quantifiers");
      for (std::size_t i = 1; i < toks.size(); ++i) {
        Quantifier q;
        if (toks[i].text == "e") q = Quantifier::Exists;
        else if (toks[i].text == "a") q = Quantifier::Forall;
        else throw ParseError(line_no, toks[i].column, "quantifier must be 'e' or 'a'");
        if (q != expected_quantifier(static_cast<int>(i)))
          throw ParseError(line_no, toks[i].column, "alternation: prefix must alternate e,a starting with e");
        f.prefix.push_back(q);
      }
      have_prefix = true;
      continue;
    }
    if (!have_prefix) throw ParseError(line_no, 1, "clause before quantifier line");
    if (toks.back().text != "0") throw ParseError(line_no, toks.back().column, "clause must end with 0");
    if (toks.size() != 4)
      throw ParseError(line_no, 1, "arity: clause has " + std::to_string(toks.size() - 1) + " literals, expected 3");
    Clause c{};
    for (std::size_t i = 0; i < 3; ++i) {
      int lit = to_int(toks[i]);
      if (lit == 0 || std::abs(lit) > f.n)
        throw ParseError(line_no, toks[i].column, "literal " + toks[i].text + " out of range 1.." + std::to_string(f.n));
      c[i] = lit;
    }
    f.clauses.push_back(c);
  }
  if (!have_header) throw ParseError(line_no + 1, 1, "malformed header: missing 'p q3cnf' line");
  if (!have_prefix) throw ParseError(line_no + 1, 1, "missing quantifier line");
  if (f.m() != declared_m)
    throw ParseError(line_no + 1, 1,
                     "header declares " + std::to_string(declared_m) + " clauses, found " + std::to_string(f.m()));
  return f;
}

inline std::string format_q3sat(const QFormula& f) {
  std::ostringstream out;
  out << "p q3cnf " << f.n << ' ' << f.m() << "\nq";
  for (auto q : f.prefix) out << (q == Quantifier::Exists ? " e" : " a");
  out << '\n';
  for (const auto& c : f.clauses) out << c[0] << ' ' << c[1] << ' ' << c[2] << " 0\n";
  return out.str();
}

inline bool has_complementary_clause(const QFormula& f) {
  for (const auto& c : f.clauses)
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        if (c[a] == -c[b]) return true;
  return false;
}

inline bool is_normalized(const QFormula& f) { return f.n % 2 == 0 && has_complementary_clause(f); }

// Even variable count first, then a clause that always holds a true and a
// false literal. The clauses added for the parity pad already contain a
// complementary pair.
inline QFormula pad_formula(QFormula f) {
  auto add_var = [&] {
    ++f.n;
    f.prefix.push_back(expected_quantifier(f.n));
  };
  if (f.n % 2 == 1) {
    const int a = f.n + 1, b = f.n + 2, c = f.n + 3;
    add_var(), add_var(), add_var();
    f.clauses.push_back({a, -a, b});
    f.clauses.push_back({-b, c, -c});
  }
  if (!has_complementary_clause(f)) {
    const int a = f.n + 1, b = f.n + 2;
    add_var(), add_var();
    f.clauses.push_back({a, -a, b});
    f.clauses.push_back({a, b, -b});
  }
  return f;
}

}  // namespace csp
