#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "pbqr/poly.hpp"

namespace pbqr {

// Text format, one term per line:
//
//   <rational> [: i j k ...]
//
// Indices are 1-based and an empty list is the constant term. `#` starts a
// comment. A comment of the form `# vars: N` widens the variable space to at
// least N so trailing unused variables survive a round trip. Duplicate
// subsets are summed.

namespace detail {

inline std::size_t skip_space(const std::string& s, std::size_t pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  return pos;
}

inline std::size_t token_end(const std::string& s, std::size_t pos) {
  while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != ':') ++pos;
  return pos;
}

}  // namespace detail

inline MultilinearPoly parse_poly(std::istream& in, int min_vars = 0) {
  std::vector<std::pair<Mask, Rational>> terms;
  int n_vars = min_vars;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      std::string comment = line.substr(hash + 1);
      std::istringstream cs(comment);
      std::string key;
      int width = 0;
      if (cs >> key && key == "vars:" && cs >> width) n_vars = std::max(n_vars, width);
      line.erase(hash);
    }
    std::size_t pos = detail::skip_space(line, 0);
    if (pos == line.size()) continue;

    const std::size_t end = detail::token_end(line, pos);
    Rational coeff;
    try {
      coeff = parse_rational(line.substr(pos, end - pos));
    } catch (const std::exception& e) {
      throw ParseError(line_no, int(pos) + 1, e.what());
    }
    pos = detail::skip_space(line, end);
    Mask s = 0;
    if (pos < line.size()) {
      if (line[pos] != ':') throw ParseError(line_no, int(pos) + 1, "expected ':' before index list");
      pos = detail::skip_space(line, pos + 1);
      while (pos < line.size()) {
        const std::size_t e = detail::token_end(line, pos);
        const std::string tok = line.substr(pos, e - pos);
        if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          throw ParseError(line_no, int(pos) + 1, "expected a positive variable index");
        const long idx = std::stol(tok);
        if (idx < 1 || idx > kMaxVars) throw ParseError(line_no, int(pos) + 1, "variable index out of range");
        if (contains(s, int(idx - 1))) throw ParseError(line_no, int(pos) + 1, "repeated index in a term");
        s |= bit(int(idx - 1));
        n_vars = std::max(n_vars, int(idx));
        pos = detail::skip_space(line, e);
      }
    }
    terms.emplace_back(s, std::move(coeff));
  }
  MultilinearPoly p(n_vars);
  for (const auto& [s, c] : terms) p.add_term(s, c);
  return p;
}

inline MultilinearPoly parse_poly(const std::string& text, int min_vars = 0) {
  std::istringstream in(text);
  return parse_poly(in, min_vars);
}

inline MultilinearPoly load_poly(const std::string& path, int min_vars = 0) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_poly(in, min_vars);
}

/// Terms ordered by degree, then by their index lists.
inline std::vector<Mask> canonical_term_order(const MultilinearPoly& f) {
  std::vector<Mask> order;
  for (const auto& [s, c] : f.terms()) order.push_back(s);
  std::sort(order.begin(), order.end(), [](Mask a, Mask b) {
    if (cardinality(a) != cardinality(b)) return cardinality(a) < cardinality(b);
    return to_indices(a) < to_indices(b);
  });
  return order;
}

inline std::string format_poly(const MultilinearPoly& f) {
  std::ostringstream out;
  out << "# vars: " << f.n_vars() << "\n";
  for (Mask s : canonical_term_order(f)) {
    out << to_string(f.coeff(s));
    if (s != 0) {
      out << " :";
      for (int i : to_indices(s)) out << ' ' << i;
    }
    out << "\n";
  }
  return out.str();
}

/// Human-readable one-liner, e.g. `x1*x2*x3 - x1*x2`.
inline std::string pretty_poly(const MultilinearPoly& f, int n_x = -1) {
  if (f.is_zero()) return "0";
  if (n_x < 0) n_x = f.n_vars();
  std::string out;
  bool first = true;
  for (Mask s : canonical_term_order(f)) {
    Rational c = f.coeff(s);
    const bool neg = sgn(c) < 0;
    if (neg) c = -c;
    out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
    first = false;
    const bool unit = c == 1;
    if (!unit || s == 0) out += c.get_den() == 1 ? c.get_num().get_str() : c.get_str();
    bool first_var = unit;
    for (int i : to_indices(s)) {
      if (!first_var) out += "*";
      first_var = false;
      out += i <= n_x ? "x" + std::to_string(i) : "z" + std::to_string(i - n_x);
    }
  }
  return out;
}

}  // namespace pbqr
