#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pbqr/errors.hpp"
#include "pbqr/rational.hpp"
#include "pbqr/subset.hpp"

namespace pbqr {

/// Pseudo-Boolean function in its unique multilinear form
///   f(x) = sum_S a_S prod_{i in S} x_i.
/// Zero coefficients are never stored, so equality is structural.
class MultilinearPoly {
 public:
  using Terms = std::map<Mask, Rational>;

  MultilinearPoly() = default;
  explicit MultilinearPoly(int n_vars) : n_vars_(n_vars) {
    if (n_vars < 0 || n_vars > kMaxVars) throw std::invalid_argument("variable count out of range");
  }

  static MultilinearPoly constant(int n_vars, const Rational& c) {
    MultilinearPoly p(n_vars);
    p.add_term(0, c);
    return p;
  }
  static MultilinearPoly monomial(int n_vars, Mask s, const Rational& c = 1) {
    MultilinearPoly p(n_vars);
    p.add_term(s, c);
    return p;
  }
  static MultilinearPoly variable(int n_vars, int i) { return monomial(n_vars, bit(i)); }

  /// Inverse of values(): Moebius transform of a full truth table.
  static MultilinearPoly from_values(int n_vars, std::span<const Rational> table) {
    if (n_vars > kMaxEnumVars) throw SizeLimitExceeded("from_values: too many variables");
    if (table.size() != (std::size_t{1} << n_vars)) throw std::invalid_argument("from_values: table size");
    std::vector<Rational> a(table.begin(), table.end());
    for (int i = 0; i < n_vars; ++i)
      for (Mask s = 0; s < a.size(); ++s)
        if (contains(s, i)) a[s] -= a[s ^ bit(i)];
    MultilinearPoly p(n_vars);
    for (Mask s = 0; s < a.size(); ++s)
      if (sgn(a[s]) != 0) p.terms_.emplace(s, std::move(a[s]));
    return p;
  }

  int n_vars() const { return n_vars_; }
  Mask full() const { return full_mask(n_vars_); }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rational coeff(Mask s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(Mask s, const Rational& c) {
    if (!is_subset(s, full())) throw std::out_of_range("term references a variable beyond n_vars");
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(s, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  int degree() const {
    int d = 0;
    for (const auto& [s, c] : terms_) d = std::max(d, cardinality(s));
    return d;
  }

  /// Same function over a wider variable space.
  MultilinearPoly widened(int n_vars) const {
    if (n_vars < n_vars_) throw std::invalid_argument("widened: cannot shrink");
    MultilinearPoly p(n_vars);
    p.terms_ = terms_;
    return p;
  }

  /// Truth table indexed by labeling mask (zeta transform).
  std::vector<Rational> values() const {
    if (n_vars_ > kMaxEnumVars) throw SizeLimitExceeded("values: too many variables");
    std::vector<Rational> v(std::size_t{1} << n_vars_);
    for (const auto& [s, c] : terms_) v[s] += c;
    for (int i = 0; i < n_vars_; ++i)
      for (Mask s = 0; s < v.size(); ++s)
        if (contains(s, i)) v[s] += v[s ^ bit(i)];
    return v;
  }

  MultilinearPoly& operator+=(const MultilinearPoly& o) {
    check_width(o);
    for (const auto& [s, c] : o.terms_) add_term(s, c);
    return *this;
  }
  MultilinearPoly& operator-=(const MultilinearPoly& o) {
    check_width(o);
    for (const auto& [s, c] : o.terms_) add_term(s, -c);
    return *this;
  }
  MultilinearPoly& operator*=(const Rational& k) {
    if (sgn(k) == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [s, c] : terms_) c *= k;
    return *this;
  }

  friend MultilinearPoly operator+(MultilinearPoly a, const MultilinearPoly& b) { return a += b; }
  friend MultilinearPoly operator-(MultilinearPoly a, const MultilinearPoly& b) { return a -= b; }
  friend MultilinearPoly operator-(MultilinearPoly a) { return a *= Rational(-1); }
  friend MultilinearPoly operator*(MultilinearPoly a, const Rational& k) { return a *= k; }
  friend MultilinearPoly operator*(const Rational& k, MultilinearPoly a) { return a *= k; }

  // x_i^2 = x_i, so monomials multiply by union.
  friend MultilinearPoly operator*(const MultilinearPoly& a, const MultilinearPoly& b) {
    a.check_width(b);
    MultilinearPoly p(a.n_vars_);
    for (const auto& [s, c] : a.terms_)
      for (const auto& [t, d] : b.terms_) p.add_term(s | t, c * d);
    return p;
  }

  friend bool operator==(const MultilinearPoly& a, const MultilinearPoly& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

 private:
  void check_width(const MultilinearPoly& o) const {
    if (o.n_vars_ != n_vars_) throw std::invalid_argument("polynomial width mismatch");
  }

  int n_vars_ = 0;
  Terms terms_;
};

inline Rational evaluate(const MultilinearPoly& f, Mask x) {
  if (!is_subset(x, f.full())) throw std::invalid_argument("labeling wider than the polynomial");
  Rational v = 0;
  for (const auto& [s, c] : f.terms())
    if (is_subset(s, x)) v += c;
  return v;
}

inline void check_index(const MultilinearPoly& f, int i) {
  if (i < 0 || i >= f.n_vars()) throw std::out_of_range("variable index out of range");
}

/// f|_{x_i=1} - f|_{x_i=0}; the result does not involve x_i.
inline MultilinearPoly derivative(const MultilinearPoly& f, int i) {
  check_index(f, i);
  MultilinearPoly d(f.n_vars());
  for (const auto& [s, c] : f.terms())
    if (contains(s, i)) d.add_term(s ^ bit(i), c);
  return d;
}

/// Four-point second difference at x (bits i and j of x are ignored).
inline Rational second_derivative(const MultilinearPoly& f, int i, int j, Mask x) {
  check_index(f, i);
  check_index(f, j);
  if (i == j) throw std::invalid_argument("second_derivative needs distinct indices");
  const Mask base = x & ~(bit(i) | bit(j));
  return evaluate(f, base | bit(i) | bit(j)) - evaluate(f, base | bit(j)) -
         evaluate(f, base | bit(i)) + evaluate(f, base);
}

/// Substitutes fixed bits; the variable index space is kept.
inline MultilinearPoly restrict(const MultilinearPoly& f, std::span<const std::pair<int, bool>> assignment) {
  Mask zeros = 0;
  Mask ones = 0;
  for (auto [i, v] : assignment) {
    check_index(f, i);
    (v ? ones : zeros) |= bit(i);
  }
  if (zeros & ones) throw std::invalid_argument("restrict: variable assigned twice");
  MultilinearPoly r(f.n_vars());
  for (const auto& [s, c] : f.terms())
    if ((s & zeros) == 0) r.add_term(s & ~ones, c);
  return r;
}

inline MultilinearPoly restrict(const MultilinearPoly& f, std::initializer_list<std::pair<int, bool>> assignment) {
  return restrict(f, std::span<const std::pair<int, bool>>(assignment.begin(), assignment.size()));
}

/// Delta_{i,j}(x) <= 0 for all pairs and all settings of the other variables.
/// Only terms containing both i and j contribute to Delta_{i,j}, so each pair
/// is checked over the subsets of the variables those terms mention.
inline bool is_submodular(const MultilinearPoly& f) {
  if (f.degree() <= 1) return true;
  if (f.n_vars() > kMaxEnumVars) throw SizeLimitExceeded("is_submodular: more than 20 variables");
  const int n = f.n_vars();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Mask ij = bit(i) | bit(j);
      std::vector<std::pair<Mask, const Rational*>> mixed;
      Mask support = 0;
      for (const auto& [s, c] : f.terms()) {
        if ((s & ij) == ij) {
          mixed.emplace_back(s & ~ij, &c);
          support |= s & ~ij;
        }
      }
      if (mixed.empty()) continue;
      // Enumerate subsets of support.
      Mask x = 0;
      while (true) {
        Rational d = 0;
        for (const auto& [rest, c] : mixed)
          if (is_subset(rest, x)) d += *c;
        if (sgn(d) > 0) return false;
        if (x == support) break;
        x = (x - support) & support;
      }
    }
  }
  return true;
}

/// Degree <= 2 polynomial over an original block x_1..x_k followed by an
/// auxiliary block z_1..z_m (indices k..k+m-1).
class QuadraticPoly {
 public:
  QuadraticPoly() = default;
  QuadraticPoly(MultilinearPoly poly, int n_x) : poly_(std::move(poly)), n_x_(n_x) {
    if (poly_.degree() > 2) throw std::invalid_argument("QuadraticPoly: degree exceeds 2");
    if (n_x < 0 || n_x > poly_.n_vars()) throw std::invalid_argument("QuadraticPoly: bad original block size");
  }

  const MultilinearPoly& poly() const { return poly_; }
  int n_x() const { return n_x_; }
  int n_z() const { return poly_.n_vars() - n_x_; }
  int n_nodes() const { return poly_.n_vars(); }

  Rational constant() const { return poly_.coeff(0); }
  Rational linear(int i) const { return poly_.coeff(bit(i)); }
  Rational bilinear(int i, int j) const { return poly_.coeff(bit(i) | bit(j)); }

  bool is_submodular() const {
    for (const auto& [s, c] : poly_.terms())
      if (cardinality(s) == 2 && sgn(c) > 0) return false;
    return true;
  }

  bool has_aux_interactions() const {
    const Mask zmask = poly_.full() & ~full_mask(n_x_);
    for (const auto& [s, c] : poly_.terms())
      if (cardinality(s & zmask) == 2) return true;
    return false;
  }

  /// AVs that occur in at least one term.
  int active_avs() const {
    Mask used = 0;
    for (const auto& [s, c] : poly_.terms()) used |= s >> n_x_;
    return cardinality(used);
  }

  Rational evaluate(Mask x, Mask z) const { return pbqr::evaluate(poly_, x | (z << n_x_)); }

  friend bool operator==(const QuadraticPoly& a, const QuadraticPoly& b) {
    return a.n_x_ == b.n_x_ && a.poly_ == b.poly_;
  }

 private:
  MultilinearPoly poly_;
  int n_x_ = 0;
};

/// Cut-cost form of a submodular quadratic:
///   c_empty + sum_i src_cap[i] (1 - x_i) + sum_i sink_cap[i] x_i
///           + sum_{i,j} pair_cap[i][j] x_i (1 - x_j)
/// Label 1 places a node on the source side, so src_cap is the arc s->i
/// (cut when x_i = 0), sink_cap is i->t (cut when x_i = 1), and pair_cap[i][j]
/// is i->j (cut when x_i = 1, x_j = 0).
struct CapacityForm {
  int n_nodes = 0;
  int n_x = 0;
  Rational c_empty;
  std::vector<Rational> src_cap;
  std::vector<Rational> sink_cap;
  std::vector<std::vector<Rational>> pair_cap;

  static CapacityForm zero(int n_nodes, int n_x) {
    CapacityForm c;
    c.n_nodes = n_nodes;
    c.n_x = n_x;
    c.src_cap.assign(n_nodes, Rational(0));
    c.sink_cap.assign(n_nodes, Rational(0));
    c.pair_cap.assign(n_nodes, std::vector<Rational>(n_nodes, Rational(0)));
    return c;
  }

  void validate() const {
    if (src_cap.size() != std::size_t(n_nodes) || sink_cap.size() != std::size_t(n_nodes) ||
        pair_cap.size() != std::size_t(n_nodes))
      throw std::invalid_argument("CapacityForm: inconsistent sizes");
    for (int i = 0; i < n_nodes; ++i) {
      if (sgn(src_cap[i]) < 0 || sgn(sink_cap[i]) < 0)
        throw std::invalid_argument("CapacityForm: negative terminal capacity");
      if (pair_cap[i].size() != std::size_t(n_nodes)) throw std::invalid_argument("CapacityForm: ragged pair_cap");
      for (int j = 0; j < n_nodes; ++j)
        if (sgn(pair_cap[i][j]) < 0) throw std::invalid_argument("CapacityForm: negative pair capacity");
      if (sgn(pair_cap[i][i]) != 0) throw std::invalid_argument("CapacityForm: self loop");
    }
  }

  Rational evaluate(Mask labeling) const {
    Rational v = c_empty;
    for (int i = 0; i < n_nodes; ++i) {
      const bool xi = contains(labeling, i);
      v += xi ? sink_cap[i] : src_cap[i];
      if (!xi) continue;
      for (int j = 0; j < n_nodes; ++j)
        if (!contains(labeling, j)) v += pair_cap[i][j];
    }
    return v;
  }
};

/// Each a_ij x_i x_j (i < j, a_ij <= 0) becomes -a_ij x_i (1 - x_j) + a_ij x_i;
/// the collected linear coefficient b_i then goes to sink_cap (b_i > 0) or to
/// src_cap with b_i moved into c_empty (b_i < 0).
inline CapacityForm to_capacity_form(const QuadraticPoly& h) {
  const int n = h.n_nodes();
  CapacityForm cf = CapacityForm::zero(n, h.n_x());
  std::vector<Rational> lin(n, Rational(0));
  for (const auto& [s, c] : h.poly().terms()) {
    switch (cardinality(s)) {
      case 0:
        cf.c_empty += c;
        break;
      case 1:
        lin[std::countr_zero(s)] += c;
        break;
      default: {
        if (sgn(c) > 0)
          throw NotSubmodularQuadratic("positive bilinear coefficient on " + format_set(s));
        const int i = std::countr_zero(s);
        const int j = std::countr_zero(s & (s - 1));
        cf.pair_cap[i][j] -= c;
        lin[i] += c;
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (sgn(lin[i]) > 0) {
      cf.sink_cap[i] = lin[i];
    } else if (sgn(lin[i]) < 0) {
      cf.src_cap[i] = -lin[i];
      cf.c_empty += lin[i];
    }
  }
  return cf;
}

inline QuadraticPoly from_capacity_form(const CapacityForm& cf) {
  cf.validate();
  MultilinearPoly p(cf.n_nodes);
  p.add_term(0, cf.c_empty);
  for (int i = 0; i < cf.n_nodes; ++i) {
    p.add_term(0, cf.src_cap[i]);
    p.add_term(bit(i), cf.sink_cap[i] - cf.src_cap[i]);
    for (int j = 0; j < cf.n_nodes; ++j) {
      const Rational& c = cf.pair_cap[i][j];
      if (sgn(c) == 0) continue;
      p.add_term(bit(i), c);
      p.add_term(bit(i) | bit(j), -c);
    }
  }
  return QuadraticPoly(std::move(p), cf.n_x);
}

}  // namespace pbqr
