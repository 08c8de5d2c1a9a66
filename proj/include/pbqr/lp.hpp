#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pbqr/errors.hpp"
#include "pbqr/rational.hpp"

namespace pbqr {

/// Sparse linear form sum_v coeff_v * var_v.
class LinearExpr {
 public:
  LinearExpr() = default;
  LinearExpr(std::initializer_list<std::pair<int, Rational>> terms) {
    for (const auto& [v, c] : terms) add(v, c);
  }

  LinearExpr& add(int var, const Rational& c) {
    if (sgn(c) == 0) return *this;
    auto [it, inserted] = terms_.try_emplace(var, c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
    return *this;
  }
  LinearExpr& add(const LinearExpr& o, const Rational& scale = 1) {
    for (const auto& [v, c] : o.terms_) add(v, c * scale);
    return *this;
  }

  const std::map<int, Rational>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Rational evaluate(const std::vector<Rational>& values) const {
    Rational s = 0;
    for (const auto& [v, c] : terms_) s += c * values.at(v);
    return s;
  }

 private:
  std::map<int, Rational> terms_;
};

enum class Relation { LessEq, Equal, GreaterEq };

inline const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::LessEq:
      return "<=";
    case Relation::Equal:
      return "=";
    default:
      return ">=";
  }
}

struct Constraint {
  LinearExpr expr;
  Relation rel;
  Rational rhs;
  std::string name;
};

/// minimize objective subject to constraints; each variable has an optional
/// lower bound (absent means free).
class LinearProgram {
 public:
  int add_variable(std::string name, std::optional<Rational> lower = Rational(0)) {
    names_.push_back(std::move(name));
    lower_.push_back(std::move(lower));
    return int(names_.size()) - 1;
  }
  int add_free_variable(std::string name) { return add_variable(std::move(name), std::nullopt); }

  void add_constraint(LinearExpr expr, Relation rel, Rational rhs, std::string name = {}) {
    for (const auto& [v, c] : expr.terms())
      if (v < 0 || v >= n_vars()) throw std::out_of_range("constraint references an undeclared variable");
    if (name.empty()) name = "r" + std::to_string(constraints_.size() + 1);
    constraints_.push_back({std::move(expr), rel, std::move(rhs), std::move(name)});
  }

  void set_objective(LinearExpr expr, Rational constant = 0) {
    for (const auto& [v, c] : expr.terms())
      if (v < 0 || v >= n_vars()) throw std::out_of_range("objective references an undeclared variable");
    objective_ = std::move(expr);
    objective_constant_ = std::move(constant);
  }

  int n_vars() const { return int(names_.size()); }
  int n_constraints() const { return int(constraints_.size()); }
  const std::string& name(int v) const { return names_.at(v); }
  const std::optional<Rational>& lower(int v) const { return lower_.at(v); }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearExpr& objective() const { return objective_; }
  const Rational& objective_constant() const { return objective_constant_; }

  /// Plain-text form, one line per item:
  ///   var <name> >= <lb> | var <name> free
  ///   min <expr> [+ constant]
  ///   <name>: <expr> <rel> <rhs>
  void dump(std::ostream& out) const {
    for (int v = 0; v < n_vars(); ++v) {
      out << "var " << names_[v];
      if (lower_[v])
        out << " >= " << to_string(*lower_[v]) << "\n";
      else
        out << " free\n";
    }
    out << "min " << format(objective_);
    if (sgn(objective_constant_) != 0) out << " + " << to_string(objective_constant_);
    out << "\n";
    for (const auto& c : constraints_)
      out << c.name << ": " << format(c.expr) << " " << relation_symbol(c.rel) << " " << to_string(c.rhs) << "\n";
  }

  std::string format(const LinearExpr& e) const {
    if (e.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [v, c] : e.terms()) {
      if (!first) s += " + ";
      first = false;
      s += to_string(c) + " " + names_[v];
    }
    return s;
  }

  /// Largest violation of bounds or constraints by `values`; zero when feasible.
  Rational max_violation(const std::vector<Rational>& values) const {
    Rational worst = 0;
    for (int v = 0; v < n_vars(); ++v)
      if (lower_[v] && values.at(v) < *lower_[v]) worst = std::max(worst, Rational(*lower_[v] - values[v]));
    for (const auto& c : constraints_) {
      const Rational lhs = c.expr.evaluate(values);
      Rational viol = 0;
      if (c.rel != Relation::GreaterEq && lhs > c.rhs) viol = lhs - c.rhs;
      if (c.rel != Relation::LessEq && lhs < c.rhs) viol = c.rhs - lhs;
      worst = std::max(worst, viol);
    }
    return worst;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::optional<Rational>> lower_;
  std::vector<Constraint> constraints_;
  LinearExpr objective_;
  Rational objective_constant_ = 0;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* status_name(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    default:
      return "unbounded";
  }
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> values;
  Rational objective_value = 0;
  long pivots = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
  const Rational& value(int var) const { return values.at(var); }
};

namespace detail {

struct Entry {
  int col;
  Rational val;
};
using SparseRow = std::vector<Entry>;

inline const Rational* find_entry(const SparseRow& row, int col) {
  auto it = std::lower_bound(row.begin(), row.end(), col, [](const Entry& e, int c) { return e.col < c; });
  return (it != row.end() && it->col == col) ? &it->val : nullptr;
}

// row -= k * pivot, dropping entries that cancel.
inline void axpy(SparseRow& row, const Rational& k, const SparseRow& pivot, SparseRow& scratch) {
  scratch.clear();
  scratch.reserve(row.size() + pivot.size());
  auto a = row.begin();
  auto b = pivot.begin();
  while (a != row.end() || b != pivot.end()) {
    if (b == pivot.end() || (a != row.end() && a->col < b->col)) {
      scratch.push_back(std::move(*a++));
    } else if (a == row.end() || b->col < a->col) {
      scratch.push_back({b->col, -k * b->val});
      ++b;
    } else {
      a->val -= k * b->val;
      if (sgn(a->val) != 0) scratch.push_back(std::move(*a));
      ++a;
      ++b;
    }
  }
  row.swap(scratch);
}

// Simplex tableau in standard form: rows . x = rhs, x >= 0.
class Tableau {
 public:
  Tableau(int n_cols, std::vector<SparseRow> rows, std::vector<Rational> rhs, std::vector<int> basis)
      : n_cols_(n_cols), rows_(std::move(rows)), rhs_(std::move(rhs)), basis_(std::move(basis)), dead_(n_cols, false) {}

  void kill_column(int c) { dead_[c] = true; }
  bool dead(int c) const { return dead_[c]; }
  int n_rows() const { return int(rows_.size()); }
  int basis(int r) const { return basis_[r]; }
  const SparseRow& row(int r) const { return rows_[r]; }
  const Rational& rhs(int r) const { return rhs_[r]; }
  long pivots() const { return pivots_; }

  // Reduced costs for the cost vector c (dense, indexed by column).
  void price(const std::vector<Rational>& c) {
    weight_.assign(n_cols_, 1.0);
    d_ = c;
    z_ = 0;
    for (int r = 0; r < n_rows(); ++r) {
      const Rational& cb = c[basis_[r]];
      if (sgn(cb) == 0) continue;
      for (const auto& e : rows_[r]) d_[e.col] -= cb * e.val;
      z_ += cb * rhs_[r];
    }
  }

  const Rational& objective() const { return z_; }

  enum class Outcome { Optimal, Unbounded };

  // Columns of the starting identity basis; their tableau entries are the
  // rows of B^-1, which the lexicographic ratio test compares.
  void set_identity_columns(std::vector<bool> cols) { identity_ = std::move(cols); }

  // Devex pricing with the lexicographic ratio test, which cannot cycle.
  // The pricing weights are floating point; they only rank candidates.
  Outcome run() {
    while (true) {
      int enter = -1;
      double best_score = 0;
      for (int j = 0; j < n_cols_; ++j) {
        if (dead_[j] || sgn(d_[j]) >= 0) continue;
        const double dj = d_[j].get_d();
        const double score = dj * dj / weight_[j];
        if (enter < 0 || score > best_score) {
          enter = j;
          best_score = score;
        }
      }
      if (enter < 0) return Outcome::Optimal;
      int leave = -1;
      Rational best;
      const Rational* best_a = nullptr;
      for (int r = 0; r < n_rows(); ++r) {
        const Rational* a = find_entry(rows_[r], enter);
        if (!a || sgn(*a) <= 0) continue;
        Rational ratio = rhs_[r] / *a;
        int c = leave < 0 ? -1 : cmp(ratio, best);
        if (c == 0) c = lex_compare(r, *a, leave, *best_a);
        if (c < 0) {
          leave = r;
          best = std::move(ratio);
          best_a = a;
        }
      }
      if (leave < 0) return Outcome::Unbounded;
      pivot(leave, enter);
    }
  }

  // Compares row r1 / a1 with row r2 / a2 on the identity columns.
  int lex_compare(int r1, const Rational& a1, int r2, const Rational& a2) const {
    auto i1 = rows_[r1].begin(), e1 = rows_[r1].end();
    auto i2 = rows_[r2].begin(), e2 = rows_[r2].end();
    auto skip = [&](auto& it, auto end) {
      while (it != end && !identity_[it->col]) ++it;
    };
    while (true) {
      skip(i1, e1);
      skip(i2, e2);
      if (i1 == e1 && i2 == e2) return 0;
      const int c1 = i1 == e1 ? n_cols_ : i1->col;
      const int c2 = i2 == e2 ? n_cols_ : i2->col;
      if (c1 < c2) return sgn(i1->val) * sgn(a1) < 0 ? -1 : 1;
      if (c2 < c1) return sgn(i2->val) * sgn(a2) < 0 ? 1 : -1;
      const int c = cmp(Rational(i1->val / a1), Rational(i2->val / a2));
      if (c != 0) return c;
      ++i1;
      ++i2;
    }
  }

  void pivot(int r, int enter) {
    ++pivots_;
    SparseRow& pr = rows_[r];
    const Rational inv = 1 / *find_entry(pr, enter);
    for (auto& e : pr) e.val *= inv;
    rhs_[r] *= inv;
    if (!weight_.empty()) {
      const double wq = weight_[enter];
      for (const auto& e : pr) {
        const double a = e.val.get_d();
        weight_[e.col] = std::max(weight_[e.col], a * a * wq);
      }
      const double iv = inv.get_d();
      weight_[basis_[r]] = std::max(wq * iv * iv, 1.0);
      weight_[enter] = wq;
    }
    for (int i = 0; i < n_rows(); ++i) {
      if (i == r) continue;
      const Rational* a = find_entry(rows_[i], enter);
      if (!a) continue;
      const Rational k = *a;
      rhs_[i] -= k * rhs_[r];
      axpy(rows_[i], k, pr, scratch_);
    }
    if (!d_.empty() && sgn(d_[enter]) != 0) {
      const Rational k = d_[enter];
      for (const auto& e : pr) d_[e.col] -= k * e.val;
      z_ += k * rhs_[r];
    }
    if (basis_[r] >= 0 && basis_[r] < n_cols_ && is_artificial_ && is_artificial_(basis_[r])) dead_[basis_[r]] = true;
    basis_[r] = enter;
  }

  void remove_row(int r) {
    rows_.erase(rows_.begin() + r);
    rhs_.erase(rhs_.begin() + r);
    basis_.erase(basis_.begin() + r);
  }

  std::vector<Rational> column_values() const {
    std::vector<Rational> x(n_cols_, Rational(0));
    for (int r = 0; r < n_rows(); ++r) x[basis_[r]] = rhs_[r];
    return x;
  }

  std::function<bool(int)> is_artificial_;

 private:
  int n_cols_;
  std::vector<SparseRow> rows_;
  std::vector<Rational> rhs_;
  std::vector<int> basis_;
  std::vector<bool> dead_;
  std::vector<bool> identity_;
  std::vector<Rational> d_;
  std::vector<double> weight_;
  Rational z_ = 0;
  long pivots_ = 0;
  SparseRow scratch_;
};

}  // namespace detail

namespace detail {

/// Two-phase primal simplex over exact rationals.
inline LpSolution simplex(const LinearProgram& lp) {
  using detail::Entry;
  using detail::SparseRow;

  // Column layout: x = lb + p for bounded variables, x = p - n for free ones.
  const int nv = lp.n_vars();
  std::vector<int> pos_col(nv), neg_col(nv, -1);
  int n_cols = 0;
  for (int v = 0; v < nv; ++v) {
    pos_col[v] = n_cols++;
    if (!lp.lower(v)) neg_col[v] = n_cols++;
  }

  struct RowBuild {
    std::map<int, Rational> coeffs;
    Rational rhs;
    Relation rel;
  };
  std::vector<RowBuild> built;
  built.reserve(lp.n_constraints());
  for (const auto& c : lp.constraints()) {
    RowBuild rb{{}, c.rhs, c.rel};
    for (const auto& [v, a] : c.expr.terms()) {
      rb.coeffs[pos_col[v]] += a;
      if (neg_col[v] >= 0) rb.coeffs[neg_col[v]] -= a;
      if (lp.lower(v)) rb.rhs -= a * *lp.lower(v);
    }
    if (sgn(rb.rhs) < 0 || (sgn(rb.rhs) == 0 && rb.rel == Relation::GreaterEq)) {
      rb.rhs = -rb.rhs;
      for (auto& [col, a] : rb.coeffs) a = -a;
      if (rb.rel == Relation::LessEq)
        rb.rel = Relation::GreaterEq;
      else if (rb.rel == Relation::GreaterEq)
        rb.rel = Relation::LessEq;
    }
    built.push_back(std::move(rb));
  }

  const int first_slack = n_cols;
  for (const auto& rb : built)
    if (rb.rel != Relation::Equal) ++n_cols;
  const int first_art = n_cols;
  for (const auto& rb : built)
    if (rb.rel != Relation::LessEq) ++n_cols;

  std::vector<SparseRow> rows;
  std::vector<Rational> rhs;
  std::vector<int> basis;
  int slack = first_slack;
  int art = first_art;
  for (auto& rb : built) {
    SparseRow row;
    for (auto& [col, a] : rb.coeffs)
      if (sgn(a) != 0) row.push_back({col, a});
    int basic = -1;
    if (rb.rel == Relation::LessEq) {
      row.push_back({slack, Rational(1)});
      basic = slack++;
    } else if (rb.rel == Relation::GreaterEq) {
      row.push_back({slack++, Rational(-1)});
    }
    if (rb.rel != Relation::LessEq) {
      row.push_back({art, Rational(1)});
      basic = art++;
    }
    rows.push_back(std::move(row));
    rhs.push_back(rb.rhs);
    basis.push_back(basic);
  }

  detail::Tableau tab(n_cols, std::move(rows), std::move(rhs), std::move(basis));
  tab.is_artificial_ = [first_art](int c) { return c >= first_art; };
  {
    std::vector<bool> identity(n_cols, false);
    for (int r = 0; r < tab.n_rows(); ++r) identity[tab.basis(r)] = true;
    tab.set_identity_columns(std::move(identity));
  }

  LpSolution sol;
  // Phase 1: minimize the sum of artificials.
  if (first_art < n_cols) {
    std::vector<Rational> c1(n_cols, Rational(0));
    for (int j = first_art; j < n_cols; ++j) c1[j] = 1;
    tab.price(c1);
    tab.run();
    if (sgn(tab.objective()) > 0) {
      sol.status = LpStatus::Infeasible;
      sol.pivots = tab.pivots();
      return sol;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    for (int r = tab.n_rows() - 1; r >= 0; --r) {
      if (tab.basis(r) < first_art) continue;
      int enter = -1;
      for (const auto& e : tab.row(r))
        if (e.col < first_art && !tab.dead(e.col)) {
          enter = e.col;
          break;
        }
      if (enter >= 0)
        tab.pivot(r, enter);
      else
        tab.remove_row(r);
    }
    for (int j = first_art; j < n_cols; ++j) tab.kill_column(j);
  }

  // Phase 2.
  std::vector<Rational> c2(n_cols, Rational(0));
  for (const auto& [v, a] : lp.objective().terms()) {
    c2[pos_col[v]] += a;
    if (neg_col[v] >= 0) c2[neg_col[v]] -= a;
  }
  tab.price(c2);
  const auto outcome = tab.run();
  sol.pivots = tab.pivots();
  if (outcome == detail::Tableau::Outcome::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  const auto x = tab.column_values();
  sol.values.resize(nv);
  for (int v = 0; v < nv; ++v) {
    sol.values[v] = x[pos_col[v]];
    if (neg_col[v] >= 0) sol.values[v] -= x[neg_col[v]];
    if (lp.lower(v)) sol.values[v] += *lp.lower(v);
  }
  sol.objective_value = lp.objective().evaluate(sol.values) + lp.objective_constant();
  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace detail

/// Equality rows are removed first by substituting one variable per row, so
/// that only rows with a nonzero right-hand side need artificials. A bounded
/// eliminated variable leaves its bound behind as an inequality row.
inline LpSolution solve(const LinearProgram& lp) {
  struct Row {
    std::map<int, Rational> coeffs;
    Relation rel;
    Rational rhs;
    bool alive = true;
  };
  struct Substitution {
    int var;
    Rational constant;
    std::map<int, Rational> coeffs;
  };
  const int nv = lp.n_vars();
  std::vector<Row> rows;
  std::vector<std::set<int>> col_rows(nv);
  auto attach = [&](int r) {
    for (const auto& [v, a] : rows[r].coeffs) col_rows[v].insert(r);
  };
  for (const auto& c : lp.constraints()) {
    rows.push_back({c.expr.terms(), c.rel, c.rhs});
    attach(int(rows.size()) - 1);
  }
  std::map<int, Rational> objective = lp.objective().terms();
  std::vector<bool> eliminated(nv, false);
  std::vector<Substitution> subs;

  // Replaces x_p by constant + sum coeffs in `target`, returning the constant shift.
  auto substitute = [](std::map<int, Rational>& target, int p, const Substitution& sub) {
    auto it = target.find(p);
    if (it == target.end()) return Rational(0);
    const Rational k = it->second;
    target.erase(it);
    for (const auto& [v, a] : sub.coeffs) {
      auto [jt, inserted] = target.try_emplace(v, 0);
      jt->second += k * a;
      if (sgn(jt->second) == 0) target.erase(jt);
    }
    return Rational(k * sub.constant);
  };

  LpSolution infeasible;
  const int n_original_rows = int(rows.size());
  for (int e = 0; e < n_original_rows; ++e) {
    if (rows[e].rel != Relation::Equal) continue;
    Row& row = rows[e];
    row.alive = false;
    for (const auto& [v, a] : row.coeffs) col_rows[v].erase(e);
    if (row.coeffs.empty()) {
      if (sgn(row.rhs) != 0) return infeasible;
      continue;
    }
    int p = -1;
    for (const auto& [v, a] : row.coeffs) {
      auto key = [&](int u) { return std::make_tuple(col_rows[u].size(), lp.lower(u).has_value(), u); };
      if (p < 0 || key(v) < key(p)) p = v;
    }
    const Rational ap = row.coeffs.at(p);
    Substitution sub{p, row.rhs / ap, {}};
    for (const auto& [v, a] : row.coeffs)
      if (v != p) sub.coeffs[v] = -a / ap;
    for (int r : std::vector<int>(col_rows[p].begin(), col_rows[p].end())) {
      for (const auto& [v, a] : rows[r].coeffs) col_rows[v].erase(r);
      rows[r].rhs -= substitute(rows[r].coeffs, p, sub);
      attach(r);
    }
    col_rows[p].clear();
    substitute(objective, p, sub);
    if (lp.lower(p)) {
      rows.push_back({sub.coeffs, Relation::GreaterEq, *lp.lower(p) - sub.constant});
      attach(int(rows.size()) - 1);
    }
    eliminated[p] = true;
    subs.push_back(std::move(sub));
  }

  LinearProgram reduced;
  std::vector<int> new_index(nv, -1);
  for (int v = 0; v < nv; ++v)
    if (!eliminated[v]) new_index[v] = reduced.add_variable(lp.name(v), lp.lower(v));
  for (const auto& row : rows) {
    if (!row.alive) continue;
    if (row.coeffs.empty()) {
      const int s = sgn(row.rhs);
      if ((row.rel == Relation::LessEq && s < 0) || (row.rel == Relation::GreaterEq && s > 0)) return infeasible;
      continue;
    }
    LinearExpr expr;
    for (const auto& [v, a] : row.coeffs) expr.add(new_index[v], a);
    reduced.add_constraint(std::move(expr), row.rel, row.rhs);
  }
  LinearExpr obj;
  for (const auto& [v, a] : objective) obj.add(new_index[v], a);
  reduced.set_objective(std::move(obj));

  LpSolution inner = detail::simplex(reduced);
  LpSolution sol;
  sol.status = inner.status;
  sol.pivots = inner.pivots;
  if (!inner.optimal()) return sol;
  sol.values.assign(nv, Rational(0));
  for (int v = 0; v < nv; ++v)
    if (!eliminated[v]) sol.values[v] = inner.values[new_index[v]];
  for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
    Rational x = it->constant;
    for (const auto& [v, a] : it->coeffs) x += a * sol.values[v];
    sol.values[it->var] = std::move(x);
  }
  sol.objective_value = lp.objective().evaluate(sol.values) + lp.objective_constant();
  return sol;
}

}  // namespace pbqr
