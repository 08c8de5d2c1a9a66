#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pbqr/errors.hpp"
#include "pbqr/lp.hpp"
#include "pbqr/mbf.hpp"
#include "pbqr/oracle.hpp"
#include "pbqr/poly.hpp"

namespace pbqr {

/// Find a quadratic submodular h(x, z) whose AV z_l sits at mbf_set[l](x) at
/// the minimum, as close as possible to target.
struct ReductionProblem {
  MultilinearPoly target;
  std::vector<MbfTable> mbf_set;
  int k = 0;
  bool allow_degenerate = false;

  ReductionProblem() = default;
  ReductionProblem(MultilinearPoly target, std::vector<MbfTable> mbf_set, int k, bool allow_degenerate = false)
      : target(std::move(target)), mbf_set(std::move(mbf_set)), k(k), allow_degenerate(allow_degenerate) {
    validate();
  }

  int n_avs() const { return int(mbf_set.size()); }

  void validate() const {
    if (k < 0 || k > kMaxEnumVars) throw std::invalid_argument("reduction: bad variable count");
    if (target.n_vars() > k) throw std::invalid_argument("reduction: target has more than k variables");
    std::set<std::string> seen;
    for (const auto& t : mbf_set) {
      if (t.k != k) throw std::invalid_argument("reduction: MBF over the wrong number of variables");
      if (!is_monotone(t)) throw std::invalid_argument("reduction: table is not monotone");
      if (!seen.insert(t.to_bitstring()).second) throw std::invalid_argument("reduction: duplicate MBF");
      if (!allow_degenerate && is_degenerate(t))
        throw std::invalid_argument("reduction: constant or projection MBF " + t.to_bitstring());
    }
    if (k > 4 && n_avs() > 40) throw SizeLimitExceeded("reduction: more than 40 MBFs for k > 4");
    if (k + n_avs() > kMaxVars) throw SizeLimitExceeded("reduction: more nodes than the mask width allows");
  }
};

/// Variable indices of a built reduction LP.
struct ReductionLayout {
  int k = 0;
  int m = 0;
  int c0 = -1;
  std::vector<int> src, sink;              // per node
  std::map<std::pair<int, int>, int> arc;  // (from node, to node) -> capacity variable
  std::vector<int> slack;                  // per labeling
  std::vector<LinearExpr> value_at_m;      // h(x, m(x)) as a form in capacities, per labeling
};

namespace detail {

inline std::string node_name(int u, int k) {
  return u < k ? "x" + std::to_string(u + 1) : "z" + std::to_string(u - k + 1);
}

inline Mask mbf_state(const std::vector<MbfTable>& ms, Mask x) {
  Mask z = 0;
  for (std::size_t l = 0; l < ms.size(); ++l)
    if (ms[l](x)) z |= bit(int(l));
  return z;
}

}  // namespace detail

/// Capacities follow the cut-cost form over k + m nodes: a free constant,
/// terminal capacities on every node, and one arc per unordered node pair
/// (x_i -> x_j for i < j, x_i -> z_l, z_l -> z_m for l < m). For each
/// labeling x the z-network carries its own flow, whose value must reach the
/// cut at z = m(x); that pins m(x) as a minimizer of h(x, .).
inline LinearProgram build_reduction_lp(const ReductionProblem& p, ReductionLayout* layout_out = nullptr) {
  p.validate();
  const int k = p.k;
  const int m = p.n_avs();
  const int n = k + m;
  LinearProgram lp;
  ReductionLayout L;
  L.k = k;
  L.m = m;
  L.c0 = lp.add_free_variable("c0");
  for (int u = 0; u < n; ++u) {
    L.src.push_back(lp.add_variable("src_" + detail::node_name(u, k)));
    L.sink.push_back(lp.add_variable("sink_" + detail::node_name(u, k)));
  }
  auto add_arc = [&](int a, int b) {
    L.arc[{a, b}] = lp.add_variable("c_" + detail::node_name(a, k) + "_" + detail::node_name(b, k));
  };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) add_arc(i, j);
  for (int i = 0; i < k; ++i)
    for (int l = 0; l < m; ++l) add_arc(i, k + l);
  for (int l = 0; l < m; ++l)
    for (int q = l + 1; q < m; ++q) add_arc(k + l, k + q);

  const MultilinearPoly g = p.target.widened(k);
  LinearExpr objective;
  for (Mask x = 0; x < (Mask{1} << k); ++x) {
    const std::string tag = "[" + format_set(x) + "]";
    const Mask mz = detail::mbf_state(p.mbf_set, x);

    // Part of h(x, .) that does not depend on z.
    LinearExpr d_empty;
    d_empty.add(L.c0, 1);
    for (int i = 0; i < k; ++i) d_empty.add(contains(x, i) ? L.sink[i] : L.src[i], 1);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (contains(x, i) && !contains(x, j)) d_empty.add(L.arc.at({i, j}), 1);

    // z-network capacities as forms in c.
    std::vector<LinearExpr> d_src(m), d_sink(m);
    for (int l = 0; l < m; ++l) {
      d_src[l].add(L.src[k + l], 1);
      for (int i = 0; i < k; ++i)
        if (contains(x, i)) d_src[l].add(L.arc.at({i, k + l}), 1);
      d_sink[l].add(L.sink[k + l], 1);
    }

    // Flows and their capacity bounds.
    std::vector<int> f_src(m), f_sink(m);
    LinearExpr grad;
    std::vector<LinearExpr> balance(m);
    const int nabla = lp.add_variable("grad" + tag);
    for (int l = 0; l < m; ++l) {
      const std::string zl = detail::node_name(k + l, k);
      f_src[l] = lp.add_variable("f" + tag + "_s_" + zl);
      f_sink[l] = lp.add_variable("f" + tag + "_" + zl + "_t");
      LinearExpr cap_s = d_src[l];
      cap_s.add(f_src[l], -1);
      lp.add_constraint(std::move(cap_s), Relation::GreaterEq, 0, "cap" + tag + "_s_" + zl);
      LinearExpr cap_t = d_sink[l];
      cap_t.add(f_sink[l], -1);
      lp.add_constraint(std::move(cap_t), Relation::GreaterEq, 0, "cap" + tag + "_" + zl + "_t");
      grad.add(f_src[l], 1);
      balance[l].add(f_src[l], 1).add(f_sink[l], -1);
    }
    for (int l = 0; l < m; ++l)
      for (int q = l + 1; q < m; ++q) {
        const std::string name = detail::node_name(k + l, k) + "_" + detail::node_name(k + q, k);
        const int f = lp.add_variable("f" + tag + "_" + name);
        lp.add_constraint(LinearExpr{{L.arc.at({k + l, k + q}), 1}, {f, -1}}, Relation::GreaterEq, 0,
                          "cap" + tag + "_" + name);
        balance[l].add(f, -1);
        balance[q].add(f, 1);
      }
    for (int l = 0; l < m; ++l)
      lp.add_constraint(std::move(balance[l]), Relation::Equal, 0, "flow" + tag + "_" + detail::node_name(k + l, k));
    grad.add(nabla, -1);
    lp.add_constraint(std::move(grad), Relation::Equal, 0, "grad" + tag);

    // Cut of the z-network at z = m(x). Label 1 is the source side.
    LinearExpr cut;
    for (int l = 0; l < m; ++l) cut.add(contains(mz, l) ? d_sink[l] : d_src[l]);
    for (int l = 0; l < m; ++l)
      for (int q = l + 1; q < m; ++q)
        if (contains(mz, l) && !contains(mz, q)) cut.add(L.arc.at({k + l, k + q}), 1);
    LinearExpr tight = cut;
    tight.add(nabla, -1);
    lp.add_constraint(std::move(tight), Relation::LessEq, 0, "tight" + tag);

    LinearExpr value = d_empty;
    value.add(cut);
    const Rational gx = evaluate(g, x);
    const int h = lp.add_variable("h" + tag);
    LinearExpr above = value;
    above.add(h, 1);
    lp.add_constraint(std::move(above), Relation::GreaterEq, gx, "abs_lo" + tag);
    LinearExpr below = value;
    below.add(h, -1);
    lp.add_constraint(std::move(below), Relation::LessEq, gx, "abs_hi" + tag);
    objective.add(h, 1);
    L.slack.push_back(h);
    L.value_at_m.push_back(std::move(value));
  }
  lp.set_objective(std::move(objective));
  if (layout_out) *layout_out = std::move(L);
  return lp;
}

/// Quadratic encoded by the capacity part of an LP solution.
inline QuadraticPoly quadratic_from_solution(const ReductionLayout& L, const std::vector<Rational>& values) {
  const int n = L.k + L.m;
  CapacityForm cf = CapacityForm::zero(n, L.k);
  cf.c_empty = values.at(L.c0);
  for (int u = 0; u < n; ++u) {
    cf.src_cap[u] = values.at(L.src[u]);
    cf.sink_cap[u] = values.at(L.sink[u]);
  }
  for (const auto& [ab, var] : L.arc) cf.pair_cap[ab.first][ab.second] = values.at(var);
  return from_capacity_form(cf);
}

struct ReductionResult {
  QuadraticPoly quadratic;
  Rational l1_distance;
  Rational lp_objective;
  std::map<Mask, Rational> per_labeling_gap;
  VerificationReport report;
  LpSolution lp_solution;
  std::vector<int> solved_mbfs;  // MBF indices present in the LP that was solved
};

struct ReductionOptions {
  // Try the empty set and every single MBF before the full set. Unused AVs
  // can always be given zero capacity, so a zero optimum on a subset is also
  // a zero optimum for the whole set.
  bool staged = true;
};

namespace detail {

// Moves z_l of `h` (over `subset`) to position subset[l] among `m` AVs.
inline QuadraticPoly embed_avs(const QuadraticPoly& h, const std::vector<int>& subset, int m) {
  const int k = h.n_x();
  MultilinearPoly out(k + m);
  for (const auto& [s, c] : h.poly().terms()) {
    Mask t = s & full_mask(k);
    for (std::size_t l = 0; l < subset.size(); ++l)
      if (contains(s, k + int(l))) t |= bit(k + subset[l]);
    out.add_term(t, c);
  }
  return QuadraticPoly(std::move(out), k);
}

inline ReductionResult solve_reduction(const ReductionProblem& p, const std::vector<int>& subset) {
  ReductionProblem sub;
  sub.target = p.target;
  sub.k = p.k;
  sub.allow_degenerate = p.allow_degenerate;
  for (int l : subset) sub.mbf_set.push_back(p.mbf_set.at(l));
  ReductionLayout L;
  const LinearProgram lp = build_reduction_lp(sub, &L);
  LpSolution sol = solve(lp);
  if (!sol.optimal()) throw Error(std::string("reduction LP is ") + status_name(sol.status));
  ReductionResult r;
  r.quadratic = embed_avs(quadratic_from_solution(L, sol.values), subset, p.n_avs());
  r.lp_objective = sol.objective_value;
  r.report = verify_reduction(p.target, r.quadratic);
  r.l1_distance = 0;
  for (const auto& row : r.report.rows) {
    r.per_labeling_gap[row.x] = row.gap;
    r.l1_distance += abs(row.gap);
  }
  r.lp_solution = std::move(sol);
  r.solved_mbfs = subset;
  return r;
}

}  // namespace detail

/// L1-nearest quadratic; gaps come from the oracle, not from the LP.
inline ReductionResult nearest_quadratic(const ReductionProblem& p, const ReductionOptions& opt = {}) {
  p.validate();
  std::vector<int> all(p.n_avs());
  for (int l = 0; l < p.n_avs(); ++l) all[l] = l;
  if (opt.staged && p.n_avs() > 1) {
    std::vector<std::vector<int>> stages{{}};
    for (int l = 0; l < p.n_avs(); ++l) stages.push_back({l});
    for (const auto& subset : stages) {
      ReductionResult r = detail::solve_reduction(p, subset);
      if (sgn(r.lp_objective) == 0) return r;
    }
  }
  return detail::solve_reduction(p, all);
}

struct ExactReduction {
  QuadraticPoly quadratic;
  int av_count = 0;
};

inline std::optional<ExactReduction> exact_reduce(const ReductionProblem& p, const ReductionOptions& opt = {}) {
  const ReductionResult r = nearest_quadratic(p, opt);
  if (sgn(r.l1_distance) != 0 || !r.report.passed) return std::nullopt;
  return ExactReduction{r.quadratic, r.quadratic.active_avs()};
}

/// Same LP with h(x, m(x)) >= g(x) everywhere and equality at the anchor; the
/// objective becomes the total overestimation. Nullopt when infeasible.
inline std::optional<ReductionResult> overestimate(const ReductionProblem& p, Mask anchor) {
  if (!is_subset(anchor, full_mask(p.k))) throw std::invalid_argument("overestimate: anchor outside the variable set");
  ReductionLayout L;
  LinearProgram lp = build_reduction_lp(p, &L);
  const MultilinearPoly g = p.target.widened(p.k);
  for (Mask x = 0; x < (Mask{1} << p.k); ++x) {
    const Rational gx = evaluate(g, x);
    lp.add_constraint(L.value_at_m[x], x == anchor ? Relation::Equal : Relation::GreaterEq, gx,
                      "over[" + format_set(x) + "]");
  }
  LpSolution sol = solve(lp);
  if (sol.status == LpStatus::Infeasible) return std::nullopt;
  if (!sol.optimal()) throw Error(std::string("overestimation LP is ") + status_name(sol.status));
  ReductionResult r;
  r.quadratic = quadratic_from_solution(L, sol.values);
  r.lp_objective = sol.objective_value;
  r.report = verify_reduction(p.target, r.quadratic);
  r.l1_distance = r.report.l1_gap();
  for (const auto& row : r.report.rows) r.per_labeling_gap[row.x] = row.gap;
  r.lp_solution = std::move(sol);
  for (int l = 0; l < p.n_avs(); ++l) r.solved_mbfs.push_back(l);
  return r;
}

}  // namespace pbqr
