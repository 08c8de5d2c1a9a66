#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pbqr/errors.hpp"
#include "pbqr/lp.hpp"
#include "pbqr/mbf.hpp"
#include "pbqr/oracle.hpp"
#include "pbqr/poly.hpp"

namespace pbqr {

/// A pseudo-Boolean function of four variables, stored as its multilinear
/// coefficients a_S for S in the power set of {1,2,3,4}.
struct QuarticFunction {
  MultilinearPoly poly{4};

  QuarticFunction() = default;
  explicit QuarticFunction(const MultilinearPoly& f) {
    if (f.n_vars() > 4) throw PreconditionViolation("quartic function: more than four variables");
    poly = f.widened(4);
  }

  Rational a(Mask s) const { return poly.coeff(s); }
  Rational operator()(Mask x) const { return evaluate(poly, x); }
  bool is_submodular() const { return pbqr::is_submodular(poly); }
};

// Index of the unordered pair {i, j} in lexicographic order 12,13,14,23,24,34.
inline int pair_index(int i, int j) {
  static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[i][j];
}

/// h(x, z1, z2) = b0 + sum b_i x_i - sum bq_ij x_i x_j
///              + (g1 - sum g1_i x_i) z1 + (g2 - sum g2_i x_i) z2 - j12 z1 z2
/// with z1 on the forward generator (|S| >= 3) and z2 on the backward one (|S| >= 2).
struct JointQuadratic {
  Rational b0;
  std::array<Rational, 4> b{};
  std::array<Rational, 6> bq{};
  Rational g1;
  std::array<Rational, 4> g1i{};
  Rational g2;
  std::array<Rational, 4> g2i{};
  Rational j12;

  bool sign_valid() const {
    for (const auto& v : bq)
      if (sgn(v) < 0) return false;
    for (const auto& v : g1i)
      if (sgn(v) < 0) return false;
    for (const auto& v : g2i)
      if (sgn(v) < 0) return false;
    return sgn(j12) >= 0;
  }

  // Variables 0..3 are x1..x4, 4 is z1, 5 is z2.
  QuadraticPoly to_quadratic() const {
    MultilinearPoly p(6);
    p.add_term(0, b0);
    for (int i = 0; i < 4; ++i) p.add_term(bit(i), b[i]);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) p.add_term(bit(i) | bit(j), -bq[pair_index(i, j)]);
    p.add_term(bit(4), g1);
    p.add_term(bit(5), g2);
    for (int i = 0; i < 4; ++i) {
      p.add_term(bit(i) | bit(4), -g1i[i]);
      p.add_term(bit(i) | bit(5), -g2i[i]);
    }
    p.add_term(bit(4) | bit(5), -j12);
    return QuadraticPoly(std::move(p), 4);
  }

  AvParams forward_params() const { return {g1, {g1i.begin(), g1i.end()}}; }
  AvParams backward_params() const { return {g2, {g2i.begin(), g2i.end()}}; }
};

/// Both generator AVs are on exactly when |S| >= 3.
inline int eta(Mask s) { return cardinality(s) >= 3 ? 1 : 0; }

/// Generator states at labeling S: bit 0 is z1 = [|S| >= 3], bit 1 is z2 = [|S| >= 2].
inline Mask generator_state(Mask s) {
  return (cardinality(s) >= 3 ? 1u : 0u) | (cardinality(s) >= 2 ? 2u : 0u);
}

struct QuarticLayout {
  int b0 = -1;
  std::array<int, 4> b{};
  std::array<int, 6> bq{};
  int g1 = -1;
  std::array<int, 4> g1i{};
  int g2 = -1;
  std::array<int, 4> g2i{};
  int j12 = -1;
  std::array<int, 16> slack{};  // only in nearest mode

  static constexpr int kUnknowns = 22;

  // h(S, z) as a linear form in the unknowns.
  LinearExpr h_at(Mask s, Mask z) const {
    LinearExpr e;
    e.add(b0, 1);
    for (int i = 0; i < 4; ++i)
      if (contains(s, i)) e.add(b[i], 1);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (contains(s, i) && contains(s, j)) e.add(bq[pair_index(i, j)], -1);
    if (z & 1u) e.add(kappa_expr(s, g1, g1i));
    if (z & 2u) e.add(kappa_expr(s, g2, g2i));
    if (z == 3u) e.add(j12, -1);
    return e;
  }

  static LinearExpr kappa_expr(Mask s, int g, const std::array<int, 4>& gi) {
    LinearExpr e;
    e.add(g, 1);
    for (int i = 0; i < 4; ++i)
      if (contains(s, i)) e.add(gi[i], -1);
    return e;
  }

  JointQuadratic extract(const std::vector<Rational>& v) const {
    JointQuadratic q;
    q.b0 = v.at(b0);
    for (int i = 0; i < 4; ++i) {
      q.b[i] = v.at(b[i]);
      q.g1i[i] = v.at(g1i[i]);
      q.g2i[i] = v.at(g2i[i]);
    }
    for (int p = 0; p < 6; ++p) q.bq[p] = v.at(bq[p]);
    q.g1 = v.at(g1);
    q.g2 = v.at(g2);
    q.j12 = v.at(j12);
    return q;
  }
};

/// Feasibility LP for f = min_{z1,z2} h with the AVs pinned to the matroidal
/// generators. With `exact` the 16 values must match; otherwise they are
/// matched in L1 through slacks e_S and sum e_S is minimized.
inline LinearProgram build_quartic_lp(const QuarticFunction& f, bool exact, QuarticLayout* layout_out = nullptr) {
  if (!f.is_submodular()) throw PreconditionViolation("build_quartic_lp: input is not submodular");
  LinearProgram lp;
  QuarticLayout L;
  L.b0 = lp.add_free_variable("b0");
  for (int i = 0; i < 4; ++i) L.b[i] = lp.add_free_variable("b" + std::to_string(i + 1));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      L.bq[pair_index(i, j)] = lp.add_variable("b" + std::to_string(i + 1) + std::to_string(j + 1));
  L.g1 = lp.add_free_variable("g1");
  for (int i = 0; i < 4; ++i) L.g1i[i] = lp.add_variable("g1_" + std::to_string(i + 1));
  L.g2 = lp.add_free_variable("g2");
  for (int i = 0; i < 4; ++i) L.g2i[i] = lp.add_variable("g2_" + std::to_string(i + 1));
  L.j12 = lp.add_variable("j12");

  LinearExpr objective;
  for (Mask s = 0; s < 16; ++s) {
    const Mask zs = generator_state(s);
    const LinearExpr hs = L.h_at(s, zs);
    const std::string tag = "S" + std::to_string(s);
    if (exact) {
      lp.add_constraint(hs, Relation::Equal, f(s), "fit_" + tag);
    } else {
      L.slack[s] = lp.add_variable("e_" + tag);
      LinearExpr up = hs, down = hs;
      up.add(L.slack[s], -1);
      down.add(L.slack[s], 1);
      lp.add_constraint(up, Relation::LessEq, f(s), "fitu_" + tag);
      lp.add_constraint(down, Relation::GreaterEq, f(s), "fitl_" + tag);
      objective.add(L.slack[s], 1);
    }
    // Sign of each AV's partition coefficient agrees with its generator.
    lp.add_constraint(QuarticLayout::kappa_expr(s, L.g1, L.g1i), (zs & 1u) ? Relation::LessEq : Relation::GreaterEq, 0,
                      "k1_" + tag);
    lp.add_constraint(QuarticLayout::kappa_expr(s, L.g2, L.g2i), (zs & 2u) ? Relation::LessEq : Relation::GreaterEq, 0,
                      "k2_" + tag);
    // The generator state is a joint minimizer over (z1, z2).
    for (Mask z = 0; z < 4; ++z) {
      if (z == zs) continue;
      LinearExpr d = hs;
      d.add(L.h_at(s, z), -1);
      lp.add_constraint(d, Relation::LessEq, 0, "min" + std::to_string(z) + "_" + tag);
    }
  }
  lp.set_objective(objective);
  if (layout_out) *layout_out = L;
  return lp;
}

struct QuarticResult {
  bool representable = false;
  std::optional<JointQuadratic> joint;
  Rational distance;  // L1 gap reported by the oracle; 0 when representable
  std::optional<VerificationReport> report;
  bool states_match = false;  // AV states agree with the generators where the minimum is unique
  LpSolution lp;
};

/// Exact mode decides membership (joint is empty when the LP is infeasible);
/// nearest mode always returns the L1-closest generator quadratic.
inline QuarticResult reduce_quartic(const QuarticFunction& f, bool nearest = false) {
  QuarticLayout L;
  const LinearProgram lp = build_quartic_lp(f, !nearest, &L);
  QuarticResult r;
  r.lp = solve(lp);
  if (!r.lp.optimal()) {
    if (nearest) throw Error("reduce_quartic: nearest LP not optimal");
    r.distance = -1;
    return r;
  }
  const JointQuadratic q = L.extract(r.lp.values);
  const QuadraticPoly h = q.to_quadratic();
  VerificationReport rep = verify_reduction(f.poly, h);
  r.distance = rep.l1_gap();
  r.representable = rep.passed;
  r.states_match = true;
  const bool active[2] = {sgn(q.g1) != 0 || sgn(q.j12) != 0 ||
                              std::any_of(q.g1i.begin(), q.g1i.end(), [](const Rational& v) { return sgn(v) != 0; }),
                          sgn(q.g2) != 0 || sgn(q.j12) != 0 ||
                              std::any_of(q.g2i.begin(), q.g2i.end(), [](const Rational& v) { return sgn(v) != 0; })};
  for (const auto& row : rep.rows) {
    if (!row.unique_argmin) continue;
    for (int l = 0; l < 2; ++l)
      if (active[l] && contains(row.z_argmin, l) != contains(generator_state(row.x), l)) r.states_match = false;
  }
  r.joint = q;
  r.report = std::move(rep);
  return r;
}

// ---------------------------------------------------------------------------
// Generator catalog G1..G10 over {i,j,k,l} = {1,2,3,4}.

struct CatalogEntry {
  int group = 0;
  std::array<int, 4> pattern{};  // 1-based (i, j, k, l)
  QuarticFunction f;
  std::optional<QuadraticPoly> quadratic;  // absent for G10
  bool corrected = false;                  // the polynomial differs from the printed table row
};

namespace detail {

inline std::array<int, 4> check_pattern(const std::array<int, 4>& pattern) {
  std::array<int, 4> idx{};
  Mask seen = 0;
  for (int t = 0; t < 4; ++t) {
    if (pattern[t] < 1 || pattern[t] > 4) throw PreconditionViolation("index pattern must be a permutation of 1..4");
    idx[t] = pattern[t] - 1;
    seen |= bit(idx[t]);
  }
  if (seen != 0xFu) throw PreconditionViolation("index pattern must be a permutation of 1..4");
  return idx;
}

// Sum of c * prod x over the listed 0-based variable sets.
inline MultilinearPoly poly_of(std::initializer_list<std::pair<int, std::initializer_list<int>>> terms, int n = 4) {
  MultilinearPoly p(n);
  for (const auto& [c, vars] : terms) {
    Mask s = 0;
    for (int v : vars) s |= bit(v);
    p.add_term(s, c);
  }
  return p;
}

// min_z z(g - sum_t w_t x_t) as a quadratic over x1..x4 and one AV.
inline QuadraticPoly single_av(int g, const std::array<int, 4>& weights) {
  MultilinearPoly p(5);
  p.add_term(bit(4), g);
  for (int i = 0; i < 4; ++i) p.add_term(bit(i) | bit(4), -weights[i]);
  return QuadraticPoly(std::move(p), 4);
}

}  // namespace detail

inline constexpr int kCatalogGroups = 10;

/// Polynomial of G9 exactly as the table prints it. It carries an extra
/// -x_i x_k that its own two-AV quadratic does not reproduce.
inline MultilinearPoly g9_as_printed(const std::array<int, 4>& pattern) {
  const auto [i, j, k, l] = detail::check_pattern(pattern);
  return detail::poly_of({{1, {i, j, k, l}}, {-1, {i, j}}, {-1, {i, k}}, {-1, {i, k, l}}, {-1, {j, k, l}}});
}

inline CatalogEntry generator_catalog(int group, const std::array<int, 4>& pattern) {
  const auto [i, j, k, l] = detail::check_pattern(pattern);
  CatalogEntry e;
  e.group = group;
  e.pattern = pattern;
  auto w = [&](std::initializer_list<std::pair<int, int>> nz) {
    std::array<int, 4> a{};
    for (auto [v, c] : nz) a[v] = c;
    return a;
  };
  MultilinearPoly f(4);
  switch (group) {
    case 1:
      f = detail::poly_of({{-1, {i, j}}});
      e.quadratic = QuadraticPoly(f, 4);
      break;
    case 2:
      f = detail::poly_of({{-1, {i, j, k}}});
      e.quadratic = detail::single_av(2, w({{i, 1}, {j, 1}, {k, 1}}));
      break;
    case 3:
      f = detail::poly_of({{-1, {0, 1, 2, 3}}});
      e.quadratic = detail::single_av(3, {1, 1, 1, 1});
      break;
    case 4:
      f = detail::poly_of({{-1, {0, 1, 2, 3}},
                           {1, {0, 1, 2}},
                           {1, {0, 1, 3}},
                           {1, {0, 2, 3}},
                           {1, {1, 2, 3}},
                           {-1, {0, 1}},
                           {-1, {0, 2}},
                           {-1, {0, 3}},
                           {-1, {1, 2}},
                           {-1, {1, 3}},
                           {-1, {2, 3}}});
      e.quadratic = detail::single_av(1, {1, 1, 1, 1});
      break;
    case 5:
      f = detail::poly_of({{1, {i, j, k, l}}, {-1, {i, j, k}}, {-1, {i, l}}, {-1, {j, l}}, {-1, {k, l}}});
      e.quadratic = detail::single_av(2, w({{i, 1}, {j, 1}, {k, 1}, {l, 2}}));
      break;
    case 6:
      f = detail::poly_of({{1, {i, j, k}}, {-1, {i, j}}, {-1, {i, k}}, {-1, {j, k}}});
      e.quadratic = detail::single_av(1, w({{i, 1}, {j, 1}, {k, 1}}));
      break;
    case 7:
      f = detail::poly_of({{1, {i, j, k, l}}, {-1, {i, j, k}}, {-1, {i, j, l}}, {-1, {i, k, l}}});
      e.quadratic = detail::single_av(3, w({{i, 2}, {j, 1}, {k, 1}, {l, 1}}));
      break;
    case 8:
      f = detail::poly_of({{2, {0, 1, 2, 3}}, {-1, {0, 1, 2}}, {-1, {0, 1, 3}}, {-1, {0, 2, 3}}, {-1, {1, 2, 3}}});
      e.quadratic = detail::single_av(2, {1, 1, 1, 1});
      break;
    case 9: {
      f = detail::poly_of({{1, {i, j, k, l}}, {-1, {i, j}}, {-1, {i, k, l}}, {-1, {j, k, l}}});
      MultilinearPoly h(6);
      h.add_term(bit(4), 1);
      h.add_term(bit(5), 2);
      h.add_term(bit(4) | bit(5), -1);
      h.add_term(bit(4) | bit(i), -1);
      h.add_term(bit(4) | bit(j), -1);
      h.add_term(bit(5) | bit(k), -1);
      h.add_term(bit(5) | bit(l), -1);
      e.quadratic = QuadraticPoly(std::move(h), 4);
      e.corrected = true;
      break;
    }
    case 10:
      f = detail::poly_of({{-1, {i, j, k, l}},
                           {1, {i, k, l}},
                           {1, {j, k, l}},
                           {-1, {i, k}},
                           {-1, {i, l}},
                           {-1, {j, k}},
                           {-1, {j, l}},
                           {-1, {k, l}}});
      break;
    default:
      throw PreconditionViolation("generator group must be in 1..10");
  }
  e.f = QuarticFunction(f);
  return e;
}

/// One entry per distinct polynomial of the group, first pattern in
/// lexicographic permutation order.
inline std::vector<CatalogEntry> catalog_instances(int group) {
  std::vector<CatalogEntry> out;
  std::array<int, 4> perm{1, 2, 3, 4};
  do {
    CatalogEntry e = generator_catalog(group, perm);
    bool dup = false;
    for (const auto& o : out) dup = dup || o.f.poly == e.f.poly;
    if (!dup) out.push_back(std::move(e));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace pbqr
