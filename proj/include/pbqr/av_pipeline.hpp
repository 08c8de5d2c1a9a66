#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "pbqr/errors.hpp"
#include "pbqr/mbf.hpp"
#include "pbqr/poly.hpp"

// Single-AV algebra on four variables. An AV with params p contributes
// min_z z*kappa(p, x) = min(0, kappa(p, x)) to the function of x.

namespace pbqr {

enum class Reference { Forward, Backward };

inline const char* reference_name(Reference r) { return r == Reference::Forward ? "forward" : "backward"; }

inline const Partition& reference_partition(Reference r) {
  static const Partition f = forward_partition(4);
  static const Partition b = backward_partition(4);
  return r == Reference::Forward ? f : b;
}

/// sigma = 2g - sum g_i, the common value of kappa(A) + kappa(S4 \ A) over pairs A.
inline Rational sigma(const AvParams& p) {
  Rational s = 2 * p.g;
  for (const auto& gi : p.slopes) s -= gi;
  return s;
}

/// Same slopes, g replaced by sum g_i - g; kappa_rev(S) = -kappa(S4 \ S).
inline AvParams reversed(const AvParams& p) {
  Rational total = 0;
  for (const auto& gi : p.slopes) total += gi;
  return {total - p.g, p.slopes};
}

/// kappa(p, x) as a linear polynomial in x.
inline MultilinearPoly kappa_poly(const AvParams& p) {
  MultilinearPoly f = MultilinearPoly::constant(p.k(), p.g);
  for (int i = 0; i < p.k(); ++i) f.add_term(bit(i), -p.slopes[i]);
  return f;
}

/// g(x) -> g(1 - x).
inline MultilinearPoly complement_inputs(const MultilinearPoly& f) {
  const auto v = f.values();
  std::vector<Rational> w(v.size());
  const Mask full = f.full();
  for (Mask x = 0; x < v.size(); ++x) w[x] = v[full & ~x];
  return MultilinearPoly::from_values(f.n_vars(), w);
}

namespace detail {

inline void require_k4(const AvParams& p) {
  if (p.k() != 4) throw PreconditionViolation("AV algebra is defined for four variables");
  p.validate();
}

inline AvParams params(int g, std::array<Rational, 4> s) { return {Rational(g), {s.begin(), s.end()}}; }

}  // namespace detail

/// Precondition of normalize_to_reference: kappa >= 0 on every pair for the
/// forward direction, kappa <= 0 on every pair for the backward one.
inline bool admissible_for(const AvParams& p, Reference dir) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const int sg = sgn(kappa(p, bit(i) | bit(j)));
      if (dir == Reference::Forward ? sg < 0 : sg > 0) return false;
    }
  return true;
}

struct SingletonRemoval {
  MultilinearPoly residual{4};
  std::optional<AvParams> params;  // empty when the AV was eliminated
};

/// Moves each singleton {e} of B into the residual as (g - g_e) x_e and sets
/// g_e = g. With g < 0 the AV is always on and is replaced by kappa(x).
inline SingletonRemoval remove_singletons(const AvParams& p) {
  detail::require_k4(p);
  SingletonRemoval r;
  if (sgn(p.g) < 0) {
    r.residual = kappa_poly(p);
    return r;
  }
  AvParams q = p;
  for (int e = 0; e < 4; ++e) {
    if (p.g < p.slopes[e]) {
      r.residual.add_term(bit(e), p.g - p.slopes[e]);
      q.slopes[e] = p.g;
    }
  }
  r.params = std::move(q);
  return r;
}

struct PlacedAv {
  AvParams params;
  Reference reference;
};

struct CaseSplit {
  int case_id = 0;        // 0 when B already avoids every pair
  bool reversed = false;  // solved on complemented inputs (sigma < 0)
  MultilinearPoly residual{4};
  std::vector<PlacedAv> avs;
};

namespace detail {

inline CaseSplit split_nonnegative_sigma(const AvParams& p) {
  const auto& g = p.g;
  const auto& s = p.slopes;
  CaseSplit out;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (sgn(kappa(p, bit(i) | bit(j))) < 0) pairs.emplace_back(i, j);
  auto kap2 = [&](int i, int j) { return kappa(p, bit(i) | bit(j)); };
  auto others = [](Mask used) {
    std::vector<int> v;
    for (int t = 0; t < 4; ++t)
      if (!contains(used, t)) v.push_back(t);
    return v;
  };

  if (pairs.empty()) {
    out.avs.push_back({p, Reference::Forward});
    return out;
  }
  int degree[4] = {0, 0, 0, 0};
  for (auto [i, j] : pairs) ++degree[i], ++degree[j];
  auto mask = [](std::pair<int, int> e) { return bit(e.first) | bit(e.second); };
  for (std::size_t a = 0; a < pairs.size(); ++a)
    for (std::size_t b = a + 1; b < pairs.size(); ++b)
      if ((mask(pairs[a]) & mask(pairs[b])) == 0) throw ForbiddenConfiguration("case_split: two disjoint pairs in B");

  if (pairs.size() == 1) {
    const auto [i, j] = pairs[0];
    out.case_id = 1;
    out.residual.add_term(bit(i) | bit(j), kap2(i, j));
    AvParams t = p;
    t.g = 2 * g - s[i] - s[j];
    t.slopes[i] = g - s[j];
    t.slopes[j] = g - s[i];
    out.avs.push_back({t, Reference::Forward});
    return out;
  }
  if (pairs.size() == 2) {
    int j = 0;
    while (degree[j] != 2) ++j;
    const auto rest = others(bit(j));
    int i = -1, k = -1, l = -1;
    for (int v : rest) {
      if (degree[v] == 1)
        (i < 0 ? i : k) = v;
      else
        l = v;
    }
    out.case_id = 2;
    out.residual.add_term(bit(i) | bit(j), kap2(i, j));
    out.residual.add_term(bit(j) | bit(k), kap2(j, k));
    AvParams t = p;
    t.g = 3 * g - 2 * s[j] - s[i] - s[k];
    t.slopes[i] = g - s[j];
    t.slopes[k] = g - s[j];
    t.slopes[j] = 2 * g - s[i] - s[j] - s[k];
    t.slopes[l] = s[l];
    out.avs.push_back({t, Reference::Forward});
    return out;
  }
  if (pairs.size() == 3) {
    int center = -1;
    for (int v = 0; v < 4; ++v)
      if (degree[v] == 3) center = v;
    if (center >= 0) {
      const int i = center;
      const auto rest = others(bit(i));
      out.case_id = 3;
      for (int m : rest) out.residual.add_term(bit(i) | bit(m), kap2(i, m));
      const Rational c = g - s[i];
      Rational mu = kappa(p, bit(rest[0]) | bit(rest[1]) | bit(rest[2]));
      if (sgn(mu) > 0) mu = 0;
      AvParams t = p;
      t.g = mu + 3 * c;
      t.slopes[i] = mu + 2 * c;
      for (int m : rest) t.slopes[m] = c;
      out.avs.push_back({t, Reference::Forward});
      return out;
    }
    // Triangle: k carries the largest slope among its three vertices.
    int l = 0;
    while (degree[l] != 0) ++l;
    auto tri = others(bit(l));
    int k = tri[0];
    for (int v : tri)
      if (s[v] > s[k]) k = v;
    std::vector<int> ij;
    for (int v : tri)
      if (v != k) ij.push_back(v);
    const int i = ij[0], j = ij[1];
    out.case_id = 4;
    out.residual.add_term(bit(i) | bit(k), -(s[k] - s[j]));
    out.residual.add_term(bit(j) | bit(k), -(s[k] - s[i]));
    AvParams t = p;
    t.g = 2 * (g - s[k]);
    t.slopes[i] = t.slopes[j] = t.slopes[k] = g - s[k];
    t.slopes[l] = s[l];
    const Rational big_k = -kap2(i, j);
    AvParams r = p;
    r.g = big_k;
    r.slopes[i] = r.slopes[j] = r.slopes[k] = big_k;
    r.slopes[l] = 0;
    out.avs.push_back({t, Reference::Forward});
    out.avs.push_back({r, Reference::Backward});
    return out;
  }
  throw ForbiddenConfiguration("case_split: more than three pairs in B");
}

}  // namespace detail

/// Rewrites one AV without singletons in B as bilinear residual terms plus AVs
/// that each fit a reference partition. Inputs with sigma < 0 are handled on
/// complemented inputs, where sigma changes sign.
inline CaseSplit case_split(const AvParams& p) {
  detail::require_k4(p);
  if (sgn(p.g) < 0) throw PreconditionViolation("case_split: empty set lies in B");
  for (int e = 0; e < 4; ++e)
    if (sgn(kappa(p, bit(e))) < 0) throw PreconditionViolation("case_split: B contains a singleton");

  CaseSplit out;
  if (sgn(sigma(p)) >= 0) {
    out = detail::split_nonnegative_sigma(p);
  } else {
    // min(0, kappa_p(x)) = -kappa_q(1-x) + min(0, kappa_q(1-x)) with q reversed.
    const AvParams q = reversed(p);
    SingletonRemoval sr = remove_singletons(q);
    CaseSplit inner = detail::split_nonnegative_sigma(*sr.params);
    MultilinearPoly bar = sr.residual;
    bar += inner.residual;
    bar -= kappa_poly(q);
    out.case_id = inner.case_id;
    out.reversed = true;
    for (const auto& a : inner.avs) {
      // min(0, kappa_a(1-x)) = -kappa_rev(x) + min(0, kappa_rev(x)).
      const AvParams back = reversed(a.params);
      bar += complement_inputs(kappa_poly(back)) * Rational(-1);
      out.avs.push_back({back, a.reference == Reference::Forward ? Reference::Backward : Reference::Forward});
    }
    out.residual = complement_inputs(bar);
  }
  for (const auto& a : out.avs)
    if (!admissible_for(a.params, a.reference))
      throw ForbiddenConfiguration("case_split: output AV cannot be normalized to its reference partition");
  return out;
}

/// The 5x5 system as printed, rows in the printed order.
inline std::array<std::array<int, 5>, 5> printed_reference_matrix() {
  return {{{1, -1, -1, 0, -1}, {1, -1, -1, -1, 0}, {1, 0, -1, -1, -1}, {1, -1, 0, -1, -1}, {1, -1, -1, -1, -1}}};
}

/// Row r of the system for S = S4 \ {r} (r < 4) and S = S4 (r = 4), over the
/// unknowns (g, g_1, ..., g_4).
inline std::array<std::array<int, 5>, 5> reference_matrix() {
  std::array<std::array<int, 5>, 5> m{};
  for (int r = 0; r < 5; ++r) {
    m[r][0] = 1;
    for (int i = 0; i < 4; ++i) m[r][i + 1] = (i == r) ? 0 : -1;
  }
  return m;
}

inline Rational determinant(const std::array<std::array<int, 5>, 5>& m) {
  std::array<std::array<Rational, 5>, 5> a;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) a[r][c] = m[r][c];
  Rational det = 1;
  for (int c = 0; c < 5; ++c) {
    int piv = c;
    while (piv < 5 && sgn(a[piv][c]) == 0) ++piv;
    if (piv == 5) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < 5; ++r) {
      const Rational f = a[r][c] / a[c][c];
      for (int k = c; k < 5; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

namespace detail {

inline std::array<Rational, 5> solve5(const std::array<std::array<int, 5>, 5>& m, const std::array<Rational, 5>& rhs) {
  std::array<std::array<Rational, 6>, 5> a;
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) a[r][c] = m[r][c];
    a[r][5] = rhs[r];
  }
  for (int c = 0; c < 5; ++c) {
    int piv = c;
    while (piv < 5 && sgn(a[piv][c]) == 0) ++piv;
    if (piv == 5) throw Error("reference system is singular");
    std::swap(a[piv], a[c]);
    for (int r = 0; r < 5; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      const Rational f = a[r][c] / a[c][c];
      for (int k = c; k < 6; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::array<Rational, 5> x;
  for (int r = 0; r < 5; ++r) x[r] = a[r][5] / a[r][r];
  return x;
}

inline AvParams normalize_forward(const AvParams& p) {
  std::array<Rational, 5> rhs;
  for (int r = 0; r < 5; ++r) {
    const Mask s = r < 4 ? (0xFu & ~bit(r)) : 0xFu;
    rhs[r] = std::min(Rational(0), kappa(p, s));
  }
  const auto x = solve5(reference_matrix(), rhs);
  return {x[0], {x[1], x[2], x[3], x[4]}};
}

}  // namespace detail

struct NormalizedAv {
  AvParams params;
  MultilinearPoly residual{4};  // linear; zero for the forward direction
};

/// Forward: requires kappa >= 0 on every pair and returns params on B_f that
/// agree with min(0, kappa) everywhere. Backward: requires kappa <= 0 on every
/// pair; it is the forward case on complemented inputs and leaves a linear
/// residual behind.
inline NormalizedAv normalize_to_reference(const AvParams& p, Reference dir) {
  detail::require_k4(p);
  if (!admissible_for(p, dir))
    throw PreconditionViolation(std::string("normalize_to_reference: params violate the ") + reference_name(dir) +
                                " precondition");
  NormalizedAv out;
  if (dir == Reference::Forward) {
    out.params = detail::normalize_forward(p);
    return out;
  }
  const AvParams qf = detail::normalize_forward(reversed(p));
  out.params = reversed(qf);
  out.residual = kappa_poly(p);
  out.residual -= kappa_poly(out.params);
  return out;
}

namespace detail {

inline bool av_has_interactions(const QuadraticPoly& h, int l) {
  const Mask zl = bit(h.n_x() + l);
  const Mask zblock = full_mask(h.n_nodes()) & ~full_mask(h.n_x());
  for (const auto& [s, c] : h.poly().terms())
    if ((s & zl) && (s & zblock & ~zl)) return true;
  return false;
}

inline AvParams extract_params(const QuadraticPoly& h, int l) {
  const int zv = h.n_x() + l;
  AvParams p{h.poly().coeff(bit(zv)), std::vector<Rational>(h.n_x())};
  for (int i = 0; i < h.n_x(); ++i) p.slopes[i] = -h.poly().coeff(bit(i) | bit(zv));
  return p;
}

}  // namespace detail

/// Sums AVs that share a partition. On four variables an AV fitting a
/// reference partition is grouped with it; otherwise the grouping key is its
/// strict partition. AVs with an empty side are removed: never on means no
/// contribution, always on means a linear term. AVs in z_i z_j terms are kept
/// as they are.
inline QuadraticPoly merge_duplicate_avs(const QuadraticPoly& h) {
  if (!h.is_submodular()) throw NotSubmodularQuadratic("merge_duplicate_avs: h is not submodular");
  const int k = h.n_x();
  const int m = h.n_z();
  MultilinearPoly x_part(k);
  for (const auto& [s, c] : h.poly().terms())
    if ((s >> k) == 0) x_part.add_term(s, c);

  struct Slot {
    bool pinned = false;
    int original = -1;
    AvParams params;
  };
  std::vector<Slot> slots;
  std::map<std::vector<bool>, int> by_key;
  std::vector<int> new_index(m, -1);
  for (int l = 0; l < m; ++l) {
    if (detail::av_has_interactions(h, l)) {
      new_index[l] = int(slots.size());
      slots.push_back({true, l, {}});
      continue;
    }
    const AvParams p = detail::extract_params(h, l);
    const Partition part = partition_from_params(p);
    if (part.b_empty()) continue;
    if (part.contains_b(0)) {
      x_part += kappa_poly(p);
      continue;
    }
    std::vector<bool> key = part.in_b;
    if (k == 4) {
      if (fits_partition(p, reference_partition(Reference::Forward)))
        key = reference_partition(Reference::Forward).in_b;
      else if (fits_partition(p, reference_partition(Reference::Backward)))
        key = reference_partition(Reference::Backward).in_b;
    }
    auto [it, inserted] = by_key.try_emplace(key, int(slots.size()));
    if (inserted) {
      slots.push_back({false, l, p});
    } else {
      AvParams& acc = slots[it->second].params;
      acc.g += p.g;
      for (int i = 0; i < k; ++i) acc.slopes[i] += p.slopes[i];
    }
  }

  const int n = k + int(slots.size());
  MultilinearPoly out = x_part.widened(n);
  for (int t = 0; t < int(slots.size()); ++t) {
    const Slot& sl = slots[t];
    const int zv = k + t;
    if (!sl.pinned) {
      out.add_term(bit(zv), sl.params.g);
      for (int i = 0; i < k; ++i) out.add_term(bit(i) | bit(zv), -sl.params.slopes[i]);
      continue;
    }
    const Mask zl = bit(k + sl.original);
    for (const auto& [s, c] : h.poly().terms()) {
      if (!(s & zl)) continue;
      // Each such term is counted once, by the lowest-indexed AV it contains.
      const Mask zs = s >> k;
      if (std::countr_zero(zs) != sl.original) continue;
      Mask mapped = s & full_mask(k);
      for (int l = 0; l < m; ++l)
        if (contains(zs, l)) mapped |= bit(k + new_index[l]);
      out.add_term(mapped, c);
    }
  }
  return QuadraticPoly(std::move(out), k);
}

/// Replaces the AVs of h (four original variables, no z_i z_j terms) by at
/// most two: one on the forward and one on the backward reference partition.
inline QuadraticPoly reduce_av_count(const QuadraticPoly& h) {
  if (h.n_x() != 4) throw PreconditionViolation("reduce_av_count: expects four original variables");
  if (h.has_aux_interactions()) throw PreconditionViolation("reduce_av_count: h has z_i z_j terms");
  if (!h.is_submodular()) throw NotSubmodularQuadratic("reduce_av_count: h is not submodular");
  MultilinearPoly x_part(4);
  for (const auto& [s, c] : h.poly().terms())
    if ((s >> 4) == 0) x_part.add_term(s, c);
  AvParams fwd{0, std::vector<Rational>(4)}, bwd{0, std::vector<Rational>(4)};
  auto accumulate = [](AvParams& acc, const AvParams& p) {
    acc.g += p.g;
    for (int i = 0; i < 4; ++i) acc.slopes[i] += p.slopes[i];
  };
  for (int l = 0; l < h.n_z(); ++l) {
    SingletonRemoval sr = remove_singletons(detail::extract_params(h, l));
    x_part += sr.residual;
    if (!sr.params) continue;
    CaseSplit cs = case_split(*sr.params);
    x_part += cs.residual;
    for (const auto& a : cs.avs) {
      NormalizedAv nv = normalize_to_reference(a.params, a.reference);
      x_part += nv.residual;
      accumulate(a.reference == Reference::Forward ? fwd : bwd, nv.params);
    }
  }
  std::vector<AvParams> kept;
  for (const AvParams* p : {&fwd, &bwd})
    if (!partition_from_params(*p).b_empty()) kept.push_back(*p);
  MultilinearPoly out = x_part.widened(4 + int(kept.size()));
  for (int t = 0; t < int(kept.size()); ++t) {
    out.add_term(bit(4 + t), kept[t].g);
    for (int i = 0; i < 4; ++i) out.add_term(bit(i) | bit(4 + t), -kept[t].slopes[i]);
  }
  return QuadraticPoly(std::move(out), 4);
}

}  // namespace pbqr
