#pragma once

#include <optional>
#include <vector>

#include "pbqr/errors.hpp"
#include "pbqr/poly.hpp"

namespace pbqr {

struct BruteMinimum {
  Rational value;
  Mask argmin = 0;
};

/// Exhaustive minimum; among minimizers the smallest mask wins.
inline BruteMinimum brute_min(const MultilinearPoly& f) {
  if (f.n_vars() > kMaxEnumVars) throw SizeLimitExceeded("brute_min: more than 20 variables");
  BruteMinimum best{evaluate(f, 0), 0};
  const Mask full = f.full();
  for (Mask x = 1; x != 0 && x <= full; ++x) {
    Rational v = evaluate(f, x);
    if (v < best.value) best = {std::move(v), x};
    if (x == full) break;
  }
  return best;
}

struct VerificationRow {
  Mask x = 0;
  Rational f_value;
  Rational h_min;
  Rational gap;  // f(x) - min_z h(x, z)
  Mask z_argmin = 0;
  bool unique_argmin = true;
};

struct VerificationReport {
  int k = 0;
  int m = 0;
  std::vector<VerificationRow> rows;
  bool passed = true;
  // Per AV: its minimizing state as a function of x (ties to 0) and whether
  // that table is monotone.
  std::vector<std::vector<bool>> induced_tables;
  std::vector<bool> induced_monotone;

  bool all_induced_monotone() const {
    for (bool b : induced_monotone)
      if (!b) return false;
    return true;
  }
  Rational l1_gap() const {
    Rational s = 0;
    for (const auto& r : rows) s += abs(r.gap);
    return s;
  }
};

namespace detail {

inline bool table_monotone(const std::vector<bool>& t, int k) {
  for (Mask s = 0; s < t.size(); ++s)
    for (int i = 0; i < k; ++i)
      if (!contains(s, i) && t[s] && !t[s | bit(i)]) return false;
  return true;
}

}  // namespace detail

/// Checks f(x) = min_z h(x, z) on all 2^k labelings. AVs that appear in no
/// term of h cannot change its value, so only the others are enumerated.
inline VerificationReport verify_reduction(const MultilinearPoly& f, const QuadraticPoly& h) {
  const int k = h.n_x();
  const int m = h.n_z();
  if (f.n_vars() > k) throw std::invalid_argument("verify_reduction: f has more variables than the x block of h");
  if (k > kMaxEnumVars) throw SizeLimitExceeded("verify_reduction: too many original variables");

  std::vector<int> active;
  for (int l = 0; l < m; ++l) {
    const Mask b = bit(k + l);
    for (const auto& [s, c] : h.poly().terms())
      if (s & b) {
        active.push_back(l);
        break;
      }
  }
  const int ma = int(active.size());
  if (k + ma > kMaxEnumVars) throw SizeLimitExceeded("verify_reduction: too many variables to enumerate");

  VerificationReport rep;
  rep.k = k;
  rep.m = m;
  rep.induced_tables.assign(m, std::vector<bool>(std::size_t{1} << k, false));
  const MultilinearPoly fw = f.widened(k);
  const Mask za_full = full_mask(ma);
  for (Mask x = 0; x < (Mask{1} << k); ++x) {
    VerificationRow row;
    row.x = x;
    row.f_value = evaluate(fw, x);
    std::optional<Rational> best;
    Mask best_za = 0;
    int ties = 0;
    std::vector<std::optional<Rational>> best_on(ma), best_off(ma);
    for (Mask za = 0;; ++za) {
      Mask z = 0;
      for (int a = 0; a < ma; ++a)
        if (contains(za, a)) z |= bit(active[a]);
      Rational v = h.evaluate(x, z);
      if (!best || v < *best) {
        best = v;
        best_za = za;
        ties = 1;
      } else if (v == *best) {
        ++ties;
      }
      for (int a = 0; a < ma; ++a) {
        auto& slot = contains(za, a) ? best_on[a] : best_off[a];
        if (!slot || v < *slot) slot = v;
      }
      if (za == za_full) break;
    }
    for (int a = 0; a < ma; ++a)
      if (contains(best_za, a)) row.z_argmin |= bit(active[a]);
    for (int a = 0; a < ma; ++a) rep.induced_tables[active[a]][x] = *best_on[a] < *best_off[a];
    row.unique_argmin = ties == 1;
    row.h_min = *best;
    row.gap = row.f_value - row.h_min;
    if (sgn(row.gap) != 0) rep.passed = false;
    rep.rows.push_back(std::move(row));
  }
  for (int l = 0; l < m; ++l) rep.induced_monotone.push_back(detail::table_monotone(rep.induced_tables[l], k));
  return rep;
}

}  // namespace pbqr
