#pragma once

// Test-side reference computations. Nothing here calls into the library's
// evaluation, oracle or solver code; only the value types are shared.

#include <optional>
#include <random>
#include <vector>

#include "pbqr/pbqr.hpp"

namespace ts {

using pbqr::Mask;
using pbqr::MultilinearPoly;
using pbqr::QuadraticPoly;
using pbqr::Rational;

// Sum of a_S over the terms whose variables are all 1 in x.
inline Rational eval_terms(const MultilinearPoly& f, Mask x) {
  Rational v = 0;
  for (const auto& [s, c] : f.terms())
    if ((s & ~x) == 0) v += c;
  return v;
}

// AVs that appear in no term are left at 0.
inline Rational min_over_z(const QuadraticPoly& h, Mask x) {
  Mask used = 0;
  for (const auto& [s, c] : h.poly().terms()) used |= s >> h.n_x();
  std::optional<Rational> best;
  for (Mask z = used;; z = (z - 1) & used) {
    Rational v = eval_terms(h.poly(), x | (z << h.n_x()));
    if (!best || v < *best) best = v;
    if (z == 0) break;
  }
  return *best;
}

// f(x) = min_z h(x, z) on every labeling of the first k variables.
inline bool represents(const MultilinearPoly& f, const QuadraticPoly& h) {
  for (Mask x = 0; x < (Mask{1} << h.n_x()); ++x)
    if (eval_terms(f, x) != min_over_z(h, x)) return false;
  return true;
}

inline std::pair<Rational, Mask> brute_minimum(const MultilinearPoly& f) {
  std::pair<Rational, Mask> best{eval_terms(f, 0), 0};
  for (Mask x = 1; x < (Mask{1} << f.n_vars()); ++x) {
    Rational v = eval_terms(f, x);
    if (v < best.first) best = {v, x};
  }
  return best;
}

// f(X) + f(Y) >= f(X | Y) + f(X & Y) for every pair of labelings.
inline bool lattice_submodular(const MultilinearPoly& f) {
  const Mask n = Mask{1} << f.n_vars();
  std::vector<Rational> v(n);
  for (Mask x = 0; x < n; ++x) v[x] = eval_terms(f, x);
  for (Mask a = 0; a < n; ++a)
    for (Mask b = 0; b < n; ++b)
      if (v[a] + v[b] < v[a | b] + v[a & b]) return false;
  return true;
}

inline bool table_monotone(const std::vector<bool>& t) {
  for (Mask a = 0; a < t.size(); ++a)
    for (Mask b = 0; b < t.size(); ++b)
      if ((a & ~b) == 0 && t[a] && !t[b]) return false;
  return true;
}

// min(0, g - sum_{i in x} g_i)
inline Rational av_value(const pbqr::AvParams& p, Mask x) {
  Rational k = p.g;
  for (int i = 0; i < int(p.slopes.size()); ++i)
    if ((x >> i) & 1u) k -= p.slopes[i];
  return k < 0 ? k : Rational(0);
}

class Random {
 public:
  explicit Random(unsigned seed) : rng_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // p/q with |p| <= range * q and q in 1..max_den.
  Rational rational(int lo, int hi, int max_den = 4) {
    const int q = integer(1, max_den);
    Rational r(integer(lo * q, hi * q), q);
    r.canonicalize();
    return r;
  }

  Rational nonneg(int hi, int max_den = 4) { return rational(0, hi, max_den); }

  // Random quadratic with non-positive bilinear coefficients.
  MultilinearPoly submodular_quadratic(int n, double density = 0.5) {
    MultilinearPoly f(n);
    f.add_term(0, rational(-5, 5));
    for (int i = 0; i < n; ++i) f.add_term(Mask{1} << i, rational(-5, 5));
    std::bernoulli_distribution keep(density);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (keep(rng_)) f.add_term((Mask{1} << i) | (Mask{1} << j), -nonneg(4));
    return f;
  }

  // Cubic on three variables with a_ij <= min(0, -a_123).
  MultilinearPoly submodular_cubic() {
    MultilinearPoly f(3);
    const Rational a123 = rational(-3, 3);
    f.add_term(7, a123);
    const Rational cap = a123 > 0 ? Rational(-a123) : Rational(0);
    for (Mask s : {Mask{3}, Mask{5}, Mask{6}}) f.add_term(s, cap - nonneg(3));
    f.add_term(0, rational(-3, 3));
    for (int i = 0; i < 3; ++i) f.add_term(Mask{1} << i, rational(-3, 3));
    return f;
  }

  pbqr::AvParams av_params(int g_lo = -2, int g_hi = 10, int slope_hi = 6) {
    pbqr::AvParams p{rational(g_lo, g_hi, 2), {}};
    for (int i = 0; i < 4; ++i) p.slopes.push_back(nonneg(slope_hi, 2));
    return p;
  }

  std::array<int, 4> permutation() {
    std::array<int, 4> p{1, 2, 3, 4};
    std::shuffle(p.begin(), p.end(), rng_);
    return p;
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

// Weighted sum of catalog generators drawn from groups lo..hi.
struct GeneratorMix {
  MultilinearPoly f{4};
  std::vector<int> groups;
};

inline GeneratorMix random_mix(Random& r, int lo, int hi, int max_terms = 6) {
  GeneratorMix m;
  const int n = r.integer(1, max_terms);
  for (int t = 0; t < n; ++t) {
    const int g = r.integer(lo, hi);
    MultilinearPoly part = pbqr::generator_catalog(g, r.permutation()).f.poly;
    part *= r.rational(1, 4, 3);
    m.f += part;
    m.groups.push_back(g);
  }
  return m;
}

}  // namespace ts
