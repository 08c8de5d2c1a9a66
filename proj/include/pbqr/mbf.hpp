#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbqr/errors.hpp"
#include "pbqr/poly.hpp"
#include "pbqr/rational.hpp"
#include "pbqr/subset.hpp"

namespace pbqr {

/// Boolean function of k variables as a truth table indexed by SubsetMask.
struct MbfTable {
  int k = 0;
  std::vector<bool> bits;

  MbfTable() = default;
  MbfTable(int k, std::vector<bool> bits) : k(k), bits(std::move(bits)) {
    if (k < 0 || k > kMaxEnumVars) throw std::invalid_argument("MbfTable: bad variable count");
    if (this->bits.size() != (std::size_t{1} << k)) throw std::invalid_argument("MbfTable: table size");
  }

  static MbfTable constant(int k, bool v) { return MbfTable(k, std::vector<bool>(std::size_t{1} << k, v)); }
  static MbfTable projection(int k, int i) {
    std::vector<bool> b(std::size_t{1} << k);
    for (Mask s = 0; s < b.size(); ++s) b[s] = contains(s, i);
    return MbfTable(k, std::move(b));
  }
  // [|S| >= r]
  static MbfTable threshold(int k, int r) {
    std::vector<bool> b(std::size_t{1} << k);
    for (Mask s = 0; s < b.size(); ++s) b[s] = cardinality(s) >= r;
    return MbfTable(k, std::move(b));
  }

  bool operator()(Mask s) const { return bits.at(s); }
  std::size_t size() const { return bits.size(); }

  // Character at position S is t(S).
  std::string to_bitstring() const {
    std::string out;
    for (bool b : bits) out += b ? '1' : '0';
    return out;
  }

  friend bool operator==(const MbfTable&, const MbfTable&) = default;
  friend auto operator<=>(const MbfTable& a, const MbfTable& b) {
    if (a.k != b.k) return a.k <=> b.k;
    return a.to_bitstring() <=> b.to_bitstring();
  }
};

/// Monotone under every single-bit increase.
inline bool is_monotone(const MbfTable& t) {
  for (Mask s = 0; s < t.size(); ++s) {
    if (!t.bits[s]) continue;
    for (int i = 0; i < t.k; ++i)
      if (!contains(s, i) && !t.bits[s | bit(i)]) return false;
  }
  return true;
}

inline constexpr int kMaxMbfEnumVars = 5;

namespace detail {

// A k-variable MBF splits on the last variable into f0 <= f1, both MBFs of
// k-1 variables, so tables are built as f0 | f1 << 2^(k-1).
inline std::vector<std::uint32_t> mbf_words(int k) {
  if (k == 0) return {0u, 1u};
  const auto prev = mbf_words(k - 1);
  const int half = 1 << (k - 1);
  std::vector<std::uint32_t> out;
  for (std::uint32_t f1 : prev)
    for (std::uint32_t f0 : prev)
      if ((f0 & ~f1) == 0) out.push_back(f0 | (f1 << half));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline std::vector<MbfTable> enumerate_mbfs(int k) {
  if (k < 0 || k > kMaxMbfEnumVars) throw SizeLimitExceeded("enumerate_mbfs: k must be in 0..5");
  std::vector<MbfTable> out;
  for (std::uint32_t w : detail::mbf_words(k)) {
    std::vector<bool> b(std::size_t{1} << k);
    for (Mask s = 0; s < b.size(); ++s) b[s] = (w >> s) & 1u;
    out.emplace_back(k, std::move(b));
  }
  return out;
}

/// Constants and projections x_i never help a reduction.
inline bool is_degenerate(const MbfTable& t) {
  if (t == MbfTable::constant(t.k, false) || t == MbfTable::constant(t.k, true)) return true;
  for (int i = 0; i < t.k; ++i)
    if (t == MbfTable::projection(t.k, i)) return true;
  return false;
}

inline std::vector<MbfTable> prune_mbf_set(const std::vector<MbfTable>& ms) {
  std::vector<MbfTable> out;
  for (const auto& t : ms)
    if (!is_degenerate(t)) out.push_back(t);
  return out;
}

/// Split of the power set by the AV state: A where it is 0, B where it is 1.
struct Partition {
  int k = 0;
  std::vector<bool> in_b;

  Partition() = default;
  explicit Partition(const MbfTable& t) : k(t.k), in_b(t.bits) {}
  Partition(int k, std::vector<bool> in_b) : k(k), in_b(std::move(in_b)) {
    if (this->in_b.size() != (std::size_t{1} << k)) throw std::invalid_argument("Partition: table size");
  }

  bool contains_b(Mask s) const { return in_b.at(s); }
  std::vector<Mask> b_family() const { return family(true); }
  std::vector<Mask> a_family() const { return family(false); }
  bool b_empty() const { return std::none_of(in_b.begin(), in_b.end(), [](bool b) { return b; }); }
  bool is_upward_closed() const { return is_monotone(table()); }
  MbfTable table() const { return MbfTable(k, in_b); }

  // B of *this is contained in B of o.
  bool b_subset_of(const Partition& o) const {
    for (Mask s = 0; s < in_b.size(); ++s)
      if (in_b[s] && !o.in_b.at(s)) return false;
    return true;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<Mask> family(bool side) const {
    std::vector<Mask> out;
    for (Mask s = 0; s < in_b.size(); ++s)
      if (in_b[s] == side) out.push_back(s);
    return out;
  }
};

/// Coefficients of the AV part (g - sum_i g_i x_i) z.
struct AvParams {
  Rational g;
  std::vector<Rational> slopes;

  int k() const { return int(slopes.size()); }

  void validate() const {
    for (const auto& gi : slopes)
      if (sgn(gi) < 0) throw PreconditionViolation("AV slope must be non-negative");
  }

  friend bool operator==(const AvParams&, const AvParams&) = default;
};

/// kappa(S) = g - sum_{i in S} g_i
inline Rational kappa(const AvParams& p, Mask s) {
  Rational v = p.g;
  for (int i = 0; i < p.k(); ++i)
    if (contains(s, i)) v -= p.slopes[i];
  return v;
}

inline std::string format_params(const AvParams& p) {
  std::string out = "(" + to_string(p.g) + ",(";
  for (int i = 0; i < p.k(); ++i) out += (i ? "," : "") + to_string(p.slopes[i]);
  return out + "))";
}

/// B = {S : kappa(S) < 0}; kappa = 0 goes to A.
inline Partition partition_from_params(const AvParams& p) {
  p.validate();
  std::vector<bool> b(std::size_t{1} << p.k());
  for (Mask s = 0; s < b.size(); ++s) b[s] = sgn(kappa(p, s)) < 0;
  return Partition(p.k(), std::move(b));
}

/// Non-strict: kappa <= 0 on B and kappa >= 0 on A.
inline bool fits_partition(const AvParams& p, const Partition& part) {
  if (p.k() != part.k) return false;
  for (Mask s = 0; s < part.in_b.size(); ++s) {
    const int sg = sgn(kappa(p, s));
    if (part.in_b[s] ? sg > 0 : sg < 0) return false;
  }
  return true;
}

inline Partition forward_partition(int k = 4) { return Partition(MbfTable::threshold(k, 3)); }
inline Partition backward_partition(int k = 4) { return Partition(MbfTable::threshold(k, 2)); }

/// State of AV `av` (0-based within the z block) that minimizes h for each x,
/// with the other AVs minimized out. Ties go to 0.
inline MbfTable induced_mbf(const QuadraticPoly& h, int av) {
  if (!h.is_submodular()) throw NotSubmodularQuadratic("induced_mbf: h is not submodular");
  if (av < 0 || av >= h.n_z()) throw std::out_of_range("induced_mbf: AV index out of range");
  if (h.n_nodes() > kMaxEnumVars) throw SizeLimitExceeded("induced_mbf: too many variables");
  const int k = h.n_x();
  const Mask zfull = full_mask(h.n_z());
  const auto values = h.poly().values();
  std::vector<bool> b(std::size_t{1} << k);
  for (Mask x = 0; x < b.size(); ++x) {
    std::optional<Rational> best0, best1;
    for (Mask z = 0;; ++z) {
      const Rational& v = values[x | (z << k)];
      auto& best = contains(z, av) ? best1 : best0;
      if (!best || v < *best) best = v;
      if (z == zfull) break;
    }
    b[x] = *best1 < *best0;
  }
  return MbfTable(k, std::move(b));
}

/// Independence-system axioms plus augmentation, checked exhaustively.
inline bool is_matroid(int k, const std::vector<bool>& independent) {
  if (independent.size() != (std::size_t{1} << k) || !independent[0]) return false;
  for (Mask s = 0; s < independent.size(); ++s) {
    if (!independent[s]) continue;
    for (int i = 0; i < k; ++i)
      if (contains(s, i) && !independent[s ^ bit(i)]) return false;
  }
  for (Mask a = 0; a < independent.size(); ++a) {
    if (!independent[a]) continue;
    for (Mask b = 0; b < independent.size(); ++b) {
      if (!independent[b] || cardinality(b) <= cardinality(a)) continue;
      bool augmentable = false;
      for (int e = 0; e < k && !augmentable; ++e)
        augmentable = contains(b, e) && !contains(a, e) && independent[a | bit(e)];
      if (!augmentable) return false;
    }
  }
  return true;
}

/// r when the A side is exactly {S : |S| <= r}.
inline std::optional<int> is_uniform_matroid(const Partition& p) {
  for (int r = 0; r <= p.k; ++r) {
    bool match = true;
    for (Mask s = 0; s < p.in_b.size() && match; ++s) match = (!p.in_b[s]) == (cardinality(s) <= r);
    if (match) return r;
  }
  return std::nullopt;
}

}  // namespace pbqr
