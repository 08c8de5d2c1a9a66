#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support.hpp"

using namespace pbqr;

namespace {

AvParams av(const Rational& g, std::array<Rational, 4> s) { return {g, {s.begin(), s.end()}}; }

// residual(x) + sum of the placed AVs equals min(0, kappa_p(x)) everywhere.
bool preserves(const AvParams& p, const MultilinearPoly& residual, const std::vector<AvParams>& out) {
  for (Mask x = 0; x < 16; ++x) {
    Rational v = ts::eval_terms(residual, x);
    for (const auto& q : out) v += ts::av_value(q, x);
    if (v != ts::av_value(p, x)) return false;
  }
  return true;
}

std::vector<AvParams> params_of(const CaseSplit& cs) {
  std::vector<AvParams> v;
  for (const auto& a : cs.avs) v.push_back(a.params);
  return v;
}

QuadraticPoly with_avs(const MultilinearPoly& x_part, const std::vector<AvParams>& avs) {
  MultilinearPoly h = x_part.widened(4 + int(avs.size()));
  for (int t = 0; t < int(avs.size()); ++t) {
    h.add_term(bit(4 + t), avs[t].g);
    for (int i = 0; i < 4; ++i) h.add_term(bit(i) | bit(4 + t), -avs[t].slopes[i]);
  }
  return QuadraticPoly(std::move(h), 4);
}

bool same_function(const QuadraticPoly& a, const QuadraticPoly& b) {
  for (Mask x = 0; x < (Mask{1} << a.n_x()); ++x)
    if (ts::min_over_z(a, x) != ts::min_over_z(b, x)) return false;
  return true;
}

}  // namespace

TEST_CASE("sigma and reversal") {
  const AvParams p = av(6, {1, 2, 3, 4});
  CHECK(sigma(p) == 2);
  const AvParams q = reversed(p);
  CHECK(q.g == 4);
  for (Mask s = 0; s < 16; ++s) CHECK(kappa(q, s) == -kappa(p, 0xF & ~s));
  CHECK(reversed(q) == p);
  const MultilinearPoly f = parse_poly("1 : 1\n-2 : 2 3", 4);
  for (Mask x = 0; x < 16; ++x) CHECK(ts::eval_terms(complement_inputs(f), x) == ts::eval_terms(f, 0xF & ~x));
}

TEST_CASE("remove_singletons") {
  const SingletonRemoval r = remove_singletons(av(2, {3, 1, 1, 5}));
  REQUIRE(r.params);
  CHECK(*r.params == av(2, {2, 1, 1, 2}));
  CHECK(r.residual == parse_poly("-1 : 1\n-3 : 4", 4));
  CHECK(preserves(av(2, {3, 1, 1, 5}), r.residual, {*r.params}));

  const SingletonRemoval neg = remove_singletons(av(-1, {1, 0, 2, 0}));
  CHECK_FALSE(neg.params);
  CHECK(preserves(av(-1, {1, 0, 2, 0}), neg.residual, {}));

  CHECK_THROWS_AS(remove_singletons(av(1, {-1, 0, 0, 0})), PreconditionViolation);
  CHECK_THROWS_AS(remove_singletons(AvParams{1, {1, 1, 1}}), PreconditionViolation);
}

TEST_CASE("remove_singletons preserves the AV on random params") {
  ts::Random r(81);
  for (int t = 0; t < 300; ++t) {
    const AvParams p = r.av_params();
    const SingletonRemoval sr = remove_singletons(p);
    std::vector<AvParams> out;
    if (sr.params) {
      out.push_back(*sr.params);
      for (int e = 0; e < 4; ++e) REQUIRE(sgn(kappa(*sr.params, bit(e))) >= 0);
    }
    REQUIRE(preserves(p, sr.residual, out));
  }
}

TEST_CASE("case 1") {
  const AvParams p = av(6, {1, 2, 3, 4});
  const CaseSplit cs = case_split(p);
  CHECK(cs.case_id == 1);
  CHECK_FALSE(cs.reversed);
  CHECK(cs.residual == parse_poly("-1 : 3 4", 4));
  REQUIRE(cs.avs.size() == 1);
  CHECK(cs.avs[0].params == av(5, {1, 2, 2, 3}));
  CHECK(preserves(p, cs.residual, params_of(cs)));
}

TEST_CASE("case 2") {
  const AvParams p = av(5, {1, 2, 3, 4});
  const CaseSplit cs = case_split(p);
  CHECK(cs.case_id == 2);
  CHECK(cs.residual == parse_poly("-1 : 2 4\n-2 : 3 4", 4));
  REQUIRE(cs.avs.size() == 1);
  CHECK(cs.avs[0].params == av(2, {1, 1, 1, 1}));
  CHECK(preserves(p, cs.residual, params_of(cs)));
}

TEST_CASE("case 3") {
  const AvParams p = av(5, {4, 2, 2, 2});
  const CaseSplit cs = case_split(p);
  CHECK(cs.case_id == 3);
  CHECK(cs.residual == parse_poly("-1 : 1 2\n-1 : 1 3\n-1 : 1 4", 4));
  REQUIRE(cs.avs.size() == 1);
  CHECK(cs.avs[0].params == av(2, {1, 1, 1, 1}));
  CHECK(preserves(p, cs.residual, params_of(cs)));
}

TEST_CASE("case 4") {
  const AvParams p = av(8, {4, 5, 6, 0});
  const CaseSplit cs = case_split(p);
  CHECK(cs.case_id == 4);
  CHECK(cs.residual == parse_poly("-1 : 1 3\n-2 : 2 3", 4));
  REQUIRE(cs.avs.size() == 2);
  CHECK(cs.avs[0].params == av(4, {2, 2, 2, 0}));
  CHECK(cs.avs[1].params == av(1, {1, 1, 1, 0}));
  CHECK(preserves(p, cs.residual, params_of(cs)));
}

TEST_CASE("case 4 tail written on complemented inputs") {
  // 1 - x1 - x2 - x3 - x1x3 - 2x2x3 + t(x) + min(0, 2 - sum (1 - x_i))
  const AvParams p = av(8, {4, 5, 6, 0});
  const AvParams t = av(4, {2, 2, 2, 0});
  const MultilinearPoly lin = parse_poly("1\n-1 : 1\n-1 : 2\n-1 : 3\n-1 : 1 3\n-2 : 2 3", 4);
  auto ones = [](Mask x) { return cardinality(x & 0b0111); };
  std::set<Mask> literal_misses;
  for (Mask x = 0; x < 16; ++x) {
    const Rational base = ts::eval_terms(lin, x) + ts::av_value(t, x);
    const Rational complemented = std::min(Rational(0), Rational(2 - (3 - ones(x))));
    const Rational literal = std::min(Rational(0), Rational(2 - ones(x)));
    CHECK(base + complemented == ts::av_value(p, x));
    if (base + literal != ts::av_value(p, x)) literal_misses.insert(x & 0b0111);
  }
  // Read on plain inputs the tail is off exactly at {} and {1,2,3}.
  CHECK(literal_misses == std::set<Mask>{0b000, 0b111});
}

TEST_CASE("case_split rejects bad input") {
  CHECK_THROWS_AS(case_split(av(-1, {0, 0, 0, 0})), PreconditionViolation);
  CHECK_THROWS_AS(case_split(av(1, {2, 0, 0, 0})), PreconditionViolation);
}

TEST_CASE("case_split preserves the AV on random params") {
  ts::Random r(82);
  std::set<int> cases;
  int reversed_count = 0;
  for (int t = 0; t < 2000; ++t) {
    const AvParams p = r.av_params(0, 10, 6);
    const SingletonRemoval sr = remove_singletons(p);
    if (!sr.params) continue;
    const CaseSplit cs = case_split(*sr.params);
    cases.insert(cs.case_id);
    reversed_count += cs.reversed;
    MultilinearPoly res = sr.residual;
    res += cs.residual;
    REQUIRE(preserves(p, res, params_of(cs)));
    for (const auto& a : cs.avs) REQUIRE(admissible_for(a.params, a.reference));
    // Bilinear residual terms are non-positive.
    for (const auto& [s, c] : cs.residual.terms())
      if (cardinality(s) == 2) REQUIRE(sgn(c) <= 0);
  }
  CHECK(cases == std::set<int>{0, 1, 2, 3, 4});
  CHECK(reversed_count > 0);
}

TEST_CASE("reference system") {
  CHECK(determinant(reference_matrix()) == 1);
  CHECK(determinant(printed_reference_matrix()) == 1);
  std::multiset<std::array<int, 5>> a, b;
  for (const auto& row : reference_matrix()) a.insert(row);
  for (const auto& row : printed_reference_matrix()) b.insert(row);
  CHECK(a == b);
}

TEST_CASE("normalize to the forward partition") {
  const NormalizedAv n = normalize_to_reference(av(2, {1, 1, 1, 1}), Reference::Forward);
  CHECK(n.params == av(2, {1, 1, 1, 1}));
  CHECK(n.residual.is_zero());
  CHECK_THROWS_AS(normalize_to_reference(av(1, {1, 1, 1, 1}), Reference::Forward), PreconditionViolation);
  CHECK_THROWS_AS(normalize_to_reference(av(5, {1, 1, 1, 1}), Reference::Backward), PreconditionViolation);
}

TEST_CASE("normalization preserves values and is idempotent") {
  ts::Random r(83);
  int done[2] = {0, 0};
  for (int t = 0; t < 3000 && (done[0] < 100 || done[1] < 100); ++t) {
    const AvParams p = r.av_params(-2, 10, 6);
    for (Reference dir : {Reference::Forward, Reference::Backward}) {
      if (!admissible_for(p, dir)) continue;
      ++done[int(dir)];
      const NormalizedAv n = normalize_to_reference(p, dir);
      REQUIRE(preserves(p, n.residual, {n.params}));
      REQUIRE(fits_partition(n.params, reference_partition(dir)));
      for (const auto& [s, c] : n.residual.terms()) REQUIRE(cardinality(s) <= 1);
      const NormalizedAv again = normalize_to_reference(n.params, dir);
      REQUIRE(again.params == n.params);
      REQUIRE(again.residual.is_zero());
    }
  }
  CHECK(done[0] >= 100);
  CHECK(done[1] >= 100);
}

TEST_CASE("merge_duplicate_avs") {
  // Two AVs on |S| >= 3 and one on |S| >= 2.
  const QuadraticPoly h = with_avs(MultilinearPoly(4), {av(2, {1, 1, 1, 1}), av(5, {2, 2, 2, 2}), av(1, {1, 1, 1, 1})});
  const QuadraticPoly m = merge_duplicate_avs(h);
  CHECK(m.n_z() == 2);
  CHECK(same_function(h, m));

  // Never on, and always on.
  const QuadraticPoly e = with_avs(parse_poly("-1 : 1 2", 4), {av(9, {1, 1, 1, 1}), av(-1, {1, 0, 0, 0})});
  const QuadraticPoly me = merge_duplicate_avs(e);
  CHECK(me.n_z() == 0);
  CHECK(same_function(e, me));

  // An AV in a z_i z_j term stays as it is.
  MultilinearPoly zz = with_avs(MultilinearPoly(4), {av(2, {1, 1, 1, 1}), av(2, {1, 1, 1, 1})}).poly();
  zz.add_term(bit(4) | bit(5), -1);
  const QuadraticPoly mz = merge_duplicate_avs(QuadraticPoly(zz, 4));
  CHECK(mz.n_z() == 2);
  CHECK(same_function(QuadraticPoly(zz, 4), mz));
}

TEST_CASE("merge_duplicate_avs on random quadratics") {
  ts::Random r(84);
  for (int t = 0; t < 100; ++t) {
    const int k = r.integer(2, 5), m = r.integer(1, 4);
    MultilinearPoly x_part = r.submodular_quadratic(k);
    MultilinearPoly h = x_part.widened(k + m);
    for (int l = 0; l < m; ++l) {
      h.add_term(bit(k + l), r.rational(-2, 6, 2));
      for (int i = 0; i < k; ++i) h.add_term(bit(i) | bit(k + l), -r.nonneg(3, 2));
    }
    const QuadraticPoly q(h, k);
    const QuadraticPoly merged = merge_duplicate_avs(q);
    REQUIRE(merged.n_z() <= m);
    REQUIRE(merged.is_submodular());
    REQUIRE(same_function(q, merged));
  }
}

TEST_CASE("reduce_av_count") {
  const QuadraticPoly none = reduce_av_count(QuadraticPoly(parse_poly("-1 : 1 2", 4), 4));
  CHECK(none.n_z() == 0);

  const QuadraticPoly fwd = with_avs(MultilinearPoly(4), {av(2, {1, 1, 1, 1}), av(4, {2, 2, 1, 1})});
  const QuadraticPoly rf = reduce_av_count(fwd);
  CHECK(rf.n_z() == 1);
  CHECK(same_function(fwd, rf));

  MultilinearPoly zz = fwd.poly();
  zz.add_term(bit(4) | bit(5), -1);
  CHECK_THROWS_AS(reduce_av_count(QuadraticPoly(zz, 4)), PreconditionViolation);
  CHECK_THROWS_AS(reduce_av_count(QuadraticPoly(parse_poly("-1 : 1 2"), 2)), PreconditionViolation);
}

TEST_CASE("reduce_av_count on random AV sums") {
  ts::Random r(85);
  for (int t = 0; t < 200; ++t) {
    std::vector<AvParams> avs;
    const int m = r.integer(1, 5);
    for (int l = 0; l < m; ++l) avs.push_back(r.av_params());
    const QuadraticPoly h = with_avs(r.submodular_quadratic(4), avs);
    const QuadraticPoly out = reduce_av_count(h);
    REQUIRE(out.n_z() <= 2);
    REQUIRE(out.is_submodular());
    REQUIRE(same_function(h, out));
    // Every remaining AV sits on a reference partition.
    for (int l = 0; l < out.n_z(); ++l) {
      AvParams p{out.poly().coeff(bit(4 + l)), std::vector<Rational>(4)};
      for (int i = 0; i < 4; ++i) p.slopes[i] = -out.poly().coeff(bit(i) | bit(4 + l));
      const bool on_ref = fits_partition(p, reference_partition(Reference::Forward)) ||
                          fits_partition(p, reference_partition(Reference::Backward));
      REQUIRE(on_ref);
    }
  }
}
