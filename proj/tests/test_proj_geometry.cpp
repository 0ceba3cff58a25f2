#include <gtest/gtest.h>

#include <random>
#include <set>

#include "spreadsmith/setting.hpp"

using namespace spreadsmith;

namespace {

ProjPoint random_point(const Space& sp, std::mt19937& rng) {
  const int n = sp.field().order();
  for (;;) {
    Vec4 v;
    bool nonzero = false;
    for (auto& x : v) {
      x = sp.field().element(static_cast<int>(rng() % n));
      nonzero = nonzero || x != sp.field().zero();
    }
    if (nonzero) return sp.point(v);
  }
}

ProjLine random_line(const Space& sp, std::mt19937& rng) {
  for (;;) {
    const ProjPoint a = random_point(sp, rng), b = random_point(sp, rng);
    if (a != b) return sp.join(a, b);
  }
}

Collineation random_collineation(const Space& sp, std::mt19937& rng) {
  const auto& F = sp.field();
  for (;;) {
    Collineation c;
    for (auto& x : c.m) x = F.element(static_cast<int>(rng() % F.order()));
    c.twist = static_cast<int>(rng() % (2 * F.m()));
    if (sp.is_invertible(c)) return c;
  }
}

}  // namespace

TEST(Space, PointCountOfPG3_9ByEnumeration) {
  const Tower T = Tower::from_q(3);
  const Space sp(T.field());
  // Oracle: count normalized vectors directly.
  int count = 0;
  for (int lead = 0; lead < 4; ++lead) {
    int free = 1;
    for (int i = lead + 1; i < 4; ++i) free *= 9;
    count += free;
  }
  EXPECT_EQ(count, 820);
  EXPECT_EQ(static_cast<int>(sp.all_points().size()), count);
}

TEST(Space, TauFixesAndMaps) {
  const Tower T = Tower::from_q(3);
  const auto& F = T.field();
  const Space sp(F);
  for (std::size_t i = 0; i < T.lambda().lambda.size(); ++i) {
    const Fq2 a = T.alpha(static_cast<int>(i));
    const ProjPoint U1 = sp.point({F.one(), F.zero(), F.zero(), F.zero()});
    const ProjPoint U3 = sp.point({F.zero(), F.zero(), F.one(), F.zero()});
    EXPECT_EQ(sp.tau(a, U1), U3);
    const ProjPoint Pa = sp.point({F.one(), F.zero(), a, F.zero()});
    EXPECT_EQ(sp.tau(a, Pa), Pa);
    int fixed = 0;
    for (const auto& p : sp.all_points()) fixed += sp.tau(a, p) == p;
    EXPECT_EQ(fixed, 40);  // (q+1)(q^2+1)
    EXPECT_EQ(sp.sigma_points(a).size(), 40u);
  }
}

TEST(Space, SubgeometriesDisjointAndAvoidT1) {
  {
    const Setting S(Tower::from_q(3));
    const auto& a = S.subgeometry(0);
    const auto& b = S.subgeometry(1);
    std::vector<ProjPoint> both;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
    EXPECT_TRUE(both.empty());
  }
  {
    const Setting S(Tower::from_q(4));
    for (std::size_t i = 0; i < S.tower().lambda().lambda.size(); ++i) {
      for (const auto& p : S.space().points_on(S.t1())) EXPECT_FALSE(S.space().in_sigma(S.alpha(static_cast<int>(i)), p));
    }
  }
}

TEST(Space, BaerSublinePredicate) {
  const Setting S(Tower::from_q(3));
  const Space& sp = S.space();
  for (std::size_t i = 0; i < S.tower().lambda().lambda.size(); ++i) {
    const Fq2 a = S.alpha(static_cast<int>(i));
    EXPECT_TRUE(sp.is_baer_subline(S.r_u1(), a));
    EXPECT_FALSE(sp.is_baer_subline(S.t1(), a));
  }
  // Every line of PG(3,9): point count on Sigma_eta against the predicate.
  const Fq2 eta = S.eta();
  std::size_t lines = 0;
  for (const auto& l : sp.all_lines()) {
    ++lines;
    int n = 0;
    for (const auto& p : sp.points_on(l)) n += sp.in_sigma(eta, p);
    ASSERT_TRUE(n == 0 || n == 1 || n == 4) << n;
    ASSERT_EQ(sp.is_baer_subline(l, eta), n == 4);
  }
  EXPECT_EQ(lines, 7462u);  // (81+1)(81+9+1)
}

TEST(Space, PluckerRoundTripAndKlein) {
  const Tower T = Tower::from_q(4);
  const Space sp(T.field());
  std::mt19937 rng(4);
  for (int i = 0; i < 500; ++i) {
    const ProjLine l = random_line(sp, rng);
    EXPECT_EQ(sp.line_from_plucker(l.plucker()), l);
    EXPECT_EQ(sp.klein_form(l.plucker(), l.plucker()), T.field().zero());
  }
  const ProjLine a = random_line(sp, rng), b = random_line(sp, rng);
  EXPECT_EQ(sp.meets(a, b), sp.klein_form(a.plucker(), b.plucker()) == T.field().zero());
}

TEST(Space, PluckerOfT1HasOneNonzeroMinor) {
  const Setting S(Tower::from_q(3));
  const auto& p = S.t1().plucker();
  int nonzero = 0;
  for (Fq2 x : p) nonzero += x != S.field().zero();
  EXPECT_EQ(nonzero, 1);
  EXPECT_NE(p[0], S.field().zero());  // the <U1, U2> minor
}

TEST(Space, KleinRelationOnAllLinesOfPG3_9) {
  const Tower T = Tower::from_q(3);
  const Space sp(T.field());
  for (const auto& l : sp.all_lines()) {
    const auto& p = l.plucker();
    const auto& F = T.field();
    const Fq2 k = F.add(F.sub(F.mul(p[0], p[5]), F.mul(p[1], p[4])), F.mul(p[2], p[3]));
    ASSERT_EQ(k, F.zero());
  }
}

TEST(Collineation, IdentityTauAndIncidence) {
  {
    const Tower T = Tower::from_q(5);
    const Space sp(T.field());
    std::mt19937 rng(5);
    const Collineation tau = sp.tau_collineation(T.eta());
    for (int i = 0; i < 100; ++i) {
      const ProjPoint p = random_point(sp, rng);
      EXPECT_EQ(sp.apply(Space::identity(), p), p);
      EXPECT_EQ(sp.apply(tau, p), sp.tau(T.eta(), p));
    }
  }
  {
    const Tower T = Tower::from_q(4);
    const Space sp(T.field());
    std::mt19937 rng(6);
    for (int i = 0; i < 200; ++i) {
      const Collineation c = random_collineation(sp, rng);
      const ProjLine l = random_line(sp, rng);
      const auto pts = sp.points_on(l);
      const ProjPoint p = pts[rng() % pts.size()];
      ASSERT_TRUE(sp.on(sp.apply(c, p), sp.apply(c, l)));
      const ProjPoint x = random_point(sp, rng);
      ASSERT_EQ(sp.apply(sp.inverse(c), sp.apply(c, x)), x);
      const Collineation d = random_collineation(sp, rng);
      ASSERT_EQ(sp.apply(sp.compose(c, d), x), sp.apply(d, sp.apply(c, x)));
    }
  }
}

TEST(Setting, SigmaEtaIndex) {
  const Setting S(Tower::from_q(3));
  EXPECT_EQ(S.point_count(), 40);
  EXPECT_EQ(S.line_count(), 130);
  for (int l = 0; l < S.line_count(); ++l) {
    ASSERT_EQ(S.points_of_line(l).size(), 4u);
    ASSERT_EQ(S.line_id(S.sigma_line(l)), l);
  }
  for (int p = 0; p < S.point_count(); ++p) ASSERT_EQ(S.lines_through(p).size(), 13u);
  EXPECT_EQ(S.line_id(S.t1()), -1);
}
