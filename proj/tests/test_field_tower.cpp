#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "spreadsmith/tower.hpp"

using namespace spreadsmith;

namespace {

// GF(p^2) by hand for prime q: a0 + a1 y with y^2 = -(c1 y + c0).
struct PrimeSquareOracle {
  int p, c0, c1;
  explicit PrimeSquareOracle(const GaloisField& F)
      : p(F.p()), c0(F.spec().modulus_q2[0]), c1(F.spec().modulus_q2[1]) {}
  std::pair<int, int> mul(std::pair<int, int> a, std::pair<int, int> b) const {
    const int s0 = a.first * b.first % p;
    const int s1 = (a.first * b.second + a.second * b.first) % p;
    const int s2 = a.second * b.second % p;
    // s2 y^2 = -s2 c1 y - s2 c0
    const int r0 = ((s0 - s2 * c0) % p + p) % p;
    const int r1 = ((s1 - s2 * c1) % p + p) % p;
    return {r0, r1};
  }
};

}  // namespace

TEST(PrimePower, SplitsAndRejects) {
  EXPECT_EQ(prime_power(9), std::make_pair(3, 2));
  EXPECT_EQ(prime_power(16), std::make_pair(2, 4));
  EXPECT_EQ(prime_power(7), std::make_pair(7, 1));
  EXPECT_FALSE(prime_power(6));
  EXPECT_FALSE(prime_power(12));
  EXPECT_FALSE(prime_power(1));
}

TEST(GaloisField, MultiplicationMatchesHandOracleForPrimeQ) {
  for (int q : {3, 5, 7, 11, 13}) {
    const GaloisField F = GaloisField::from_q(q);
    const PrimeSquareOracle O(F);
    for (int a = 0; a < q * q; ++a) {
      for (int b = 0; b < q * q; ++b) {
        const Fq2 x = F.element(a), y = F.element(b);
        const auto r = O.mul({F.low(x), F.high(x)}, {F.low(y), F.high(y)});
        ASSERT_EQ(F.mul(x, y), F.from_pair(r.first, r.second)) << "q=" << q << " " << a << "*" << b;
      }
    }
  }
}

TEST(GaloisField, FieldAxiomsAllOrders) {
  for (int q : {3, 4, 5, 7, 8, 9, 11, 13, 16}) {
    const GaloisField F = GaloisField::from_q(q);
    for (int a = 1; a < F.order(); ++a) {
      const Fq2 x = F.element(a);
      ASSERT_EQ(F.mul(x, F.inv(x)), F.one());
      ASSERT_EQ(F.add(x, F.neg(x)), F.zero());
      ASSERT_EQ(F.pow(x, F.order() - 1), F.one());
    }
    EXPECT_EQ(F.multiplicative_order(F.generator()), F.order() - 1) << q;
    EXPECT_THROW(F.inv(F.zero()), std::domain_error);
  }
}

TEST(GaloisField, FrobeniusFixesSubfieldAndIsInvolutive) {
  const GaloisField F = GaloisField::from_q(5);
  for (int c = 0; c < 5; ++c) EXPECT_EQ(F.frobenius(F.element(c)), F.element(c));
  std::mt19937 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Fq2 x = F.element(static_cast<int>(rng() % 25));
    EXPECT_EQ(F.frobenius(F.frobenius(x)), x);
  }
}

TEST(GaloisField, NormOfGeneratorLiesInSubfieldQ4) {
  const GaloisField F = GaloisField::from_q(4);
  const Fq2 g = F.generator();
  Fq2 direct = F.one();
  for (int i = 0; i < 5; ++i) direct = F.mul(direct, g);
  EXPECT_EQ(F.high(direct), 0);
  EXPECT_EQ(F.mul(F.frobenius(g), g), direct);
}

TEST(GaloisField, NormBasics) {
  for (int q : {3, 4, 5, 7, 8, 9}) {
    const GaloisField F = GaloisField::from_q(q);
    EXPECT_EQ(F.norm(F.one()), F.one());
    for (int c = 0; c < q; ++c) {
      const Fq2 x = F.element(c);
      EXPECT_EQ(F.norm(x), F.mul(x, x));
    }
    int circle = 0;
    for (int a = 1; a < F.order(); ++a) circle += F.norm(F.element(a)) == F.one();
    EXPECT_EQ(circle, q + 1);
  }
}

TEST(GaloisField, RejectsReducibleModulus) {
  EXPECT_THROW(GaloisField(2, 2, std::vector<int>{0, 0, 1}), std::invalid_argument);  // x^2
  EXPECT_THROW(GaloisField(2, 3, std::vector<int>{1, 0, 0, 1}), std::invalid_argument);  // (x+1)(x^2+x+1)
  EXPECT_THROW(GaloisField(6, 1), std::invalid_argument);
}

TEST(GaloisField, DefaultModuliAreLexSmallest) {
  const GaloisField F4 = GaloisField::from_q(4);
  EXPECT_EQ(F4.spec().modulus_q, (std::vector<int>{1, 1, 1}));  // x^2 + x + 1
  const GaloisField F9 = GaloisField::from_q(9);
  EXPECT_EQ(F9.spec().modulus_q, (std::vector<int>{1, 0, 1}));  // x^2 + 1
}

TEST(UnitCircle, SizesAndMembers) {
  {
    const Tower T = Tower::from_q(3);
    const auto& F = T.field();
    ASSERT_EQ(T.units().size(), 4u);
    EXPECT_NE(std::find(T.units().begin(), T.units().end(), F.one()), T.units().end());
    EXPECT_NE(std::find(T.units().begin(), T.units().end(), F.neg(F.one())), T.units().end());
  }
  {
    const Tower T = Tower::from_q(4);
    const auto& F = T.field();
    const std::set<Fq2> U(T.units().begin(), T.units().end());
    ASSERT_EQ(U.size(), 5u);
    for (Fq2 a : U) {
      for (Fq2 b : U) EXPECT_TRUE(U.count(F.mul(a, b)));
    }
  }
  {
    // q = 5: the six g^{4k}; compared with a scan of GF(25)* by norm.
    const Tower T = Tower::from_q(5);
    const auto& F = T.field();
    std::set<Fq2> scan;
    for (int a = 1; a < 25; ++a) {
      if (F.norm(F.element(a)) == F.one()) scan.insert(F.element(a));
    }
    std::set<Fq2> powers;
    for (int k = 0; k < 6; ++k) powers.insert(F.gen_pow(4 * k));
    EXPECT_EQ(scan, powers);
    EXPECT_EQ(std::set<Fq2>(T.units().begin(), T.units().end()), scan);
    for (int k = 0; k < 6; ++k) EXPECT_EQ(T.unit(k), F.gen_pow(4 * k));
  }
}

namespace {

// The three defining conditions of the partition, checked directly.
void expect_valid_partition(const Tower& T) {
  const auto& F = T.field();
  const auto& P = T.partition();
  std::multiset<Fq2> all;
  for (auto* part : {&P.units_part, &P.A, &P.A_inv}) all.insert(part->begin(), part->end());
  std::multiset<Fq2> want;
  for (int c = 1; c < T.q(); ++c) want.insert(F.element(c));
  EXPECT_EQ(all, want);
  ASSERT_EQ(P.A.size(), static_cast<std::size_t>(P.t));
  for (std::size_t i = 0; i < P.A.size(); ++i) {
    EXPECT_EQ(P.A_inv[i], F.inv(P.A[i]));
    if (T.q() % 2) EXPECT_EQ(std::count(P.A.begin(), P.A.end(), F.neg(P.A[i])), 0);
  }
}

}  // namespace

TEST(NormPartition, SmallCases) {
  {
    const Tower T = Tower::from_q(3);
    EXPECT_EQ(T.partition().t, 0);
    EXPECT_TRUE(T.partition().A.empty());
    const auto& F = T.field();
    EXPECT_EQ(std::set<Fq2>(T.partition().units_part.begin(), T.partition().units_part.end()),
              (std::set<Fq2>{F.element(1), F.element(2)}));
  }
  {
    const Tower T = Tower::from_q(5);
    EXPECT_EQ(T.partition().t, 1);
    EXPECT_EQ(T.partition().A, std::vector<Fq2>{T.field().element(2)});
    EXPECT_EQ(T.partition().A_inv, std::vector<Fq2>{T.field().element(3)});
  }
  {
    const Tower T = Tower::from_q(7);
    EXPECT_EQ(T.partition().t, 2);
    // A = {2, 3} meets the three conditions; the greedy scan picks its inverse set.
    const auto& F = T.field();
    const std::set<Fq2> A{F.element(2), F.element(3)};
    std::set<Fq2> covered{F.one(), F.neg(F.one())};
    for (Fq2 a : A) {
      EXPECT_FALSE(A.count(F.neg(a)));
      EXPECT_FALSE(A.count(F.inv(a)));
      covered.insert(a);
      covered.insert(F.inv(a));
    }
    EXPECT_EQ(covered.size(), 6u);
    const auto& built = T.partition().A;
    EXPECT_EQ(std::set<Fq2>(built.begin(), built.end()), (std::set<Fq2>{F.element(4), F.element(5)}));
  }
  for (int q : {3, 4, 5, 7, 8, 9, 11, 13, 16}) expect_valid_partition(Tower::from_q(q));
}

TEST(LambdaSystem, IndexSetSizes) {
  EXPECT_EQ(Tower::from_q(4).lambda().I.size(), 1u);
  {
    const Tower T = Tower::from_q(5);
    EXPECT_EQ(T.units().size(), 6u);
    EXPECT_EQ(T.lambda().I.size(), 2u);
    EXPECT_EQ(T.lambda().I1.size(), 1u);
    EXPECT_EQ(T.lambda().I2.size(), 1u);
  }
  {
    const Tower T = Tower::from_q(7);
    EXPECT_EQ(T.lambda().I.size(), 3u);
    EXPECT_EQ(T.lambda().I1.size(), 1u);
    EXPECT_EQ(T.lambda().I2.size(), 2u);
  }
}

TEST(LambdaSystem, NormsDistinctAndEtaIsOne) {
  for (int q : {3, 4, 5, 7, 8, 9, 11, 13, 16}) {
    const Tower T = Tower::from_q(q);
    const auto& L = T.lambda();
    ASSERT_EQ(L.lambda.size(), static_cast<std::size_t>(q - 1));
    std::set<Fq2> norms(L.norms.begin(), L.norms.end());
    EXPECT_EQ(norms.size(), L.lambda.size());
    EXPECT_EQ(T.field().norm(T.eta()), T.field().one());
    for (int i : L.I) {
      // neither the reciprocal nor (for odd q) the negated norm is in I
      const Fq2 n = L.norms[i];
      const int r = L.index_of_norm(T.field().inv(n));
      if (r != i) EXPECT_FALSE(r >= 0 && L.in_I(r)) << "q=" << q;
    }
    const int expect_I = q % 2 ? (q - 1) / 2 : (q - 2) / 2;
    EXPECT_EQ(static_cast<int>(L.I.size()), expect_I) << q;
  }
}

TEST(LambdaSystem, OverrideIsValidatedAndKept) {
  const GaloisField F = GaloisField::from_q(5);
  std::vector<Fq2> reversed;
  for (int k = 3; k >= 0; --k) reversed.push_back(F.gen_pow(k));
  const Tower T(F, reversed);
  EXPECT_EQ(T.lambda().lambda, reversed);
  EXPECT_EQ(T.eta(), F.one());
  std::vector<Fq2> bad(4, F.one());
  EXPECT_THROW(Tower(F, bad), std::invalid_argument);
}
