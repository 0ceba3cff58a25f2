#include <gtest/gtest.h>

#include <random>
#include <set>

#include "spreadsmith/goodsets.hpp"

using namespace spreadsmith;

namespace {

// Pairwise conditions written out from the candidate values.
bool compatible(const Tower& T, const Candidate& a, const Candidate& b) {
  const auto& F = T.field();
  const Fq2 ai = T.alpha(a.alpha_idx), aj = T.alpha(b.alpha_idx);
  const Fq2 ui = T.unit(a.u_pow), vi = T.unit(a.v_pow), uj = T.unit(b.u_pow), vj = T.unit(b.v_pow);
  if (F.mul(ui, vj) == F.mul(vi, uj)) return false;
  const Fq2 lhs = F.mul(F.mul(ai, ui), F.pow(F.mul(aj, vj), T.q()));
  const Fq2 rhs = F.mul(F.pow(F.mul(ai, vi), T.q()), F.mul(aj, uj));
  return lhs != rhs;
}

// Counts (q+1)-subsets of pairwise compatible candidates in increasing index
// order; independent of the library's slot-based search.
std::uint64_t brute_count(const Tower& T, const std::vector<Candidate>& cands) {
  const std::size_t n = cands.size();
  std::vector<std::vector<char>> ok(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) ok[i][j] = i != j && compatible(T, cands[i], cands[j]);
  }
  const std::size_t k = T.q() + 1;
  std::vector<std::size_t> chosen;
  std::uint64_t total = 0;
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (chosen.size() == k) {
      ++total;
      return;
    }
    for (std::size_t i = from; i < n; ++i) {
      bool fits = true;
      for (std::size_t c : chosen) fits = fits && ok[c][i];
      if (!fits) continue;
      chosen.push_back(i);
      self(self, i + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return total;
}

std::vector<Candidate> raw_candidates(const Tower& T, bool skip_minus_one) {
  std::vector<Candidate> out;
  for (int a : T.lambda().I) {
    if (skip_minus_one && T.norm_is_minus_one(a)) continue;
    for (int u = 0; u <= T.q(); ++u) {
      for (int v = 0; v <= T.q(); ++v) out.push_back({a, u, v});
    }
  }
  return out;
}

}  // namespace

TEST(IsGood, BeutelspacherAndDual) {
  for (int q : {3, 4, 5, 7}) {
    const Tower T = Tower::from_q(q);
    for (int a : T.lambda().I) {
      for (int v = 0; v <= q; ++v) {
        const GoodSet P = beutelspacher(T, a, v);
        EXPECT_TRUE(is_good(T, P.entries).good);
        EXPECT_TRUE(is_good(T, dual(P).entries).good);
        EXPECT_EQ(dual(dual(P)), P);
      }
    }
  }
}

TEST(IsGood, EqualRatiosViolateFirstCondition) {
  const Tower T = Tower::from_q(5);
  const int a = T.lambda().I.front();
  std::vector<Candidate> s = beutelspacher(T, a, 0).entries;
  s[2] = {a, 3, 2};  // u/v = omega, as for (a, 1, 0)
  std::sort(s.begin(), s.end());
  const auto& F = T.field();
  EXPECT_EQ(F.mul(T.unit(1), T.unit(2)), F.mul(T.unit(3), T.unit(0)));
  EXPECT_FALSE(compatible(T, {a, 1, 0}, {a, 3, 2}));
  const GoodCheck c = is_good(T, s);
  EXPECT_FALSE(c.good);
  ASSERT_TRUE(c.violation.has_value());
  EXPECT_NE(c.message().find("violate"), std::string::npos);
}

TEST(IsGood, ValidationRejectsMalformedSets) {
  const Tower T = Tower::from_q(3);
  const int a = T.lambda().I.front();
  EXPECT_THROW(is_good(T, std::vector<Candidate>(4, Candidate{a, 0, 0})), std::invalid_argument);
  EXPECT_THROW(is_good(T, {{a, 0, 0}, {a, 1, 0}, {a, 2, 0}}), std::invalid_argument);
  EXPECT_THROW(is_good(T, {{a, 0, 0}, {a, 1, 0}, {a, 2, 0}, {a, 9, 0}}), std::invalid_argument);
  EXPECT_THROW(is_good(T, {{0, 0, 0}, {0, 1, 0}, {0, 2, 0}, {0, 3, 0}}), std::invalid_argument);  // eta not in I
}

TEST(Epsilon, InjectiveOnCandidatesAndInZ) {
  for (int q : {3, 4}) {
    const Tower T = Tower::from_q(q);
    const PlaneModel M(T);
    std::set<PlanePoint> seen;
    for (const auto& c : all_candidates(T)) {
      const PlanePoint p = epsilon(T, c);
      EXPECT_TRUE(seen.insert(p).second);
      EXPECT_NE(std::find(M.Z().begin(), M.Z().end(), p), M.Z().end());
      EXPECT_EQ(epsilon_inverse(T, p), c);
    }
  }
}

TEST(Epsilon, BeutelspacherMeetsEveryBundleOnce) {
  const Tower T = Tower::from_q(5);
  const auto& F = T.field();
  const int a = T.lambda().I.front();
  const GoodSet P = beutelspacher(T, a, 2);
  std::set<int> bundles;
  for (const auto& c : P.entries) {
    // b = alpha u / (alpha^q v0^q)
    const Fq2 al = T.alpha(a);
    const Fq2 b = F.div(F.mul(al, T.unit(c.u_pow)), F.mul(F.frobenius(al), F.frobenius(T.unit(2))));
    EXPECT_EQ(T.unit_index(b), bundle_of(T, c));
    bundles.insert(bundle_of(T, c));
  }
  EXPECT_EQ(bundles.size(), 6u);
}

TEST(PlaneModel, PredicatesAgreeOnAllSubsetsQ3) {
  const Tower T = Tower::from_q(3);
  const PlaneModel M(T);
  const auto cands = all_candidates(T);
  const std::size_t n = cands.size(), k = 4;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  std::size_t subsets = 0, good = 0;
  for (;;) {
    std::vector<Candidate> s;
    for (auto i : idx) s.push_back(cands[i]);
    const bool g = is_good(T, s).good;
    ASSERT_EQ(g, is_good_geometric(M, s));
    good += g;
    ++subsets;
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  EXPECT_EQ(subsets, 1820u);  // C(16, 4)
  EXPECT_EQ(good, 64u);
}

TEST(PlaneModel, IntersectionProfilesEvenAndOdd) {
  {
    const Tower T = Tower::from_q(4);
    const PlaneModel M(T);
    for (int c = 0; c <= 4; ++c) {
      for (int b = 0; b <= 4; ++b) {
        const auto prof = M.intersection_profile(c, b);
        for (std::size_t i = 0; i < prof.size(); ++i) {
          for (std::size_t j = 0; j < prof.size(); ++j) EXPECT_EQ(prof[i][j], i == j ? 1 : 0);
        }
      }
    }
  }
  for (int q : {5, 7}) {
    const Tower T = Tower::from_q(q);
    const auto& F = T.field();
    const PlaneModel M(T);
    const auto& L = T.lambda();
    for (int c = 0; c <= q; ++c) {
      for (int b = 0; b <= q; ++b) {
        const auto prof = M.intersection_profile(c, b);
        const bool square = F.pow(F.mul(T.unit(c), T.unit(b)), (q + 1) / 2) == F.one();
        int row_total = 0;
        for (std::size_t i = 0; i < L.I.size(); ++i) {
          const bool in_I1 = std::count(L.I1.begin(), L.I1.end(), L.I[i]) > 0;
          for (std::size_t j = 0; j < L.I.size(); ++j) {
            if (i != j) {
              EXPECT_EQ(prof[i][j], 0);
              continue;
            }
            EXPECT_EQ(prof[i][i], in_I1 == square ? 2 : 0) << "q=" << q;
            row_total += prof[i][i];
          }
        }
        EXPECT_EQ(row_total, 2 * static_cast<int>(square ? L.I1.size() : L.I2.size()));
      }
    }
  }
}

TEST(GoodSetCount, MatchesBruteForceOracle) {
  // Frozen values from brute_count.
  const std::pair<int, std::uint64_t> frozen[] = {{3, 64}, {4, 120}, {5, 46080}};
  for (const auto& [q, value] : frozen) {
    const Tower T = Tower::from_q(q);
    EXPECT_EQ(brute_count(T, raw_candidates(T, false)), value) << q;
    EXPECT_EQ(count_good_sets(T), BigInt(value)) << q;
    EXPECT_EQ(permanent(incidence_matrix(T, CandidateFilter::all)), BigInt(value)) << q;
  }
}

TEST(GoodSetCount, FilteredCountQ5) {
  const Tower T = Tower::from_q(5);
  EnumerateOptions o;
  o.filter = CandidateFilter::exclude_norm_minus_one;
  const BigInt n = count_good_sets(T, o);
  EXPECT_EQ(n, BigInt(brute_count(T, raw_candidates(T, true))));
  EXPECT_EQ(n, BigInt(2304));
}

TEST(GoodSetCount, SearchEqualsPermanentQ7) {
  const Tower T = Tower::from_q(7);
  EnumerateOptions o;
  o.jobs = 2;
  EXPECT_EQ(count_good_sets(T, o), BigInt(283262976));
  EXPECT_EQ(permanent(incidence_matrix(T, CandidateFilter::all)), BigInt(283262976));
}

TEST(GoodSetCount, EvenPermanentMatchesFormula) {
  for (int q : {4, 8, 16}) {
    const Tower T = Tower::from_q(q);
    EXPECT_EQ(BigRational(permanent(incidence_matrix(T, CandidateFilter::all))),
              count_formula(q, FormulaVariant::all_even))
        << q;
  }
}

TEST(CountFormula, PrintedValues) {
  EXPECT_EQ(count_formula(4, FormulaVariant::all_even), BigRational(120));
  EXPECT_EQ(count_formula(4, FormulaVariant::all_even_printed), BigRational(3645, 4));
  EXPECT_EQ(count_formula(5, FormulaVariant::all_odd), BigRational(2304));
  EXPECT_EQ(count_formula(3, FormulaVariant::all_odd), BigRational(0));
  EXPECT_EQ(count_formula(7, FormulaVariant::exclude_minus_one_odd), BigRational(147456));
  EXPECT_THROW(count_formula(4, FormulaVariant::all_odd), std::invalid_argument);
}

TEST(CountFormula, OddProductChainAgainstPower) {
  // The strict inequality prod_{i=0}^{(q-1)/2} (q+1-2i)^2 > (q^2-1)^{(q+1)/2}
  // does not hold: equality at q = 3, and the product is smaller from q = 5 on.
  const std::pair<int, std::pair<std::uint64_t, std::uint64_t>> frozen[] = {
      {3, {64, 64}}, {5, {2304, 13824}}, {7, {147456, 5308416}}, {9, {14745600, 3276800000}}};
  for (int q : {3, 5, 7, 9, 11, 13}) {
    BigInt prod = 1, power = 1;
    for (int i = 0; i <= (q - 1) / 2; ++i) prod *= BigInt(q + 1 - 2 * i) * (q + 1 - 2 * i);
    for (int i = 0; i < (q + 1) / 2; ++i) power *= q * q - 1;
    EXPECT_LE(prod, power) << q;
    if (q > 3) EXPECT_LT(prod, power) << q;
    for (const auto& [fq, pair] : frozen) {
      if (fq == q) {
        EXPECT_EQ(prod, BigInt(pair.first));
        EXPECT_EQ(power, BigInt(pair.second));
      }
    }
  }
}

TEST(Enumerate, OrderAndLimitIndependentOfJobs) {
  const Tower T = Tower::from_q(5);
  auto run = [&](int jobs, std::optional<std::uint64_t> limit) {
    std::vector<GoodSet> out;
    EnumerateOptions o;
    o.jobs = jobs;
    o.limit = limit;
    enumerate_good_sets(T, o, [&](const GoodSet& g) { out.push_back(g); });
    return out;
  };
  const auto one = run(1, std::nullopt);
  EXPECT_EQ(one.size(), 46080u);
  EXPECT_EQ(run(4, std::nullopt), one);
  const auto head = run(3, 1000);
  ASSERT_EQ(head.size(), 1000u);
  EXPECT_TRUE(std::equal(head.begin(), head.end(), one.begin()));
  for (std::size_t i = 0; i < one.size(); i += 997) EXPECT_TRUE(is_good(T, one[i].entries).good);
}

TEST(Sample, DeterministicAndGood) {
  const Tower T = Tower::from_q(7);
  const auto a = sample_good_sets(T, 50, 9);
  EXPECT_EQ(a, sample_good_sets(T, 50, 9));
  for (const auto& g : a) EXPECT_TRUE(is_good(T, g.entries).good);
}

TEST(G1, ImagesOfGoodSetsAreGood) {
  for (int q : {3, 4}) {
    const Tower T = Tower::from_q(q);
    EnumerateOptions o;
    enumerate_good_sets(T, o, [&](const GoodSet& g) {
      ASSERT_TRUE(is_good(T, dual(g).entries).good);
      for (int u = 0; u <= q; ++u) {
        for (int v = 0; v <= q; ++v) {
          for (bool sw : {false, true}) {
            const G1Element e{u, v, sw};
            ASSERT_TRUE(is_good(T, apply_G1(T, g, e).entries).good);
            ASSERT_EQ(g1_element(T, to_matrix(T, e)).has_value(), true);
          }
        }
      }
    });
  }
}
