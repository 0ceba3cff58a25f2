#include "spreadsmith/selftest.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "spreadsmith/equivalence.hpp"
#include "spreadsmith/goodsets.hpp"
#include "spreadsmith/parallelisms.hpp"
#include "spreadsmith/spreads.hpp"

namespace spreadsmith {

std::string to_string(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::pass: return "pass";
    case SuiteStatus::fail: return "fail";
    case SuiteStatus::skipped: return "skipped";
  }
  return "unknown";
}

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> list = {
      {"field-arithmetic", "Frobenius is an involutive automorphism, the norm is multiplicative, U has q+1 elements"},
      {"norm-partition", "GF(q)* splits into the unit part, A and A^-1 exactly once, with the stated t"},
      {"lambda-system", "Lambda has distinct norms; I, I1, I2 sizes; reciprocal and negated norms avoid I"},
      {"baer-involutions", "tau_alpha is an involution fixing exactly Sigma_alpha; the Sigma_alpha are disjoint"},
      {"desarguesian-closure", "|D_eta extended| = (q^2+1)^2 and plane sections have size q^2+1 or 2q^2+1 of the stated shape"},
      {"subgeometry-sections", "Baer subplane planes of Sigma_alpha meet Sigma_beta in a D_beta line; other sublines miss Sigma_beta"},
      {"regulus-transversals", "transversals of a regulus of D_eta through r_U1 are t1, t2 or non-D Baer sublines meeting r_U1 once"},
      {"hall-spreads", "every l in L gives a Desarguesian spread with a regulus through r_U1 and a Hall spread; conversely l or l^tau is in L"},
      {"transversal-plane-sections", "S_l_lambda meets pi_beta_v in 2q^2+1 points: r_U1 plus l_lambda, l_lambda^tau or a Baer subplane"},
      {"subplane-intersections", "sigma_beta_v_lambda and Sigma_beta cap pi_beta_v share a point of r_U1 plus a Baer subline"},
      {"pencil-lines-meet-point", "lines of L in pi_beta_v meeting S_l_lambda off R_l_lambda pass through the predicted point of r_U1"},
      {"regulus-coincidence", "R_li = R_lj exactly when the labels differ and u_i v_j = u_j v_i"},
      {"extension-disjointness", "l_j misses S_li off R_li exactly when the labels agree or the bundle values differ"},
      {"exact-cover", "every good set builds a parallelism covering each line of Sigma_eta once"},
      {"non-good-sets-fail", "mutated non-good sets build line families with a double covered or uncovered line"},
      {"group-E", "E has order q^2, is elementary abelian, fixes r_U1 pointwise, and leaves every built parallelism invariant"},
      {"characterization", "characterize recovers the canonical labels of the good set a parallelism was built from"},
      {"predicate-agreement", "the algebraic and the plane-model good-set predicates agree"},
      {"plane-model-partitions", "the lines s_c and the conics C_alpha_b each partition Z_alpha into q+1 parts of size q+1"},
      {"intersection-profiles", "|s_c cap C_alpha_b cap Z_beta| and the totals over I follow the parity case split"},
      {"good-set-counts", "search count = permanent, compared with the closed-form counts"},
      {"distinct-parallelisms", "distinct good sets give distinct line sets, and distinct parallelisms away from norm -1"},
      {"g1-action", "duals and G1 images of good sets are good"},
      {"stabilizer-groups", "the closure of the Gamma_r_U1 generators has order 2mq^2(q^2-1)(q+1) and contains E"},
      {"equivalence", "H images are equivalent via the diagonal witness; group images are found; Beutelspacher P and P^d differ at q = 3"},
      {"classification", "orbit counts under Gamma_r_U1 satisfy orbit-stabilizer and the lower bound"},
  };
  return list;
}

namespace {

class Tally {
 public:
  template <class Why>
  void expect(bool ok, Why&& why) {
    ++checks;
    if (!ok && first.empty()) first = why();
  }
  std::uint64_t checks = 0;
  std::string first;
};

std::string str(const Candidate& c) {
  return "(" + std::to_string(c.alpha_idx) + "," + std::to_string(c.u_pow) + "," + std::to_string(c.v_pow) + ")";
}

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::vector<std::uint32_t> keys_of(const std::vector<ProjPoint>& pts) {
  std::vector<std::uint32_t> k;
  k.reserve(pts.size());
  for (const auto& p : pts) k.push_back(p.key());
  std::sort(k.begin(), k.end());
  return k;
}

bool has(const std::vector<std::uint32_t>& sorted, std::uint32_t k) {
  return std::binary_search(sorted.begin(), sorted.end(), k);
}

// Points of the extended D_eta: which Sigma_alpha (alpha index) or t1 (-1)
// or t2 (-2) they lie in, and which extended line r_P carries them.
struct Closure {
  static constexpr int on_t1 = -1, on_t2 = -2;
  struct Tag {
    int part;
    int r;
  };
  std::unordered_map<std::uint32_t, Tag> tag;
  std::vector<ProjLine> r_lines;
  std::unordered_set<std::uint64_t> r_keys;

  explicit Closure(const Setting& S) {
    const auto& sp = S.space();
    r_lines = ambient_lines(S, S.desarguesian_ids());
    const int n = static_cast<int>(S.tower().lambda().lambda.size());
    for (int r = 0; r < static_cast<int>(r_lines.size()); ++r) {
      r_keys.insert(r_lines[r].key());
      for (const auto& P : sp.points_on(r_lines[r])) {
        int part = 0;
        if (sp.on(P, S.t1())) {
          part = on_t1;
        } else if (sp.on(P, S.t2())) {
          part = on_t2;
        } else {
          part = -3;
          for (int a = 0; a < n; ++a) {
            if (sp.in_sigma(S.alpha(a), P)) part = a;
          }
        }
        tag.emplace(P.key(), Tag{part, r});
      }
    }
  }
  const Tag* find(const ProjPoint& p) const {
    auto it = tag.find(p.key());
    return it == tag.end() ? nullptr : &it->second;
  }
};

// Reguli of D_eta through r_U1, as sorted Sigma_eta line ids.
std::vector<std::vector<int>> reguli_through_r(const Setting& S) {
  const int r = S.r_u1_id();
  std::vector<int> others;
  for (int id : S.desarguesian_ids()) {
    if (id != r) others.push_back(id);
  }
  std::set<std::vector<int>> seen;
  std::vector<bool> done(S.line_count(), false);
  for (std::size_t i = 0; i < others.size(); ++i) {
    for (std::size_t j = i + 1; j < others.size(); ++j) {
      const auto T = common_transversals(S, {r, others[i], others[j]});
      auto R = common_transversals(S, T);
      std::sort(R.begin(), R.end());
      seen.insert(R);
    }
  }
  return {seen.begin(), seen.end()};
}

// Lines of PG(3,q^2) meeting every extended line of R.
std::vector<ProjLine> ambient_transversals(const Setting& S, const std::vector<int>& R) {
  const auto& sp = S.space();
  const auto A = ambient_lines(S, R);
  std::vector<ProjLine> out;
  for (const auto& X : sp.points_on(A[0])) {
    const ProjPlane pi = sp.span(A[1], X);
    const auto Z = sp.meet(A[2], pi);
    if (!Z) continue;
    const ProjLine l = sp.join(X, *Z);
    bool all = true;
    for (const auto& a : A) all = all && sp.meets(l, a);
    if (all) out.push_back(l);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// The Baer subplane through residue points off r: the residue plus the
// points where joins from one residue point meet r.
std::vector<ProjPoint> close_on_line(const Space& sp, const std::vector<ProjPoint>& residue, const ProjLine& r) {
  std::set<ProjPoint> out(residue.begin(), residue.end());
  for (std::size_t i = 1; i < residue.size(); ++i) {
    const auto X = sp.meet(sp.join(residue[0], residue[i]), r);
    if (X) out.insert(*X);
  }
  return {out.begin(), out.end()};
}

// P with third coordinate beta^q alpha / alpha^q v^q.
ProjPoint predicted_point(const Setting& S, int alpha_idx, int beta_idx, int v_pow) {
  const auto& F = S.field();
  const Fq2 a = S.alpha(alpha_idx), b = S.alpha(beta_idx), v = S.tower().unit(v_pow);
  const Fq2 c = F.mul(F.div(F.mul(F.frobenius(b), a), F.frobenius(a)), F.frobenius(v));
  return S.space().point({F.one(), F.zero(), c, F.zero()});
}

std::vector<GoodSet> all_good_sets(const Tower& T, CandidateFilter f = CandidateFilter::all) {
  std::vector<GoodSet> out;
  EnumerateOptions o;
  o.filter = f;
  enumerate_good_sets(T, o, [&](const GoodSet& g) { out.push_back(g); });
  return out;
}

// All good sets when there are few, a uniform sample otherwise.
std::vector<GoodSet> working_family(const Tower& T, std::uint64_t sample, std::uint64_t seed,
                                    std::string& scope, CandidateFilter f = CandidateFilter::all) {
  if (T.q() <= 4) {
    scope = "exhaustive";
    return all_good_sets(T, f);
  }
  scope = "sampled " + std::to_string(sample);
  return sample_good_sets(T, sample, seed, f);
}

SuiteResult finish(SuiteResult r, const Tally& t) {
  r.checks = t.checks;
  if (!t.first.empty()) {
    r.status = SuiteStatus::fail;
    r.detail = t.first + (r.detail.empty() ? "" : "; " + r.detail);
  }
  return r;
}

SuiteResult skip(SuiteResult r, std::string why) {
  r.status = SuiteStatus::skipped;
  r.detail = std::move(why);
  return r;
}

// ---------------------------------------------------------------- field level

SuiteResult field_arithmetic(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& F = S.field();
  const int n = F.order();
  Tally t;
  auto pair_check = [&](Fq2 a, Fq2 b) {
    t.expect(F.norm(F.mul(a, b)) == F.mul(F.norm(a), F.norm(b)), [&] { return "norm not multiplicative"; });
    t.expect(F.frobenius(F.add(a, b)) == F.add(F.frobenius(a), F.frobenius(b)), [&] { return "Frobenius not additive"; });
    t.expect(F.frobenius(F.mul(a, b)) == F.mul(F.frobenius(a), F.frobenius(b)),
             [&] { return "Frobenius not multiplicative"; });
  };
  if (static_cast<std::uint64_t>(n) * n <= 1u << 20) {
    r.scope = "exhaustive";
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) pair_check(F.element(i), F.element(j));
    }
  } else {
    r.scope = "sampled " + std::to_string(o.samples);
    std::mt19937_64 rng(o.seed);
    for (std::uint64_t k = 0; k < o.samples; ++k) pair_check(F.element(pick(rng, n)), F.element(pick(rng, n)));
  }
  for (int i = 0; i < n; ++i) {
    const Fq2 a = F.element(i);
    t.expect(F.frobenius(F.frobenius(a)) == a, [&] { return "Frobenius is not an involution"; });
    t.expect(F.in_subfield(a) == (F.frobenius(a) == a), [&] { return "subfield test disagrees with a^q = a"; });
    t.expect(F.in_subfield(F.norm(a)), [&] { return "norm leaves GF(q)"; });
  }
  t.expect(F.multiplicative_order(F.generator()) == n - 1, [&] { return "generator is not primitive"; });
  const auto& U = S.tower().units();
  t.expect(static_cast<int>(U.size()) == S.q() + 1, [&] { return "|U| != q+1"; });
  std::set<Fq2> distinct(U.begin(), U.end());
  t.expect(distinct.size() == U.size(), [&] { return "U has repeats"; });
  for (Fq2 u : U) t.expect(F.norm(u) == F.one(), [&] { return "unit of norm != 1"; });
  return finish(r, t);
}

SuiteResult norm_partition(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& F = S.field();
  const auto& P = S.tower().partition();
  const int q = S.q();
  Tally t;
  r.scope = "exhaustive";
  std::map<Fq2, int> seen;
  for (Fq2 x : P.units_part) ++seen[x];
  for (Fq2 x : P.A) ++seen[x];
  for (Fq2 x : P.A_inv) ++seen[x];
  t.expect(static_cast<int>(seen.size()) == q - 1, [&] { return "parts do not cover GF(q)*"; });
  for (auto [x, k] : seen) {
    t.expect(k == 1, [&] { return "element in two parts: " + F.to_string(x); });
    t.expect(F.in_subfield(x) && x != F.zero(), [&] { return "part element outside GF(q)*"; });
  }
  const int t_expected = q % 2 == 0 ? (q - 2) / 2 : (q - 3) / 2;
  t.expect(P.t == t_expected && static_cast<int>(P.A.size()) == P.t && static_cast<int>(P.A_inv.size()) == P.t,
           [&] { return "t = " + std::to_string(P.t) + ", expected " + std::to_string(t_expected); });
  for (std::size_t i = 0; i < P.A.size() && i < P.A_inv.size(); ++i) {
    t.expect(F.mul(P.A[i], P.A_inv[i]) == F.one(), [&] { return "A_inv is not the list of inverses"; });
  }
  if (q % 2 == 1) {
    const Fq2 m1 = F.neg(F.one());
    std::set<Fq2> A(P.A.begin(), P.A.end());
    t.expect(!A.count(F.one()) && !A.count(m1), [&] { return "+-1 in A"; });
    for (Fq2 a : P.A) t.expect(!A.count(F.neg(a)), [&] { return "a and -a both in A"; });
  }
  return finish(r, t);
}

SuiteResult lambda_system(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& F = S.field();
  const auto& L = S.tower().lambda();
  const int q = S.q();
  const int n = static_cast<int>(L.lambda.size());
  Tally t;
  r.scope = "exhaustive";
  t.expect(n == q - 1, [&] { return "|Lambda| != q-1"; });
  std::set<Fq2> norms;
  for (Fq2 a : L.lambda) norms.insert(F.norm(a));
  t.expect(static_cast<int>(norms.size()) == n, [&] { return "norms of Lambda repeat"; });
  t.expect(F.norm(S.eta()) == F.one(), [&] { return "eta not on the unit circle"; });
  t.expect(!L.in_I(L.eta_index), [&] { return "eta in I"; });
  const int I_expected = q % 2 == 0 ? (q - 2) / 2 : (q - 1) / 2;
  t.expect(static_cast<int>(L.I.size()) == I_expected,
           [&] { return "|I| = " + std::to_string(L.I.size()) + ", expected " + std::to_string(I_expected); });
  for (int a = 0; a < n; ++a) {
    // Reciprocal norm: exists and is unique.
    int hits = 0;
    for (int b = 0; b < n; ++b) hits += F.mul(L.norms[a], L.norms[b]) == F.one();
    t.expect(hits == 1, [&] { return "reciprocal norm not unique"; });
  }
  const Fq2 m1 = F.neg(F.one());
  for (int a = 0; a < n; ++a) {
    if (L.norms[a] == F.one() || L.norms[a] == m1) continue;
    const int b = L.index_of_norm(F.inv(L.norms[a]));
    if (b < 0 || L.norms[b] == m1) continue;
    t.expect(L.in_I(a) != L.in_I(b), [&] { return "alpha and its reciprocal-norm partner on the same side of I"; });
  }
  if (q % 2 == 1) {
    for (int a : L.I) {
      const int b = L.index_of_norm(F.neg(L.norms[a]));
      t.expect(b < 0 || !L.in_I(b), [&] { return "alpha and the element of norm -N(alpha) both in I"; });
    }
    int m1_idx = L.index_of_norm(m1);
    t.expect(m1_idx >= 0 && L.in_I(m1_idx), [&] { return "norm -1 element not in I"; });
    std::vector<int> i1, i2;
    for (int a : L.I) (F.is_square_in_subfield(L.norms[a]) ? i1 : i2).push_back(a);
    t.expect(i1 == L.I1 && i2 == L.I2, [&] { return "I1/I2 not the square/nonsquare split"; });
    const int e1 = q % 4 == 1 ? (q - 1) / 4 : (q - 3) / 4;
    const int e2 = q % 4 == 1 ? (q - 1) / 4 : (q + 1) / 4;
    t.expect(static_cast<int>(L.I1.size()) == e1 && static_cast<int>(L.I2.size()) == e2, [&] {
      return "|I1|,|I2| = " + std::to_string(L.I1.size()) + "," + std::to_string(L.I2.size()) + ", expected " +
             std::to_string(e1) + "," + std::to_string(e2);
    });
  }
  return finish(r, t);
}

// -------------------------------------------------------------- subgeometries

SuiteResult baer_involutions(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& sp = S.space();
  const auto& L = S.tower().lambda();
  const int q = S.q();
  Tally t;
  std::vector<ProjPoint> pts;
  if (q <= 5) {
    r.scope = "exhaustive";
    pts = sp.all_points();
  } else {
    r.scope = "sampled " + std::to_string(o.samples);
    std::mt19937_64 rng(o.seed);
    const auto& F = S.field();
    while (pts.size() < o.samples) {
      Vec4 v;
      for (auto& c : v) c = F.element(pick(rng, F.order()));
      if (v != Vec4{}) pts.push_back(sp.point(v));
    }
  }
  std::map<std::uint32_t, int> owner;
  for (std::size_t a = 0; a < L.lambda.size(); ++a) {
    const auto sig = sp.sigma_points(L.lambda[a]);
    t.expect(static_cast<int>(sig.size()) == (q * q + 1) * (q + 1), [&] { return "|Sigma_alpha| wrong"; });
    t.expect(sig == S.subgeometry(static_cast<int>(a)), [&] { return "stored Sigma_alpha differs"; });
    for (const auto& P : sig) {
      t.expect(owner.emplace(P.key(), static_cast<int>(a)).second, [&] { return "Sigma_alpha overlap"; });
      t.expect(!sp.on(P, S.t1()) && !sp.on(P, S.t2()), [&] { return "Sigma_alpha meets t1 or t2"; });
    }
    const auto sig_keys = keys_of(sig);
    for (const auto& P : pts) {
      const ProjPoint img = sp.tau(L.lambda[a], P);
      t.expect(sp.tau(L.lambda[a], img) == P, [&] { return "tau_alpha not an involution"; });
      t.expect((img == P) == has(sig_keys, P.key()), [&] { return "fixed points of tau_alpha differ from Sigma_alpha"; });
    }
  }
  return finish(r, t);
}

SuiteResult desarguesian_closure(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& sp = S.space();
  const int q = S.q(), q2 = q * q;
  Tally t;
  const Closure C(S);
  t.expect(static_cast<int>(C.tag.size()) == (q2 + 1) * (q2 + 1), [&] { return "|D_eta extended| != (q^2+1)^2"; });
  int unassigned = 0;
  for (const auto& [k, tag] : C.tag) unassigned += tag.part == -3;
  t.expect(unassigned == 0, [&] { return "extended D_eta is not Sigma_alpha's plus t1, t2"; });

  std::vector<ProjPlane> planes;
  if (q <= 5) {
    r.scope = "exhaustive";
    planes = sp.all_planes();
  } else {
    r.scope = "sampled " + std::to_string(o.samples);
    std::mt19937_64 rng(o.seed);
    const auto& F = S.field();
    while (planes.size() < o.samples) {
      Vec4 v;
      for (auto& c : v) c = F.element(pick(rng, F.order()));
      if (v != Vec4{}) planes.push_back(sp.plane(v));
    }
  }
  std::vector<std::pair<std::uint32_t, Closure::Tag>> all(C.tag.begin(), C.tag.end());
  std::vector<ProjPoint> pts;
  pts.reserve(all.size());
  for (const auto& r_line : C.r_lines) {
    for (const auto& P : sp.points_on(r_line)) pts.push_back(P);
  }
  int large = 0;
  for (const auto& pi : planes) {
    std::vector<const ProjPoint*> sec;
    for (const auto& P : pts) {
      if (sp.on(P, pi)) sec.push_back(&P);
    }
    const int n = static_cast<int>(sec.size());
    t.expect(n == q2 + 1 || n == 2 * q2 + 1, [&] { return "plane section of size " + std::to_string(n); });
    if (n != 2 * q2 + 1) continue;
    ++large;
    std::vector<int> inside;
    for (int i = 0; i < static_cast<int>(C.r_lines.size()); ++i) {
      if (sp.in(C.r_lines[i], pi)) inside.push_back(i);
    }
    t.expect(inside.size() == 1, [&] { return "large section without exactly one r_P"; });
    if (inside.size() != 1) continue;
    std::set<int> parts;
    for (const ProjPoint* P : sec) {
      const auto* tag = C.find(*P);
      if (tag->r != inside[0]) parts.insert(tag->part);
    }
    t.expect(parts.size() == 1, [&] { return "residue spread over several parts"; });
    if (parts.size() == 1 && *parts.begin() >= 0) {
      int in_sigma = 0;
      for (const auto& P : S.subgeometry(*parts.begin())) in_sigma += sp.on(P, pi);
      t.expect(in_sigma == q2 + q + 1, [&] { return "residue not completed by a Baer subplane"; });
    }
  }
  r.detail = std::to_string(large) + " planes with 2q^2+1 points";
  return finish(r, t);
}

SuiteResult subgeometry_sections(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& sp = S.space();
  const int q = S.q(), n = static_cast<int>(S.tower().lambda().lambda.size());
  Tally t;
  const Closure C(S);
  const bool full = q <= 5;
  r.scope = full ? "exhaustive" : "sampled " + std::to_string(o.samples);
  std::mt19937_64 rng(o.seed);

  // Planes: all of them, or spans of three random points of some Sigma_alpha.
  std::vector<ProjPlane> planes;
  if (full) {
    planes = sp.all_planes();
  } else {
    while (planes.size() < o.samples) {
      const auto& sig = S.subgeometry(static_cast<int>(pick(rng, n)));
      const auto& A = sig[pick(rng, sig.size())];
      const auto& B = sig[pick(rng, sig.size())];
      const auto& D = sig[pick(rng, sig.size())];
      if (A == B || A == D || B == D) continue;
      const ProjLine l = sp.join(A, B);
      if (sp.on(D, l)) continue;
      planes.push_back(sp.span(l, D));
    }
  }
  int subplane_planes = 0;
  for (const auto& pi : planes) {
    std::vector<std::vector<int>> r_ids(n);
    for (int a = 0; a < n; ++a) {
      for (const auto& P : S.subgeometry(a)) {
        if (sp.on(P, pi)) r_ids[a].push_back(C.find(P)->r);
      }
    }
    for (int a = 0; a < n; ++a) {
      if (static_cast<int>(r_ids[a].size()) != q * q + q + 1) continue;
      ++subplane_planes;
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        const auto& ids = r_ids[b];
        const bool one_line = static_cast<int>(ids.size()) == q + 1 &&
                              std::all_of(ids.begin(), ids.end(), [&](int x) { return x == ids[0]; });
        t.expect(one_line, [&] { return "plane meets Sigma_beta outside a single D_beta line"; });
      }
    }
  }

  // Lines of Sigma_alpha not in D_alpha miss every other Sigma_beta.
  for (int a = 0; a < n; ++a) {
    const auto& sig = S.subgeometry(a);
    std::set<ProjLine> lines;
    if (full) {
      for (std::size_t i = 0; i < sig.size(); ++i) {
        for (std::size_t j = i + 1; j < sig.size(); ++j) lines.insert(sp.join(sig[i], sig[j]));
      }
      const int expected = (q * q + 1) * (q * q + q + 1);
      t.expect(static_cast<int>(lines.size()) == expected, [&] { return "Sigma_alpha has the wrong number of lines"; });
    } else {
      while (lines.size() < o.samples / static_cast<std::uint64_t>(n) + 1) {
        const auto i = pick(rng, sig.size()), j = pick(rng, sig.size());
        if (i != j) lines.insert(sp.join(sig[i], sig[j]));
      }
    }
    for (const auto& l : lines) {
      if (C.r_keys.count(l.key())) continue;
      int own = 0, other = 0;
      for (const auto& P : sp.points_on(l)) {
        const auto* tag = C.find(P);
        if (!tag || tag->part < 0) continue;
        (tag->part == a ? own : other) += 1;
      }
      t.expect(own == q + 1, [&] { return "line of Sigma_alpha without q+1 points"; });
      t.expect(other == 0, [&] { return "Baer subline outside D_alpha meets another Sigma_beta"; });
    }
  }
  r.detail = std::to_string(subplane_planes) + " subplane sections checked";
  return finish(r, t);
}

SuiteResult regulus_transversals(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& sp = S.space();
  const int q = S.q();
  Tally t;
  r.scope = "exhaustive";
  const Closure C(S);
  const auto reguli = reguli_through_r(S);
  t.expect(static_cast<int>(reguli.size()) == q * (q + 1), [&] { return "wrong number of reguli through r_U1"; });
  const auto& D = S.desarguesian_ids();
  for (const auto& R : reguli) {
    t.expect(static_cast<int>(R.size()) == q + 1 && std::includes(D.begin(), D.end(), R.begin(), R.end()),
             [&] { return "regulus not q+1 lines of D_eta"; });
    const auto T = ambient_transversals(S, R);
    t.expect(static_cast<int>(T.size()) == q * q + 1, [&] { return "regulus without q^2+1 transversals"; });
    for (const auto& l : T) {
      t.expect(l != S.r_u1() && sp.meets(l, S.r_u1()), [&] { return "transversal does not meet r_U1 in one point"; });
      if (l == S.t1() || l == S.t2()) continue;
      std::map<int, int> per_part;
      for (const auto& P : sp.points_on(l)) {
        const auto* tag = C.find(P);
        if (tag && tag->part >= 0) ++per_part[tag->part];
      }
      t.expect(per_part.size() == 1 && per_part.begin()->second == q + 1,
               [&] { return "transversal is not a Baer subline of exactly one Sigma_alpha"; });
      t.expect(!C.r_keys.count(l.key()), [&] { return "transversal is a line of D_alpha"; });
    }
    t.expect(std::binary_search(T.begin(), T.end(), S.t1()) && std::binary_search(T.begin(), T.end(), S.t2()),
             [&] { return "t1 or t2 missing among the transversals"; });
  }
  return finish(r, t);
}

SuiteResult hall_spreads(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& sp = S.space();
  const int q = S.q();
  Tally t;
  r.scope = "exhaustive";
  const auto& D = S.desarguesian_ids();
  const int I = static_cast<int>(S.tower().lambda().I.size());
  t.expect(static_cast<int>(S.lines_L().size()) == I * q * (q + 1) * (q + 1), [&] { return "|L| != |I| q (q+1)^2"; });
  for (const auto& l : S.lines_L()) {
    const Spread Sl = spread_from_transversal(S, l);
    t.expect(is_spread(S, Sl.lines).ok, [&] { return "S_l is not a spread"; });
    const Regulus R = regulus_of(S, l);
    std::vector<int> cap;
    std::set_intersection(D.begin(), D.end(), Sl.lines.begin(), Sl.lines.end(), std::back_inserter(cap));
    t.expect(cap == R.lines && static_cast<int>(cap.size()) == q + 1, [&] { return "D_eta cap S_l is not R_l"; });
    t.expect(std::binary_search(cap.begin(), cap.end(), S.r_u1_id()), [&] { return "R_l misses r_U1"; });
    t.expect(opposite_of(S, cap).has_value(), [&] { return "R_l is not a regulus"; });
    const auto T = ambient_transversals(S, R.lines);
    t.expect(std::binary_search(T.begin(), T.end(), l), [&] { return "l is not a transversal of R_l"; });
    const Spread H = hall_spread(S, l);
    t.expect(is_spread(S, H.lines).ok, [&] { return "Hall spread is not a spread"; });
  }
  for (const auto& R : reguli_through_r(S)) {
    for (const auto& l : ambient_transversals(S, R)) {
      if (l == S.t1() || l == S.t2()) continue;
      // Sublines of Sigma_eta do not give spreads of Sigma_eta.
      bool meets_eta = false;
      for (const auto& P : sp.points_on(l)) meets_eta = meets_eta || sp.in_sigma(S.eta(), P);
      if (meets_eta) continue;
      const bool in_L = S.L_index(l) >= 0 || S.L_index(sp.tau(S.eta(), l)) >= 0;
      t.expect(in_L, [&] { return "transversal of a regulus through r_U1 with neither l nor l^tau in L"; });
    }
  }
  return finish(r, t);
}

// ---------------------------------------------------- sections of S_l_lambda

struct LambdaCase {
  int alpha, lambda, beta, v;
};

enum class SectionShape { with_l, with_l_tau, subplane };

SectionShape expected_shape(const Setting& S, const LambdaCase& c) {
  if (c.beta == c.alpha && c.v == 0) return SectionShape::with_l;
  if (S.q() % 2 == 1 && S.tower().norm_is_minus_one(c.alpha) && c.beta == c.alpha &&
      c.v == S.tower().minus_one_unit()) {
    return SectionShape::with_l_tau;
  }
  return SectionShape::subplane;
}

template <class Fn>
void for_lambda_cases(const Setting& S, Fn fn) {
  const auto& I = S.tower().lambda().I;
  for (int a : I) {
    for (int lam = 0; lam < S.q(); ++lam) {
      const ProjLine l = l_lambda(S, a, lam);
      const Spread Sl = spread_from_transversal(S, l);
      const auto lines = ambient_lines(S, Sl.lines);
      for (int b : I) {
        for (int v = 0; v <= S.q(); ++v) fn(LambdaCase{a, lam, b, v}, l, Sl, lines);
      }
    }
  }
}

SuiteResult transversal_plane_sections(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& sp = S.space();
  const int q2 = S.q() * S.q();
  Tally t;
  r.scope = "exhaustive";
  const auto r_keys = keys_of(sp.points_on(S.r_u1()));
  for_lambda_cases(S, [&](const LambdaCase& c, const ProjLine& l, const Spread&, const std::vector<ProjLine>& lines) {
    const ProjPlane pi = S.plane_pi(c.beta, c.v);
    const auto sec = plane_section(S, lines, pi);
    t.expect(static_cast<int>(sec.size()) == 2 * q2 + 1, [&] { return "section size " + std::to_string(sec.size()); });
    std::vector<ProjPoint> residue;
    int on_r = 0;
    for (const auto& P : sec) {
      if (has(r_keys, P.key())) {
        ++on_r;
      } else {
        residue.push_back(P);
      }
    }
    t.expect(on_r == q2 + 1, [&] { return "r_U1 not inside the section"; });
    const ProjLine lt = sp.tau(S.eta(), l);
    switch (expected_shape(S, c)) {
      case SectionShape::with_l:
        t.expect(sp.in(l, pi), [&] { return "l_lambda not in pi_alpha"; });
        for (const auto& P : residue) t.expect(sp.on(P, l), [&] { return "residue off l_lambda"; });
        break;
      case SectionShape::with_l_tau:
        t.expect(sp.in(lt, pi), [&] { return "l_lambda^tau not in pi_{-alpha}"; });
        for (const auto& P : residue) t.expect(sp.on(P, lt), [&] { return "residue off l_lambda^tau"; });
        break;
      case SectionShape::subplane:
        t.expect(!sp.in(l, pi) && !sp.in(lt, pi), [&] { return "l_lambda or its image inside pi_beta_v"; });
        t.expect(!residue.empty() && is_baer_subplane(S, close_on_line(sp, residue, S.r_u1())),
                 [&] { return "residue is not a Baer subplane minus a subline"; });
        break;
    }
  });
  return finish(r, t);
}

SuiteResult subplane_intersections(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& sp = S.space();
  const int q = S.q();
  Tally t;
  r.scope = "exhaustive over the subplane cases";
  const auto r_keys = keys_of(sp.points_on(S.r_u1()));
  int cases = 0, on_subline = 0;
  for_lambda_cases(S, [&](const LambdaCase& c, const ProjLine&, const Spread&, const std::vector<ProjLine>& lines) {
    if (c.v == 0 || expected_shape(S, c) != SectionShape::subplane) return;
    ++cases;
    const ProjPlane pi = S.plane_pi(c.beta, c.v);
    std::vector<ProjPoint> residue;
    for (const auto& P : plane_section(S, lines, pi)) {
      if (!has(r_keys, P.key())) residue.push_back(P);
    }
    if (residue.empty()) return;
    const auto sigma = close_on_line(sp, residue, S.r_u1());
    std::vector<ProjPoint> base;
    for (const auto& P : S.subgeometry(c.beta)) {
      if (sp.on(P, pi)) base.push_back(P);
    }
    std::vector<ProjPoint> common;
    std::set_intersection(sigma.begin(), sigma.end(), base.begin(), base.end(), std::back_inserter(common));
    const ProjPoint P = predicted_point(S, c.alpha, c.beta, c.v);
    auto it = std::find(common.begin(), common.end(), P);
    t.expect(it != common.end(), [&] { return "predicted point not shared"; });
    if (it == common.end() || common.size() < 3) return;
    std::vector<ProjPoint> rest(common.begin(), common.end());
    rest.erase(rest.begin() + (it - common.begin()));
    const ProjLine s = sp.join(rest[0], rest[1]);
    bool collinear = true;
    for (const auto& X : rest) collinear = collinear && sp.on(X, s);
    // Degenerate shape: the shared points are q+1 points of one subline
    // through the predicted point.
    if (static_cast<int>(common.size()) == q + 1 && collinear && sp.on(P, s)) ++on_subline;
    t.expect(static_cast<int>(common.size()) == q + 2 && collinear && !sp.on(P, s), [&] {
      return "alpha=" + std::to_string(c.alpha) + " lambda=" + std::to_string(c.lambda) + " beta=" +
             std::to_string(c.beta) + " v=" + std::to_string(c.v) + ": subplanes share " +
             std::to_string(common.size()) + " points";
    });
  });
  r.detail = std::to_string(cases) + " cases, " + std::to_string(on_subline) +
             " with the predicted point on the shared subline";
  return finish(r, t);
}

SuiteResult pencil_lines_meet_point(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& sp = S.space();
  Tally t;
  r.scope = "exhaustive";
  std::uint64_t hits = 0;
  for_lambda_cases(S, [&](const LambdaCase& c, const ProjLine& l, const Spread&, const std::vector<ProjLine>& lines) {
    const ProjPlane pi = S.plane_pi(c.beta, c.v);
    const auto Sbar = keys_of(extension_points(S, lines));
    const auto Rbar = keys_of(extension_points(S, ambient_lines(S, regulus_of(S, l).lines)));
    const ProjPoint P = predicted_point(S, c.alpha, c.beta, c.v);
    for (const auto& m : S.lines_L()) {
      if (m == l || !sp.in(m, pi)) continue;
      bool meets = false;
      for (const auto& X : sp.points_on(m)) {
        if (has(Sbar, X.key()) && !has(Rbar, X.key())) meets = true;
      }
      if (!meets) continue;
      ++hits;
      t.expect(sp.on(P, m), [&] { return "line of L meeting S_l off R_l misses the predicted point"; });
    }
  });
  r.detail = std::to_string(hits) + " meeting lines";
  return finish(r, t);
}

// ---------------------------------------------------------- pencil pair tests
//
// Verdicts are per pair of pencil labels: "every line of one pencil and
// every distinct line of the other". Per line pair only one direction holds;
// the converse depends on lambda and is reported as counts.

struct PairData {
  std::vector<std::vector<int>> regulus;        // per L index
  std::vector<std::vector<std::uint32_t>> off;  // extended S_l minus extended R_l
};

PairData pair_data(const Setting& S, bool with_off) {
  PairData d;
  for (const auto& l : S.lines_L()) {
    const Regulus R = regulus_of(S, l);
    d.regulus.push_back(R.lines);
    if (!with_off) continue;
    const auto Sbar = keys_of(extension_points(S, ambient_lines(S, spread_from_transversal(S, l).lines)));
    const auto Rbar = keys_of(extension_points(S, ambient_lines(S, R.lines)));
    std::vector<std::uint32_t> off;
    std::set_difference(Sbar.begin(), Sbar.end(), Rbar.begin(), Rbar.end(), std::back_inserter(off));
    d.off.push_back(std::move(off));
  }
  return d;
}

template <class Fn>
std::string for_pencil_pairs(const Setting& S, const SuiteOptions& o, Fn fn) {
  const std::uint64_t n = S.lines_L().size() / S.q();
  if (n * n <= 100000) {
    for (std::uint64_t a = 0; a < n; ++a) {
      for (std::uint64_t b = 0; b < n; ++b) fn(static_cast<int>(a), static_cast<int>(b));
    }
    return "exhaustive over " + std::to_string(n * n) + " label pairs";
  }
  std::mt19937_64 rng(o.seed);
  for (std::uint64_t k = 0; k < o.samples; ++k) fn(static_cast<int>(pick(rng, n)), static_cast<int>(pick(rng, n)));
  return "sampled " + std::to_string(o.samples) + " label pairs";
}

struct LinePairCounts {
  std::uint64_t condition_fails = 0;  // line pairs where the algebraic condition fails
  std::uint64_t still_holds = 0;      // ... but the geometric property still holds
  std::string text(const std::string& what) const {
    return std::to_string(still_holds) + " of " + std::to_string(condition_fails) +
           " line pairs failing the condition still have " + what;
  }
};

SuiteResult regulus_coincidence(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& F = S.field();
  const auto& T = S.tower();
  const int q = S.q();
  Tally t;
  const PairData d = pair_data(S, false);
  const auto& labels = S.labels_L();
  LinePairCounts lines;
  r.scope = for_pencil_pairs(S, o, [&](int A, int B) {
    const Candidate a = labels[A * q], b = labels[B * q];
    const Fq2 det = F.sub(F.mul(T.unit(a.u_pow), T.unit(b.v_pow)), F.mul(T.unit(b.u_pow), T.unit(a.v_pow)));
    const bool condition = A == B || det != F.zero();
    bool all_differ = true;
    for (int i = A * q; i < A * q + q; ++i) {
      for (int j = B * q; j < B * q + q; ++j) {
        if (i == j) continue;
        const bool differ = d.regulus[i] != d.regulus[j];
        all_differ = all_differ && differ;
        if (!condition) {
          ++lines.condition_fails;
          lines.still_holds += differ;
        }
      }
    }
    t.expect(all_differ == condition,
             [&] { return "pencils " + str(a) + " and " + str(b) + " disagree with the condition"; });
  });
  r.detail = lines.text("distinct reguli");
  return finish(r, t);
}

SuiteResult extension_disjointness(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& F = S.field();
  const auto& T = S.tower();
  const auto& sp = S.space();
  const int q = S.q();
  Tally t;
  const PairData d = pair_data(S, true);
  const auto& labels = S.labels_L();
  std::vector<std::vector<std::uint32_t>> line_pts;
  for (const auto& l : S.lines_L()) line_pts.push_back(keys_of(sp.points_on(l)));
  LinePairCounts lines;
  r.scope = for_pencil_pairs(S, o, [&](int A, int B) {
    const Candidate a = labels[A * q], b = labels[B * q];
    const Fq2 al = T.alpha(a.alpha_idx), be = T.alpha(b.alpha_idx);
    const Fq2 lhs = F.mul(F.mul(al, T.unit(a.u_pow)), F.frobenius(F.mul(be, T.unit(b.v_pow))));
    const Fq2 rhs = F.mul(F.frobenius(F.mul(al, T.unit(a.v_pow))), F.mul(be, T.unit(b.u_pow)));
    const bool condition = A == B || lhs != rhs;
    bool all_disjoint = true;
    for (int i = A * q; i < A * q + q; ++i) {
      for (int j = B * q; j < B * q + q; ++j) {
        if (i == j) continue;
        bool disjoint = true;
        for (auto k : line_pts[j]) disjoint = disjoint && !has(d.off[i], k);
        all_disjoint = all_disjoint && disjoint;
        if (!condition) {
          ++lines.condition_fails;
          lines.still_holds += disjoint;
        }
      }
    }
    t.expect(all_disjoint == condition,
             [&] { return "pencils " + str(a) + " and " + str(b) + " disagree with the condition"; });
  });
  r.detail = lines.text("l_j disjoint from S_li off R_li");
  return finish(r, t);
}

// ------------------------------------------------------------- parallelisms

SuiteResult exact_cover(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  Tally t;
  const HallTable table(S);
  const auto family = working_family(S.tower(), o.parallelism_samples, o.seed, r.scope);
  const int q = S.q();
  for (const auto& gs : family) {
    const Parallelism p = build_parallelism(S, gs, &table);
    const Certificate c = verify_parallelism(S, p);
    t.expect(c.ok && c.covered_once == S.line_count() && c.spread_count == q * q + q + 1,
             [&] { return "good set " + str(gs.entries.front()) + "... does not give a parallelism"; });
  }
  t.expect((q * q + q + 1) * (q * q + 1) == S.line_count(), [&] { return "cover arithmetic fails"; });
  r.detail = std::to_string(family.size()) + " good sets";
  return finish(r, t);
}

SuiteResult non_good_sets_fail(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  Tally t;
  const auto& T = S.tower();
  const HallTable table(S);
  const auto base = sample_good_sets(T, 40, o.seed);
  const auto cands = all_candidates(T);
  std::mt19937_64 rng(o.seed ^ 0x9e3779b97f4a7c15ull);
  int made = 0;
  for (const auto& gs : base) {
    std::vector<Candidate> m = gs.entries;
    for (int attempt = 0; attempt < 100; ++attempt) {
      std::vector<Candidate> trial = m;
      trial[pick(rng, trial.size())] = cands[pick(rng, cands.size())];
      auto sorted = trial;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      if (is_good(T, trial).good) continue;
      m = trial;
      break;
    }
    if (is_good(T, m).good) continue;
    ++made;
    const Certificate c = verify_parallelism(S, build_line_family(S, m, &table));
    t.expect(!c.ok && (c.first_double >= 0 || c.first_uncovered >= 0),
             [&] { return "non-good set " + str(m.front()) + "... still covers exactly"; });
  }
  t.expect(made >= 20, [&] { return "fewer than 20 mutated sets"; });
  r.scope = "sampled " + std::to_string(made);
  return finish(r, t);
}

SuiteResult group_E_suite(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& sp = S.space();
  const int q = S.q();
  Tally t;
  const auto E = group_E(S);
  t.expect(static_cast<int>(E.size()) == q * q, [&] { return "|E| != q^2"; });
  std::set<std::vector<int>> perms;
  for (const auto& e : E) {
    std::vector<int> p;
    for (int i = 0; i < S.point_count(); ++i) p.push_back(S.point_id(sp.apply(e, S.sigma_point(i))));
    perms.insert(p);
    Collineation pow = e;
    for (int k = 1; k < S.field().p(); ++k) pow = sp.compose(pow, e);
    t.expect(pow == Space::identity(), [&] { return "element of E without order p"; });
    for (const auto& P : sp.points_on(S.r_u1())) t.expect(sp.apply(e, P) == P, [&] { return "E moves a point of r_U1"; });
    t.expect(map_lines(S, e, S.desarguesian_ids()) == S.desarguesian_ids(), [&] { return "E moves D_eta"; });
  }
  t.expect(static_cast<int>(perms.size()) == q * q, [&] { return "E elements coincide on Sigma_eta"; });
  for (const auto& a : E) {
    for (const auto& b : E) t.expect(sp.compose(a, b) == sp.compose(b, a), [&] { return "E is not abelian"; });
  }
  const HallTable table(S);
  const bool full = q <= 4;
  const auto family = working_family(S.tower(), o.parallelism_samples, o.seed, r.scope);
  for (const auto& gs : family) {
    const Parallelism p = build_parallelism(S, gs, &table);
    t.expect(is_E_invariant(S, p, full), [&] { return "parallelism not E-invariant"; });
  }
  return finish(r, t);
}

SuiteResult characterization(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  Tally t;
  const HallTable table(S);
  const auto family = working_family(S.tower(), o.parallelism_samples, o.seed, r.scope);
  for (const auto& gs : family) {
    const auto back = characterize(S, build_parallelism(S, gs, &table), &table);
    const auto* got = std::get_if<GoodSet>(&back);
    t.expect(got && *got == canonical_labels(S.tower(), gs), [&] {
      return got ? "characterize returned other labels"
                 : "characterize failed: " + to_string(std::get<CharacterizeFailure>(back).error);
    });
  }
  return finish(r, t);
}

// ------------------------------------------------------------- plane model

SuiteResult predicate_agreement(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& T = S.tower();
  const PlaneModel M(T);
  const auto cands = all_candidates(T);
  const int k = S.q() + 1;
  const std::uint64_t N = cands.size();
  Tally t;
  std::uint64_t good = 0;
  auto check = [&](const std::vector<Candidate>& sub) {
    const bool a = is_good(T, sub).good;
    good += a;
    t.expect(a == is_good_geometric(M, sub), [&] { return "predicates disagree on a set starting " + str(sub.front()); });
  };
  // C(N, k) when it is small enough.
  double subsets = 1;
  for (int i = 0; i < k; ++i) subsets = subsets * static_cast<double>(N - i) / (i + 1);
  if (subsets <= 2e6) {
    r.scope = "exhaustive";
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<Candidate> sub(k);
    while (true) {
      for (int i = 0; i < k; ++i) sub[i] = cands[idx[i]];
      check(sub);
      int i = k - 1;
      while (i >= 0 && idx[i] == static_cast<int>(N) - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  } else {
    const std::uint64_t n = o.samples * 10;
    r.scope = "sampled " + std::to_string(n) + " subsets";
    std::mt19937_64 rng(o.seed);
    std::vector<int> pool(N);
    std::vector<Candidate> sub(k);
    for (std::uint64_t s = 0; s < n; ++s) {
      for (std::uint64_t i = 0; i < N; ++i) pool[i] = static_cast<int>(i);
      for (int i = 0; i < k; ++i) {
        const auto j = i + pick(rng, N - i);
        std::swap(pool[i], pool[j]);
        sub[i] = cands[pool[i]];
      }
      check(sub);
    }
    for (const auto& gs : sample_good_sets(T, 1000, o.seed)) check(gs.entries);
  }
  r.detail = std::to_string(good) + " good among the checked sets";
  return finish(r, t);
}

SuiteResult plane_model_partitions(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& T = S.tower();
  const PlaneModel M(T);
  const int n = S.q() + 1;
  Tally t;
  r.scope = "exhaustive";
  for (int a : T.lambda().I) {
    const auto& Z = M.Z_alpha(a);
    t.expect(static_cast<int>(Z.size()) == n * n, [&] { return "|Z_alpha| != (q+1)^2"; });
    std::vector<int> by_line(n, 0), by_conic(n, 0);
    for (const auto& P : Z) {
      int lines = 0, conics = 0;
      for (int c = 0; c < n; ++c) {
        if (M.on_line(c, P)) {
          ++lines;
          ++by_line[c];
        }
        if (M.on_conic(a, c, P)) {
          ++conics;
          ++by_conic[c];
        }
      }
      t.expect(lines == 1 && conics == 1, [&] { return "point of Z_alpha not in exactly one part"; });
      const auto c = epsilon_inverse(T, P);
      t.expect(c && epsilon(T, *c) == P && M.on_line(slot_of(T, *c), P) && M.on_conic(a, bundle_of(T, *c), P),
               [&] { return "epsilon, slot or bundle inconsistent"; });
    }
    for (int c = 0; c < n; ++c) {
      t.expect(by_line[c] == n && by_conic[c] == n, [&] { return "part without q+1 points"; });
    }
  }
  return finish(r, t);
}

SuiteResult intersection_profiles(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const auto& T = S.tower();
  const auto& F = S.field();
  const auto& L = T.lambda();
  const PlaneModel M(T);
  const int q = S.q(), n = q + 1;
  Tally t;
  r.scope = "exhaustive";
  for (int c = 0; c < n; ++c) {
    for (int b = 0; b < n; ++b) {
      const auto prof = M.intersection_profile(c, b);
      int total = 0;
      for (std::size_t i = 0; i < L.I.size(); ++i) {
        for (std::size_t j = 0; j < L.I.size(); ++j) {
          int expected = 0;
          if (i == j) {
            if (q % 2 == 0) {
              expected = 1;
            } else {
              const bool square = F.is_square_in_subfield(L.norms[L.I[i]]);
              const bool plus = (c + b) % 2 == 0;  // (cb)^{(q+1)/2} = 1
              expected = square == plus ? 2 : 0;
            }
          }
          total += prof[i][j];
          t.expect(prof[i][j] == expected, [&] {
            return "c=" + std::to_string(c) + " b=" + std::to_string(b) + ": " + std::to_string(prof[i][j]) +
                   " points, expected " + std::to_string(expected);
          });
        }
      }
      int expected_total = static_cast<int>(L.I.size());
      if (q % 2 == 1) expected_total = 2 * static_cast<int>((c + b) % 2 == 0 ? L.I1.size() : L.I2.size());
      t.expect(total == expected_total, [&] { return "total over I differs from 2|I1| or 2|I2| by the sign of (cb)^{(q+1)/2}"; });
    }
  }
  return finish(r, t);
}

std::string show(const BigRational& x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

SuiteResult good_set_counts(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& T = S.tower();
  const int q = S.q();
  Tally t;
  r.scope = "exhaustive";
  EnumerateOptions eo;
  eo.jobs = o.jobs;
  const BigInt perm = permanent(incidence_matrix(T, CandidateFilter::all));
  BigInt count = perm;
  std::ostringstream d;
  if (q <= 7) {
    count = count_good_sets(T, eo);
    t.expect(count == perm, [&] { return "search count differs from the permanent"; });
  }
  d << "count " << count;
  if (q == 3) {
    d << "; closed forms not compared at q = 3";
  } else if (q % 2 == 0) {
    const BigRational f = count_formula(q, FormulaVariant::all_even);
    const BigRational printed = count_formula(q, FormulaVariant::all_even_printed);
    d << "; |I|^{q+1}(q+1)! = " << show(f) << "; printed ((q-1)/2)^{q+1}(q+1)! = " << show(printed)
      << (BigRational(count) == printed ? "" : " (conflicts)");
    t.expect(BigRational(count) == f, [&] { return "count differs from |I|^{q+1}(q+1)!"; });
  } else {
    eo.filter = CandidateFilter::exclude_norm_minus_one;
    const BigInt perm_x = permanent(incidence_matrix(T, eo.filter));
    BigInt count_x = perm_x;
    if (q <= 7) {
      count_x = count_good_sets(T, eo);
      t.expect(count_x == perm_x, [&] { return "filtered search count differs from the permanent"; });
    }
    const BigRational f = count_formula(q, FormulaVariant::all_odd);
    const BigRational fx = count_formula(q, FormulaVariant::exclude_minus_one_odd);
    d << "; odd formula " << show(f) << "; without norm -1 " << count_x << ", formula " << show(fx);
    t.expect(BigRational(count) == f, [&] { return "count " + count.str() + " differs from the odd formula " + show(f); });
    t.expect(BigRational(count_x) == fx,
             [&] { return "norm -1 free count " + count_x.str() + " differs from its formula " + show(fx); });
  }
  r.detail = d.str();
  return finish(r, t);
}

SuiteResult distinct_parallelisms(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& T = S.tower();
  Tally t;
  const HallTable table(S);
  // Line sets L_P are distinct for distinct good sets.
  {
    std::string scope;
    const auto family = working_family(T, o.parallelism_samples, o.seed, scope);
    std::set<GoodSet> sets(family.begin(), family.end());
    std::set<std::vector<int>> line_sets;
    for (const auto& gs : sets) {
      std::vector<int> ids;
      for (const auto& c : gs.entries) {
        const int base = S.pencil_index(c) * S.q();
        for (int k = 0; k < S.q(); ++k) ids.push_back(base + k);
      }
      std::sort(ids.begin(), ids.end());
      line_sets.insert(ids);
    }
    t.expect(line_sets.size() == sets.size(), [&] { return "two good sets share a line set"; });
  }
  const auto family = working_family(T, o.parallelism_samples, o.seed + 1, r.scope, CandidateFilter::exclude_norm_minus_one);
  std::set<GoodSet> sets(family.begin(), family.end());
  std::set<std::vector<std::vector<int>>> built;
  for (const auto& gs : sets) {
    const Parallelism p = build_parallelism(S, gs, &table);
    std::vector<std::vector<int>> lists;
    for (const auto& s : p.spreads) lists.push_back(s.lines);
    built.insert(lists);
  }
  t.expect(built.size() == sets.size(), [&] { return "distinct norm -1 free good sets give the same parallelism"; });
  r.detail = std::to_string(sets.size()) + " distinct good sets";
  return finish(r, t);
}

SuiteResult g1_action(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const auto& T = S.tower();
  const int n = S.q() + 1;
  Tally t;
  const auto family = working_family(T, o.parallelism_samples, o.seed, r.scope);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      for (bool sw : {false, true}) {
        const G1Element g{u, v, sw};
        const auto back = g1_element(T, to_matrix(T, g));
        t.expect(back && back->u_pow == u && back->v_pow == v && back->swap == sw,
                 [&] { return "G1 matrix round trip fails"; });
      }
    }
  }
  for (const auto& gs : family) {
    t.expect(is_good(T, dual(gs).entries).good, [&] { return "dual of a good set is not good"; });
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        for (bool sw : {false, true}) {
          t.expect(is_good(T, apply_G1(T, gs, G1Element{u, v, sw}).entries).good,
                   [&] { return "G1 image of a good set is not good"; });
        }
      }
    }
  }
  return finish(r, t);
}

// ------------------------------------------------------------------ groups

SuiteResult stabilizer_groups(const Setting& S, const SuiteOptions&, SuiteResult r) {
  const int q = S.q(), m = S.field().m();
  if (q > 7) return skip(r, "group closure limited to q <= 7");
  const auto& sp = S.space();
  Tally t;
  r.scope = "exhaustive";
  const StabilizerGroup G = StabilizerGroup::r_u1_stabilizer(S);
  const BigInt expected = stabilizer_order_formula(q, m);
  t.expect(BigInt(G.order()) == expected,
           [&] { return "|Gamma_r_U1| = " + std::to_string(G.order()) + ", formula " + expected.str(); });
  for (const auto& g : G.generators()) {
    t.expect(map_lines(S, g, S.desarguesian_ids()) == S.desarguesian_ids(), [&] { return "generator moves D_eta"; });
    t.expect(sp.apply(g, S.r_u1()) == S.r_u1(), [&] { return "generator moves r_U1"; });
  }
  std::set<std::vector<int>> perms;
  for (std::size_t i = 0; i < G.order(); ++i) perms.insert(G.point_perm(i));
  for (const auto& e : group_E(S)) {
    std::vector<int> p;
    for (int i = 0; i < S.point_count(); ++i) p.push_back(S.point_id(sp.apply(e, S.sigma_point(i))));
    t.expect(perms.count(p) == 1, [&] { return "E is not inside Gamma_r_U1"; });
  }
  std::ostringstream d;
  d << "|Gamma_r_U1| = " << G.order();
  if (q <= 4) {
    const StabilizerGroup full = StabilizerGroup::full_gamma(S);
    // GL(2,q^2) modulo GF(q)* scalars, times iota and the field automorphisms.
    const BigInt q2 = q * q;
    const BigInt full_expected = 2 * BigInt(m) * (q2 * q2 - 1) * (q2 * q2 - q2) / (q - 1);
    t.expect(BigInt(full.order()) == full_expected, [&] { return "|Gamma| = " + std::to_string(full.order()); });
    for (const auto& g : full.generators()) {
      t.expect(map_lines(S, g, S.desarguesian_ids()) == S.desarguesian_ids(), [&] { return "Gamma generator moves D_eta"; });
    }
    d << ", |Gamma| = " << full.order();
  }
  r.detail = d.str();
  return finish(r, t);
}

std::vector<std::vector<int>> spread_lists(const Parallelism& p) {
  std::vector<std::vector<int>> out;
  for (const auto& s : p.spreads) out.push_back(s.lines);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> image_of(const Setting& S, const Collineation& c, const Parallelism& p) {
  std::vector<std::vector<int>> out;
  for (const auto& s : p.spreads) out.push_back(map_lines(S, c, s.lines));
  std::sort(out.begin(), out.end());
  return out;
}

SuiteResult equivalence_suite(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const int q = S.q();
  if (q > 5) return skip(r, "pencil-class action limited to q <= 5");
  const auto& T = S.tower();
  Tally t;
  const StabilizerGroup G = StabilizerGroup::r_u1_stabilizer(S);
  const FamilyIndex F(S, G);
  const HallTable& table = F.halls();
  std::mt19937_64 rng(o.seed);
  const auto family = sample_good_sets(T, 20, o.seed);
  r.scope = "sampled " + std::to_string(family.size());
  for (const auto& gs : family) {
    const Parallelism P = build_parallelism(S, gs, &table);
    // H images: the diagonal witness, and the search.
    const G1Element h{static_cast<int>(pick(rng, q + 1)), static_cast<int>(pick(rng, q + 1)), false};
    const Parallelism Ph = build_parallelism(S, apply_G1(T, gs, h), &table);
    t.expect(image_of(S, h_witness(S, h), P) == spread_lists(Ph), [&] { return "diagonal witness fails"; });
    const auto w = are_equivalent(F, G, P, Ph);
    t.expect(w && image_of(S, *w, P) == spread_lists(Ph), [&] { return "H image not found equivalent"; });
    // Images under a random group element.
    const std::size_t g = pick(rng, G.order());
    Parallelism Pg;
    for (const auto& s : P.spreads) {
      Spread img;
      img.lines = G.map_lines(g, s.lines);
      Pg.spreads.push_back(img);
    }
    normalize(Pg);
    const auto wg = are_equivalent(F, G, P, Pg);
    t.expect(wg && image_of(S, *wg, P) == spread_lists(Pg), [&] { return "group image not found equivalent"; });
    t.expect(are_equivalent(F, G, P, P).has_value(), [&] { return "parallelism not equivalent to itself"; });
  }
  std::ostringstream d;
  for (int a : T.lambda().I) {
    for (int v = 0; v <= q; ++v) {
      const GoodSet B = beutelspacher(T, a, v);
      const Parallelism P = build_parallelism(S, B, &table);
      const Parallelism Pd = build_parallelism(S, dual(B), &table);
      const bool eq = are_equivalent(F, G, P, Pd).has_value();
      if (q == 3) {
        t.expect(!eq, [&] { return "Beutelspacher P and P^d equivalent"; });
      }
      if (a == T.lambda().I.front() && v == 0) d << "Beutelspacher P vs P^d: " << (eq ? "equivalent" : "inequivalent");
    }
  }
  if (q == 3) {
    // The full group stabilizing D_eta: stabilizers fix r_U1, and it finds
    // no equivalence that Gamma_r_U1 missed.
    const StabilizerGroup full = StabilizerGroup::full_gamma(S);
    std::vector<Parallelism> all;
    std::set<std::vector<int>> codes;
    for (const auto& gs : all_good_sets(T)) {
      Parallelism p = build_parallelism(S, gs, &table);
      if (codes.insert(F.code(p)).second) all.push_back(std::move(p));
    }
    for (const auto& p : all) {
      for (auto g : stabilizer(full, p)) {
        t.expect(full.line_image(g, S.r_u1_id()) == S.r_u1_id(), [&] { return "stabilizer element moves r_U1"; });
      }
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        const bool small = are_equivalent(F, G, all[i], all[j]).has_value();
        const bool big = find_equivalence(full, all[i], all[j]).has_value();
        t.expect(small == big, [&] { return "Gamma and Gamma_r_U1 disagree on a pair"; });
      }
    }
  }
  r.detail = d.str();
  return finish(r, t);
}

SuiteResult classification(const Setting& S, const SuiteOptions& o, SuiteResult r) {
  const int q = S.q(), m = S.field().m();
  if (q > 4) return skip(r, "full classification run by the classify command");
  Tally t;
  r.scope = "exhaustive";
  const StabilizerGroup G = StabilizerGroup::r_u1_stabilizer(S);
  const FamilyIndex F(S, G);
  std::vector<std::vector<int>> codes;
  for (const auto& gs : all_good_sets(S.tower())) codes.push_back(F.code(gs));
  const OrbitReport rep = classify(F, G, codes, o.jobs);
  const OrbitReport rep1 = classify(F, G, codes, 1);
  std::size_t total = 0;
  for (std::size_t i = 0; i < rep.orbits.size(); ++i) {
    const auto& ob = rep.orbits[i];
    total += ob.family_size;
    t.expect(ob.full_orbit_size * ob.stabilizer_order == G.order(), [&] { return "orbit-stabilizer fails"; });
    t.expect(ob.family_size <= ob.full_orbit_size, [&] { return "orbit larger than the group allows"; });
    t.expect(ob.canonical == rep1.orbits[i].canonical && ob.family_size == rep1.orbits[i].family_size,
             [&] { return "classification depends on the job count"; });
  }
  t.expect(total == rep.distinct_size, [&] { return "orbit sizes do not sum to the family size"; });
  const BigRational orbits = static_cast<long long>(rep.orbits.size());
  std::ostringstream d;
  d << rep.orbits.size() << " orbits of " << rep.distinct_size << " parallelisms";
  const std::vector<BoundVariant> variants =
      q % 2 == 0 ? std::vector<BoundVariant>{BoundVariant::even_printed, BoundVariant::even_I}
                 : std::vector<BoundVariant>{BoundVariant::odd};
  for (auto v : variants) {
    const BigRational b = lower_bound(q, m, v);
    d << "; bound " << to_string(v) << " = " << show(b);
    t.expect(orbits >= b, [&] { return "orbit count below the " + to_string(v) + " bound"; });
  }
  r.detail = d.str();
  return finish(r, t);
}

using SuiteFn = SuiteResult (*)(const Setting&, const SuiteOptions&, SuiteResult);

SuiteFn lookup(std::string_view id) {
  static const std::map<std::string, SuiteFn, std::less<>> table = {
      {"field-arithmetic", field_arithmetic},
      {"norm-partition", norm_partition},
      {"lambda-system", lambda_system},
      {"baer-involutions", baer_involutions},
      {"desarguesian-closure", desarguesian_closure},
      {"subgeometry-sections", subgeometry_sections},
      {"regulus-transversals", regulus_transversals},
      {"hall-spreads", hall_spreads},
      {"transversal-plane-sections", transversal_plane_sections},
      {"subplane-intersections", subplane_intersections},
      {"pencil-lines-meet-point", pencil_lines_meet_point},
      {"regulus-coincidence", regulus_coincidence},
      {"extension-disjointness", extension_disjointness},
      {"exact-cover", exact_cover},
      {"non-good-sets-fail", non_good_sets_fail},
      {"group-E", group_E_suite},
      {"characterization", characterization},
      {"predicate-agreement", predicate_agreement},
      {"plane-model-partitions", plane_model_partitions},
      {"intersection-profiles", intersection_profiles},
      {"good-set-counts", good_set_counts},
      {"distinct-parallelisms", distinct_parallelisms},
      {"g1-action", g1_action},
      {"stabilizer-groups", stabilizer_groups},
      {"equivalence", equivalence_suite},
      {"classification", classification},
  };
  auto it = table.find(id);
  if (it == table.end()) throw std::invalid_argument("unknown suite: " + std::string(id));
  return it->second;
}

}  // namespace

SuiteResult run_suite(const Setting& S, std::string_view id, const SuiteOptions& opts) {
  const SuiteFn fn = lookup(id);
  SuiteResult r;
  r.id = std::string(id);
  for (const auto& s : suites()) {
    if (s.id == id) r.property = s.property;
  }
  try {
    return fn(S, opts, r);
  } catch (const std::exception& e) {
    r.status = SuiteStatus::fail;
    r.detail = std::string("exception: ") + e.what();
    return r;
  }
}

std::vector<SuiteResult> run_selftest(const Setting& S, const SuiteOptions& opts,
                                      const std::vector<std::string>& only) {
  std::vector<SuiteResult> out;
  for (const auto& s : suites()) {
    if (!only.empty() && std::find(only.begin(), only.end(), s.id) == only.end()) continue;
    out.push_back(run_suite(S, s.id, opts));
  }
  return out;
}

}  // namespace spreadsmith
