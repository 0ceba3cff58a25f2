#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spreadsmith/goodsets.hpp"
#include "spreadsmith/parallelisms.hpp"
#include "spreadsmith/setting.hpp"

namespace spreadsmith {

// A group of collineations preserving Sigma_eta, closed from its generators.
// Elements are kept as collineations plus their permutation of the points
// of Sigma_eta; two collineations acting alike on Sigma_eta count once.
class StabilizerGroup {
 public:
  StabilizerGroup(const Setting& S, std::vector<Collineation> generators);

  // Gamma_{r_U1}: blockdiag(M, M^(q)) for upper triangular M, iota, and the
  // Frobenius x -> x^p corrected to fix Sigma_eta.
  static StabilizerGroup r_u1_stabilizer(const Setting& S);
  // Gamma: the same with W = [[0,1],[1,0]] added, so M runs over GL(2,q^2).
  static StabilizerGroup full_gamma(const Setting& S);

  const std::vector<Collineation>& generators() const { return gens_; }
  std::size_t order() const { return elements_.size(); }
  const Collineation& element(std::size_t i) const { return elements_[i]; }
  const std::vector<int>& point_perm(std::size_t i) const { return perms_[i]; }
  int line_image(std::size_t i, int line) const;
  std::vector<int> map_lines(std::size_t i, const std::vector<int>& ids) const;  // sorted

 private:
  const Setting* S_;
  std::vector<Collineation> gens_;
  std::vector<Collineation> elements_;
  std::vector<std::vector<int>> perms_;
  std::vector<int> pair_line_;  // point pair -> line id
};

Collineation iota(const Setting& S);
Collineation frobenius_generator(const Setting& S);
Collineation block_pair(const Setting& S, const std::array<Fq2, 4>& M);  // blockdiag(M, M^(q))

// Parallelisms of the family written as sorted pencil-class ids, where a
// class is a canonical label (see canonical_labels).
class FamilyIndex {
 public:
  FamilyIndex(const Setting& S, const StabilizerGroup& G);

  const std::vector<Candidate>& classes() const { return classes_; }
  int class_of(const Candidate& c) const;  // canonical label lookup, -1 if absent
  // Throws std::invalid_argument when p is not D_eta plus Hall spreads of L.
  std::vector<int> code(const Parallelism& p) const;
  std::vector<int> code(const GoodSet& gs) const;
  std::vector<int> image(std::size_t g, const std::vector<int>& code) const;
  const HallTable& halls() const { return halls_; }

 private:
  const Setting* S_;
  const StabilizerGroup* G_;
  HallTable halls_;
  std::vector<Candidate> classes_;
  std::vector<int> class_of_L_;
  std::vector<std::vector<int>> action_;  // [g][class]
};

std::optional<Collineation> are_equivalent(const FamilyIndex& F, const StabilizerGroup& G,
                                           const Parallelism& a, const Parallelism& b);

struct Orbit {
  std::vector<int> canonical;   // class ids
  int representative = -1;      // first input index in the orbit
  std::size_t family_size = 0;  // distinct inputs in the orbit
  std::size_t stabilizer_order = 0;
  std::size_t full_orbit_size = 0;  // |G| / stabilizer_order
};

struct OrbitReport {
  std::size_t input_size = 0;
  std::size_t distinct_size = 0;
  std::size_t group_order = 0;
  std::vector<Orbit> orbits;  // sorted by canonical form
  std::vector<int> orbit_of;  // per input index
};

// Canonical form = lexicographically least image over the group.
std::pair<std::vector<int>, std::size_t> canonical_form(const FamilyIndex& F, const StabilizerGroup& G,
                                                        const std::vector<int>& code);
OrbitReport classify(const FamilyIndex& F, const StabilizerGroup& G,
                     const std::vector<std::vector<int>>& codes, int jobs = 1);

// Spread-level search over any group, without the family restriction.
// Returns the index of the first element of G carrying a to b.
std::optional<std::size_t> find_equivalence(const StabilizerGroup& G, const Parallelism& a,
                                            const Parallelism& b);
// Indices of the elements of G fixing p.
std::vector<std::size_t> stabilizer(const StabilizerGroup& G, const Parallelism& p);

enum class BoundVariant { even_printed, even_I, odd };
std::string to_string(BoundVariant v);
// The inequivalence lower bound with h = m. Throws on parity mismatch.
BigRational lower_bound(int q, int m, BoundVariant v);
// 2 h q^2 (q^2 - 1)(q + 1)
BigInt stabilizer_order_formula(int q, int m);

// diag(1, c, u, c^q u) with c^{q-1} = v/u, sending Pi_P to Pi_{P^g} for g in H.
Collineation h_witness(const Setting& S, const G1Element& g);

}  // namespace spreadsmith
