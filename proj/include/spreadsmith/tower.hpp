#pragma once

#include <optional>
#include <vector>

#include "spreadsmith/field.hpp"

namespace spreadsmith {

// GF(q)* = units_part + A + A_inv, each element exactly once.
struct NormPartition {
  int t = 0;
  std::vector<Fq2> units_part;
  std::vector<Fq2> A;
  std::vector<Fq2> A_inv;
};

// Ordered set of q-1 elements of GF(q^2)* with pairwise distinct norms, plus
// the index sets derived from a NormPartition. All index sets are sorted.
struct LambdaSystem {
  std::vector<Fq2> lambda;
  int eta_index = 0;
  std::vector<int> I;
  std::vector<int> I1;  // q odd: square norms
  std::vector<int> I2;  // q odd: nonsquare norms
  std::vector<Fq2> norms;

  int index_of_norm(Fq2 n) const;  // -1 when no element has that norm
  bool in_I(int idx) const;
};

// The q+1 solutions of x^(q+1) = 1, ordered as powers of g^(q-1).
std::vector<Fq2> unit_circle(const GaloisField& F);

// Greedy, deterministic construction following the case split on q mod 4.
// GF(q)* is scanned in powers of g^(q+1).
NormPartition build_partition(const GaloisField& F);

// Canonical system: lambda = (g^0, ..., g^(q-2)), eta = g^0.
LambdaSystem build_lambda(const GaloisField& F, const NormPartition& part);

// Explicit element list; eta is the element of norm 1. Throws
// std::invalid_argument if the list is not a valid system.
LambdaSystem build_lambda(const GaloisField& F, const NormPartition& part,
                          const std::vector<Fq2>& elements);

// Field plus the derived unit circle, partition and lambda system.
class Tower {
 public:
  explicit Tower(GaloisField F, std::optional<std::vector<Fq2>> lambda = std::nullopt);
  static Tower from_q(int q) { return Tower(GaloisField::from_q(q)); }

  const GaloisField& field() const { return F_; }
  const NormPartition& partition() const { return part_; }
  const LambdaSystem& lambda() const { return lambda_; }
  const std::vector<Fq2>& units() const { return units_; }
  int q() const { return F_.q(); }

  Fq2 alpha(int idx) const { return lambda_.lambda.at(idx); }
  Fq2 eta() const { return lambda_.lambda[lambda_.eta_index]; }
  Fq2 unit(int k) const;          // omega^k, any integer k
  int unit_index(Fq2 u) const;    // -1 when u is not on the unit circle
  int minus_one_unit() const;     // index of -1 in the unit circle (q odd)
  bool norm_is_minus_one(int alpha_idx) const;

 private:
  GaloisField F_;
  NormPartition part_;
  LambdaSystem lambda_;
  std::vector<Fq2> units_;
};

}  // namespace spreadsmith
