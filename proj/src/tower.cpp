#include "spreadsmith/tower.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace spreadsmith {

int LambdaSystem::index_of_norm(Fq2 n) const {
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] == n) return static_cast<int>(i);
  }
  return -1;
}

bool LambdaSystem::in_I(int idx) const { return std::binary_search(I.begin(), I.end(), idx); }

std::vector<Fq2> unit_circle(const GaloisField& F) {
  const int q = F.q();
  const Fq2 omega = F.gen_pow(q - 1);
  std::vector<Fq2> out;
  Fq2 x = F.one();
  for (int k = 0; k <= q; ++k) {
    out.push_back(x);
    x = F.mul(x, omega);
  }
  return out;
}

NormPartition build_partition(const GaloisField& F) {
  const int q = F.q();
  if (q < 3) throw std::invalid_argument("norm partition needs q >= 3");
  std::vector<Fq2> order;  // GF(q)* in powers of g^(q+1)
  const Fq2 h = F.gen_pow(q + 1);
  Fq2 x = F.one();
  for (int k = 0; k < q - 1; ++k) {
    order.push_back(x);
    x = F.mul(x, h);
  }

  NormPartition part;
  std::set<Fq2> used;
  auto take = [&](Fq2 a, Fq2 a_inv) {
    part.A.push_back(a);
    part.A_inv.push_back(a_inv);
  };

  const Fq2 one = F.one();
  if (q % 2 == 0) {
    part.units_part = {one};
    used.insert(one);
    for (Fq2 a : order) {
      if (used.count(a)) continue;
      const Fq2 ai = F.inv(a);
      used.insert(a);
      used.insert(ai);
      take(a, ai);
    }
  } else {
    const Fq2 minus_one = F.neg(one);
    part.units_part = {one, minus_one};
    used.insert(one);
    used.insert(minus_one);
    if (q % 4 == 1) {
      for (Fq2 b : order) {
        if (F.mul(b, b) == minus_one) {
          take(b, F.inv(b));
          used.insert(b);
          used.insert(F.inv(b));
          break;
        }
      }
    }
    for (Fq2 c : order) {
      if (used.count(c)) continue;
      const Fq2 ci = F.inv(c);
      const Fq2 mc = F.neg(c);
      const Fq2 mci = F.neg(ci);
      take(c, ci);
      take(mci, mc);
      used.insert({c, ci, mc, mci});
    }
  }
  part.t = static_cast<int>(part.A.size());
  return part;
}

namespace {

LambdaSystem finish_lambda(const GaloisField& F, const NormPartition& part,
                           std::vector<Fq2> elements) {
  const int q = F.q();
  if (static_cast<int>(elements.size()) != q - 1) {
    throw std::invalid_argument("lambda needs exactly q-1 elements");
  }
  LambdaSystem L;
  L.lambda = std::move(elements);
  std::set<Fq2> seen;
  L.eta_index = -1;
  for (std::size_t i = 0; i < L.lambda.size(); ++i) {
    const Fq2 a = L.lambda[i];
    if (a == F.zero()) throw std::invalid_argument("lambda contains zero");
    const Fq2 n = F.norm(a);
    if (!seen.insert(n).second) throw std::invalid_argument("lambda norms are not distinct");
    L.norms.push_back(n);
    if (n == F.one()) L.eta_index = static_cast<int>(i);
  }
  const Fq2 minus_one = F.neg(F.one());
  for (std::size_t i = 0; i < L.lambda.size(); ++i) {
    const Fq2 n = L.norms[i];
    bool member = std::find(part.A.begin(), part.A.end(), n) != part.A.end();
    if (q % 2 == 1 && n == minus_one) member = true;
    if (!member) continue;
    L.I.push_back(static_cast<int>(i));
    if (q % 2 == 1) {
      (F.is_square_in_subfield(n) ? L.I1 : L.I2).push_back(static_cast<int>(i));
    }
  }
  return L;
}

}  // namespace

LambdaSystem build_lambda(const GaloisField& F, const NormPartition& part) {
  std::vector<Fq2> elements;
  for (int k = 0; k < F.q() - 1; ++k) elements.push_back(F.gen_pow(k));
  return finish_lambda(F, part, std::move(elements));
}

LambdaSystem build_lambda(const GaloisField& F, const NormPartition& part,
                          const std::vector<Fq2>& elements) {
  return finish_lambda(F, part, elements);
}

Tower::Tower(GaloisField F, std::optional<std::vector<Fq2>> lambda)
    : F_(std::move(F)), part_(build_partition(F_)), units_(unit_circle(F_)) {
  lambda_ = lambda ? build_lambda(F_, part_, *lambda) : build_lambda(F_, part_);
}

Fq2 Tower::unit(int k) const {
  const int n = q() + 1;
  return units_[((k % n) + n) % n];
}

int Tower::unit_index(Fq2 u) const {
  if (u == F_.zero()) return -1;
  const int l = F_.log(u);
  if (l % (q() - 1) != 0) return -1;
  return l / (q() - 1);
}

int Tower::minus_one_unit() const { return unit_index(F_.neg(F_.one())); }

bool Tower::norm_is_minus_one(int alpha_idx) const {
  return q() % 2 == 1 && lambda_.norms.at(alpha_idx) == F_.neg(F_.one());
}

}  // namespace spreadsmith
