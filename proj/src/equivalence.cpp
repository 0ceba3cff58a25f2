#include "spreadsmith/equivalence.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <map>
#include <thread>

namespace spreadsmith {

Collineation block_pair(const Setting& S, const std::array<Fq2, 4>& M) {
  const auto& F = S.field();
  Collineation c;
  c.m[0] = M[0];
  c.m[1] = M[1];
  c.m[4] = M[2];
  c.m[5] = M[3];
  c.m[10] = F.frobenius(M[0]);
  c.m[11] = F.frobenius(M[1]);
  c.m[14] = F.frobenius(M[2]);
  c.m[15] = F.frobenius(M[3]);
  return c;
}

Collineation iota(const Setting& S) {
  const Fq2 o = S.field().one();
  Collineation c;
  c.m[2] = o;
  c.m[7] = o;
  c.m[8] = o;
  c.m[13] = o;
  return c;
}

Collineation frobenius_generator(const Setting& S) {
  const auto& F = S.field();
  // x -> x^p moves Sigma_eta to Sigma_{eta^p}; diag(1, 1, c, c) with
  // c = eta^{1-p} brings it back.
  const Fq2 e = S.eta();
  const Fq2 c = F.div(e, F.frobenius_p(e, 1));
  Collineation out = Space::identity();
  out.m[10] = c;
  out.m[15] = c;
  out.twist = 1;
  return out;
}

StabilizerGroup::StabilizerGroup(const Setting& S, std::vector<Collineation> generators)
    : S_(&S), gens_(std::move(generators)) {
  const int n = S.point_count();
  pair_line_.assign(static_cast<std::size_t>(n) * n, -1);
  for (int l = 0; l < S.line_count(); ++l) {
    auto pts = S.points_of_line(l);
    for (int a : pts) {
      for (int b : pts) {
        if (a != b) pair_line_[static_cast<std::size_t>(a) * n + b] = l;
      }
    }
  }
  auto perm_of = [&](const Collineation& c) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) {
      p[i] = S.point_id(S.space().apply(c, S.sigma_point(i)));
      if (p[i] < 0) throw std::invalid_argument("generator does not preserve Sigma_eta");
    }
    return p;
  };
  std::vector<std::vector<int>> gen_perms;
  for (const auto& g : gens_) gen_perms.push_back(perm_of(g));

  std::map<std::vector<int>, std::size_t> seen;
  std::vector<int> id(n);
  for (int i = 0; i < n; ++i) id[i] = i;
  elements_.push_back(Space::identity());
  perms_.push_back(id);
  seen.emplace(id, 0);
  for (std::size_t head = 0; head < elements_.size(); ++head) {
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      std::vector<int> p(n);
      for (int i = 0; i < n; ++i) p[i] = gen_perms[k][perms_[head][i]];
      if (seen.count(p)) continue;
      seen.emplace(p, elements_.size());
      elements_.push_back(S.space().compose(elements_[head], gens_[k]));
      perms_.push_back(std::move(p));
    }
  }
}

StabilizerGroup StabilizerGroup::r_u1_stabilizer(const Setting& S) {
  const auto& F = S.field();
  const Fq2 o = F.one(), z = F.zero(), g = F.generator();
  std::vector<Collineation> gens = {
      block_pair(S, {g, z, z, o}), block_pair(S, {o, z, z, g}),
      block_pair(S, {o, o, z, o}), block_pair(S, {o, g, z, o}),
      iota(S),                     frobenius_generator(S),
  };
  return StabilizerGroup(S, std::move(gens));
}

StabilizerGroup StabilizerGroup::full_gamma(const Setting& S) {
  const auto& F = S.field();
  const Fq2 o = F.one(), z = F.zero(), g = F.generator();
  std::vector<Collineation> gens = {
      block_pair(S, {g, z, z, o}), block_pair(S, {o, z, z, g}),
      block_pair(S, {o, o, z, o}), block_pair(S, {o, g, z, o}),
      block_pair(S, {z, o, o, z}), iota(S),
      frobenius_generator(S),
  };
  return StabilizerGroup(S, std::move(gens));
}

int StabilizerGroup::line_image(std::size_t i, int line) const {
  const int n = S_->point_count();
  auto pts = S_->points_of_line(line);
  const auto& p = perms_[i];
  return pair_line_[static_cast<std::size_t>(p[pts[0]]) * n + p[pts[1]]];
}

std::vector<int> StabilizerGroup::map_lines(std::size_t i, const std::vector<int>& ids) const {
  std::vector<int> out;
  out.reserve(ids.size());
  for (int l : ids) out.push_back(line_image(i, l));
  std::sort(out.begin(), out.end());
  return out;
}

FamilyIndex::FamilyIndex(const Setting& S, const StabilizerGroup& G) : S_(&S), G_(&G), halls_(S) {
  const auto& labels = S.labels_L();
  std::map<Candidate, int> ids;
  for (const auto& c : labels) {
    const GoodSet one = canonical_labels(S.tower(), GoodSet{{c}});
    ids.emplace(one.entries.front(), 0);
  }
  for (auto& [c, k] : ids) {
    k = static_cast<int>(classes_.size());
    classes_.push_back(c);
  }
  for (const auto& c : labels) {
    class_of_L_.push_back(ids.at(canonical_labels(S.tower(), GoodSet{{c}}).entries.front()));
  }

  // Action on classes, checked on every Hall spread of every class.
  action_.assign(G.order(), std::vector<int>(classes_.size(), -1));
  for (std::size_t g = 0; g < G.order(); ++g) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto img = halls_.lookup(G.map_lines(g, halls_.of(static_cast<int>(i)).lines));
      if (img.empty()) throw std::logic_error("group element moves a Hall spread out of the table");
      const int to = class_of_L_[img.front()];
      int& slot = action_[g][class_of_L_[i]];
      if (slot >= 0 && slot != to) throw std::logic_error("group element splits a pencil class");
      slot = to;
    }
  }
}

int FamilyIndex::class_of(const Candidate& c) const {
  const Candidate k = canonical_labels(S_->tower(), GoodSet{{c}}).entries.front();
  auto it = std::lower_bound(classes_.begin(), classes_.end(), k);
  return it != classes_.end() && *it == k ? static_cast<int>(it - classes_.begin()) : -1;
}

std::vector<int> FamilyIndex::code(const Parallelism& p) const {
  const auto& D = S_->desarguesian_ids();
  std::vector<int> out;
  int d_seen = 0;
  for (const auto& s : p.spreads) {
    if (s.lines == D) {
      ++d_seen;
      continue;
    }
    const auto hits = halls_.lookup(s.lines);
    if (hits.empty()) throw std::invalid_argument("spread is not a Hall spread of a line of L");
    out.push_back(class_of_L_[hits.front()]);
  }
  if (d_seen != 1) throw std::invalid_argument("parallelism does not contain D_eta exactly once");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> FamilyIndex::code(const GoodSet& gs) const {
  std::vector<int> out;
  for (const auto& c : gs.entries) {
    const int k = class_of(c);
    if (k < 0) throw std::invalid_argument("label outside I x U x U");
    out.push_back(k);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> FamilyIndex::image(std::size_t g, const std::vector<int>& code) const {
  std::vector<int> out;
  out.reserve(code.size());
  for (int c : code) out.push_back(action_[g][c]);
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Collineation> are_equivalent(const FamilyIndex& F, const StabilizerGroup& G,
                                           const Parallelism& a, const Parallelism& b) {
  const auto ca = F.code(a);
  const auto cb = F.code(b);
  for (std::size_t g = 0; g < G.order(); ++g) {
    if (F.image(g, ca) == cb) return G.element(g);
  }
  return std::nullopt;
}

std::pair<std::vector<int>, std::size_t> canonical_form(const FamilyIndex& F, const StabilizerGroup& G,
                                                        const std::vector<int>& code) {
  std::vector<int> best = code;
  std::size_t fixed = 0;
  for (std::size_t g = 0; g < G.order(); ++g) {
    auto img = F.image(g, code);
    if (img == code) ++fixed;
    if (img < best) best = std::move(img);
  }
  return {best, fixed};
}

// Orbit sweep: the first input not yet placed starts a new orbit, whose
// images are computed once and matched against the inputs.
OrbitReport classify(const FamilyIndex& F, const StabilizerGroup& G,
                     const std::vector<std::vector<int>>& codes, int jobs) {
  OrbitReport rep;
  rep.input_size = codes.size();
  rep.group_order = G.order();
  std::map<std::vector<int>, int> orbit_of_code;  // distinct code -> orbit, -1 while unplaced
  for (const auto& c : codes) orbit_of_code.emplace(c, -1);
  rep.distinct_size = orbit_of_code.size();

  const std::size_t n = G.order();
  std::vector<std::vector<int>> images(n);
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  for (std::size_t i = 0; i < codes.size(); ++i) {
    if (orbit_of_code.at(codes[i]) >= 0) continue;
    const auto& code = codes[i];
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t g = next++; g < n; g = next++) images[g] = F.image(g, code);
    };
    if (threads == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    Orbit o;
    o.representative = static_cast<int>(i);
    o.canonical = code;
    for (const auto& img : images) {
      o.stabilizer_order += img == code;
      if (img < o.canonical) o.canonical = img;
      auto it = orbit_of_code.find(img);
      if (it != orbit_of_code.end() && it->second < 0) {
        it->second = static_cast<int>(rep.orbits.size());
        ++o.family_size;
      }
    }
    o.full_orbit_size = n / o.stabilizer_order;
    rep.orbits.push_back(std::move(o));
  }

  std::vector<int> order(rep.orbits.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return rep.orbits[a].canonical < rep.orbits[b].canonical; });
  std::vector<int> rank(order.size());
  std::vector<Orbit> sorted;
  for (std::size_t k = 0; k < order.size(); ++k) {
    rank[order[k]] = static_cast<int>(k);
    sorted.push_back(std::move(rep.orbits[order[k]]));
  }
  rep.orbits = std::move(sorted);
  for (const auto& c : codes) rep.orbit_of.push_back(rank[orbit_of_code.at(c)]);
  return rep;
}

namespace {

std::vector<std::vector<int>> spread_lists(const Parallelism& p) {
  std::vector<std::vector<int>> out;
  for (const auto& s : p.spreads) out.push_back(s.lines);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> image_lists(const StabilizerGroup& G, std::size_t g,
                                          const std::vector<std::vector<int>>& lists) {
  std::vector<std::vector<int>> out;
  out.reserve(lists.size());
  for (const auto& l : lists) out.push_back(G.map_lines(g, l));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<std::size_t> find_equivalence(const StabilizerGroup& G, const Parallelism& a,
                                            const Parallelism& b) {
  const auto la = spread_lists(a);
  const auto lb = spread_lists(b);
  for (std::size_t g = 0; g < G.order(); ++g) {
    if (image_lists(G, g, la) == lb) return g;
  }
  return std::nullopt;
}

std::vector<std::size_t> stabilizer(const StabilizerGroup& G, const Parallelism& p) {
  const auto lp = spread_lists(p);
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < G.order(); ++g) {
    if (image_lists(G, g, lp) == lp) out.push_back(g);
  }
  return out;
}

std::string to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::even_printed: return "even_printed";
    case BoundVariant::even_I: return "even_I";
    case BoundVariant::odd: return "odd";
  }
  return "unknown";
}

BigRational lower_bound(int q, int m, BoundVariant v) {
  const bool even = q % 2 == 0;
  if (even != (v != BoundVariant::odd)) throw std::invalid_argument("bound variant does not match the parity of q");
  auto power = [](BigRational b, int e) {
    BigRational r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  const BigRational h = m;
  if (even) {
    BigRational fact = 1;
    for (int i = 2; i <= q - 2; ++i) fact *= i;
    const BigRational base = v == BoundVariant::even_printed ? BigRational(q - 1, 2) : BigRational(q - 2, 2);
    return power(base, q + 1) * fact / (2 * h * q * (q + 1));
  }
  const BigRational tail = power(BigRational(q * q - 1), (q - 1) / 2) / (2 * h * q * q * (q + 1));
  if (q % 4 == 1) return power(BigRational((q - 5) * (q - 1), 16), (q + 1) / 2) * tail;
  return power(BigRational(q - 3, 4), q + 1) * tail;
}

BigInt stabilizer_order_formula(int q, int m) {
  return BigInt(2) * m * q * q * (q * q - 1) * (q + 1);
}

Collineation h_witness(const Setting& S, const G1Element& g) {
  if (g.swap) throw std::invalid_argument("witness exists for elements of H only");
  const auto& F = S.field();
  const Fq2 u = S.tower().unit(g.u_pow), v = S.tower().unit(g.v_pow);
  const Fq2 target = F.div(v, u);
  for (int code = 1; code < F.order(); ++code) {
    const Fq2 c = F.element(code);
    if (F.pow(c, S.q() - 1) != target) continue;
    Collineation out = Space::identity();
    out.m[5] = c;
    out.m[10] = u;
    out.m[15] = F.mul(F.frobenius(c), u);
    return out;
  }
  throw std::logic_error("no c with c^(q-1) = v/u");
}

}  // namespace spreadsmith
