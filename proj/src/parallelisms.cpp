#include "spreadsmith/parallelisms.hpp"

#include <algorithm>
#include <set>

namespace spreadsmith {

void normalize(Parallelism& p) {
  std::sort(p.spreads.begin(), p.spreads.end(),
            [](const Spread& a, const Spread& b) { return a.lines < b.lines; });
  p.desarguesian_index = -1;
  for (std::size_t i = 0; i < p.spreads.size(); ++i) {
    if (p.spreads[i].tag == SpreadTag::desarguesian) {
      p.desarguesian_index = static_cast<int>(i);
      break;
    }
  }
}

HallTable::HallTable(const Setting& S) {
  const auto& L = S.lines_L();
  spreads_.reserve(L.size());
  for (std::size_t i = 0; i < L.size(); ++i) {
    spreads_.push_back(hall_spread(S, L[i]));
    index_[spreads_.back().lines].push_back(static_cast<int>(i));
  }
}

std::vector<int> HallTable::lookup(const std::vector<int>& lines) const {
  auto it = index_.find(lines);
  return it == index_.end() ? std::vector<int>{} : it->second;
}

Parallelism build_line_family(const Setting& S, const std::vector<Candidate>& cands,
                              const HallTable* table) {
  Parallelism p;
  p.spreads.push_back(desarguesian_spread(S));
  for (const auto& c : cands) {
    const int pencil = S.pencil_index(c);
    if (pencil < 0) throw std::invalid_argument("candidate label outside I x U x U");
    for (int k = 0; k < S.q(); ++k) {
      const int idx = pencil * S.q() + k;
      p.spreads.push_back(table ? table->of(idx) : hall_spread(S, S.lines_L()[idx]));
    }
  }
  normalize(p);
  return p;
}

Parallelism build_parallelism(const Setting& S, const GoodSet& gs, const HallTable* table) {
  const GoodCheck c = is_good(S.tower(), gs.entries);
  if (!c.good) throw GoodSetRejected(c);
  Parallelism p = build_line_family(S, gs.entries, table);
  p.source = make_good_set(gs.entries);
  return p;
}

Certificate verify_parallelism(const Setting& S, const Parallelism& p) {
  Certificate cert;
  const int q = S.q();
  cert.spread_count = static_cast<int>(p.spreads.size());
  cert.line_total = S.line_count();
  cert.membership.assign(S.line_count(), 0);
  std::vector<std::uint64_t> keys;
  bool spreads_ok = true;
  for (std::size_t i = 0; i < p.spreads.size(); ++i) {
    const auto rep = is_spread(S, p.spreads[i].lines);
    if (!rep.ok) {
      spreads_ok = false;
      cert.spread_failures.push_back("spread " + std::to_string(i) + ": " + rep.message);
    }
    for (int id : p.spreads[i].lines) {
      if (id < 0 || id >= S.line_count()) continue;
      ++cert.membership[id];
      keys.push_back(S.sigma_line(id).key());
    }
  }
  for (int id = 0; id < S.line_count(); ++id) {
    const int m = cert.membership[id];
    if (m == 1) ++cert.covered_once;
    if (m == 0) {
      ++cert.uncovered;
      if (cert.first_uncovered < 0) cert.first_uncovered = id;
    }
    if (m >= 2) {
      ++cert.double_covered;
      if (cert.first_double < 0) cert.first_double = id;
    }
  }
  std::sort(keys.begin(), keys.end());
  std::uint64_t h = 1469598103934665603ull;
  for (auto k : keys) {
    for (int b = 7; b >= 0; --b) {
      h ^= (k >> (8 * b)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  cert.checksum = h;
  cert.ok = spreads_ok && cert.spread_count == q * q + q + 1 && cert.uncovered == 0 &&
            cert.double_covered == 0;
  return cert;
}

Collineation E_element(const Setting& S, Fq2 b) {
  Collineation c = Space::identity();
  c.m[1] = b;
  c.m[11] = S.field().frobenius(b);
  return c;
}

std::vector<Collineation> group_E(const Setting& S) {
  std::vector<Collineation> out;
  for (int code = 0; code < S.field().order(); ++code) out.push_back(E_element(S, S.field().element(code)));
  return out;
}

std::vector<int> map_lines(const Setting& S, const Collineation& c, const std::vector<int>& ids) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (int id : ids) {
    const int img = S.line_id(S.space().apply(c, S.sigma_line(id)));
    if (img < 0) throw std::invalid_argument("collineation does not preserve Sigma_eta");
    out.push_back(img);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_E_invariant(const Setting& S, const Parallelism& p, bool full_group) {
  std::vector<Collineation> gens;
  if (full_group) {
    gens = group_E(S);
  } else {
    for (int k = 0; k < 2 * S.field().m(); ++k) gens.push_back(E_element(S, S.field().gen_pow(k)));
  }
  std::vector<std::vector<int>> base;
  for (const auto& s : p.spreads) base.push_back(s.lines);
  std::sort(base.begin(), base.end());
  for (const auto& g : gens) {
    std::vector<std::vector<int>> img;
    for (const auto& s : p.spreads) img.push_back(map_lines(S, g, s.lines));
    std::sort(img.begin(), img.end());
    if (img != base) return false;
  }
  return true;
}

std::string to_string(CharacterizeError e) {
  switch (e) {
    case CharacterizeError::not_a_parallelism: return "not a parallelism";
    case CharacterizeError::no_desarguesian_member: return "no Desarguesian member";
    case CharacterizeError::regulus_misses_r_u1: return "regulus misses r_U1";
    case CharacterizeError::not_hall_shape: return "not Hall shape";
    case CharacterizeError::not_E_invariant: return "not E-invariant";
    case CharacterizeError::recovered_set_not_good: return "recovered set not good";
  }
  return "unknown";
}

namespace {

Candidate canonical_label(const Tower& T, const Candidate& c) {
  if (!T.norm_is_minus_one(c.alpha_idx)) return c;
  const int n = T.q() + 1, h = T.minus_one_unit();
  const Candidate alt{c.alpha_idx, (c.u_pow + h) % n, (c.v_pow + h) % n};
  return std::min(c, alt);
}

}  // namespace

GoodSet canonical_labels(const Tower& T, const GoodSet& gs) {
  std::vector<Candidate> out;
  for (const auto& c : gs.entries) out.push_back(canonical_label(T, c));
  return make_good_set(std::move(out));
}

std::variant<GoodSet, CharacterizeFailure> characterize(const Setting& S, const Parallelism& p,
                                                        const HallTable* table) {
  using R = std::variant<GoodSet, CharacterizeFailure>;
  const Certificate cert = verify_parallelism(S, p);
  if (!cert.ok) {
    std::string why = cert.spread_failures.empty() ? "" : cert.spread_failures.front();
    if (why.empty()) {
      why = std::to_string(cert.double_covered) + " lines double covered, " +
            std::to_string(cert.uncovered) + " uncovered";
    }
    return R{CharacterizeFailure{CharacterizeError::not_a_parallelism, why}};
  }
  const auto& D = S.desarguesian_ids();
  int d_at = -1;
  for (std::size_t i = 0; i < p.spreads.size(); ++i) {
    if (p.spreads[i].lines == D) d_at = static_cast<int>(i);
  }
  if (d_at < 0) return R{CharacterizeFailure{CharacterizeError::no_desarguesian_member, ""}};

  std::optional<HallTable> own;
  if (!table) table = &own.emplace(S);

  std::map<Candidate, int> labels;
  for (std::size_t i = 0; i < p.spreads.size(); ++i) {
    if (static_cast<int>(i) == d_at) continue;
    const auto& H = p.spreads[i].lines;
    const std::string which = "spread " + std::to_string(i);
    if (std::binary_search(H.begin(), H.end(), S.r_u1_id())) {
      return R{CharacterizeFailure{CharacterizeError::regulus_misses_r_u1, which + " contains r_U1"}};
    }
    std::vector<int> X;
    for (int id : H) {
      if (S.share_point(id, S.r_u1_id())) X.push_back(id);
    }
    const auto opp = opposite_of(S, X);
    if (!opp) {
      return R{CharacterizeFailure{CharacterizeError::not_hall_shape,
                                   which + ": lines meeting r_U1 are not a regulus"}};
    }
    if (!std::includes(D.begin(), D.end(), opp->lines.begin(), opp->lines.end())) {
      return R{CharacterizeFailure{CharacterizeError::not_hall_shape,
                                   which + ": switched regulus is not in D_eta"}};
    }
    const auto hits = table->lookup(H);
    if (hits.empty()) {
      return R{CharacterizeFailure{CharacterizeError::not_hall_shape,
                                   which + ": not the Hall spread of a line of L"}};
    }
    Candidate best = canonical_label(S.tower(), S.labels_L()[hits.front()]);
    for (int h : hits) best = std::min(best, canonical_label(S.tower(), S.labels_L()[h]));
    ++labels[best];
  }
  if (!is_E_invariant(S, p)) return R{CharacterizeFailure{CharacterizeError::not_E_invariant, ""}};

  std::vector<Candidate> cands;
  for (const auto& [c, k] : labels) {
    if (k != S.q()) {
      return R{CharacterizeFailure{CharacterizeError::recovered_set_not_good,
                                   "a pencil contributes " + std::to_string(k) + " spreads"}};
    }
    cands.push_back(c);
  }
  if (static_cast<int>(cands.size()) != S.q() + 1) {
    return R{CharacterizeFailure{CharacterizeError::recovered_set_not_good,
                                 std::to_string(cands.size()) + " pencils recovered"}};
  }
  const GoodCheck gc = is_good(S.tower(), cands);
  if (!gc.good) return R{CharacterizeFailure{CharacterizeError::recovered_set_not_good, gc.message()}};
  return R{make_good_set(std::move(cands))};
}

}  // namespace spreadsmith
