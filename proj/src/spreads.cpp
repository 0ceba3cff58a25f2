#include "spreadsmith/spreads.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace spreadsmith {

std::vector<ProjLine> desarguesian_lines(const Setting& S, int alpha_idx) {
  const auto& sp = S.space();
  const Fq2 a = S.alpha(alpha_idx);
  std::vector<ProjLine> out;
  for (const auto& P : sp.points_on(S.t1())) out.push_back(sp.join(P, sp.tau(a, P)));
  std::sort(out.begin(), out.end());
  return out;
}

Spread desarguesian_spread(const Setting& S) {
  Spread s;
  s.lines = S.desarguesian_ids();
  s.tag = SpreadTag::desarguesian;
  s.transversal = S.t1();
  return s;
}

Pencil pencil(const Setting& S, int alpha_idx, int u_pow, int v_pow) {
  const Candidate c{alpha_idx, u_pow, v_pow};
  if (S.pencil_index(c) < 0) throw std::invalid_argument("pencil label outside I x U x U");
  Pencil p;
  p.label = c;
  p.base = S.point_P(alpha_idx, u_pow);
  p.plane = S.plane_pi(alpha_idx, v_pow);
  auto members = S.pencil_lines(c);
  p.lines.assign(members.begin(), members.end());
  p.lines.push_back(S.r_u1());
  std::sort(p.lines.begin(), p.lines.end());
  return p;
}

const std::vector<ProjLine>& line_set_L(const Setting& S) { return S.lines_L(); }

Spread spread_from_transversal(const Setting& S, const ProjLine& l) {
  const auto& sp = S.space();
  const Fq2 e = S.eta();
  const auto pts = sp.points_on(l);
  for (const auto& Q : pts) {
    if (S.point_id(Q) >= 0) {
      throw TransversalFailure(TransversalError::meets_sigma, "transversal meets Sigma_eta");
    }
  }
  const ProjLine lt = sp.tau(e, l);
  if (lt == l) {
    throw TransversalFailure(TransversalError::self_conjugate, "transversal is tau_eta-stable");
  }
  if (sp.meets(l, lt)) {
    throw TransversalFailure(TransversalError::conjugate_not_skew,
                             "transversal meets its tau_eta image");
  }
  Spread s;
  for (const auto& Q : pts) {
    const int id = S.line_id(sp.join(Q, sp.tau(e, Q)));
    if (id < 0) throw std::logic_error("<Q, Q^tau> is not a line of Sigma_eta");
    s.lines.push_back(id);
  }
  std::sort(s.lines.begin(), s.lines.end());
  s.tag = SpreadTag::desarguesian;
  s.transversal = l;
  return s;
}

Regulus regulus_of(const Setting& S, const ProjLine& l) {
  if (S.L_index(l) < 0) throw std::invalid_argument("line is not in L");
  const Spread s = spread_from_transversal(S, l);
  const auto& D = S.desarguesian_ids();
  Regulus R;
  std::set_intersection(s.lines.begin(), s.lines.end(), D.begin(), D.end(),
                        std::back_inserter(R.lines));
  return R;
}

std::vector<int> common_transversals(const Setting& S, const std::vector<int>& lines) {
  if (lines.empty()) throw std::invalid_argument("common_transversals of an empty set");
  std::vector<int> out;
  for (int X : S.points_of_line(lines.front())) {
    for (int m : S.lines_through(X)) {
      if (std::binary_search(lines.begin(), lines.end(), m)) continue;
      bool all = true;
      for (std::size_t i = 1; i < lines.size() && all; ++i) all = S.share_point(m, lines[i]);
      if (all) out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Regulus> opposite_of(const Setting& S, const std::vector<int>& lines) {
  std::vector<int> sorted = lines;
  std::sort(sorted.begin(), sorted.end());
  if (static_cast<int>(sorted.size()) != S.q() + 1) return std::nullopt;
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return std::nullopt;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (S.share_point(sorted[i], sorted[j])) return std::nullopt;
    }
  }
  auto T = common_transversals(S, sorted);
  if (static_cast<int>(T.size()) != S.q() + 1) return std::nullopt;
  return Regulus{std::move(T)};
}

Regulus opposite_regulus(const Setting& S, const Regulus& R) {
  auto o = opposite_of(S, R.lines);
  if (!o) throw std::invalid_argument("line set is not a regulus");
  return *o;
}

Spread hall_spread(const Setting& S, const ProjLine& l) {
  const Regulus R = regulus_of(S, l);
  const Regulus Ro = opposite_regulus(S, R);
  const Spread base = spread_from_transversal(S, l);
  Spread h;
  std::set_difference(base.lines.begin(), base.lines.end(), R.lines.begin(), R.lines.end(),
                      std::back_inserter(h.lines));
  h.lines.insert(h.lines.end(), Ro.lines.begin(), Ro.lines.end());
  std::sort(h.lines.begin(), h.lines.end());
  h.tag = SpreadTag::hall;
  h.transversal = l;
  h.switched = R.lines;
  return h;
}

SpreadReport is_spread(const Setting& S, const std::vector<int>& lines) {
  SpreadReport rep;
  std::vector<int> owner(S.point_count(), -1);
  for (int id : lines) {
    if (id < 0 || id >= S.line_count()) {
      rep.ok = false;
      rep.message = "line id " + std::to_string(id) + " is not a line of Sigma_eta";
      return rep;
    }
    for (int p : S.points_of_line(id)) {
      if (owner[p] >= 0 && rep.overlap_point < 0) {
        rep.overlap_point = p;
        rep.overlap_lines[0] = owner[p];
        rep.overlap_lines[1] = id;
      }
      owner[p] = id;
    }
  }
  for (int p = 0; p < S.point_count(); ++p) {
    if (owner[p] < 0) {
      rep.gap_point = p;
      break;
    }
  }
  const int want = S.q() * S.q() + 1;
  if (static_cast<int>(lines.size()) != want) {
    rep.ok = false;
    rep.message = "has " + std::to_string(lines.size()) + " lines, expected " + std::to_string(want);
  }
  if (rep.overlap_point >= 0 && rep.ok) {
    rep.ok = false;
    rep.message = "point " + std::to_string(rep.overlap_point) + " lies on lines " +
                  std::to_string(rep.overlap_lines[0]) + " and " + std::to_string(rep.overlap_lines[1]);
  }
  if (rep.gap_point >= 0 && rep.ok) {
    rep.ok = false;
    rep.message = "point " + std::to_string(rep.gap_point) + " is not covered";
  }
  if (rep.overlap_point >= 0 || rep.gap_point >= 0) rep.ok = false;
  return rep;
}

std::vector<ProjPoint> extension_points(const Setting& S, const std::vector<ProjLine>& lines) {
  std::vector<ProjPoint> out;
  for (const auto& l : lines) {
    auto pts = S.space().points_on(l);
    out.insert(out.end(), pts.begin(), pts.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ProjLine> ambient_lines(const Setting& S, const std::vector<int>& ids) {
  std::vector<ProjLine> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(S.sigma_line(id));
  return out;
}

std::vector<ProjPoint> plane_section(const Setting& S, const std::vector<ProjLine>& lines,
                                     const ProjPlane& pi) {
  const auto& sp = S.space();
  std::vector<ProjPoint> out;
  for (const auto& l : lines) {
    if (sp.in(l, pi)) {
      auto pts = sp.points_on(l);
      out.insert(out.end(), pts.begin(), pts.end());
    } else if (auto X = sp.meet(l, pi)) {
      out.push_back(*X);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_baer_subplane(const Setting& S, const std::vector<ProjPoint>& pts) {
  const int q = S.q();
  const std::size_t n = pts.size();
  if (static_cast<int>(n) != q * q + q + 1) return false;
  std::unordered_set<std::uint32_t> keys;
  for (const auto& p : pts) keys.insert(p.key());
  if (keys.size() != n) return false;
  std::vector<std::uint32_t> first(n);
  for (std::size_t i = 0; i < n; ++i) first[i] = pts[i].key();
  std::set<std::pair<std::uint32_t, std::uint32_t>> done;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (done.count({first[i], first[j]})) continue;
      std::vector<std::uint32_t> on;
      for (const auto& X : S.space().points_on(S.space().join(pts[i], pts[j]))) {
        if (keys.count(X.key())) on.push_back(X.key());
      }
      if (static_cast<int>(on.size()) != q + 1) return false;
      std::sort(on.begin(), on.end());
      for (std::size_t a = 0; a < on.size(); ++a) {
        for (std::size_t b = a + 1; b < on.size(); ++b) done.insert({on[a], on[b]});
      }
    }
  }
  return true;
}

ProjLine l_lambda(const Setting& S, int alpha_idx, int lambda_code) {
  const auto& F = S.field();
  if (lambda_code < 0 || lambda_code >= S.q()) throw std::invalid_argument("lambda must lie in GF(q)");
  const Fq2 a = S.alpha(alpha_idx);
  const Fq2 lx = F.mul(F.element(lambda_code), F.generator());
  return S.space().line({F.one(), F.zero(), a, F.zero()},
                        {lx, F.one(), F.mul(a, F.frobenius(lx)), a});
}

Collineation map_phi(const Setting& S, int alpha_idx) {
  const auto& F = S.field();
  const Fq2 a = S.alpha(alpha_idx), aq = F.frobenius(a), o = F.one();
  Collineation c;
  c.m = {o, {}, aq, {}, {}, o, {}, aq, a, {}, o, {}, {}, a, {}, o};
  return c;
}

Collineation map_xi(const Setting& S, int lambda_code) {
  const auto& F = S.field();
  if (lambda_code < 0 || lambda_code >= S.q()) throw std::invalid_argument("lambda must lie in GF(q)");
  const Fq2 lx = F.mul(F.element(lambda_code), F.generator());
  Collineation c = Space::identity();
  c.m[1] = lx;
  c.m[11] = F.frobenius(lx);
  return c;
}

Collineation map_phi_lambda(const Setting& S, int alpha_idx, int lambda_code) {
  return S.space().compose(map_phi(S, alpha_idx), map_xi(S, lambda_code));
}

}  // namespace spreadsmith
