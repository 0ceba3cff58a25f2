#include "spreadsmith/setting.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace spreadsmith {

Setting::Setting(Tower tower) : tower_(std::move(tower)), space_(tower_.field()) {
  for (int i = 0; i < q() - 1; ++i) sigma_.push_back(space_.sigma_points(alpha(i)));
  t1_ = space_.join(U(1), U(2));
  t2_ = space_.join(U(3), U(4));
  r_u1_ = space_.join(U(1), U(3));
  build_sigma_eta();
  build_L();
}

ProjPoint Setting::U(int i) const {
  if (i < 1 || i > 4) throw std::out_of_range("U index must be in 1..4");
  Vec4 v{};
  v[i - 1] = field().one();
  return ProjPoint{v};
}

ProjPoint Setting::point_P(int alpha_idx, int u_pow) const {
  const auto& F = field();
  return space_.point({F.one(), F.zero(), F.mul(alpha(alpha_idx), tower_.unit(u_pow)), F.zero()});
}

ProjPlane Setting::plane_pi(int alpha_idx, int v_pow) const {
  const auto& F = field();
  const Fq2 c = F.mul(alpha(alpha_idx), tower_.unit(v_pow));
  return space_.plane({F.zero(), F.neg(c), F.zero(), F.one()});
}

void Setting::build_sigma_eta() {
  const auto& F = field();
  const Fq2 e = eta();
  const int n = F.order();
  const int qq = q();

  // Points in key order, each with an (x, y) representative.
  std::vector<std::pair<ProjPoint, std::array<Fq2, 2>>> found;
  std::unordered_map<std::uint32_t, int> seen;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == 0 && b == 0) continue;
      const Fq2 x = F.element(a), y = F.element(b);
      const ProjPoint p = space_.point({x, y, F.mul(e, F.frobenius(x)), F.mul(e, F.frobenius(y))});
      if (seen.emplace(p.key(), 0).second) found.push_back({p, {x, y}});
    }
  }
  std::sort(found.begin(), found.end(),
            [](const auto& l, const auto& r) { return l.first.key() < r.first.key(); });
  for (const auto& [p, rep] : found) {
    point_ids_.emplace(p.key(), static_cast<int>(points_.size()));
    points_.push_back(p);
    reps_.push_back(rep);
  }

  // Lines: GF(q)-combinations of two representatives stay in Sigma_eta.
  const int np = point_count();
  std::vector<bool> covered(static_cast<std::size_t>(np) * np, false);
  std::vector<std::pair<ProjLine, std::vector<int>>> raw;
  auto vec_of = [&](int id, Fq2 s) {
    const Fq2 x = F.mul(s, reps_[id][0]), y = F.mul(s, reps_[id][1]);
    return Vec4{x, y, F.mul(e, F.frobenius(x)), F.mul(e, F.frobenius(y))};
  };
  for (int i = 0; i < np; ++i) {
    for (int j = i + 1; j < np; ++j) {
      if (covered[static_cast<std::size_t>(i) * np + j]) continue;
      std::vector<int> pts{i};
      for (int c = 0; c < qq; ++c) {
        const Vec4 a = vec_of(i, F.element(c));
        const Vec4 b = vec_of(j, F.one());
        Vec4 s;
        for (int k = 0; k < 4; ++k) s[k] = F.add(a[k], b[k]);
        pts.push_back(point_ids_.at(space_.point(s).key()));
      }
      std::sort(pts.begin(), pts.end());
      for (int a : pts) {
        for (int b : pts) covered[static_cast<std::size_t>(a) * np + b] = true;
      }
      raw.push_back({space_.join(points_[i], points_[j]), std::move(pts)});
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& l, const auto& r) { return l.first.key() < r.first.key(); });

  const int per_point = qq * qq + qq + 1;
  std::vector<int> fill(np, 0);
  point_lines_.assign(static_cast<std::size_t>(np) * per_point, -1);
  for (const auto& [l, pts] : raw) {
    const int id = static_cast<int>(lines_.size());
    line_ids_.emplace(l.key(), id);
    lines_.push_back(l);
    for (int p : pts) {
      line_points_.push_back(p);
      point_lines_[static_cast<std::size_t>(p) * per_point + fill[p]++] = id;
    }
  }

  for (const auto& P : space_.points_on(t1_)) {
    desarguesian_.push_back(line_id(space_.join(P, space_.tau(e, P))));
  }
  std::sort(desarguesian_.begin(), desarguesian_.end());
  r_u1_id_ = line_id(r_u1_);
}

void Setting::build_L() {
  const auto& I = tower_.lambda().I;
  const int n = q() + 1;
  for (int ai : I) {
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        const ProjPoint P = point_P(ai, u);
        const ProjPlane pi = plane_pi(ai, v);
        std::vector<ProjLine> members;
        for (const auto& X : sigma_[ai]) {
          if (X == P || !space_.on(X, pi)) continue;
          const ProjLine l = space_.join(P, X);
          if (l != r_u1_) members.push_back(l);
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (static_cast<int>(members.size()) != q()) {
          throw std::logic_error("pencil does not have q+1 lines");
        }
        for (const auto& l : members) {
          if (!L_ids_.emplace(l.key(), static_cast<int>(L_lines_.size())).second) {
            throw std::logic_error("pencils of L overlap");
          }
          L_lines_.push_back(l);
          L_labels_.push_back({ai, u, v});
        }
      }
    }
  }
}

int Setting::point_id(const ProjPoint& p) const {
  auto it = point_ids_.find(p.key());
  return it == point_ids_.end() ? -1 : it->second;
}

int Setting::line_id(const ProjLine& l) const {
  auto it = line_ids_.find(l.key());
  return it == line_ids_.end() ? -1 : it->second;
}

std::span<const int> Setting::points_of_line(int id) const {
  const std::size_t k = static_cast<std::size_t>(q()) + 1;
  return {line_points_.data() + k * id, k};
}

std::span<const int> Setting::lines_through(int point) const {
  const std::size_t k = static_cast<std::size_t>(q()) * q() + q() + 1;
  return {point_lines_.data() + k * point, k};
}

int Setting::line_through(int a, int b) const {
  if (a == b) throw std::invalid_argument("line_through needs distinct points");
  return line_id(space_.join(points_[a], points_[b]));
}

bool Setting::share_point(int line_a, int line_b) const {
  auto a = points_of_line(line_a);
  auto b = points_of_line(line_b);
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i; else ++j;
  }
  return false;
}

int Setting::L_index(const ProjLine& l) const {
  auto it = L_ids_.find(l.key());
  return it == L_ids_.end() ? -1 : it->second;
}

int Setting::pencil_index(const Candidate& c) const {
  const auto& I = tower_.lambda().I;
  auto it = std::lower_bound(I.begin(), I.end(), c.alpha_idx);
  if (it == I.end() || *it != c.alpha_idx) return -1;
  const int n = q() + 1;
  if (c.u_pow < 0 || c.u_pow >= n || c.v_pow < 0 || c.v_pow >= n) return -1;
  return (static_cast<int>(it - I.begin()) * n + c.u_pow) * n + c.v_pow;
}

std::span<const ProjLine> Setting::pencil_lines(const Candidate& c) const {
  const int idx = pencil_index(c);
  if (idx < 0) throw std::invalid_argument("pencil label outside I x U x U");
  return {L_lines_.data() + static_cast<std::size_t>(idx) * q(), static_cast<std::size_t>(q())};
}

}  // namespace spreadsmith
