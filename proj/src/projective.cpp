#include "spreadsmith/projective.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace spreadsmith {
namespace {

// Row-reduces in place; returns the pivot columns.
std::vector<int> rref(const GaloisField& F, std::vector<Vec4>& rows) {
  std::vector<int> pivots;
  std::size_t r = 0;
  for (int col = 0; col < 4 && r < rows.size(); ++col) {
    std::size_t i = r;
    while (i < rows.size() && rows[i][col] == F.zero()) ++i;
    if (i == rows.size()) continue;
    std::swap(rows[i], rows[r]);
    const Fq2 s = F.inv(rows[r][col]);
    for (auto& x : rows[r]) x = F.mul(x, s);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][col] == F.zero()) continue;
      const Fq2 f = rows[k][col];
      for (int j = 0; j < 4; ++j) rows[k][j] = F.sub(rows[k][j], F.mul(f, rows[r][j]));
    }
    pivots.push_back(col);
    ++r;
  }
  rows.resize(pivots.size());
  return pivots;
}

std::vector<Vec4> nullspace(const GaloisField& F, std::vector<Vec4> rows) {
  const auto pivots = rref(F, rows);
  std::vector<Vec4> basis;
  for (int f = 0; f < 4; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    Vec4 v{};
    v[f] = F.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(rows[i][f]);
    basis.push_back(v);
  }
  return basis;
}

Vec4 normalize(const GaloisField& F, Vec4 v) {
  for (int i = 0; i < 4; ++i) {
    if (v[i] != F.zero()) {
      const Fq2 s = F.inv(v[i]);
      for (auto& x : v) x = F.mul(x, s);
      return v;
    }
  }
  throw std::invalid_argument("zero vector has no projective point");
}

}  // namespace

Fq2 Space::dot(const Vec4& a, const Vec4& b) const {
  Fq2 s = F_->zero();
  for (int i = 0; i < 4; ++i) s = F_->add(s, F_->mul(a[i], b[i]));
  return s;
}

ProjPoint Space::point(const Vec4& v) const { return ProjPoint{normalize(*F_, v)}; }

ProjPlane Space::plane(const Vec4& a) const { return ProjPlane{normalize(*F_, a)}; }

Plucker Space::plucker(const Vec4& a, const Vec4& b) const {
  const GaloisField& F = *F_;
  auto minor = [&](int i, int j) { return F.sub(F.mul(a[i], b[j]), F.mul(a[j], b[i])); };
  return {minor(0, 1), minor(0, 2), minor(0, 3), minor(1, 2), minor(1, 3), minor(2, 3)};
}

Plucker Space::normalized(Plucker p) const {
  for (int i = 0; i < 6; ++i) {
    if (p[i] != F_->zero()) {
      const Fq2 s = F_->inv(p[i]);
      for (auto& x : p) x = F_->mul(x, s);
      return p;
    }
  }
  throw std::invalid_argument("zero Pluecker vector");
}

ProjLine Space::line(const Vec4& a, const Vec4& b) const {
  std::vector<Vec4> rows{a, b};
  rref(*F_, rows);
  if (rows.size() != 2) throw std::invalid_argument("line needs two independent vectors");
  ProjLine l;
  l.rows_ = {rows[0], rows[1]};
  l.plucker_ = normalized(plucker(rows[0], rows[1]));
  return l;
}

bool Space::on(const ProjPoint& p, const ProjLine& l) const {
  // In RREF the pivot columns give the coefficients directly.
  int c0 = 0, c1 = 0;
  while (l.rows_[0][c0] == F_->zero()) ++c0;
  while (l.rows_[1][c1] == F_->zero()) ++c1;
  for (int j = 0; j < 4; ++j) {
    const Fq2 v = F_->add(F_->mul(p.x[c0], l.rows_[0][j]), F_->mul(p.x[c1], l.rows_[1][j]));
    if (v != p.x[j]) return false;
  }
  return true;
}

bool Space::in(const ProjLine& l, const ProjPlane& pi) const {
  return dot(pi.a, l.row(0)) == F_->zero() && dot(pi.a, l.row(1)) == F_->zero();
}

Fq2 Space::klein_form(const Plucker& a, const Plucker& b) const {
  const GaloisField& F = *F_;
  Fq2 s = F.add(F.mul(a[0], b[5]), F.mul(a[5], b[0]));
  s = F.sub(s, F.add(F.mul(a[1], b[4]), F.mul(a[4], b[1])));
  s = F.add(s, F.add(F.mul(a[2], b[3]), F.mul(a[3], b[2])));
  return s;
}

bool Space::meets(const ProjLine& a, const ProjLine& b) const {
  return klein_form(a.plucker(), b.plucker()) == F_->zero();
}

std::optional<ProjPoint> Space::meet(const ProjLine& l, const ProjPlane& pi) const {
  const Fq2 da = dot(pi.a, l.row(0));
  const Fq2 db = dot(pi.a, l.row(1));
  if (da == F_->zero() && db == F_->zero()) return std::nullopt;
  Vec4 v;
  for (int i = 0; i < 4; ++i) {
    v[i] = F_->sub(F_->mul(db, l.row(0)[i]), F_->mul(da, l.row(1)[i]));
  }
  return point(v);
}

std::optional<ProjPoint> Space::meet(const ProjLine& a, const ProjLine& b) const {
  if (a == b || !meets(a, b)) return std::nullopt;
  for (int i = 0; i < 4; ++i) {
    Vec4 e{};
    e[i] = F_->one();
    const ProjPoint u{e};
    if (on(u, b)) continue;
    const ProjPlane pi = span(b, u);
    if (in(a, pi)) continue;
    return meet(a, pi);
  }
  throw std::logic_error("coplanar lines without a separating plane");
}

std::optional<ProjLine> Space::meet(const ProjPlane& a, const ProjPlane& b) const {
  if (a == b) return std::nullopt;
  const auto basis = nullspace(*F_, {a.a, b.a});
  return line(basis[0], basis[1]);
}

ProjPlane Space::span(const ProjLine& l, const ProjPoint& p) const {
  const auto basis = nullspace(*F_, {l.row(0), l.row(1), p.x});
  if (basis.size() != 1) throw std::invalid_argument("point lies on the line");
  return plane(basis[0]);
}

ProjPlane Space::span(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) const {
  const auto basis = nullspace(*F_, {a.x, b.x, c.x});
  if (basis.size() != 1) throw std::invalid_argument("points are collinear");
  return plane(basis[0]);
}

std::vector<ProjPoint> Space::points_on(const ProjLine& l) const {
  std::vector<ProjPoint> out;
  out.push_back(point(l.row(1)));
  for (int t = 0; t < F_->order(); ++t) {
    const Fq2 s = F_->element(t);
    Vec4 v;
    for (int i = 0; i < 4; ++i) v[i] = F_->add(l.row(0)[i], F_->mul(s, l.row(1)[i]));
    out.push_back(point(v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ProjPoint> Space::points_on(const ProjPlane& pi) const {
  auto basis = nullspace(*F_, {pi.a});
  rref(*F_, basis);
  std::vector<ProjPoint> out;
  const int n = F_->order();
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      Vec4 v;
      for (int i = 0; i < 4; ++i) {
        v[i] = F_->add(basis[0][i], F_->add(F_->mul(F_->element(s), basis[1][i]),
                                            F_->mul(F_->element(t), basis[2][i])));
      }
      out.push_back(point(v));
    }
    Vec4 v;
    for (int i = 0; i < 4; ++i) v[i] = F_->add(basis[1][i], F_->mul(F_->element(s), basis[2][i]));
    out.push_back(point(v));
  }
  out.push_back(point(basis[2]));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ProjPoint> Space::all_points() const {
  std::vector<ProjPoint> out;
  const int n = F_->order();
  for (int lead = 0; lead < 4; ++lead) {
    int free = 3 - lead;
    int count = 1;
    for (int i = 0; i < free; ++i) count *= n;
    for (int c = 0; c < count; ++c) {
      Vec4 v{};
      v[lead] = F_->one();
      int r = c;
      for (int i = 3; i > lead; --i) {
        v[i] = F_->element(r % n);
        r /= n;
      }
      out.push_back(ProjPoint{v});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ProjPlane> Space::all_planes() const {
  std::vector<ProjPlane> out;
  for (const auto& p : all_points()) out.push_back(ProjPlane{p.x});
  return out;
}

std::vector<ProjLine> Space::all_lines() const {
  std::vector<ProjLine> out;
  const int n = F_->order();
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      std::vector<int> free0, free1;
      for (int k = i + 1; k < 4; ++k) {
        if (k != j) free0.push_back(k);
      }
      for (int k = j + 1; k < 4; ++k) free1.push_back(k);
      const int slots = static_cast<int>(free0.size() + free1.size());
      int count = 1;
      for (int s = 0; s < slots; ++s) count *= n;
      for (int c = 0; c < count; ++c) {
        Vec4 a{}, b{};
        a[i] = F_->one();
        b[j] = F_->one();
        int r = c;
        for (int k : free0) {
          a[k] = F_->element(r % n);
          r /= n;
        }
        for (int k : free1) {
          b[k] = F_->element(r % n);
          r /= n;
        }
        out.push_back(line(a, b));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProjLine Space::line_from_plucker(const Plucker& p) const {
  bool nonzero = false;
  for (auto x : p) nonzero = nonzero || x != F_->zero();
  if (!nonzero) throw std::invalid_argument("zero Pluecker vector");
  const GaloisField& F = *F_;
  const Fq2 rel = F.add(F.sub(F.mul(p[0], p[5]), F.mul(p[1], p[4])), F.mul(p[2], p[3]));
  if (rel != F.zero()) throw std::invalid_argument("Pluecker vector is off the Klein quadric");
  // Row i of the skew matrix (p_ij) is a point of the line whenever nonzero.
  auto at = [&](int i, int j) -> Fq2 {
    static constexpr int idx[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    if (i == j) return F.zero();
    const Fq2 v = p[idx[i][j]];
    return i < j ? v : F.neg(v);
  };
  std::vector<Vec4> rows;
  for (int i = 0; i < 4; ++i) {
    Vec4 v;
    for (int j = 0; j < 4; ++j) v[j] = at(i, j);
    rows.push_back(v);
  }
  rref(F, rows);
  if (rows.size() != 2) throw std::invalid_argument("Pluecker vector does not define a line");
  ProjLine l = line(rows[0], rows[1]);
  if (l.plucker() != normalized(p)) {
    throw std::invalid_argument("Pluecker vector is off the Klein quadric");
  }
  return l;
}

ProjPoint Space::tau(Fq2 alpha, const ProjPoint& p) const {
  if (alpha == F_->zero()) throw std::invalid_argument("tau needs nonzero alpha");
  const Fq2 n = F_->norm(alpha);
  const auto& x = p.x;
  return point({F_->frobenius(x[2]), F_->frobenius(x[3]), F_->mul(n, F_->frobenius(x[0])),
                F_->mul(n, F_->frobenius(x[1]))});
}

ProjLine Space::tau(Fq2 alpha, const ProjLine& l) const {
  return apply(tau_collineation(alpha), l);
}

Collineation Space::tau_collineation(Fq2 alpha) const {
  if (alpha == F_->zero()) throw std::invalid_argument("tau needs nonzero alpha");
  const Fq2 n = F_->norm(alpha);
  Collineation c;
  c.m[0 * 4 + 2] = F_->one();
  c.m[1 * 4 + 3] = F_->one();
  c.m[2 * 4 + 0] = n;
  c.m[3 * 4 + 1] = n;
  c.twist = F_->m();
  return c;
}

std::vector<ProjPoint> Space::sigma_points(Fq2 alpha) const {
  std::set<ProjPoint> pts;
  const int n = F_->order();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == 0 && b == 0) continue;
      const Fq2 x = F_->element(a), y = F_->element(b);
      pts.insert(point({x, y, F_->mul(alpha, F_->frobenius(x)), F_->mul(alpha, F_->frobenius(y))}));
    }
  }
  return {pts.begin(), pts.end()};
}

bool Space::is_baer_subline(const ProjLine& l, Fq2 alpha) const {
  if (tau(alpha, l) != l) return false;
  if (in_sigma(alpha, point(l.row(1)))) return true;
  for (int t = 0; t < F_->order(); ++t) {
    Vec4 v;
    for (int i = 0; i < 4; ++i) {
      v[i] = F_->add(l.row(0)[i], F_->mul(F_->element(t), l.row(1)[i]));
    }
    if (in_sigma(alpha, point(v))) return true;
  }
  return false;
}

Collineation Space::identity() {
  Collineation c;
  for (int i = 0; i < 4; ++i) c.m[i * 4 + i] = Fq2{1};
  return c;
}

Vec4 Space::twist(const Vec4& v, int e) const {
  if (e == 0) return v;
  Vec4 out;
  for (int i = 0; i < 4; ++i) out[i] = F_->frobenius_p(v[i], e);
  return out;
}

Vec4 Space::apply(const Collineation& c, const Vec4& v) const {
  const Vec4 s = twist(v, c.twist);
  Vec4 out;
  for (int i = 0; i < 4; ++i) {
    Fq2 acc = F_->zero();
    for (int j = 0; j < 4; ++j) acc = F_->add(acc, F_->mul(c.m[i * 4 + j], s[j]));
    out[i] = acc;
  }
  return out;
}

ProjPoint Space::apply(const Collineation& c, const ProjPoint& p) const {
  return point(apply(c, p.x));
}

ProjLine Space::apply(const Collineation& c, const ProjLine& l) const {
  return line(apply(c, l.row(0)), apply(c, l.row(1)));
}

ProjPlane Space::apply(const Collineation& c, const ProjPlane& pi) const {
  const auto inv = invert(c.m);
  if (!inv) throw std::invalid_argument("singular collineation");
  const Vec4 s = twist(pi.a, c.twist);
  Vec4 out;
  for (int i = 0; i < 4; ++i) {
    Fq2 acc = F_->zero();
    for (int j = 0; j < 4; ++j) acc = F_->add(acc, F_->mul((*inv)[j * 4 + i], s[j]));
    out[i] = acc;
  }
  return plane(out);
}

Collineation Space::compose(const Collineation& first, const Collineation& second) const {
  Collineation out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Fq2 acc = F_->zero();
      for (int k = 0; k < 4; ++k) {
        acc = F_->add(acc, F_->mul(second.m[i * 4 + k],
                                   F_->frobenius_p(first.m[k * 4 + j], second.twist)));
      }
      out.m[i * 4 + j] = acc;
    }
  }
  out.twist = (first.twist + second.twist) % (2 * F_->m());
  return out;
}

Collineation Space::inverse(const Collineation& c) const {
  const auto inv = invert(c.m);
  if (!inv) throw std::invalid_argument("singular collineation");
  Collineation out;
  const int e = (2 * F_->m() - c.twist) % (2 * F_->m());
  for (int i = 0; i < 16; ++i) out.m[i] = F_->frobenius_p((*inv)[i], e);
  out.twist = e;
  return out;
}

bool Space::is_invertible(const Collineation& c) const { return invert(c.m).has_value(); }

std::optional<std::array<Fq2, 16>> Space::invert(const std::array<Fq2, 16>& m) const {
  const GaloisField& F = *F_;
  std::array<std::array<Fq2, 8>, 4> a{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = m[i * 4 + j];
    a[i][4 + i] = F.one();
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    while (piv < 4 && a[piv][col] == F.zero()) ++piv;
    if (piv == 4) return std::nullopt;
    std::swap(a[piv], a[col]);
    const Fq2 s = F.inv(a[col][col]);
    for (auto& x : a[col]) x = F.mul(x, s);
    for (int r = 0; r < 4; ++r) {
      if (r == col || a[r][col] == F.zero()) continue;
      const Fq2 f = a[r][col];
      for (int j = 0; j < 8; ++j) a[r][j] = F.sub(a[r][j], F.mul(f, a[col][j]));
    }
  }
  std::array<Fq2, 16> out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i * 4 + j] = a[i][4 + j];
  }
  return out;
}

}  // namespace spreadsmith
