#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "spreadsmith/field.hpp"

namespace spreadsmith {

using Vec4 = std::array<Fq2, 4>;
using Plucker = std::array<Fq2, 6>;  // p12, p13, p14, p23, p24, p34

// Point of PG(3,q^2); first nonzero coordinate is 1.
struct ProjPoint {
  Vec4 x{};

  std::uint32_t key() const {
    return (std::uint32_t{x[0].v} << 24) | (std::uint32_t{x[1].v} << 16) |
           (std::uint32_t{x[2].v} << 8) | std::uint32_t{x[3].v};
  }
  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
  friend auto operator<=>(const ProjPoint& a, const ProjPoint& b) { return a.key() <=> b.key(); }
};

// Plane a.x = 0 of PG(3,q^2); first nonzero coefficient is 1.
struct ProjPlane {
  Vec4 a{};

  std::uint32_t key() const { return ProjPoint{a}.key(); }
  friend bool operator==(const ProjPlane&, const ProjPlane&) = default;
  friend auto operator<=>(const ProjPlane& l, const ProjPlane& r) { return l.key() <=> r.key(); }
};

// Line of PG(3,q^2) in reduced row echelon form, with normalized Pluecker
// coordinates cached.
class ProjLine {
 public:
  ProjLine() = default;

  const Vec4& row(int i) const { return rows_[i]; }
  const Plucker& plucker() const { return plucker_; }
  std::uint64_t key() const {
    std::uint64_t k = 0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 4; ++j) k = (k << 8) | rows_[i][j].v;
    }
    return k;
  }

  friend bool operator==(const ProjLine& a, const ProjLine& b) { return a.rows_ == b.rows_; }
  friend auto operator<=>(const ProjLine& a, const ProjLine& b) { return a.key() <=> b.key(); }

 private:
  friend class Space;
  std::array<Vec4, 2> rows_{};
  Plucker plucker_{};
};

// Semilinear map x -> M * x^(p^twist); M is row-major.
struct Collineation {
  std::array<Fq2, 16> m{};
  int twist = 0;

  friend bool operator==(const Collineation&, const Collineation&) = default;
};

// Incidence, canonical forms and semilinear maps in PG(3,q^2).
class Space {
 public:
  explicit Space(const GaloisField& F) : F_(&F) {}

  const GaloisField& field() const { return *F_; }

  ProjPoint point(const Vec4& v) const;  // throws on the zero vector
  ProjPlane plane(const Vec4& a) const;
  ProjLine line(const Vec4& a, const Vec4& b) const;  // throws unless independent
  ProjLine join(const ProjPoint& a, const ProjPoint& b) const { return line(a.x, b.x); }

  Fq2 dot(const Vec4& a, const Vec4& b) const;
  bool on(const ProjPoint& p, const ProjLine& l) const;
  bool on(const ProjPoint& p, const ProjPlane& pi) const { return dot(pi.a, p.x) == F_->zero(); }
  bool in(const ProjLine& l, const ProjPlane& pi) const;

  bool meets(const ProjLine& a, const ProjLine& b) const;  // true also when equal
  std::optional<ProjPoint> meet(const ProjLine& a, const ProjLine& b) const;  // distinct lines
  std::optional<ProjPoint> meet(const ProjLine& l, const ProjPlane& pi) const;  // none if l in pi
  std::optional<ProjLine> meet(const ProjPlane& a, const ProjPlane& b) const;
  ProjPlane span(const ProjLine& l, const ProjPoint& p) const;  // throws if p on l
  ProjPlane span(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) const;

  std::vector<ProjPoint> points_on(const ProjLine& l) const;  // sorted
  std::vector<ProjPoint> points_on(const ProjPlane& pi) const;  // sorted
  std::vector<ProjPoint> all_points() const;  // sorted
  std::vector<ProjPlane> all_planes() const;
  std::vector<ProjLine> all_lines() const;  // sorted

  Plucker plucker(const Vec4& a, const Vec4& b) const;  // unnormalized minors
  ProjLine line_from_plucker(const Plucker& p) const;  // throws off the Klein quadric
  Fq2 klein_form(const Plucker& a, const Plucker& b) const;  // zero iff lines meet

  // The involution tau_alpha; depends on alpha only through its norm.
  ProjPoint tau(Fq2 alpha, const ProjPoint& p) const;
  ProjLine tau(Fq2 alpha, const ProjLine& l) const;
  Collineation tau_collineation(Fq2 alpha) const;
  bool in_sigma(Fq2 alpha, const ProjPoint& p) const { return tau(alpha, p) == p; }
  std::vector<ProjPoint> sigma_points(Fq2 alpha) const;  // sorted
  bool is_baer_subline(const ProjLine& l, Fq2 alpha) const;

  static Collineation identity();
  Vec4 apply(const Collineation& c, const Vec4& v) const;
  ProjPoint apply(const Collineation& c, const ProjPoint& p) const;
  ProjLine apply(const Collineation& c, const ProjLine& l) const;
  ProjPlane apply(const Collineation& c, const ProjPlane& pi) const;
  Collineation compose(const Collineation& first, const Collineation& second) const;
  Collineation inverse(const Collineation& c) const;
  bool is_invertible(const Collineation& c) const;

 private:
  std::optional<std::array<Fq2, 16>> invert(const std::array<Fq2, 16>& m) const;
  Vec4 twist(const Vec4& v, int e) const;
  Plucker normalized(Plucker p) const;

  const GaloisField* F_;
};

}  // namespace spreadsmith
