#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "spreadsmith/candidate.hpp"
#include "spreadsmith/projective.hpp"
#include "spreadsmith/tower.hpp"

namespace spreadsmith {

// The fixed configuration in PG(3,q^2): the tower, the Baer subgeometries
// Sigma_alpha, an index of the points and lines of Sigma_eta, the named
// points and lines, and the candidate line set L. Immutable once built; not
// copyable because Space keeps a pointer into the tower.
class Setting {
 public:
  explicit Setting(Tower tower);
  Setting(const Setting&) = delete;
  Setting& operator=(const Setting&) = delete;

  const Tower& tower() const { return tower_; }
  const GaloisField& field() const { return tower_.field(); }
  const Space& space() const { return space_; }
  int q() const { return tower_.q(); }
  Fq2 alpha(int idx) const { return tower_.alpha(idx); }
  Fq2 eta() const { return tower_.eta(); }

  ProjPoint U(int i) const;  // i in 1..4
  const ProjLine& t1() const { return t1_; }
  const ProjLine& t2() const { return t2_; }
  const ProjLine& r_u1() const { return r_u1_; }
  ProjPoint point_P(int alpha_idx, int u_pow) const;   // (1, 0, alpha u, 0)
  ProjPlane plane_pi(int alpha_idx, int v_pow) const;  // X4 = alpha v X2

  const std::vector<ProjPoint>& subgeometry(int alpha_idx) const { return sigma_.at(alpha_idx); }

  // Points and lines of Sigma_eta, ids in increasing key order.
  int point_count() const { return static_cast<int>(points_.size()); }
  const ProjPoint& sigma_point(int id) const { return points_[id]; }
  int point_id(const ProjPoint& p) const;  // -1 if p is not in Sigma_eta
  int line_count() const { return static_cast<int>(lines_.size()); }
  const ProjLine& sigma_line(int id) const { return lines_[id]; }
  int line_id(const ProjLine& l) const;  // -1 if l is not a line of Sigma_eta
  std::span<const int> points_of_line(int id) const;
  std::span<const int> lines_through(int point) const;
  int line_through(int a, int b) const;  // points must be distinct
  bool share_point(int line_a, int line_b) const;

  // Ids of the Desarguesian spread D_eta, sorted.
  const std::vector<int>& desarguesian_ids() const { return desarguesian_; }
  int r_u1_id() const { return r_u1_id_; }

  // The line set L: pencils in lexicographic label order, each contributing
  // its q lines other than r_U1 in key order.
  const std::vector<ProjLine>& lines_L() const { return L_lines_; }
  const std::vector<Candidate>& labels_L() const { return L_labels_; }
  int L_index(const ProjLine& l) const;  // -1 when not in L
  int pencil_index(const Candidate& c) const;  // -1 when alpha is not in I
  std::span<const ProjLine> pencil_lines(const Candidate& c) const;  // without r_U1

 private:
  void build_sigma_eta();
  void build_L();

  Tower tower_;
  Space space_;
  std::vector<std::vector<ProjPoint>> sigma_;
  ProjLine t1_, t2_, r_u1_;

  std::vector<ProjPoint> points_;
  std::vector<std::array<Fq2, 2>> reps_;  // (x, y) with point (x, y, eta x^q, eta y^q)
  std::unordered_map<std::uint32_t, int> point_ids_;
  std::vector<ProjLine> lines_;
  std::unordered_map<std::uint64_t, int> line_ids_;
  std::vector<int> line_points_;   // (q+1) per line
  std::vector<int> point_lines_;   // (q^2+q+1) per point
  std::vector<int> desarguesian_;
  int r_u1_id_ = -1;

  std::vector<ProjLine> L_lines_;
  std::vector<Candidate> L_labels_;
  std::unordered_map<std::uint64_t, int> L_ids_;
};

}  // namespace spreadsmith
