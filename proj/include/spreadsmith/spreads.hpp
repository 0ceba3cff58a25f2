#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spreadsmith/setting.hpp"

namespace spreadsmith {

enum class SpreadTag { desarguesian, hall, unknown };

// Set of lines of Sigma_eta, as sorted ids into the Setting's line table.
// The ambient line of id i is Setting::sigma_line(i).
struct Spread {
  std::vector<int> lines;
  SpreadTag tag = SpreadTag::unknown;
  std::optional<ProjLine> transversal;  // Hall: the line l of L
  std::vector<int> switched;            // Hall: R_l, sorted

  friend bool operator==(const Spread& a, const Spread& b) { return a.lines == b.lines; }
};

struct Regulus {
  std::vector<int> lines;  // sorted
  friend bool operator==(const Regulus&, const Regulus&) = default;
};

// Lines through P_{alpha u} in pi_{alpha v} meeting Sigma_alpha in a Baer
// subline; r_U1 included, sorted by key.
struct Pencil {
  Candidate label;
  ProjPoint base;
  ProjPlane plane;
  std::vector<ProjLine> lines;
};

struct SpreadReport {
  bool ok = true;
  std::string message;     // first violation, empty when ok
  int gap_point = -1;      // a Sigma_eta point on no line
  int overlap_point = -1;  // a Sigma_eta point on two lines
  int overlap_lines[2] = {-1, -1};
};

enum class TransversalError { meets_sigma, self_conjugate, conjugate_not_skew };

class TransversalFailure : public std::invalid_argument {
 public:
  TransversalFailure(TransversalError kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  TransversalError kind() const { return kind_; }

 private:
  TransversalError kind_;
};

// D_alpha as ambient lines <P, P^tau_alpha>, P on t1, sorted.
std::vector<ProjLine> desarguesian_lines(const Setting& S, int alpha_idx);
Spread desarguesian_spread(const Setting& S);

Pencil pencil(const Setting& S, int alpha_idx, int u_pow, int v_pow);
const std::vector<ProjLine>& line_set_L(const Setting& S);

// S_l = {<Q, Q^tau_eta> : Q in l}. Throws TransversalFailure.
Spread spread_from_transversal(const Setting& S, const ProjLine& l);

// R_l = D_eta cap S_l; throws std::invalid_argument unless l is in L.
Regulus regulus_of(const Setting& S, const ProjLine& l);

// Lines of Sigma_eta meeting every line of the set.
std::vector<int> common_transversals(const Setting& S, const std::vector<int>& lines);
// Opposite regulus, or nullopt when the lines are not a regulus.
std::optional<Regulus> opposite_of(const Setting& S, const std::vector<int>& lines);
Regulus opposite_regulus(const Setting& S, const Regulus& R);  // throws if not a regulus

Spread hall_spread(const Setting& S, const ProjLine& l);

SpreadReport is_spread(const Setting& S, const std::vector<int>& lines);

// Points of PG(3,q^2) on the given ambient lines, sorted, without repeats.
std::vector<ProjPoint> extension_points(const Setting& S, const std::vector<ProjLine>& lines);
std::vector<ProjLine> ambient_lines(const Setting& S, const std::vector<int>& ids);
// Points of the extension lying in pi, sorted.
std::vector<ProjPoint> plane_section(const Setting& S, const std::vector<ProjLine>& lines,
                                     const ProjPlane& pi);

// q^2+q+1 points, and every line joining two of them holds exactly q+1.
bool is_baer_subplane(const Setting& S, const std::vector<ProjPoint>& pts);

// Named lines and maps attached to a fixed alpha in I; x~ is the generator.
ProjLine l_lambda(const Setting& S, int alpha_idx, int lambda_code);
Collineation map_phi(const Setting& S, int alpha_idx);
Collineation map_xi(const Setting& S, int lambda_code);
Collineation map_phi_lambda(const Setting& S, int alpha_idx, int lambda_code);  // phi then xi

}  // namespace spreadsmith
