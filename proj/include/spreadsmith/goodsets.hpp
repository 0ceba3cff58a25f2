#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "spreadsmith/candidate.hpp"
#include "spreadsmith/tower.hpp"

namespace spreadsmith {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// q+1 candidates in increasing lexicographic order.
struct GoodSet {
  std::vector<Candidate> entries;
  friend bool operator==(const GoodSet&, const GoodSet&) = default;
  friend auto operator<=>(const GoodSet&, const GoodSet&) = default;
};

GoodSet make_good_set(std::vector<Candidate> entries);  // sorts

enum class CandidateFilter { all, exclude_norm_minus_one };

// alpha in I, u and v on the unit circle, in lexicographic order.
std::vector<Candidate> all_candidates(const Tower& T, CandidateFilter f = CandidateFilter::all);

struct GoodCheck {
  bool good = true;
  int condition = 0;  // 1 or 2 when violated
  std::optional<std::pair<Candidate, Candidate>> violation;
  std::string message() const;
};

// Throws std::invalid_argument on wrong size, duplicates, or labels outside
// I x U x U.
void validate_candidates(const Tower& T, const std::vector<Candidate>& cands);
GoodCheck is_good(const Tower& T, const std::vector<Candidate>& cands);

// Slot of s_c through eps(c), c = omega^slot; bundle of C_b, b = omega^bundle.
int slot_of(const Tower& T, const Candidate& c);
int bundle_of(const Tower& T, const Candidate& c);

using PlanePoint = std::array<Fq2, 3>;
PlanePoint epsilon(const Tower& T, const Candidate& c);  // (1, alpha u, alpha v)
std::vector<PlanePoint> epsilon(const Tower& T, const GoodSet& gs);
std::optional<Candidate> epsilon_inverse(const Tower& T, const PlanePoint& p);

// Z, the lines s_c and the conics C_{alpha b}, with incidence by evaluating
// their equations.
class PlaneModel {
 public:
  explicit PlaneModel(const Tower& T);

  const Tower& tower() const { return *T_; }

  const std::vector<PlanePoint>& Z() const { return Z_; }
  const std::vector<PlanePoint>& Z_alpha(int alpha_idx) const;
  bool on_line(int c_pow, const PlanePoint& p) const;               // X2 = c X3
  bool on_conic(int alpha_idx, int b_pow, const PlanePoint& p) const;  // alpha^{q+1} b X1^2 = X2 X3
  bool on_bundle(int b_pow, const PlanePoint& p) const;

  // |s_c cap C_{alpha b} cap Z_beta| over alpha, beta in I (I order).
  std::vector<std::vector<int>> intersection_profile(int c_pow, int b_pow) const;

 private:
  const Tower* T_;
  std::vector<PlanePoint> Z_;
  std::vector<std::vector<PlanePoint>> by_alpha_;  // indexed by position in I
};

bool is_good_geometric(const PlaneModel& M, const std::vector<Candidate>& cands);

// Backtracking over slots s = 0..q, candidates in lexicographic order within
// a slot, so the output order is fixed. Work is split by the first-slot
// candidate; results merge in that order for any job count.
struct EnumerateOptions {
  CandidateFilter filter = CandidateFilter::all;
  int jobs = 1;
  std::optional<std::uint64_t> limit;  // stream mode only
};
BigInt count_good_sets(const Tower& T, const EnumerateOptions& opt = {});
// Returns the number emitted.
std::uint64_t enumerate_good_sets(const Tower& T, const EnumerateOptions& opt,
                                  const std::function<void(const GoodSet&)>& sink);

// Uniform sample with replacement. Each slot's candidate is drawn with
// weight equal to its number of completions. Deterministic for a seed.
std::vector<GoodSet> sample_good_sets(const Tower& T, std::size_t n, std::uint64_t seed,
                                      CandidateFilter f = CandidateFilter::all);

// M[c][b] = number of candidates on s_c and in the bundle b; the good-set
// count is its permanent (Ryser).
std::vector<std::vector<int>> incidence_matrix(const Tower& T, CandidateFilter f);
BigInt permanent(const std::vector<std::vector<int>>& M);

enum class FormulaVariant {
  all_even,          // |I|^{q+1} (q+1)!, |I| = (q-2)/2
  all_even_printed,  // ((q-1)/2)^{q+1} (q+1)!, exact rational
  all_odd,           // (|I1||I2|)^{(q+1)/2} prod (q+1-2i)^2
  exclude_minus_one_odd,
};
std::string to_string(FormulaVariant v);
// Throws std::invalid_argument on parity mismatch.
BigRational count_formula(int q, FormulaVariant v);

GoodSet dual(const GoodSet& gs);

// Elements of G1 = <H, delta>: x -> delta^swap diag(1, u, v) x.
struct G1Element {
  int u_pow = 0;
  int v_pow = 0;
  bool swap = false;
};
using Matrix3 = std::array<Fq2, 9>;
Matrix3 to_matrix(const Tower& T, const G1Element& g);
std::optional<G1Element> g1_element(const Tower& T, const Matrix3& m);  // none if not in G1
GoodSet apply_G1(const Tower& T, const GoodSet& gs, const G1Element& g);
GoodSet apply_G1(const Tower& T, const GoodSet& gs, const Matrix3& m);  // throws if not in G1

// {(alpha, u, v0) : u in U}.
GoodSet beutelspacher(const Tower& T, int alpha_idx, int v_pow);

}  // namespace spreadsmith
