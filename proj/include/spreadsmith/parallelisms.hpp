#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spreadsmith/goodsets.hpp"
#include "spreadsmith/setting.hpp"
#include "spreadsmith/spreads.hpp"

namespace spreadsmith {

// Spreads sorted by their line lists; equality is equality of that multiset.
struct Parallelism {
  std::vector<Spread> spreads;
  int desarguesian_index = -1;
  std::optional<GoodSet> source;

  friend bool operator==(const Parallelism& a, const Parallelism& b) { return a.spreads == b.spreads; }
};

void normalize(Parallelism& p);  // sorts spreads, refreshes desarguesian_index

// Hall spreads of every line of L, with a reverse lookup by content.
class HallTable {
 public:
  explicit HallTable(const Setting& S);
  const Spread& of(int L_index) const { return spreads_[L_index]; }
  // L indices whose Hall spread has exactly these lines; empty if none.
  std::vector<int> lookup(const std::vector<int>& lines) const;

 private:
  std::vector<Spread> spreads_;
  std::map<std::vector<int>, std::vector<int>> index_;
};

class GoodSetRejected : public std::invalid_argument {
 public:
  explicit GoodSetRejected(const GoodCheck& c)
      : std::invalid_argument("not a good set: " + c.message()), check_(c) {}
  const GoodCheck& check() const { return check_; }

 private:
  GoodCheck check_;
};

// D_eta plus the Hall spreads of the q punctured pencils of every candidate.
// build_parallelism rejects non-good input; build_line_family does not check.
Parallelism build_parallelism(const Setting& S, const GoodSet& gs, const HallTable* table = nullptr);
Parallelism build_line_family(const Setting& S, const std::vector<Candidate>& cands,
                              const HallTable* table = nullptr);

struct Certificate {
  bool ok = false;
  int spread_count = 0;
  int line_total = 0;             // lines of Sigma_eta
  int covered_once = 0;
  int double_covered = 0;         // lines on two or more spreads
  int uncovered = 0;
  int first_double = -1;          // line ids
  int first_uncovered = -1;
  std::vector<std::string> spread_failures;  // "spread i: reason"
  std::vector<int> membership;    // per line id
  std::uint64_t checksum = 0;     // FNV-1a over the sorted ambient line keys, with repeats
};

Certificate verify_parallelism(const Setting& S, const Parallelism& p);

// All q^2 elements of E, in order of b's code.
std::vector<Collineation> group_E(const Setting& S);
Collineation E_element(const Setting& S, Fq2 b);
// Images of the spreads under an additive basis of GF(q^2) for b.
bool is_E_invariant(const Setting& S, const Parallelism& p, bool full_group = false);
std::vector<int> map_lines(const Setting& S, const Collineation& c, const std::vector<int>& ids);

enum class CharacterizeError {
  not_a_parallelism,
  no_desarguesian_member,
  regulus_misses_r_u1,
  not_hall_shape,
  not_E_invariant,
  recovered_set_not_good,
};
std::string to_string(CharacterizeError e);

struct CharacterizeFailure {
  CharacterizeError error;
  std::string detail;
};

// Labels (alpha, u, v) and (alpha, -u, -v) with alpha^{q+1} = -1 give the
// same Hall spreads; the smaller label represents both.
GoodSet canonical_labels(const Tower& T, const GoodSet& gs);

std::variant<GoodSet, CharacterizeFailure> characterize(const Setting& S, const Parallelism& p,
                                                        const HallTable* table = nullptr);

}  // namespace spreadsmith
