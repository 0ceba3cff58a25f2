#include "spreadsmith/goodsets.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace spreadsmith {

GoodSet make_good_set(std::vector<Candidate> entries) {
  std::sort(entries.begin(), entries.end());
  return GoodSet{std::move(entries)};
}

std::vector<Candidate> all_candidates(const Tower& T, CandidateFilter f) {
  std::vector<Candidate> out;
  const int n = T.q() + 1;
  for (int a : T.lambda().I) {
    if (f == CandidateFilter::exclude_norm_minus_one && T.norm_is_minus_one(a)) continue;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) out.push_back({a, u, v});
    }
  }
  return out;
}

std::string GoodCheck::message() const {
  if (good) return "good";
  auto fmt = [](const Candidate& c) {
    return "(" + std::to_string(c.alpha_idx) + "," + std::to_string(c.u_pow) + "," +
           std::to_string(c.v_pow) + ")";
  };
  const char* what = condition == 1 ? "u_i v_j = u_j v_i" : "alpha_i u_i (alpha_j v_j)^q = (alpha_i v_i)^q alpha_j u_j";
  return fmt(violation->first) + " and " + fmt(violation->second) + " violate the good-set condition: " + what;
}

void validate_candidates(const Tower& T, const std::vector<Candidate>& cands) {
  const int n = T.q() + 1;
  if (static_cast<int>(cands.size()) != n) {
    throw std::invalid_argument("expected " + std::to_string(n) + " candidates, got " +
                                std::to_string(cands.size()));
  }
  std::set<Candidate> seen;
  for (const auto& c : cands) {
    if (!T.lambda().in_I(c.alpha_idx)) throw std::invalid_argument("alpha index not in I");
    if (c.u_pow < 0 || c.u_pow >= n || c.v_pow < 0 || c.v_pow >= n) {
      throw std::invalid_argument("unit exponent out of range");
    }
    if (!seen.insert(c).second) throw std::invalid_argument("duplicate candidate triple");
  }
}

GoodCheck is_good(const Tower& T, const std::vector<Candidate>& cands) {
  validate_candidates(T, cands);
  const auto& F = T.field();
  GoodCheck r;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      const auto& a = cands[i];
      const auto& b = cands[j];
      const Fq2 ui = T.unit(a.u_pow), vi = T.unit(a.v_pow);
      const Fq2 uj = T.unit(b.u_pow), vj = T.unit(b.v_pow);
      int bad = 0;
      if (F.sub(F.mul(ui, vj), F.mul(vi, uj)) == F.zero()) {
        bad = 1;
      } else {
        const Fq2 ai = T.alpha(a.alpha_idx), aj = T.alpha(b.alpha_idx);
        const Fq2 lhs = F.mul(F.mul(ai, ui), F.frobenius(F.mul(aj, vj)));
        const Fq2 rhs = F.mul(F.frobenius(F.mul(ai, vi)), F.mul(aj, uj));
        if (lhs == rhs) bad = 2;
      }
      if (bad) {
        r.good = false;
        r.condition = bad;
        r.violation = {a, b};
        return r;
      }
    }
  }
  return r;
}

int slot_of(const Tower& T, const Candidate& c) {
  const auto& F = T.field();
  return T.unit_index(F.div(T.unit(c.u_pow), T.unit(c.v_pow)));
}

int bundle_of(const Tower& T, const Candidate& c) {
  const auto& F = T.field();
  const Fq2 a = T.alpha(c.alpha_idx);
  return T.unit_index(F.div(F.mul(a, T.unit(c.u_pow)), F.frobenius(F.mul(a, T.unit(c.v_pow)))));
}

PlanePoint epsilon(const Tower& T, const Candidate& c) {
  const auto& F = T.field();
  const Fq2 a = T.alpha(c.alpha_idx);
  return {F.one(), F.mul(a, T.unit(c.u_pow)), F.mul(a, T.unit(c.v_pow))};
}

std::vector<PlanePoint> epsilon(const Tower& T, const GoodSet& gs) {
  std::vector<PlanePoint> out;
  for (const auto& c : gs.entries) out.push_back(epsilon(T, c));
  return out;
}

std::optional<Candidate> epsilon_inverse(const Tower& T, const PlanePoint& p) {
  const auto& F = T.field();
  if (p[0] != F.one() || p[1] == F.zero() || p[2] == F.zero()) return std::nullopt;
  const Fq2 n = F.norm(p[1]);
  if (F.norm(p[2]) != n) return std::nullopt;
  const int a = T.lambda().index_of_norm(n);
  if (a < 0 || !T.lambda().in_I(a)) return std::nullopt;
  const int u = T.unit_index(F.div(p[1], T.alpha(a)));
  const int v = T.unit_index(F.div(p[2], T.alpha(a)));
  if (u < 0 || v < 0) return std::nullopt;
  return Candidate{a, u, v};
}

PlaneModel::PlaneModel(const Tower& T) : T_(&T) {
  const auto& I = T.lambda().I;
  by_alpha_.resize(I.size());
  for (const auto& c : all_candidates(T)) {
    const auto pos = std::lower_bound(I.begin(), I.end(), c.alpha_idx) - I.begin();
    by_alpha_[pos].push_back(epsilon(T, c));
    Z_.push_back(epsilon(T, c));
  }
}

const std::vector<PlanePoint>& PlaneModel::Z_alpha(int alpha_idx) const {
  const auto& I = T_->lambda().I;
  auto it = std::lower_bound(I.begin(), I.end(), alpha_idx);
  if (it == I.end() || *it != alpha_idx) throw std::invalid_argument("alpha index not in I");
  return by_alpha_[it - I.begin()];
}

bool PlaneModel::on_line(int c_pow, const PlanePoint& p) const {
  const auto& F = T_->field();
  return p[1] == F.mul(T_->unit(c_pow), p[2]);
}

bool PlaneModel::on_conic(int alpha_idx, int b_pow, const PlanePoint& p) const {
  const auto& F = T_->field();
  const Fq2 lhs = F.mul(F.mul(F.norm(T_->alpha(alpha_idx)), T_->unit(b_pow)), F.mul(p[0], p[0]));
  return lhs == F.mul(p[1], p[2]);
}

bool PlaneModel::on_bundle(int b_pow, const PlanePoint& p) const {
  for (int a : T_->lambda().I) {
    if (on_conic(a, b_pow, p)) return true;
  }
  return false;
}

std::vector<std::vector<int>> PlaneModel::intersection_profile(int c_pow, int b_pow) const {
  const auto& I = T_->lambda().I;
  std::vector<std::vector<int>> out(I.size(), std::vector<int>(I.size(), 0));
  for (std::size_t a = 0; a < I.size(); ++a) {
    for (std::size_t b = 0; b < I.size(); ++b) {
      for (const auto& p : by_alpha_[b]) {
        if (on_line(c_pow, p) && on_conic(I[a], b_pow, p)) ++out[a][b];
      }
    }
  }
  return out;
}

bool is_good_geometric(const PlaneModel& M, const std::vector<Candidate>& cands) {
  const Tower& T = M.tower();
  validate_candidates(T, cands);
  std::vector<PlanePoint> pts;
  for (const auto& c : cands) pts.push_back(epsilon(T, c));
  const int n = T.q() + 1;
  for (int k = 0; k < n; ++k) {
    int on_s = 0, on_b = 0;
    for (const auto& p : pts) {
      on_s += M.on_line(k, p);
      on_b += M.on_bundle(k, p);
    }
    if (on_s != 1 || on_b != 1) return false;
  }
  return true;
}

namespace {

struct SlotTable {
  int n = 0;
  std::vector<std::vector<Candidate>> cands;  // per slot, lexicographic
  std::vector<std::vector<int>> bundle;       // parallel to cands
  std::vector<std::vector<int>> per_bundle;   // [slot][b] candidate counts
};

SlotTable make_slots(const Tower& T, CandidateFilter f) {
  SlotTable t;
  t.n = T.q() + 1;
  t.cands.resize(t.n);
  t.bundle.resize(t.n);
  t.per_bundle.assign(t.n, std::vector<int>(t.n, 0));
  for (const auto& c : all_candidates(T, f)) {
    const int s = slot_of(T, c), b = bundle_of(T, c);
    t.cands[s].push_back(c);
    t.bundle[s].push_back(b);
    ++t.per_bundle[s][b];
  }
  return t;
}

class Search {
 public:
  explicit Search(const SlotTable& t) : t_(t), chosen_(t.n) {}

  std::uint64_t count_from(int slot, std::uint32_t used) const {
    if (slot == t_.n - 1) {
      std::uint64_t total = 0;
      for (int b = 0; b < t_.n; ++b) {
        if (!(used >> b & 1u)) total += t_.per_bundle[slot][b];
      }
      return total;
    }
    std::uint64_t total = 0;
    const auto& bs = t_.bundle[slot];
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (used >> bs[i] & 1u) continue;
      total += count_from(slot + 1, used | (1u << bs[i]));
    }
    return total;
  }

  // Returns false once the callback asks to stop.
  bool walk(int slot, std::uint32_t used, const std::function<bool(const GoodSet&)>& emit) {
    if (slot == t_.n) return emit(make_good_set(chosen_));
    const auto& bs = t_.bundle[slot];
    for (std::size_t i = 0; i < bs.size(); ++i) {
      if (used >> bs[i] & 1u) continue;
      chosen_[slot] = t_.cands[slot][i];
      if (!walk(slot + 1, used | (1u << bs[i]), emit)) return false;
    }
    return true;
  }

  void set_first(const Candidate& c) { chosen_[0] = c; }

 private:
  const SlotTable& t_;
  std::vector<Candidate> chosen_;
};

template <class Fn>
void run_tasks(int tasks, int jobs, Fn fn) {
  jobs = std::max(1, std::min(jobs, tasks));
  if (jobs == 1) {
    for (int i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < tasks; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

BigInt count_good_sets(const Tower& T, const EnumerateOptions& opt) {
  const SlotTable t = make_slots(T, opt.filter);
  const int tasks = static_cast<int>(t.cands[0].size());
  std::vector<std::uint64_t> partial(tasks, 0);
  run_tasks(tasks, opt.jobs, [&](int i) {
    Search s(t);
    partial[i] = t.n == 1 ? 1 : s.count_from(1, 1u << t.bundle[0][i]);
  });
  BigInt total = 0;
  for (auto c : partial) total += c;
  return total;
}

std::uint64_t enumerate_good_sets(const Tower& T, const EnumerateOptions& opt,
                                  const std::function<void(const GoodSet&)>& sink) {
  const SlotTable t = make_slots(T, opt.filter);
  const int tasks = static_cast<int>(t.cands[0].size());
  const std::uint64_t limit = opt.limit.value_or(UINT64_MAX);
  std::uint64_t emitted = 0;
  const int jobs = std::max(1, opt.jobs);

  auto walk_task = [&](int i, std::uint64_t cap, const std::function<void(const GoodSet&)>& out) {
    Search s(t);
    s.set_first(t.cands[0][i]);
    std::uint64_t k = 0;
    if (cap == 0) return;
    s.walk(1, 1u << t.bundle[0][i], [&](const GoodSet& g) {
      out(g);
      return ++k < cap;
    });
  };

  if (jobs == 1) {
    for (int i = 0; i < tasks && emitted < limit; ++i) {
      walk_task(i, limit - emitted, [&](const GoodSet& g) {
        sink(g);
        ++emitted;
      });
    }
    return emitted;
  }
  // Waves of `jobs` tasks run in parallel, buffered, then flushed in order.
  for (int w = 0; w < tasks && emitted < limit; w += jobs) {
    const int width = std::min(jobs, tasks - w);
    std::vector<std::vector<GoodSet>> buf(width);
    const std::uint64_t cap = limit - emitted;
    run_tasks(width, jobs, [&](int k) {
      walk_task(w + k, cap, [&](const GoodSet& g) { buf[k].push_back(g); });
    });
    for (auto& b : buf) {
      for (auto& g : b) {
        if (emitted >= limit) break;
        sink(g);
        ++emitted;
      }
    }
  }
  return emitted;
}

std::vector<GoodSet> sample_good_sets(const Tower& T, std::size_t n, std::uint64_t seed,
                                      CandidateFilter f) {
  const SlotTable t = make_slots(T, f);
  const std::uint32_t masks = 1u << t.n;
  // ways[s][used] = completions of slots s..n-1 given the used bundles.
  std::vector<std::vector<BigInt>> ways(t.n + 1, std::vector<BigInt>(masks, 0));
  ways[t.n][masks - 1] = 1;
  for (int s = t.n - 1; s >= 0; --s) {
    for (std::uint32_t used = 0; used < masks; ++used) {
      if (std::popcount(used) != s) continue;
      BigInt w = 0;
      for (int b = 0; b < t.n; ++b) {
        if (!(used >> b & 1u)) w += BigInt(t.per_bundle[s][b]) * ways[s + 1][used | (1u << b)];
      }
      ways[s][used] = w;
    }
  }
  std::vector<GoodSet> out;
  if (ways[0][0] == 0) return out;
  std::mt19937_64 rng(seed);
  auto below = [&](const BigInt& bound) {
    // 128 spare bits keep the modulo bias negligible.
    BigInt r = 0;
    const unsigned words = static_cast<unsigned>(boost::multiprecision::msb(bound) / 64 + 3);
    for (unsigned i = 0; i < words; ++i) r = (r << 64) | BigInt(rng());
    return BigInt(r % bound);
  };
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<Candidate> chosen;
    std::uint32_t used = 0;
    for (int s = 0; s < t.n; ++s) {
      BigInt r = below(ways[s][used]);
      for (std::size_t i = 0; i < t.cands[s].size(); ++i) {
        const int b = t.bundle[s][i];
        if (used >> b & 1u) continue;
        const BigInt& w = ways[s + 1][used | (1u << b)];
        if (r < w) {
          chosen.push_back(t.cands[s][i]);
          used |= 1u << b;
          break;
        }
        r -= w;
      }
    }
    out.push_back(make_good_set(std::move(chosen)));
  }
  return out;
}

std::vector<std::vector<int>> incidence_matrix(const Tower& T, CandidateFilter f) {
  return make_slots(T, f).per_bundle;
}

BigInt permanent(const std::vector<std::vector<int>>& M) {
  const int n = static_cast<int>(M.size());
  if (n == 0) return 1;
  BigInt total = 0;
  std::vector<long long> row(n);
  for (std::uint32_t S = 1; S < (1u << n); ++S) {
    std::fill(row.begin(), row.end(), 0);
    for (int j = 0; j < n; ++j) {
      if (!(S >> j & 1u)) continue;
      for (int i = 0; i < n; ++i) row[i] += M[i][j];
    }
    BigInt prod = 1;
    for (int i = 0; i < n; ++i) prod *= row[i];
    if ((n - std::popcount(S)) % 2) total -= prod; else total += prod;
  }
  return total;
}

std::string to_string(FormulaVariant v) {
  switch (v) {
    case FormulaVariant::all_even: return "all_even";
    case FormulaVariant::all_even_printed: return "all_even_printed";
    case FormulaVariant::all_odd: return "all_odd";
    case FormulaVariant::exclude_minus_one_odd: return "exclude_minus_one_odd";
  }
  return "unknown";
}

BigRational count_formula(int q, FormulaVariant v) {
  const bool even = q % 2 == 0;
  const bool want_even = v == FormulaVariant::all_even || v == FormulaVariant::all_even_printed;
  if (q < 3 || even != want_even) throw std::invalid_argument("formula variant does not match the parity of q");
  auto power = [](BigRational b, int e) {
    BigRational r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
  };
  BigRational fact = 1;
  for (int i = 2; i <= q + 1; ++i) fact *= i;
  BigRational prod = 1;
  for (int i = 0; i <= (q - 1) / 2; ++i) prod *= BigRational((q + 1 - 2 * i) * (q + 1 - 2 * i));
  switch (v) {
    case FormulaVariant::all_even:
      return power(BigRational(q - 2, 2), q + 1) * fact;
    case FormulaVariant::all_even_printed:
      return power(BigRational(q - 1, 2), q + 1) * fact;
    case FormulaVariant::all_odd: {
      const BigRational i1 = q % 4 == 1 ? BigRational(q - 1, 4) : BigRational(q - 3, 4);
      const BigRational i2 = q % 4 == 1 ? BigRational(q - 1, 4) : BigRational(q + 1, 4);
      return power(i1 * i2, (q + 1) / 2) * prod;
    }
    case FormulaVariant::exclude_minus_one_odd:
      if (q % 4 == 1) return power(BigRational((q - 5) * (q - 1), 16), (q + 1) / 2) * prod;
      return power(BigRational(q - 3, 4), q + 1) * prod;
  }
  return 0;
}

GoodSet dual(const GoodSet& gs) {
  std::vector<Candidate> out;
  for (const auto& c : gs.entries) out.push_back({c.alpha_idx, c.v_pow, c.u_pow});
  return make_good_set(std::move(out));
}

Matrix3 to_matrix(const Tower& T, const G1Element& g) {
  const auto& F = T.field();
  Matrix3 m{};
  m[0] = F.one();
  const Fq2 u = T.unit(g.u_pow), v = T.unit(g.v_pow);
  if (g.swap) {
    m[5] = v;
    m[7] = u;
  } else {
    m[4] = u;
    m[8] = v;
  }
  return m;
}

std::optional<G1Element> g1_element(const Tower& T, const Matrix3& m) {
  const auto& F = T.field();
  const Fq2 z = F.zero();
  if (m[0] == z || m[1] != z || m[2] != z || m[3] != z || m[6] != z) return std::nullopt;
  auto unit = [&](Fq2 x) { return x == z ? -1 : T.unit_index(F.div(x, m[0])); };
  if (m[5] == z && m[7] == z) {
    const int u = unit(m[4]), v = unit(m[8]);
    if (u < 0 || v < 0) return std::nullopt;
    return G1Element{u, v, false};
  }
  if (m[4] == z && m[8] == z) {
    const int v = unit(m[5]), u = unit(m[7]);
    if (u < 0 || v < 0) return std::nullopt;
    return G1Element{u, v, true};
  }
  return std::nullopt;
}

GoodSet apply_G1(const Tower& T, const GoodSet& gs, const G1Element& g) {
  const auto& F = T.field();
  const Matrix3 m = to_matrix(T, g);
  std::vector<Candidate> out;
  for (const auto& c : gs.entries) {
    const PlanePoint p = epsilon(T, c);
    PlanePoint r{};
    for (int i = 0; i < 3; ++i) {
      Fq2 s = F.zero();
      for (int j = 0; j < 3; ++j) s = F.add(s, F.mul(m[i * 3 + j], p[j]));
      r[i] = s;
    }
    auto back = epsilon_inverse(T, r);
    if (!back) throw std::logic_error("G1 image left Z");
    out.push_back(*back);
  }
  return make_good_set(std::move(out));
}

GoodSet apply_G1(const Tower& T, const GoodSet& gs, const Matrix3& m) {
  auto g = g1_element(T, m);
  if (!g) throw std::invalid_argument("matrix is not in G1");
  return apply_G1(T, gs, *g);
}

GoodSet beutelspacher(const Tower& T, int alpha_idx, int v_pow) {
  if (!T.lambda().in_I(alpha_idx)) throw std::invalid_argument("alpha index not in I");
  std::vector<Candidate> out;
  for (int u = 0; u <= T.q(); ++u) out.push_back({alpha_idx, u, v_pow});
  return make_good_set(std::move(out));
}

}  // namespace spreadsmith
