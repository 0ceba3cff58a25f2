// Acceptance runner: one pass/fail line per criterion.
//   acceptance [--criterion N] [--jobs J]
// Exit status 0 when every selected criterion passes.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spreadsmith/cli.hpp"
#include "spreadsmith/equivalence.hpp"
#include "spreadsmith/goodsets.hpp"
#include "spreadsmith/parallelisms.hpp"
#include "spreadsmith/selftest.hpp"

using namespace spreadsmith;

namespace {

int jobs = 1;

struct Verdict {
  bool pass = true;
  std::string detail;
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
  void fail(const std::string& s) {
    pass = false;
    note("FAILED " + s);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream o;
  o.precision(1);
  o << std::fixed << s << "s";
  return o.str();
}

// Runs a selftest suite and folds its verdict in. need_exhaustive or
// min_checks state the scope the criterion asks for.
void suite(Verdict& v, const Setting& S, const std::string& id, const SuiteOptions& o, bool need_exhaustive = false,
           std::uint64_t min_checks = 0) {
  const SuiteResult r = run_suite(S, id, o);
  const std::string tag = id + " q=" + std::to_string(S.q());
  const bool exhaustive = r.scope.rfind("exhaustive", 0) == 0;
  if (r.status != SuiteStatus::pass) {
    v.fail(tag + " " + to_string(r.status) + ": " + r.detail);
  } else if (need_exhaustive && !exhaustive) {
    v.fail(tag + " ran " + r.scope + ", exhaustive required");
  } else if (!exhaustive && r.checks < min_checks) {
    v.fail(tag + " ran " + std::to_string(r.checks) + " checks, " + std::to_string(min_checks) + " required");
  } else {
    v.note(tag + " pass (" + r.scope + ", " + std::to_string(r.checks) + " checks)");
  }
}

std::vector<GoodSet> all_good_sets(const Tower& T) {
  std::vector<GoodSet> out;
  EnumerateOptions eo;
  eo.jobs = jobs;
  enumerate_good_sets(T, eo, [&](const GoodSet& g) { out.push_back(g); });
  return out;
}

std::string str(const BigRational& x) {
  std::ostringstream o;
  o << x;
  return o.str();
}

// ---------------------------------------------------------------------------

Verdict criterion1() {
  Verdict v;
  struct Case {
    int q;
    FormulaVariant variant;
  };
  for (const Case c : {Case{4, FormulaVariant::all_even}, Case{5, FormulaVariant::all_odd},
                       Case{7, FormulaVariant::all_odd}}) {
    const Tower T = Tower::from_q(c.q);
    const auto t0 = std::chrono::steady_clock::now();
    EnumerateOptions eo;
    eo.jobs = jobs;
    const BigInt n = count_good_sets(T, eo);
    const double secs = seconds_since(t0);
    const BigRational f = count_formula(c.q, c.variant);
    std::string s = "q=" + std::to_string(c.q) + " count " + n.str() + ", " + to_string(c.variant) + " " + str(f) +
                    " in " + fmt_seconds(secs);
    if (BigRational(n) != f) {
      v.fail(s);
    } else {
      v.note(s + " match");
    }
    if (secs > 300) v.fail("q=" + std::to_string(c.q) + " exceeded 5 minutes");
    if (c.q == 4) {
      const BigRational printed = count_formula(4, FormulaVariant::all_even_printed);
      if (printed == BigRational(n)) {
        v.fail("printed simplification unexpectedly agrees");
      } else {
        v.note("printed simplification " + str(printed) + " flagged as conflicting");
      }
    }
  }
  return v;
}

Verdict criterion2() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  auto check = [&](const Setting& S, const std::vector<GoodSet>& sets, const std::string& what) {
    const int q = S.q();
    const int total = (q * q + 1) * (q * q + q + 1);
    std::size_t bad = 0;
    for (const auto& gs : sets) {
      const Certificate c = verify_parallelism(S, build_parallelism(S, gs));
      if (!c.ok || c.line_total != total || c.covered_once != total) ++bad;
    }
    const std::string s = "q=" + std::to_string(q) + " " + what + " " + std::to_string(sets.size()) + " good sets, " +
                          std::to_string(total) + " lines each";
    if (bad || sets.empty()) {
      v.fail(s + ", " + std::to_string(bad) + " failed exact cover");
    } else {
      v.note(s + " covered exactly once");
    }
  };
  for (int q : {3, 4}) {
    const Setting S(Tower::from_q(q));
    check(S, all_good_sets(S.tower()), "all");
  }
  {
    const Setting S(Tower::from_q(5));
    check(S, sample_good_sets(S.tower(), 100, 1), "sampled");
  }
  const double secs = seconds_since(t0);
  v.note("total " + fmt_seconds(secs));
  if (secs > 600) v.fail("exceeded 10 minutes");
  return v;
}

Verdict criterion3() {
  Verdict v;
  for (int q : {3, 4}) {
    const Setting S(Tower::from_q(q));
    const Tower& T = S.tower();
    const auto goods = all_good_sets(T);
    const auto cands = all_candidates(T);
    std::mt19937_64 rng(q);
    std::set<std::vector<Candidate>> seen;
    std::size_t detected = 0, tried = 0;
    std::string example;
    while (seen.size() < 40 && tried < 100000) {
      ++tried;
      std::vector<Candidate> m = goods[rng() % goods.size()].entries;
      m[rng() % m.size()] = cands[rng() % cands.size()];
      std::sort(m.begin(), m.end());
      if (std::adjacent_find(m.begin(), m.end()) != m.end()) continue;
      if (is_good(T, m).good || !seen.insert(m).second) continue;
      const Certificate c = verify_parallelism(S, build_line_family(S, m));
      if (!c.ok && (c.first_double >= 0 || c.first_uncovered >= 0)) {
        ++detected;
        if (example.empty()) {
          example = c.first_double >= 0 ? "double covered line id " + std::to_string(c.first_double)
                                         : "uncovered line id " + std::to_string(c.first_uncovered);
        }
      }
    }
    const std::string s = "q=" + std::to_string(q) + " " + std::to_string(detected) + " of " +
                          std::to_string(seen.size()) + " mutated non-good sets fail exact cover";
    if (seen.size() < 20 || detected != seen.size()) {
      v.fail(s);
    } else {
      v.note(s + " (first: " + example + ")");
    }
  }
  return v;
}

Verdict criterion4() {
  Verdict v;
  SuiteOptions o;
  o.jobs = jobs;
  {
    const Setting S(Tower::from_q(3));
    suite(v, S, "predicate-agreement", o, true);
  }
  {
    const Setting S(Tower::from_q(5));
    o.samples = 100000;
    suite(v, S, "predicate-agreement", o, false, 100000);
  }
  return v;
}

Verdict criterion5() {
  Verdict v;
  SuiteOptions o;
  o.jobs = jobs;
  for (int q : {3, 4, 5, 7}) {
    const Setting S(Tower::from_q(q));
    suite(v, S, "intersection-profiles", o, true);
  }
  return v;
}

Verdict criterion6() {
  Verdict v;
  SuiteOptions o;
  o.jobs = jobs;
  for (int q : {3, 4, 5}) {
    const Setting S(Tower::from_q(q));
    suite(v, S, "desarguesian-closure", o, true);
    if (q == 3) {
      suite(v, S, "regulus-transversals", o, true);
    }
    if (q == 3 || q == 5) {
      for (const char* id : {"transversal-plane-sections", "subplane-intersections", "pencil-lines-meet-point"}) {
        suite(v, S, id, o, true);
      }
    }
  }
  return v;
}

Verdict criterion7() {
  Verdict v;
  SuiteOptions o;
  o.jobs = jobs;
  o.samples = 10000;
  for (int q : {3, 4, 5}) {
    const Setting S(Tower::from_q(q));
    for (const char* id : {"regulus-coincidence", "extension-disjointness"}) {
      suite(v, S, id, o, q == 3, 10000);
    }
  }
  return v;
}

Verdict criterion8() {
  Verdict v;
  SuiteOptions o;
  o.jobs = jobs;
  const std::size_t expected[] = {576, 4800, 7200};
  for (int q : {3, 4, 5}) {
    const Setting S(Tower::from_q(q));
    if (q <= 4) suite(v, S, "group-E", o, true);
    const StabilizerGroup G = StabilizerGroup::r_u1_stabilizer(S);
    const BigInt f = stabilizer_order_formula(q, S.field().m());
    const std::string s = "q=" + std::to_string(q) + " |Gamma_r_U1| = " + std::to_string(G.order()) + ", formula " +
                          f.str();
    if (BigInt(G.order()) != f || G.order() != expected[q - 3]) {
      v.fail(s);
    } else {
      v.note(s);
    }
  }
  return v;
}

Verdict criterion9() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  for (int q : {3, 4}) {
    const Setting S(Tower::from_q(q));
    const StabilizerGroup G = StabilizerGroup::r_u1_stabilizer(S);
    const FamilyIndex F(S, G);
    const auto family = all_good_sets(S.tower());
    std::vector<std::vector<int>> codes;
    for (const auto& gs : family) codes.push_back(F.code(gs));
    const OrbitReport rep = classify(F, G, codes, jobs);
    std::size_t sum = 0;
    for (const auto& o : rep.orbits) sum += o.family_size;
    std::string s = "q=" + std::to_string(q) + " " + std::to_string(rep.orbits.size()) + " orbits of " +
                    std::to_string(rep.distinct_size) + " parallelisms";
    if (sum != rep.distinct_size) v.fail(s + ", orbit sizes do not sum");
    const auto variants = q % 2 ? std::vector<BoundVariant>{BoundVariant::odd}
                                : std::vector<BoundVariant>{BoundVariant::even_printed, BoundVariant::even_I};
    for (auto b : variants) {
      const BigRational lb = lower_bound(q, S.field().m(), b);
      s += ", bound " + to_string(b) + " " + str(lb);
      if (BigRational(rep.orbits.size()) < lb) v.fail(s + " exceeds the orbit count");
    }
    v.note(s);
  }
  {
    const Setting S(Tower::from_q(3));
    const StabilizerGroup G = StabilizerGroup::r_u1_stabilizer(S);
    const FamilyIndex F(S, G);
    const Tower& T = S.tower();
    const GoodSet P = beutelspacher(T, T.lambda().I.front(), 0);
    const GoodSet Pd = dual(P);
    const auto eq = are_equivalent(F, G, build_parallelism(S, P), build_parallelism(S, Pd));
    if (eq) {
      v.fail("q=3 Beutelspacher P and P^d are equivalent");
    } else {
      v.note("q=3 Beutelspacher P and P^d lie in different orbits");
    }
  }
  const double secs = seconds_since(t0);
  v.note("total " + fmt_seconds(secs));
  if (secs > 1800) v.fail("exceeded 30 minutes");
  return v;
}

std::string run(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  std::vector<std::string> full{"spreadsmith"};
  full.insert(full.end(), args.begin(), args.end());
  code = run_cli(full, out, err);
  return out.str();
}

Verdict criterion10() {
  Verdict v;
  const std::vector<std::vector<std::string>> commands = {
      {"goodsets", "enumerate", "--q", "4", "--format", "json"},
      {"goodsets", "enumerate", "--q", "5", "--format", "json", "--limit", "5000"},
      {"goodsets", "enumerate", "--q", "7", "--limit", "2000"},
      {"classify", "--q", "3", "--format", "json"},
      {"classify", "--q", "4", "--format", "json"},
      {"classify", "--q", "5", "--sample", "300", "--format", "json"},
  };
  for (const auto& cmd : commands) {
    std::string name;
    for (const auto& a : cmd) name += (name.empty() ? "" : " ") + a;
    std::vector<std::string> outputs;
    bool ok = true;
    for (const char* j : {"1", "1", "3", "8"}) {
      auto args = cmd;
      args.insert(args.end(), {"--jobs", j});
      int code = 0;
      outputs.push_back(run(args, code));
      ok = ok && code == exit_ok;
    }
    bool same = !outputs.front().empty();
    for (const auto& o : outputs) same = same && o == outputs.front();
    if (!ok || !same) {
      v.fail("'" + name + "' " + (ok ? "differs across runs or --jobs" : "exited nonzero"));
    } else {
      v.note("'" + name + "' identical over 4 runs");
    }
  }
  // Files written by classify --output.
  const auto dir = std::filesystem::temp_directory_path() / "spreadsmith-acceptance";
  std::vector<std::string> listings;
  for (const char* j : {"1", "4"}) {
    const auto d = dir / j;
    std::filesystem::remove_all(d);
    int code = 0;
    run({"classify", "--q", "4", "--output", d.string(), "--jobs", j}, code);
    std::string all;
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(d)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      std::ifstream in(f);
      std::stringstream s;
      s << in.rdbuf();
      all += f.filename().string() + "\n" + s.str();
    }
    listings.push_back(all);
  }
  std::filesystem::remove_all(dir);
  if (listings[0].empty() || listings[0] != listings[1]) {
    v.fail("classify --output files differ across --jobs");
  } else {
    v.note("classify --output files identical across --jobs");
  }
  return v;
}

const std::vector<std::pair<std::string, Verdict (*)()>> criteria = {
    {"good-set counts", criterion1},
    {"parallelism correctness", criterion2},
    {"negative path", criterion3},
    {"predicate equivalence", criterion4},
    {"intersection tables", criterion5},
    {"structure lemmas", criterion6},
    {"pencil pair brute force", criterion7},
    {"groups", criterion8},
    {"classification", criterion9},
    {"determinism", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 10));
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    all_pass = all_pass && v.pass;
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (v.pass ? "PASS" : "FAIL") << ": "
              << v.detail << std::endl;
  }
  return all_pass ? 0 : 1;
}
