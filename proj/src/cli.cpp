#include "spreadsmith/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "spreadsmith/equivalence.hpp"
#include "spreadsmith/goodsets.hpp"
#include "spreadsmith/parallelisms.hpp"
#include "spreadsmith/selftest.hpp"
#include "spreadsmith/serialize.hpp"

namespace spreadsmith {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int q = 0, p = 0, m = 0;
  std::string modulus_q, modulus_q2, lambda_file;
  std::string filter = "all";
  std::string output;
  std::string format = "text";
  int jobs = 1;
  std::optional<std::uint64_t> limit;
  std::uint64_t seed = 1;
};

bool as_json(const Config& c) { return c.format == "json"; }

CandidateFilter filter_of(const Config& c) {
  return c.filter == "no-norm-minus-one" ? CandidateFilter::exclude_norm_minus_one : CandidateFilter::all;
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return parse_json_text(s.str(), path);
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::pair<int, int> field_size(const Config& c) {
  int p = c.p, m = c.m;
  if (c.q) {
    const auto pm = prime_power(c.q);
    if (!pm) throw UsageError(std::to_string(c.q) + " is not a prime power");
    if ((p && p != pm->first) || (m && m != pm->second)) throw UsageError("--q disagrees with --p/--m");
    p = pm->first;
    m = pm->second;
  }
  if (!p || !m) throw UsageError("give --q, or --p and --m");
  int q = 1;
  for (int i = 0; i < m && q <= 16; ++i) q *= p;
  if (!prime_power(p) || prime_power(p)->second != 1) throw UsageError(std::to_string(p) + " is not a prime");
  if (q < 3 || q > 16) throw UsageError("q must satisfy 3 <= q <= 16");
  return {p, m};
}

GaloisField make_field(const Config& c) {
  const auto [p, m] = field_size(c);
  std::optional<std::vector<int>> mq;
  std::optional<std::array<int, 3>> mq2;
  try {
    if (!c.modulus_q.empty()) {
      mq = parse_json_text(c.modulus_q, "--modulus-q").get<std::vector<int>>();
    }
    if (!c.modulus_q2.empty()) {
      const GaloisField sub(p, m, mq);
      const json j = parse_json_text(c.modulus_q2, "--modulus-q2");
      if (!j.is_array() || j.size() != 3) throw UsageError("--modulus-q2 needs three GF(q) coefficient lists");
      std::array<int, 3> codes{};
      for (int i = 0; i < 3; ++i) codes[i] = sub.from_digits(j[i].get<std::vector<int>>());
      mq2 = codes;
    }
    return GaloisField(p, m, mq, mq2);
  } catch (const json::exception& e) {
    throw UsageError(std::string("modulus: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

Tower make_tower(const Config& c) {
  GaloisField F = make_field(c);
  try {
    if (c.lambda_file.empty()) return Tower(std::move(F));
    auto lambda = lambda_from_json(F, read_json_file(c.lambda_file));
    return Tower(std::move(F), std::move(lambda));
  } catch (const ParseError& e) {
    throw UsageError(c.lambda_file + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Writes to --output when given, else to out.
class Sink {
 public:
  Sink(const Config& c, std::ostream& out) : out_(&out) {
    if (!c.output.empty()) {
      file_.open(c.output);
      if (!file_) throw UsageError("cannot write " + c.output);
      out_ = &file_;
    }
  }
  std::ostream& get() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

std::string label(const Candidate& c) {
  return "(" + std::to_string(c.alpha_idx) + "," + std::to_string(c.u_pow) + "," + std::to_string(c.v_pow) + ")";
}

std::string labels(const std::vector<Candidate>& cs) {
  std::string s;
  for (const auto& c : cs) s += (s.empty() ? "" : " ") + label(c);
  return s;
}

std::string rational(const BigRational& x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + f(x);
  return s;
}

// ------------------------------------------------------------ field-info

int cmd_field_info(const Config& c, std::ostream& out) {
  const Tower T = make_tower(c);
  const auto& F = T.field();
  const auto& L = T.lambda();
  const auto& P = T.partition();
  auto el = [&](const Fq2& a) { return F.to_string(a); };
  auto idx = [](const int& i) { return std::to_string(i); };
  Sink sink(c, out);
  std::ostream& o = sink.get();
  if (as_json(c)) {
    json j = {{"q", T.q()}, {"field", field_spec_json(F)}};
    json units = json::array(), lambda = json::array();
    for (Fq2 u : T.units()) units.push_back(element_json(F, u));
    for (std::size_t i = 0; i < L.lambda.size(); ++i) {
      lambda.push_back({{"index", i},
                        {"element", element_json(F, L.lambda[i])},
                        {"log", F.log(L.lambda[i])},
                        {"norm", element_json(F, L.norms[i])}});
    }
    auto elements = [&](const std::vector<Fq2>& v) {
      json a = json::array();
      for (Fq2 x : v) a.push_back(element_json(F, x));
      return a;
    };
    j["units"] = units;
    j["lambda"] = lambda;
    j["eta_index"] = L.eta_index;
    j["partition"] = {{"t", P.t}, {"units_part", elements(P.units_part)}, {"A", elements(P.A)}, {"A_inv", elements(P.A_inv)}};
    j["I"] = L.I;
    j["I1"] = L.I1;
    j["I2"] = L.I2;
    j["sizes"] = {{"U", T.units().size()}, {"I", L.I.size()}, {"I1", L.I1.size()}, {"I2", L.I2.size()}};
    o << j.dump(2) << '\n';
    return exit_ok;
  }
  const auto& s = F.spec();
  o << "q = " << T.q() << " (p = " << s.p << ", m = " << s.m << ")\n";
  o << "modulus_q: " << json(s.modulus_q).dump() << "\n";
  o << "modulus_q2: " << field_spec_json(F)["modulus_q2"].dump() << "\n";
  o << "generator: " << el(F.generator()) << "\n";
  o << "U (" << T.units().size() << "): " << join<Fq2>(T.units(), el) << "\n";
  o << "Lambda (eta = index " << L.eta_index << "):\n";
  for (std::size_t i = 0; i < L.lambda.size(); ++i) {
    o << "  " << i << ": " << el(L.lambda[i]) << " = g^" << F.log(L.lambda[i]) << ", norm " << el(L.norms[i])
      << (L.in_I(static_cast<int>(i)) ? ", in I" : "") << "\n";
  }
  o << "partition: t = " << P.t << "; units part " << join<Fq2>(P.units_part, el) << "; A " << join<Fq2>(P.A, el)
    << "; A^-1 " << join<Fq2>(P.A_inv, el) << "\n";
  o << "I = {" << join<int>(L.I, idx) << "}, |I| = " << L.I.size() << "\n";
  if (T.q() % 2 == 1) {
    o << "I1 = {" << join<int>(L.I1, idx) << "}, |I1| = " << L.I1.size() << "\n";
    o << "I2 = {" << join<int>(L.I2, idx) << "}, |I2| = " << L.I2.size() << "\n";
  }
  return exit_ok;
}

// -------------------------------------------------------------- goodsets

int cmd_goodsets_count(const Config& c, const std::string& method, std::ostream& out) {
  const Tower T = make_tower(c);
  const int q = T.q();
  const CandidateFilter f = filter_of(c);
  const bool search = method == "search" || (method == "auto" && q <= 7);
  const bool perm = method == "permanent" || method == "auto";
  EnumerateOptions eo;
  eo.filter = f;
  eo.jobs = c.jobs;
  std::optional<BigInt> searched, permanent_value;
  if (search) searched = count_good_sets(T, eo);
  if (perm) permanent_value = permanent(incidence_matrix(T, f));
  const BigInt count = searched ? *searched : *permanent_value;

  std::vector<FormulaVariant> variants;
  if (q % 2 == 0) {
    variants = {FormulaVariant::all_even, FormulaVariant::all_even_printed};
  } else {
    variants = {f == CandidateFilter::all ? FormulaVariant::all_odd : FormulaVariant::exclude_minus_one_odd};
  }
  const bool compared = q != 3;
  Sink sink(c, out);
  std::ostream& o = sink.get();
  if (as_json(c)) {
    json j = {{"q", q}, {"filter", c.filter}};
    j["search_count"] = searched ? big_json(*searched) : json(nullptr);
    j["permanent"] = permanent_value ? big_json(*permanent_value) : json(nullptr);
    json fs = json::array();
    for (auto v : variants) {
      const BigRational x = count_formula(q, v);
      json e = rational_json(x);
      e["variant"] = to_string(v);
      e["matches"] = compared ? json(BigRational(count) == x) : json(nullptr);
      fs.push_back(std::move(e));
    }
    j["formulas"] = fs;
    o << j.dump(2) << '\n';
  } else {
    o << "q = " << q << ", filter " << c.filter << "\n";
    if (searched) o << "search count: " << *searched << "\n";
    if (permanent_value) o << "permanent: " << *permanent_value << "\n";
    for (auto v : variants) {
      const BigRational x = count_formula(q, v);
      o << "formula " << to_string(v) << " = " << rational(x);
      if (!compared) {
        o << " (not compared at q = 3)";
      } else {
        o << (BigRational(count) == x ? " (matches)" : " (differs from the count)");
      }
      o << "\n";
    }
  }
  if (searched && permanent_value && *searched != *permanent_value) return exit_failure;
  return exit_ok;
}

int cmd_goodsets_enumerate(const Config& c, std::ostream& out) {
  const Tower T = make_tower(c);
  EnumerateOptions eo;
  eo.filter = filter_of(c);
  eo.jobs = c.jobs;
  eo.limit = c.limit;
  Sink sink(c, out);
  std::ostream& o = sink.get();
  const bool j = as_json(c);
  enumerate_good_sets(T, eo, [&](const GoodSet& gs) {
    if (j) {
      o << good_set_json(T, gs.entries).dump() << '\n';
    } else {
      o << labels(gs.entries) << '\n';
    }
  });
  return exit_ok;
}

int cmd_goodsets_verify(const Config& c, const std::string& path, std::ostream& out) {
  const Tower T = make_tower(c);
  std::istringstream in(read_file(path));
  std::vector<std::vector<Candidate>> sets;
  try {
    sets = read_good_sets(T, in);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
  int bad = 0;
  json results = json::array();
  std::ostringstream text;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const GoodCheck g = is_good(T, sets[i]);
    bad += !g.good;
    results.push_back({{"record", i + 1}, {"good", g.good}, {"message", g.message()}});
    text << "record " << i + 1 << ": " << g.message() << "\n";
  }
  Sink sink(c, out);
  if (as_json(c)) {
    sink.get() << json({{"records", sets.size()}, {"failures", bad}, {"results", results}}).dump(2) << '\n';
  } else {
    sink.get() << text.str() << sets.size() << " records, " << bad << " not good\n";
  }
  return bad ? exit_failure : exit_ok;
}

// ----------------------------------------------------------- parallelism

struct LoadedParallelism {
  std::unique_ptr<Setting> S;
  ParallelismFile file;
};

LoadedParallelism load_parallelism(const Config& c, const std::string& path) {
  const std::string text = read_file(path);
  LoadedParallelism out;
  try {
    std::istringstream head(text);
    const auto header = read_parallelism_header(head);
    Tower T = tower_from_header(header);
    if ((c.q && c.q != T.q()) || (c.p && c.p != T.field().p())) throw UsageError(path + ": field differs from --q/--p");
    out.S = std::make_unique<Setting>(std::move(T));
    std::istringstream all(text);
    out.file = read_parallelism(all, *out.S);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(path + ": " + e.what());
  }
  return out;
}

void print_certificate(std::ostream& o, const Setting& S, const Certificate& cert, bool json_out) {
  if (json_out) {
    o << certificate_json(S, cert).dump(2) << '\n';
    return;
  }
  o << "certificate: " << (cert.ok ? "pass" : "fail") << "\n";
  o << "  spreads " << cert.spread_count << ", lines covered once " << cert.covered_once << " of " << cert.line_total
    << ", double covered " << cert.double_covered << ", uncovered " << cert.uncovered << "\n";
  if (cert.first_double >= 0) o << "  first double covered line: " << line_json(S.field(), S.sigma_line(cert.first_double)).dump() << "\n";
  if (cert.first_uncovered >= 0) o << "  first uncovered line: " << line_json(S.field(), S.sigma_line(cert.first_uncovered)).dump() << "\n";
  for (const auto& f : cert.spread_failures) o << "  " << f << "\n";
  o << "  checksum " << cert.checksum << "\n";
}

int cmd_parallelism_build(const Config& c, const std::string& path, const std::string& beut, std::ostream& out) {
  Setting S(make_tower(c));
  const Tower& T = S.tower();
  std::vector<Candidate> cands;
  if (!beut.empty()) {
    int a = 0, v = 0;
    char comma = 0;
    std::istringstream s(beut);
    if (!(s >> a >> comma >> v) || comma != ',') throw UsageError("--beutelspacher expects ALPHA_IDX,V_POW");
    try {
      cands = beutelspacher(T, a, v).entries;
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
  } else {
    if (path.empty()) throw UsageError("give a good-set file or --beutelspacher");
    std::istringstream in(read_file(path));
    std::vector<std::vector<Candidate>> sets;
    try {
      sets = read_good_sets(T, in);
    } catch (const ParseError& e) {
      throw UsageError(path + ": " + e.what());
    }
    if (sets.empty()) throw UsageError(path + ": no good-set record");
    cands = sets.front();
  }
  const GoodCheck g = is_good(T, cands);
  if (!g.good) {
    out << "not a good set: " << g.message() << "\n";
    return exit_failure;
  }
  const Parallelism p = build_parallelism(S, make_good_set(cands));
  const Certificate cert = verify_parallelism(S, p);
  if (c.output.empty()) {
    write_parallelism(out, S, p, cert);
  } else {
    std::ofstream f(c.output);
    if (!f) throw UsageError("cannot write " + c.output);
    write_parallelism(f, S, p, cert);
    out << "wrote " << p.spreads.size() << " spreads to " << c.output << "\n";
    print_certificate(out, S, cert, as_json(c));
  }
  return cert.ok ? exit_ok : exit_failure;
}

int cmd_parallelism_verify(const Config& c, const std::string& path, std::ostream& out) {
  const auto L = load_parallelism(c, path);
  const Setting& S = *L.S;
  const Certificate cert = verify_parallelism(S, L.file.parallelism);
  bool stored_ok = true;
  std::string note;
  if (L.file.certificate) {
    const auto& st = *L.file.certificate;
    stored_ok = st.ok == cert.ok && st.checksum == cert.checksum && st.covered_once == cert.covered_once &&
                st.spread_count == cert.spread_count;
    note = stored_ok ? "stored certificate matches" : "stored certificate differs from the recomputed one";
  } else {
    note = "no stored certificate";
  }
  Sink sink(c, out);
  if (as_json(c)) {
    json j = certificate_json(S, cert);
    j["stored_certificate_matches"] = L.file.certificate ? json(stored_ok) : json(nullptr);
    sink.get() << j.dump(2) << '\n';
  } else {
    print_certificate(sink.get(), S, cert, false);
    sink.get() << note << "\n";
  }
  return cert.ok && stored_ok ? exit_ok : exit_failure;
}

int cmd_parallelism_characterize(const Config& c, const std::string& path, std::ostream& out) {
  const auto L = load_parallelism(c, path);
  const Setting& S = *L.S;
  const auto r = characterize(S, L.file.parallelism);
  Sink sink(c, out);
  if (const auto* gs = std::get_if<GoodSet>(&r)) {
    if (as_json(c)) {
      sink.get() << good_set_json(S.tower(), gs->entries).dump() << '\n';
    } else {
      sink.get() << "good set: " << labels(gs->entries) << "\n";
    }
    return exit_ok;
  }
  const auto& fail = std::get<CharacterizeFailure>(r);
  if (as_json(c)) {
    sink.get() << json({{"error", to_string(fail.error)}, {"detail", fail.detail}}).dump(2) << '\n';
  } else {
    sink.get() << "not of the expected shape: " << to_string(fail.error) << (fail.detail.empty() ? "" : ": ") << fail.detail
               << "\n";
  }
  return exit_failure;
}

// -------------------------------------------------------------- classify

int cmd_classify(const Config& c, std::optional<std::uint64_t> sample, std::ostream& out) {
  Setting S(make_tower(c));
  const int q = S.q();
  if (q > 5) throw UsageError("classify supports q <= 5");
  const StabilizerGroup G = StabilizerGroup::r_u1_stabilizer(S);
  const FamilyIndex F(S, G);
  std::vector<GoodSet> family;
  if (sample) {
    family = sample_good_sets(S.tower(), *sample, c.seed, filter_of(c));
  } else {
    EnumerateOptions eo;
    eo.filter = filter_of(c);
    eo.jobs = c.jobs;
    eo.limit = c.limit;
    enumerate_good_sets(S.tower(), eo, [&](const GoodSet& gs) { family.push_back(gs); });
  }
  std::vector<std::vector<int>> codes;
  codes.reserve(family.size());
  for (const auto& gs : family) codes.push_back(F.code(gs));
  const OrbitReport rep = classify(F, G, codes, c.jobs);

  // Representatives are built and verified; with --output they are written.
  std::vector<std::string> files(rep.orbits.size());
  bool all_ok = true;
  const std::filesystem::path dir = c.output;
  if (!c.output.empty()) std::filesystem::create_directories(dir);
  for (std::size_t k = 0; k < rep.orbits.size(); ++k) {
    const Parallelism p = build_parallelism(S, family[rep.orbits[k].representative], &F.halls());
    const Certificate cert = verify_parallelism(S, p);
    all_ok = all_ok && cert.ok;
    if (c.output.empty()) continue;
    files[k] = "orbit-" + std::to_string(k) + ".jsonl";
    std::ofstream f(dir / files[k]);
    if (!f) throw UsageError("cannot write " + (dir / files[k]).string());
    write_parallelism(f, S, p, cert);
  }
  const json report = classification_json(S, G, rep, family, files);
  if (!c.output.empty()) {
    std::ofstream f(dir / "report.json");
    if (!f) throw UsageError("cannot write " + (dir / "report.json").string());
    f << report.dump(2) << '\n';
  }
  if (as_json(c)) {
    out << report.dump(2) << '\n';
  } else {
    out << "q = " << q << ", group Gamma_r_U1 of order " << G.order() << " (formula "
        << stabilizer_order_formula(q, S.field().m()) << ")\n";
    out << "good sets " << rep.input_size << ", distinct parallelisms " << rep.distinct_size << ", orbits "
        << rep.orbits.size() << "\n";
    for (const auto& b : report["lower_bounds"]) {
      out << "lower bound " << b["variant"].get<std::string>() << " = " << b["exact"].get<std::string>() << ": orbit count "
          << (b["orbit_count_at_least_bound"].get<bool>() ? "is at least the bound" : "is below the bound") << "\n";
    }
    for (std::size_t k = 0; k < rep.orbits.size(); ++k) {
      const Orbit& o = rep.orbits[k];
      out << "orbit " << k << ": family " << o.family_size << ", stabilizer " << o.stabilizer_order << ", full orbit "
          << o.full_orbit_size << ", representative " << labels(family[o.representative].entries) << "\n";
    }
  }
  return all_ok ? exit_ok : exit_failure;
}

// -------------------------------------------------------------- selftest

int cmd_selftest(const Config& c, const std::vector<std::string>& only, std::uint64_t samples,
                 std::uint64_t par_samples, bool list, std::ostream& out) {
  if (list) {
    for (const auto& s : suites()) out << s.id << ": " << s.property << "\n";
    return exit_ok;
  }
  for (const auto& id : only) {
    bool known = false;
    for (const auto& s : suites()) known = known || s.id == id;
    if (!known) throw UsageError("unknown suite " + id);
  }
  Setting S(make_tower(c));
  SuiteOptions o;
  o.seed = c.seed;
  o.samples = samples;
  o.parallelism_samples = par_samples;
  o.jobs = c.jobs;
  const auto results = run_selftest(S, o, only);
  int failed = 0;
  for (const auto& r : results) failed += r.status == SuiteStatus::fail;
  Sink sink(c, out);
  std::ostream& os = sink.get();
  if (as_json(c)) {
    json arr = json::array();
    for (const auto& r : results) {
      arr.push_back({{"suite", r.id}, {"property", r.property}, {"status", to_string(r.status)}, {"checks", r.checks},
                     {"scope", r.scope}, {"detail", r.detail}});
    }
    os << json({{"q", S.q()}, {"failed", failed}, {"suites", arr}}).dump(2) << '\n';
  } else {
    std::size_t w = 0;
    for (const auto& r : results) w = std::max(w, r.id.size());
    for (const auto& r : results) {
      os << r.id << std::string(w + 2 - r.id.size(), ' ') << to_string(r.status)
         << std::string(9 - to_string(r.status).size(), ' ') << r.scope;
      if (r.checks) os << ", " << r.checks << " checks";
      if (!r.detail.empty()) os << "; " << r.detail;
      os << "\n";
    }
    os << "q = " << S.q() << ": " << results.size() - failed << " of " << results.size() << " suites without failure\n";
  }
  return failed ? exit_failure : exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallelisms of PG(3,q) from good sets: field data, enumeration, construction, classification"};
  app.fallthrough();
  app.require_subcommand(1);
  Config c;
  app.add_option("--q", c.q, "field order q = p^m, 3 <= q <= 16");
  app.add_option("--p", c.p, "characteristic");
  app.add_option("--m", c.m, "degree over GF(p)");
  app.add_option("--modulus-q", c.modulus_q, "GF(q) modulus as a JSON list of GF(p) coefficients, constant first");
  app.add_option("--modulus-q2", c.modulus_q2, "GF(q^2) modulus as a JSON list of three GF(q) coefficient lists");
  app.add_option("--lambda", c.lambda_file, "JSON file {\"lambda\": [...]} overriding Lambda");
  app.add_option("--filter", c.filter, "candidate filter")->check(CLI::IsMember({"all", "no-norm-minus-one"}));
  app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--limit", c.limit, "stop after this many good sets");
  app.add_option("--output", c.output, "output file (classify: directory)");
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--sample-seed", c.seed, "seed for sampled checks");

  auto* field_info = app.add_subcommand("field-info", "field, U, Lambda, partition and I");

  auto* goodsets = app.add_subcommand("goodsets", "count, enumerate or verify good sets");
  goodsets->require_subcommand(1);
  std::string method = "auto";
  auto* gs_count = goodsets->add_subcommand("count", "count good sets and compare with the closed forms");
  gs_count->add_option("--method", method, "search, permanent, or auto (search up to q = 7, both)")
      ->check(CLI::IsMember({"auto", "search", "permanent"}));
  auto* gs_enum = goodsets->add_subcommand("enumerate", "stream good sets in canonical order");
  std::string gs_file;
  auto* gs_verify = goodsets->add_subcommand("verify", "check every record of a good-set file");
  gs_verify->add_option("file", gs_file, "JSON lines, '-' for stdin")->required();

  auto* par = app.add_subcommand("parallelism", "build, verify or characterize parallelisms");
  par->require_subcommand(1);
  std::string par_in, beut;
  auto* par_build = par->add_subcommand("build", "build the parallelism of a good set");
  par_build->add_option("goodset", par_in, "good-set file (first record is used)");
  par_build->add_option("--beutelspacher", beut, "use the set {(alpha, u, v)} for ALPHA_IDX,V_POW");
  std::string par_file;
  auto* par_verify = par->add_subcommand("verify", "re-check a parallelism file");
  par_verify->add_option("file", par_file, "parallelism file")->required();
  auto* par_char = par->add_subcommand("characterize", "recover the good set of a parallelism file");
  par_char->add_option("file", par_file, "parallelism file")->required();

  auto* cls = app.add_subcommand("classify", "orbits of the parallelism family under Gamma_r_U1 (q <= 5)");
  std::optional<std::uint64_t> sample;
  cls->add_option("--sample", sample, "classify a uniform sample of this many good sets");

  auto* st = app.add_subcommand("selftest", "run the invariant suites");
  std::vector<std::string> only;
  std::uint64_t samples = 10000, par_samples = 100;
  bool list = false;
  st->add_option("--suite", only, "run only these suites");
  st->add_option("--samples", samples, "sample size of sampled suites");
  st->add_option("--parallelism-samples", par_samples, "good sets sampled for parallelism suites");
  st->add_flag("--list", list, "list the suites");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return exit_usage;
  }

  try {
    if (*field_info) return cmd_field_info(c, out);
    if (*gs_count) return cmd_goodsets_count(c, method, out);
    if (*gs_enum) return cmd_goodsets_enumerate(c, out);
    if (*gs_verify) return cmd_goodsets_verify(c, gs_file, out);
    if (*par_build) return cmd_parallelism_build(c, par_in, beut, out);
    if (*par_verify) return cmd_parallelism_verify(c, par_file, out);
    if (*par_char) return cmd_parallelism_characterize(c, par_file, out);
    if (*cls) return cmd_classify(c, sample, out);
    if (*st) return cmd_selftest(c, only, samples, par_samples, list, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  err << app.help();
  return exit_usage;
}

}  // namespace spreadsmith
