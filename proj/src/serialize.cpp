#include "spreadsmith/serialize.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace spreadsmith {

namespace {

int checked_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(0, std::string(what) + ": expected an integer");
  return j.get<int>();
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(0, std::string("missing field '") + key + "'");
  return j.at(key);
}

std::vector<int> int_list(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(0, std::string(what) + ": expected an array");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(checked_int(x, what));
  return out;
}

json digits_json(const GaloisField& F, int code) { return F.digits(code); }

int code_from_digits(const GaloisField& F, const json& j) {
  const auto d = int_list(j, "GF(q) element");
  if (static_cast<int>(d.size()) != F.m()) throw ParseError(0, "GF(q) element needs " + std::to_string(F.m()) + " coefficients");
  for (int c : d) {
    if (c < 0 || c >= F.p()) throw ParseError(0, "coefficient outside GF(p)");
  }
  return F.from_digits(d);
}

// Re-throws a ParseError with a line number.
template <class Fn>
auto at_line(std::size_t line, Fn fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    if (e.line()) throw;
    throw ParseError(line, e.what());
  } catch (const json::exception& e) {
    throw ParseError(line, e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

const char* tag_name(SpreadTag t) {
  switch (t) {
    case SpreadTag::desarguesian: return "desarguesian";
    case SpreadTag::hall: return "hall";
    case SpreadTag::unknown: return "unknown";
  }
  return "unknown";
}

SpreadTag tag_from(const std::string& s) {
  if (s == "desarguesian") return SpreadTag::desarguesian;
  if (s == "hall") return SpreadTag::hall;
  if (s == "unknown") return SpreadTag::unknown;
  throw ParseError(0, "unknown spread tag '" + s + "'");
}

json candidates_json(const std::vector<Candidate>& entries) {
  json e = json::array();
  for (const auto& c : entries) e.push_back({{"alpha_idx", c.alpha_idx}, {"u_pow", c.u_pow}, {"v_pow", c.v_pow}});
  return e;
}

std::vector<Candidate> candidates_from(const json& e) {
  if (!e.is_array()) throw ParseError(0, "entries: expected an array");
  std::vector<Candidate> out;
  for (const auto& x : e) {
    out.push_back({checked_int(field(x, "alpha_idx"), "alpha_idx"), checked_int(field(x, "u_pow"), "u_pow"),
                   checked_int(field(x, "v_pow"), "v_pow")});
  }
  return out;
}

std::string rational_text(const BigRational& x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

}  // namespace

json element_json(const GaloisField& F, Fq2 a) {
  return json::array({digits_json(F, F.low(a)), digits_json(F, F.high(a))});
}

Fq2 element_from_json(const GaloisField& F, const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError(0, "GF(q^2) element: expected [a0, a1]");
  return F.from_pair(code_from_digits(F, j[0]), code_from_digits(F, j[1]));
}

json field_spec_json(const GaloisField& F) {
  const auto& s = F.spec();
  json q2 = json::array();
  for (int c : s.modulus_q2) q2.push_back(digits_json(F, c));
  return {{"p", s.p}, {"m", s.m}, {"modulus_q", s.modulus_q}, {"modulus_q2", q2},
          {"generator", element_json(F, s.generator)}};
}

GaloisField field_from_json(const json& j) {
  const int p = checked_int(field(j, "p"), "p");
  const int m = checked_int(field(j, "m"), "m");
  const auto mq = int_list(field(j, "modulus_q"), "modulus_q");
  // Codes of the GF(q^2) modulus need GF(q) first; the subfield does not
  // depend on modulus_q2.
  const GaloisField sub(p, m, mq);
  const json& q2 = field(j, "modulus_q2");
  if (!q2.is_array() || q2.size() != 3) throw ParseError(0, "modulus_q2: expected three GF(q) elements");
  std::array<int, 3> codes{};
  for (int i = 0; i < 3; ++i) codes[i] = code_from_digits(sub, q2[i]);
  GaloisField F(p, m, mq, codes);
  if (j.contains("generator") && element_from_json(F, j.at("generator")) != F.generator()) {
    throw ParseError(0, "generator differs from the first primitive element for these moduli");
  }
  return F;
}

std::vector<int> lambda_logs(const Tower& T) {
  std::vector<int> out;
  for (Fq2 a : T.lambda().lambda) out.push_back(T.field().log(a));
  return out;
}

std::vector<Fq2> lambda_from_logs(const GaloisField& F, const std::vector<int>& logs) {
  std::vector<Fq2> out;
  for (int k : logs) {
    if (k < 0 || k >= F.order() - 1) throw ParseError(0, "lambda_idx entry out of range");
    out.push_back(F.gen_pow(k));
  }
  return out;
}

std::vector<Fq2> lambda_from_json(const GaloisField& F, const json& j) {
  const json& l = field(j, "lambda");
  if (!l.is_array()) throw ParseError(0, "lambda: expected an array");
  std::vector<Fq2> out;
  for (const auto& x : l) out.push_back(element_from_json(F, x));
  return out;
}

json point_json(const GaloisField& F, const ProjPoint& p) {
  json out = json::array();
  for (Fq2 c : p.x) out.push_back(element_json(F, c));
  return out;
}

ProjPoint point_from_json(const Space& sp, const json& j) {
  if (!j.is_array() || j.size() != 4) throw ParseError(0, "point: expected four coordinates");
  Vec4 v;
  for (int i = 0; i < 4; ++i) v[i] = element_from_json(sp.field(), j[i]);
  const ProjPoint p = sp.point(v);
  if (p.x != v) throw ParseError(0, "point not in canonical form");
  return p;
}

json line_json(const GaloisField& F, const ProjLine& l) {
  return json::array({point_json(F, ProjPoint{l.row(0)}), point_json(F, ProjPoint{l.row(1)})});
}

ProjLine line_from_json(const Space& sp, const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError(0, "line: expected two points");
  const ProjPoint a = point_from_json(sp, j[0]), b = point_from_json(sp, j[1]);
  if (a == b) throw ParseError(0, "line: points coincide");
  const ProjLine l = sp.join(a, b);
  if (l.row(0) != a.x || l.row(1) != b.x) throw ParseError(0, "line: points are not the canonical pair");
  return l;
}

json good_set_json(const Tower& T, const std::vector<Candidate>& entries) {
  return {{"q", T.q()}, {"lambda_idx", lambda_logs(T)}, {"entries", candidates_json(entries)}};
}

std::vector<Candidate> candidates_from_json(const Tower& T, const json& j) {
  if (checked_int(field(j, "q"), "q") != T.q()) throw ParseError(0, "q does not match the configured field");
  if (j.contains("lambda_idx") && int_list(j.at("lambda_idx"), "lambda_idx") != lambda_logs(T)) {
    throw ParseError(0, "lambda_idx does not match the configured Lambda");
  }
  auto out = candidates_from(field(j, "entries"));
  validate_candidates(T, out);
  return out;
}

std::vector<std::vector<Candidate>> read_good_sets(const Tower& T, std::istream& in) {
  std::vector<std::vector<Candidate>> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(at_line(line, [&] { return candidates_from_json(T, json::parse(text)); }));
  }
  return out;
}

json certificate_json(const Setting& S, const Certificate& c) {
  json out = {{"record", "certificate"},
              {"ok", c.ok},
              {"spread_count", c.spread_count},
              {"line_total", c.line_total},
              {"covered_once", c.covered_once},
              {"double_covered", c.double_covered},
              {"uncovered", c.uncovered},
              {"checksum", c.checksum}};
  const auto& F = S.field();
  out["first_double"] = c.first_double >= 0 ? line_json(F, S.sigma_line(c.first_double)) : json(nullptr);
  out["first_uncovered"] = c.first_uncovered >= 0 ? line_json(F, S.sigma_line(c.first_uncovered)) : json(nullptr);
  out["spread_failures"] = c.spread_failures;
  return out;
}

void write_parallelism(std::ostream& out, const Setting& S, const Parallelism& p, const Certificate& c) {
  const auto& F = S.field();
  json head = {{"format", "spreadsmith-parallelism"},
               {"version", parallelism_format_version},
               {"q", S.q()},
               {"field", field_spec_json(F)},
               {"lambda_idx", lambda_logs(S.tower())},
               {"spreads", p.spreads.size()}};
  head["source"] = p.source ? candidates_json(p.source->entries) : json(nullptr);
  out << head.dump() << '\n';
  for (std::size_t i = 0; i < p.spreads.size(); ++i) {
    const Spread& s = p.spreads[i];
    json rec = {{"record", "spread"}, {"index", i}, {"tag", tag_name(s.tag)}};
    json lines = json::array();
    for (int id : s.lines) lines.push_back(line_json(F, S.sigma_line(id)));
    rec["lines"] = std::move(lines);
    if (s.transversal) rec["transversal"] = line_json(F, *s.transversal);
    out << rec.dump() << '\n';
  }
  out << certificate_json(S, c).dump() << '\n';
}

ParallelismHeader read_parallelism_header(std::istream& in) {
  std::string text;
  if (!std::getline(in, text)) throw ParseError(1, "empty parallelism file");
  return at_line(1, [&] {
    const json j = json::parse(text);
    if (!j.is_object() || j.value("format", "") != "spreadsmith-parallelism") {
      throw ParseError(0, "not a parallelism file header");
    }
    ParallelismHeader h;
    h.version = checked_int(field(j, "version"), "version");
    if (h.version != parallelism_format_version) throw ParseError(0, "unsupported version " + std::to_string(h.version));
    h.spec = field_from_json(field(j, "field")).spec();
    h.lambda_logs = int_list(field(j, "lambda_idx"), "lambda_idx");
    if (j.contains("source") && !j.at("source").is_null()) h.source = candidates_from(j.at("source"));
    return h;
  });
}

Tower tower_from_header(const ParallelismHeader& h) {
  GaloisField F(h.spec.p, h.spec.m, h.spec.modulus_q, h.spec.modulus_q2);
  auto lambda = lambda_from_logs(F, h.lambda_logs);
  return Tower(std::move(F), std::move(lambda));
}

ParallelismFile read_parallelism(std::istream& in, const Setting& S) {
  ParallelismFile f;
  f.header = read_parallelism_header(in);
  const auto& spec = S.field().spec();
  if (f.header.spec.p != spec.p || f.header.spec.m != spec.m || f.header.spec.modulus_q != spec.modulus_q ||
      f.header.spec.modulus_q2 != spec.modulus_q2) {
    throw ParseError(1, "field differs from the configured field");
  }
  if (f.header.lambda_logs != lambda_logs(S.tower())) throw ParseError(1, "Lambda differs from the configured Lambda");
  if (f.header.source) f.parallelism.source = make_good_set(*f.header.source);
  std::string text;
  std::size_t line = 1;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    at_line(line, [&] {
      const json j = json::parse(text);
      const std::string kind = field(j, "record").get<std::string>();
      if (kind == "spread") {
        if (f.certificate) throw ParseError(0, "spread after the certificate");
        Spread s;
        s.tag = tag_from(field(j, "tag").get<std::string>());
        for (const auto& l : field(j, "lines")) {
          const int id = S.line_id(line_from_json(S.space(), l));
          if (id < 0) throw ParseError(0, "line is not a line of Sigma_eta");
          s.lines.push_back(id);
        }
        std::sort(s.lines.begin(), s.lines.end());
        if (j.contains("transversal")) s.transversal = line_from_json(S.space(), j.at("transversal"));
        f.parallelism.spreads.push_back(std::move(s));
      } else if (kind == "certificate") {
        StoredCertificate c;
        c.ok = field(j, "ok").get<bool>();
        c.spread_count = checked_int(field(j, "spread_count"), "spread_count");
        c.covered_once = checked_int(field(j, "covered_once"), "covered_once");
        c.double_covered = checked_int(field(j, "double_covered"), "double_covered");
        c.uncovered = checked_int(field(j, "uncovered"), "uncovered");
        c.checksum = field(j, "checksum").get<std::uint64_t>();
        f.certificate = c;
      } else {
        throw ParseError(0, "unknown record '" + kind + "'");
      }
      return 0;
    });
  }
  normalize(f.parallelism);
  return f;
}

json big_json(const BigInt& x) { return x.str(); }

json rational_json(const BigRational& x) {
  return {{"exact", rational_text(x)}, {"approx", static_cast<double>(x)}};
}

json classification_json(const Setting& S, const StabilizerGroup& G, const OrbitReport& rep,
                         const std::vector<GoodSet>& inputs, const std::vector<std::string>& rep_files) {
  const int q = S.q(), m = S.field().m();
  json out = {{"q", q},
              {"field", field_spec_json(S.field())},
              {"lambda_idx", lambda_logs(S.tower())},
              {"group", "Gamma_r_U1"},
              {"group_order", G.order()},
              {"group_order_formula", big_json(stabilizer_order_formula(q, m))},
              {"input_size", rep.input_size},
              {"distinct_size", rep.distinct_size},
              {"orbit_count", rep.orbits.size()}};
  json bounds = json::array();
  const std::vector<BoundVariant> variants =
      q % 2 == 0 ? std::vector<BoundVariant>{BoundVariant::even_printed, BoundVariant::even_I}
                 : std::vector<BoundVariant>{BoundVariant::odd};
  for (auto v : variants) {
    const BigRational b = lower_bound(q, m, v);
    json e = rational_json(b);
    e["variant"] = to_string(v);
    e["orbit_count_at_least_bound"] = BigRational(static_cast<long long>(rep.orbits.size())) >= b;
    bounds.push_back(std::move(e));
  }
  out["lower_bounds"] = std::move(bounds);
  json orbits = json::array();
  for (std::size_t k = 0; k < rep.orbits.size(); ++k) {
    const Orbit& o = rep.orbits[k];
    json e = {{"index", k},
              {"representative_index", o.representative},
              {"family_size", o.family_size},
              {"stabilizer_order", o.stabilizer_order},
              {"full_orbit_size", o.full_orbit_size}};
    e["representative"] = o.representative >= 0 && static_cast<std::size_t>(o.representative) < inputs.size()
                              ? good_set_json(S.tower(), inputs[o.representative].entries)
                              : json(nullptr);
    e["representative_file"] = k < rep_files.size() && !rep_files[k].empty() ? json(rep_files[k]) : json(nullptr);
    orbits.push_back(std::move(e));
  }
  out["orbits"] = std::move(orbits);
  return out;
}

}  // namespace spreadsmith
