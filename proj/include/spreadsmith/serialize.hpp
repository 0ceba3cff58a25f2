#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spreadsmith/equivalence.hpp"
#include "spreadsmith/goodsets.hpp"
#include "spreadsmith/parallelisms.hpp"

namespace spreadsmith {

using nlohmann::json;

// Malformed input. line is 1-based, 0 when the input is a single document.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// GF(q) elements are GF(p) coefficient lists, constant first. GF(q^2)
// elements are [a0, a1] for a0 + a1 y.
json element_json(const GaloisField& F, Fq2 a);
Fq2 element_from_json(const GaloisField& F, const json& j);

// {p, m, modulus_q, modulus_q2, generator}
json field_spec_json(const GaloisField& F);
GaloisField field_from_json(const json& j);  // checks the stored generator

// Lambda written as discrete logs to the field generator.
std::vector<int> lambda_logs(const Tower& T);
std::vector<Fq2> lambda_from_logs(const GaloisField& F, const std::vector<int>& logs);
// A --lambda file: {"lambda": [element, ...]}.
std::vector<Fq2> lambda_from_json(const GaloisField& F, const json& j);

json point_json(const GaloisField& F, const ProjPoint& p);
ProjPoint point_from_json(const Space& sp, const json& j);  // rejects non-canonical
json line_json(const GaloisField& F, const ProjLine& l);    // two canonical points
ProjLine line_from_json(const Space& sp, const json& j);

// {q, lambda_idx, entries: [{alpha_idx, u_pow, v_pow}]}. Reading does not
// check goodness, only the shape and that q and Lambda match T.
json good_set_json(const Tower& T, const std::vector<Candidate>& entries);
std::vector<Candidate> candidates_from_json(const Tower& T, const json& j);
// One record per line; blank lines are skipped.
std::vector<std::vector<Candidate>> read_good_sets(const Tower& T, std::istream& in);

// Parallelism files are JSON lines: a header, one record per spread, then a
// certificate record.
inline constexpr int parallelism_format_version = 1;

struct ParallelismHeader {
  int version = 0;
  FieldSpec spec;
  std::vector<int> lambda_logs;
  std::optional<std::vector<Candidate>> source;
};

struct StoredCertificate {
  bool ok = false;
  int spread_count = 0;
  int covered_once = 0;
  int double_covered = 0;
  int uncovered = 0;
  std::uint64_t checksum = 0;
};

struct ParallelismFile {
  ParallelismHeader header;
  Parallelism parallelism;
  std::optional<StoredCertificate> certificate;
};

void write_parallelism(std::ostream& out, const Setting& S, const Parallelism& p, const Certificate& c);
ParallelismHeader read_parallelism_header(std::istream& in);  // first line only
Tower tower_from_header(const ParallelismHeader& h);
// Reads a whole file against S; the header must match S's field and Lambda.
ParallelismFile read_parallelism(std::istream& in, const Setting& S);

json certificate_json(const Setting& S, const Certificate& c);

// Big numbers as decimal strings; rationals as "a/b" plus a double.
json big_json(const BigInt& x);
json rational_json(const BigRational& x);

// Classification report. rep_files[k] names orbit k's representative
// parallelism file, empty when none was written.
json classification_json(const Setting& S, const StabilizerGroup& G, const OrbitReport& rep,
                         const std::vector<GoodSet>& inputs, const std::vector<std::string>& rep_files);

}  // namespace spreadsmith
