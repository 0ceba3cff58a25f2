#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spreadsmith {

// Element of GF(q^2). The byte is a0 + a1*q where a0, a1 are GF(q) codes and
// a GF(q) code is sum c_i p^i over the GF(p) coefficients of the element.
// Elements of GF(q) are exactly the bytes below q.
struct Fq2 {
  std::uint8_t v = 0;

  friend constexpr bool operator==(Fq2, Fq2) = default;
  friend constexpr auto operator<=>(Fq2, Fq2) = default;
};

struct FieldSpec {
  int p = 0;
  int m = 0;
  int q = 0;
  std::vector<int> modulus_q;    // GF(p) coefficients, constant first, monic
  std::array<int, 3> modulus_q2{};  // GF(q) codes, constant first, monic
  Fq2 generator;
};

// Splits n into p^m. Returns nullopt when n is not a prime power.
std::optional<std::pair<int, int>> prime_power(int n);

// Table-driven arithmetic for the tower GF(p) < GF(q) < GF(q^2), q^2 <= 256.
class GaloisField {
 public:
  // Moduli default to the lexicographically smallest monic irreducibles
  // (coefficients compared constant term first). Throws std::invalid_argument
  // for out-of-range sizes or reducible moduli.
  GaloisField(int p, int m, std::optional<std::vector<int>> modulus_q = std::nullopt,
              std::optional<std::array<int, 3>> modulus_q2 = std::nullopt);

  static GaloisField from_q(int q);

  const FieldSpec& spec() const { return spec_; }
  int p() const { return spec_.p; }
  int m() const { return spec_.m; }
  int q() const { return spec_.q; }
  int order() const { return big_; }  // q^2

  Fq2 zero() const { return Fq2{0}; }
  Fq2 one() const { return Fq2{1}; }
  Fq2 element(int code) const;  // 0 <= code < q^2
  Fq2 from_pair(int a0, int a1) const;  // a0 + a1*y with GF(q) codes
  int low(Fq2 x) const { return x.v % spec_.q; }
  int high(Fq2 x) const { return x.v / spec_.q; }

  Fq2 add(Fq2 a, Fq2 b) const { return Fq2{add_[idx(a, b)]}; }
  Fq2 sub(Fq2 a, Fq2 b) const { return add(a, neg(b)); }
  Fq2 neg(Fq2 a) const { return Fq2{neg_[a.v]}; }
  Fq2 mul(Fq2 a, Fq2 b) const { return Fq2{mul_[idx(a, b)]}; }
  Fq2 inv(Fq2 a) const;  // throws std::domain_error on zero
  Fq2 div(Fq2 a, Fq2 b) const { return mul(a, inv(b)); }
  Fq2 pow(Fq2 a, long long e) const;

  Fq2 frobenius(Fq2 a) const { return Fq2{frob_[a.v]}; }  // a^q
  Fq2 frobenius_p(Fq2 a, int e) const;                      // a^(p^e)
  Fq2 norm(Fq2 a) const { return mul(a, frobenius(a)); }    // a^(q+1)
  Fq2 trace(Fq2 a) const { return add(a, frobenius(a)); }
  bool in_subfield(Fq2 a) const { return a.v < spec_.q; }
  bool is_square_in_subfield(Fq2 a) const;  // a in GF(q)*

  Fq2 generator() const { return spec_.generator; }
  Fq2 gen_pow(long long k) const;
  int log(Fq2 a) const;  // discrete log to base generator, a != 0
  int multiplicative_order(Fq2 a) const;

  // Elements of GF(q) sorted by their coefficient vectors (constant first).
  const std::vector<int>& subfield_lex_order() const { return sub_lex_; }
  // GF(p) coefficients of a GF(q) code, constant first, length m.
  std::vector<int> digits(int code) const;
  int from_digits(const std::vector<int>& digits) const;

  std::string to_string(Fq2 a) const;

 private:
  std::size_t idx(Fq2 a, Fq2 b) const { return std::size_t{a.v} * big_ + b.v; }
  void build_subfield(std::optional<std::vector<int>> modulus_q);
  void build_extension(std::optional<std::array<int, 3>> modulus_q2);
  void build_tables();

  FieldSpec spec_;
  int big_ = 0;
  std::vector<int> sub_add_, sub_mul_;  // q x q tables over codes
  std::vector<int> sub_lex_;
  std::vector<std::uint8_t> add_, mul_, neg_, inv_, frob_, frob_p_;
  std::vector<std::uint8_t> exp_;  // exp_[k] = g^k, k < q^2-1
  std::vector<int> log_;
};

}  // namespace spreadsmith
