#include "spreadsmith/field.hpp"

#include <stdexcept>
#include <string>

namespace spreadsmith {
namespace {

using Poly = std::vector<int>;  // GF(p) coefficients, constant first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod(int a, int p) {
  for (int x = 1; x < p; ++x) {
    if (a * x % p == 1) return x;
  }
  throw std::domain_error("no inverse mod p");
}

// Remainder of a modulo b over GF(p); b nonzero.
Poly poly_mod(Poly a, const Poly& b, int p) {
  trim(a);
  const int db = static_cast<int>(b.size()) - 1;
  const int lead_inv = inv_mod(b.back(), p);
  while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
    const int shift = static_cast<int>(a.size()) - 1 - db;
    const int factor = a.back() * lead_inv % p;
    for (int i = 0; i <= db; ++i) {
      a[shift + i] = ((a[shift + i] - factor * b[i]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

bool is_irreducible(const Poly& f, int p) {
  const int deg = static_cast<int>(f.size()) - 1;
  if (deg < 1 || f.back() == 0) return false;
  for (int d = 1; 2 * d <= deg; ++d) {
    int count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (int n = 0; n < count; ++n) {
      Poly g(d + 1, 0);
      int r = n;
      for (int i = 0; i < d; ++i) {
        g[i] = r % p;
        r /= p;
      }
      g[d] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

std::optional<std::pair<int, int>> prime_power(int n) {
  if (n < 2) return std::nullopt;
  int p = 2;
  while (n % p != 0) ++p;
  if (!is_prime(p)) return std::nullopt;
  int m = 0;
  int r = n;
  while (r % p == 0) {
    r /= p;
    ++m;
  }
  if (r != 1) return std::nullopt;
  return std::make_pair(p, m);
}

GaloisField GaloisField::from_q(int q) {
  auto pm = prime_power(q);
  if (!pm) throw std::invalid_argument(std::to_string(q) + " is not a prime power");
  return GaloisField(pm->first, pm->second);
}

GaloisField::GaloisField(int p, int m, std::optional<std::vector<int>> modulus_q,
                         std::optional<std::array<int, 3>> modulus_q2) {
  if (!is_prime(p) || m < 1) {
    throw std::invalid_argument("field characteristic must be prime and degree positive");
  }
  int q = 1;
  for (int i = 0; i < m; ++i) q *= p;
  if (q * q > 256) {
    throw std::invalid_argument("q = " + std::to_string(q) + " too large (need q^2 <= 256)");
  }
  spec_.p = p;
  spec_.m = m;
  spec_.q = q;
  big_ = q * q;
  build_subfield(std::move(modulus_q));
  build_extension(modulus_q2);
  build_tables();
}

std::vector<int> GaloisField::digits(int code) const {
  std::vector<int> d(spec_.m);
  for (int i = 0; i < spec_.m; ++i) {
    d[i] = code % spec_.p;
    code /= spec_.p;
  }
  return d;
}

int GaloisField::from_digits(const std::vector<int>& d) const {
  if (static_cast<int>(d.size()) != spec_.m) {
    throw std::invalid_argument("GF(q) element needs exactly m coefficients");
  }
  int code = 0;
  for (int i = spec_.m - 1; i >= 0; --i) {
    if (d[i] < 0 || d[i] >= spec_.p) throw std::invalid_argument("coefficient outside GF(p)");
    code = code * spec_.p + d[i];
  }
  return code;
}

void GaloisField::build_subfield(std::optional<std::vector<int>> modulus_q) {
  const int p = spec_.p, m = spec_.m, q = spec_.q;
  if (modulus_q) {
    Poly f = *modulus_q;
    if (static_cast<int>(f.size()) != m + 1 || f.back() != 1) {
      throw std::invalid_argument("modulus_q must be monic of degree m");
    }
    for (int c : f) {
      if (c < 0 || c >= p) throw std::invalid_argument("modulus_q coefficient outside GF(p)");
    }
    if (!is_irreducible(f, p)) throw std::invalid_argument("modulus_q is reducible");
    spec_.modulus_q = f;
  } else {
    // Constant term is the most significant position of the lex order.
    for (int n = 0; n < q; ++n) {
      Poly f(m + 1, 0);
      int r = n;
      for (int i = m - 1; i >= 0; --i) {
        f[i] = r % p;
        r /= p;
      }
      f[m] = 1;
      if (is_irreducible(f, p)) {
        spec_.modulus_q = f;
        break;
      }
    }
  }

  sub_add_.assign(q * q, 0);
  sub_mul_.assign(q * q, 0);
  for (int a = 0; a < q; ++a) {
    const auto da = digits(a);
    for (int b = 0; b < q; ++b) {
      const auto db = digits(b);
      std::vector<int> s(m);
      for (int i = 0; i < m; ++i) s[i] = (da[i] + db[i]) % p;
      sub_add_[a * q + b] = from_digits(s);
      Poly prod(2 * m, 0);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
      }
      Poly r = poly_mod(prod, spec_.modulus_q, p);
      r.resize(m, 0);
      sub_mul_[a * q + b] = from_digits(r);
    }
  }

  sub_lex_.clear();
  for (int n = 0; n < q; ++n) {
    std::vector<int> d(m);
    int r = n;
    for (int i = m - 1; i >= 0; --i) {
      d[i] = r % p;
      r /= p;
    }
    sub_lex_.push_back(from_digits(d));
  }
}

void GaloisField::build_extension(std::optional<std::array<int, 3>> modulus_q2) {
  const int q = spec_.q;
  auto has_root = [&](int c0, int c1) {
    for (int x = 0; x < q; ++x) {
      const int x2 = sub_mul_[x * q + x];
      const int v = sub_add_[sub_add_[x2 * q + sub_mul_[c1 * q + x]] * q + c0];
      if (v == 0) return true;
    }
    return false;
  };
  if (modulus_q2) {
    const auto& f = *modulus_q2;
    for (int c : f) {
      if (c < 0 || c >= q) throw std::invalid_argument("modulus_q2 coefficient outside GF(q)");
    }
    if (f[2] != 1) throw std::invalid_argument("modulus_q2 must be monic");
    if (has_root(f[0], f[1])) throw std::invalid_argument("modulus_q2 is reducible over GF(q)");
    spec_.modulus_q2 = f;
    return;
  }
  for (int c0 : sub_lex_) {
    for (int c1 : sub_lex_) {
      if (!has_root(c0, c1)) {
        spec_.modulus_q2 = {c0, c1, 1};
        return;
      }
    }
  }
  throw std::logic_error("no irreducible quadratic found");
}

void GaloisField::build_tables() {
  const int q = spec_.q;
  const int n = big_;
  std::vector<int> sub_neg(q);
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      if (sub_add_[a * q + b] == 0) sub_neg[a] = b;
    }
  }
  const int c0 = spec_.modulus_q2[0], c1 = spec_.modulus_q2[1];
  auto sa = [&](int a, int b) { return sub_add_[a * q + b]; };
  auto sm = [&](int a, int b) { return sub_mul_[a * q + b]; };

  add_.assign(n * n, 0);
  mul_.assign(n * n, 0);
  neg_.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    const int a0 = a % q, a1 = a / q;
    neg_[a] = static_cast<std::uint8_t>(sub_neg[a0] + q * sub_neg[a1]);
    for (int b = 0; b < n; ++b) {
      const int b0 = b % q, b1 = b / q;
      add_[a * n + b] = static_cast<std::uint8_t>(sa(a0, b0) + q * sa(a1, b1));
      // y^2 = -c1 y - c0
      const int hh = sm(a1, b1);
      const int lo = sa(sm(a0, b0), sub_neg[sm(hh, c0)]);
      const int hi = sa(sa(sm(a0, b1), sm(a1, b0)), sub_neg[sm(hh, c1)]);
      mul_[a * n + b] = static_cast<std::uint8_t>(lo + q * hi);
    }
  }

  auto slow_pow = [&](int a, long long e) {
    int r = 1;
    int base = a;
    while (e > 0) {
      if (e & 1) r = mul_[r * n + base];
      base = mul_[base * n + base];
      e >>= 1;
    }
    return r;
  };
  auto order_of = [&](int a) {
    int k = 1;
    int x = a;
    while (x != 1) {
      x = mul_[x * n + a];
      ++k;
    }
    return k;
  };

  bool found = false;
  for (int a0 : sub_lex_) {
    for (int a1 : sub_lex_) {
      const int a = a0 + q * a1;
      if (a == 0) continue;
      if (order_of(a) == n - 1) {
        spec_.generator = Fq2{static_cast<std::uint8_t>(a)};
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (!found) throw std::logic_error("no primitive element found");

  exp_.assign(n - 1, 0);
  log_.assign(n, -1);
  int x = 1;
  for (int k = 0; k < n - 1; ++k) {
    exp_[k] = static_cast<std::uint8_t>(x);
    log_[x] = k;
    x = mul_[x * n + spec_.generator.v];
  }
  inv_.assign(n, 0);
  frob_.assign(n, 0);
  frob_p_.assign(n, 0);
  for (int a = 0; a < n; ++a) {
    if (a != 0) inv_[a] = exp_[(n - 1 - log_[a]) % (n - 1)];
    frob_[a] = static_cast<std::uint8_t>(slow_pow(a, q));
    frob_p_[a] = static_cast<std::uint8_t>(slow_pow(a, spec_.p));
  }
}

Fq2 GaloisField::element(int code) const {
  if (code < 0 || code >= big_) throw std::out_of_range("element code out of range");
  return Fq2{static_cast<std::uint8_t>(code)};
}

Fq2 GaloisField::from_pair(int a0, int a1) const {
  if (a0 < 0 || a0 >= spec_.q || a1 < 0 || a1 >= spec_.q) {
    throw std::out_of_range("GF(q) code out of range");
  }
  return Fq2{static_cast<std::uint8_t>(a0 + spec_.q * a1)};
}

Fq2 GaloisField::inv(Fq2 a) const {
  if (a.v == 0) throw std::domain_error("inverse of zero");
  return Fq2{inv_[a.v]};
}

Fq2 GaloisField::pow(Fq2 a, long long e) const {
  if (a.v == 0) {
    if (e < 0) throw std::domain_error("negative power of zero");
    return e == 0 ? one() : zero();
  }
  const long long n = big_ - 1;
  long long k = (static_cast<long long>(log_[a.v]) * (((e % n) + n) % n)) % n;
  return Fq2{exp_[k]};
}

Fq2 GaloisField::frobenius_p(Fq2 a, int e) const {
  const int period = 2 * spec_.m;
  e = ((e % period) + period) % period;
  for (int i = 0; i < e; ++i) a = Fq2{frob_p_[a.v]};
  return a;
}

bool GaloisField::is_square_in_subfield(Fq2 a) const {
  if (!in_subfield(a) || a.v == 0) throw std::domain_error("expected nonzero element of GF(q)");
  if (spec_.p == 2) return true;
  return pow(a, (spec_.q - 1) / 2) == one();
}

Fq2 GaloisField::gen_pow(long long k) const {
  const long long n = big_ - 1;
  return Fq2{exp_[((k % n) + n) % n]};
}

int GaloisField::log(Fq2 a) const {
  if (a.v == 0) throw std::domain_error("log of zero");
  return log_[a.v];
}

int GaloisField::multiplicative_order(Fq2 a) const {
  const int n = big_ - 1;
  const int k = log(a);
  int g = n, r = k;
  while (r != 0) {
    const int t = g % r;
    g = r;
    r = t;
  }
  return n / g;
}

std::string GaloisField::to_string(Fq2 a) const {
  auto sub = [&](int code) {
    std::string s;
    for (int d : digits(code)) s += std::to_string(d);
    return s;
  };
  return "(" + sub(low(a)) + "," + sub(high(a)) + ")";
}

}  // namespace spreadsmith
