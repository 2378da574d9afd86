#pragma once

// Dense univariate polynomials over the prime field F_q (coefficients stored
// low degree first), plus factorization of square-free polynomials by
// distinct-degree and equal-degree splitting.

#include <algorithm>
#include <cstdint>
#include <random>
#include <tuple>
#include <vector>

#include "fmk/errors.hpp"
#include "fmk/integer.hpp"

namespace fmk::fq {

using Coeff = std::int64_t;
using Poly = std::vector<Coeff>;  // empty == zero polynomial

inline Coeff mod(Coeff a, Coeff q) {
  a %= q;
  return a < 0 ? a + q : a;
}

inline Coeff inv_mod(Coeff a, Coeff q) {
  Coeff t = 0, nt = 1, r = q, nr = mod(a, q);
  while (nr != 0) {
    Coeff quot = r / nr;
    std::tie(t, nt) = std::make_pair(nt, t - quot * nt);
    std::tie(r, nr) = std::make_pair(nr, r - quot * nr);
  }
  require(r == 1, ErrorKind::division_by_zero, "element not invertible mod " + std::to_string(q));
  return mod(t, q);
}

inline void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

inline Poly normalized(Poly f, Coeff q) {
  for (auto& c : f) c = mod(c, q);
  trim(f);
  return f;
}

inline Poly add(const Poly& a, const Poly& b, Coeff q) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = mod(out[i] + b[i], q);
  trim(out);
  return out;
}

inline Poly sub(const Poly& a, const Poly& b, Coeff q) {
  Poly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = mod(out[i] - b[i], q);
  trim(out);
  return out;
}

inline Poly mul(const Poly& a, const Poly& b, Coeff q) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % q;
  }
  trim(out);
  return out;
}

inline Poly scale(const Poly& a, Coeff s, Coeff q) {
  Poly out(a);
  for (auto& c : out) c = mod(c * s, q);
  trim(out);
  return out;
}

/// Quotient and remainder; divisor must be non-zero.
inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, Coeff q) {
  require(!b.empty(), ErrorKind::division_by_zero, "polynomial division by zero");
  const Coeff lead_inv = inv_mod(b.back(), q);
  const int db = degree(b);
  if (degree(a) < db) return {Poly{}, a};
  Poly quot(static_cast<std::size_t>(degree(a) - db + 1), 0);
  for (int i = degree(a); i >= db; --i) {
    const Coeff c = mod(a[static_cast<std::size_t>(i)] * lead_inv, q);
    quot[static_cast<std::size_t>(i - db)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) {
      auto& slot = a[static_cast<std::size_t>(i - db + j)];
      slot = mod(slot - c * b[static_cast<std::size_t>(j)], q);
    }
  }
  trim(a);
  trim(quot);
  return {quot, a};
}

inline Poly rem(const Poly& a, const Poly& b, Coeff q) { return divmod(a, b, q).second; }

inline Poly monic(const Poly& a, Coeff q) {
  if (a.empty()) return a;
  return scale(a, inv_mod(a.back(), q), q);
}

inline Poly gcd(Poly a, Poly b, Coeff q) {
  while (!b.empty()) {
    Poly r = rem(a, b, q);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, q);
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m, Coeff q) { return rem(mul(a, b, q), m, q); }

inline Poly powmod(Poly base, const Int& exp, const Poly& m, Coeff q) {
  Poly result{1};
  result = rem(result, m, q);
  base = rem(base, m, q);
  const auto bits = mpz_sizeinbase(exp.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    result = mulmod(result, result, m, q);
    if (mpz_tstbit(exp.get_mpz_t(), i)) result = mulmod(result, base, m, q);
  }
  return result;
}

inline Poly derivative(const Poly& f, Coeff q) {
  Poly out;
  for (std::size_t i = 1; i < f.size(); ++i) out.push_back(mod(f[i] * static_cast<Coeff>(i), q));
  trim(out);
  return out;
}

inline Coeff eval(const Poly& f, Coeff x, Coeff q) {
  Coeff acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = mod(acc * x + f[i], q);
  return acc;
}

inline bool lex_less(const Poly& a, const Poly& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace detail {

inline Poly random_poly(std::mt19937_64& rng, int deg_below, Coeff q) {
  std::uniform_int_distribution<Coeff> dist(0, q - 1);
  Poly out(static_cast<std::size_t>(deg_below));
  for (auto& c : out) c = dist(rng);
  trim(out);
  return out;
}

// Splits a monic product of distinct irreducibles of common degree d.
inline void equal_degree_split(const Poly& f, int d, Coeff q, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (degree(f) == d) {
    out.push_back(f);
    return;
  }
  const Int qd = pow_int(Int(q), static_cast<unsigned long>(d));
  for (;;) {
    Poly a = random_poly(rng, degree(f), q);
    if (degree(a) < 1) continue;
    Poly probe;
    if (q == 2) {
      // Trace map F_{2^d} -> F_2 applied componentwise.
      Poly term = a;
      probe = a;
      for (int i = 1; i < d; ++i) {
        term = mulmod(term, term, f, q);
        probe = add(probe, term, q);
      }
    } else {
      probe = sub(powmod(a, Int((qd - 1) / 2), f, q), Poly{1}, q);
    }
    Poly g = gcd(f, probe, q);
    if (degree(g) > 0 && degree(g) < degree(f)) {
      equal_degree_split(g, d, q, rng, out);
      equal_degree_split(divmod(f, g, q).first, d, q, rng, out);
      return;
    }
  }
}

}  // namespace detail

/// Irreducible monic factors of a monic square-free polynomial, sorted
/// lexicographically on their coefficient vectors (constant term first).
inline std::vector<Poly> factor_squarefree(const Poly& f_in, Coeff q) {
  Poly f = monic(normalized(f_in, q), q);
  require(degree(f) >= 1, ErrorKind::invalid_argument, "cannot factor a constant");
  require(degree(gcd(f, derivative(f, q), q)) == 0, ErrorKind::invalid_argument,
          "polynomial is not square-free mod " + std::to_string(q));
  std::mt19937_64 rng(0x5eed0000ULL + static_cast<unsigned long long>(q));
  std::vector<Poly> out;
  Poly x{0, 1};
  Poly h = x;
  for (int d = 1; 2 * d <= degree(f); ++d) {
    h = powmod(h, Int(q), f, q);
    Poly g = gcd(f, sub(h, x, q), q);
    if (degree(g) > 0) {
      detail::equal_degree_split(g, d, q, rng, out);
      f = divmod(f, g, q).first;
      h = rem(h, f, q);
    }
  }
  if (degree(f) > 0) out.push_back(f);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

inline bool is_irreducible(const Poly& f, Coeff q) {
  const Poly g = normalized(f, q);
  if (degree(g) < 1) return false;
  if (degree(gcd(g, derivative(g, q), q)) != 0) return false;
  return factor_squarefree(g, q).size() == 1;
}

}  // namespace fmk::fq
