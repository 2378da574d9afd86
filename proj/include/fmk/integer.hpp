#pragma once

// Exact integer helpers on top of GMP: square roots, logarithms, factoring,
// product trees. Everything the bounds and sieve layers need from Z.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fmk/errors.hpp"

namespace fmk {

using Int = mpz_class;
using Rat = mpq_class;

inline std::string to_decimal(const Int& x) { return x.get_str(10); }

inline Int parse_int(const std::string& s) {
  Int out;
  if (s.empty() || out.set_str(s, 10) != 0)
    fail(ErrorKind::invalid_argument, "not a decimal integer: '" + s + "'");
  return out;
}

inline Int pow_int(const Int& base, unsigned long exp) {
  Int out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

inline Int isqrt(const Int& n) {
  require(n >= 0, ErrorKind::invalid_argument, "isqrt of negative");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

/// Exact k-th root when n is a perfect k-th power (n >= 0).
inline std::optional<Int> exact_root(const Int& n, unsigned long k) {
  if (n < 0) return std::nullopt;
  Int r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), k) != 0) return r;
  return std::nullopt;
}

inline bool is_probable_prime(const Int& n) {
  return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

/// 2-adic (or general p-adic) valuation of a non-zero integer.
inline unsigned long valuation(Int n, unsigned long p) {
  require(n != 0, ErrorKind::invalid_argument, "valuation of zero");
  unsigned long v = 0;
  while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    ++v;
  }
  return v;
}

/// log10 of a positive integer, accurate to double precision regardless of size.
inline double log10_int(const Int& n) {
  require(n > 0, ErrorKind::invalid_argument, "log10 of non-positive integer");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, n.get_mpz_t());
  return std::log10(mant) + static_cast<double>(exp2) * std::log10(2.0);
}

inline std::size_t decimal_digits(const Int& n) {
  if (n == 0) return 1;
  Int a = abs(n);
  return a.get_str(10).size();
}

/// Balanced product; keeps operand sizes matched so multiplication stays fast.
inline Int product_tree(std::vector<Int> xs) {
  if (xs.empty()) return Int(1);
  while (xs.size() > 1) {
    std::vector<Int> next;
    next.reserve((xs.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) next.push_back(xs[i] * xs[i + 1]);
    if (xs.size() % 2) next.push_back(std::move(xs.back()));
    xs = std::move(next);
  }
  return xs.front();
}

struct Factorization {
  std::vector<std::pair<Int, unsigned>> factors;  // ascending primes
  Int unfactored = 1;                               // composite cofactor rho gave up on

  bool complete() const { return unfactored == 1; }

  std::vector<Int> primes() const {
    std::vector<Int> out;
    for (const auto& [p, e] : factors) out.push_back(p);
    return out;
  }
};

namespace detail {

inline std::optional<Int> pollard_brent(const Int& n, unsigned long seed, std::size_t max_steps) {
  if (mpz_even_p(n.get_mpz_t())) return Int(2);
  Int y = seed % n, c = (seed * 7 + 1) % n, g = 1, r = 1, q = 1, x, ys;
  const std::size_t m = 128;
  std::size_t steps = 0;
  auto f = [&](const Int& v) { return Int((v * v + c) % n); };
  while (g == 1) {
    x = y;
    for (Int i = 0; i < r; ++i) y = f(y);
    Int k = 0;
    while (k < r && g == 1) {
      ys = y;
      for (std::size_t i = 0; i < m && k + i < r; ++i) {
        y = f(y);
        q = (q * abs(Int(x - y))) % n;
      }
      g = gcd(q, n);
      k += m;
      steps += m;
      if (steps > max_steps) return std::nullopt;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = gcd(abs(Int(x - ys)), n);
    } while (g == 1);
  }
  if (g == n) return std::nullopt;
  return g;
}

inline void factor_rec(const Int& n, std::map<Int, unsigned>& acc, Int& unfactored) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++acc[n];
    return;
  }
  for (unsigned long seed = 2; seed < 40; ++seed) {
    if (auto d = pollard_brent(n, seed, 1u << 22)) {
      factor_rec(*d, acc, unfactored);
      factor_rec(Int(n / *d), acc, unfactored);
      return;
    }
  }
  unfactored *= n;
}

}  // namespace detail

/// Trial division to 10^5, then Brent's rho. A cofactor that resists rho is
/// returned in `unfactored` rather than silently treated as prime.
inline Factorization factor(const Int& n_in) {
  require(n_in != 0, ErrorKind::invalid_argument, "factor of zero");
  Int n = abs(n_in);
  std::map<Int, unsigned> acc;
  for (unsigned long d = 2; d <= 100000 && Int(d) * d <= n; d += (d == 2 ? 1 : 2)) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), d);
      ++acc[Int(d)];
    }
  }
  Factorization out;
  detail::factor_rec(n, acc, out.unfactored);
  for (auto& [p, e] : acc) out.factors.emplace_back(p, e);
  return out;
}

inline std::vector<Int> prime_divisors(const Int& n) { return factor(n).primes(); }

/// Product of the primes other than 2 and 3 dividing n.
inline Int radical_away_from_6(const Int& n) {
  Int out = 1;
  for (const auto& p : prime_divisors(n))
    if (p != 2 && p != 3) out *= p;
  return out;
}

}  // namespace fmk
