#pragma once

// Explicit exponent bounds: the p | y bound, C'(p) and C(p), the
// Hasse-power survivor bound and the cubic irreducibility threshold.

#include <gmpxx.h>

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fmk/errors.hpp"
#include "fmk/integer.hpp"

namespace fmk {

/// Largest integer strictly below p + 1 + 2 sqrt(p).
inline Int pmidy_bound(long p) {
  require(p >= 5 && is_prime_u64(static_cast<std::uint64_t>(p)), ErrorKind::invalid_argument,
          "pmidy_bound needs a prime p >= 5");
  const Int four_p = Int(4) * p;
  const Int r = isqrt(four_p);
  // 2 sqrt(p) = sqrt(4p); subtract one when it is an integer.
  return Int(p + 1) + r - (r * r == four_p ? 1 : 0);
}

/// Exact exponent for (1 + 3^{3h(p-1)})^2 would be 3h(p-1); stored as unsigned long.
inline unsigned long c_prime_exponent(long p, long h) {
  require(p >= 2 && h >= 1, ErrorKind::invalid_argument, "c_prime needs p >= 2 and h >= 1");
  return static_cast<unsigned long>(3 * h * (p - 1));
}

/// log10 of B (1 + 3^k)^2 with k = 3h(p-1).
inline double c_prime_log10(long p, const Int& B, long h) {
  require(B > 0, ErrorKind::invalid_argument, "B_p must be non-zero and positive");
  const double k = static_cast<double>(c_prime_exponent(p, h));
  return log10_int(B) + 2.0 * (k * std::log10(3.0) + std::log1p(std::pow(3.0, -k)) / std::log(10.0));
}

/// B (1 + 3^{3h(p-1)})^2 exactly.
inline Int c_prime(long p, const Int& B, long h) {
  require(B > 0, ErrorKind::invalid_argument, "B_p must be non-zero and positive");
  const Int t = 1 + pow_int(Int(3), c_prime_exponent(p, h));
  return B * t * t;
}

/// (N + 1 + 2 sqrt(N))^d = A + B sqrt(N) with A, B positive integers.
struct QuadraticPower {
  Int A, B;
};

inline QuadraticPower sqrt_plus_one_power(const Int& N, unsigned long d) {
  // Square-and-multiply in Z[sqrt(N)].
  QuadraticPower result{1, 0}, base{N + 1, 2};
  auto mul = [&N](const QuadraticPower& x, const QuadraticPower& y) {
    return QuadraticPower{x.A * y.A + x.B * y.B * N, x.A * y.B + x.B * y.A};
  };
  while (d) {
    if (d & 1) result = mul(result, base);
    d >>= 1;
    if (d) base = mul(base, base);
  }
  return result;
}

/// floor((sqrt(N) + 1)^{2d}), exact.
inline Int survivor_bound(const Int& N, unsigned long d) {
  require(N >= 2 && d >= 1, ErrorKind::invalid_argument, "survivor_bound needs N >= 2 and d >= 1");
  const QuadraticPower q = sqrt_plus_one_power(N, d);
  // floor(B sqrt(N)) = isqrt(B^2 N).
  return q.A + isqrt(q.B * q.B * N);
}

/// 2d log10(sqrt(N) + 1), via log10(N)/2 + log10(1 + N^{-1/2}).
inline double hasse_power_log10(const Int& N, unsigned long d) {
  require(N >= 2 && d >= 1, ErrorKind::invalid_argument, "hasse_power_log10 needs N >= 2 and d >= 1");
  const long double half = static_cast<long double>(log10_int(N)) / 2.0L;
  const long double tail = std::log1p(std::pow(10.0L, -half)) / std::log(10.0L);
  return static_cast<double>(2.0L * static_cast<long double>(d) * (half + tail));
}

inline constexpr long kIrredThreshold = 65L * 6 * 6 * 6 * 6 * 6 * 6;
static_assert(kIrredThreshold == 3032640);
static_assert(kIrredThreshold < 10000000L);

inline Int irred_threshold_cubic() { return Int(kIrredThreshold); }

/// Prime divisors of N + 1 + a and N + 1 - a, ascending.
inline std::vector<Int> trace_divisibility(const Int& N, const Int& a) {
  require(N >= 2, ErrorKind::invalid_argument, "trace_divisibility needs N >= 2");
  require(a * a <= 4 * N, ErrorKind::invalid_eigenvalue,
          "|a| = " + to_decimal(abs(a)) + " exceeds 2 sqrt(" + to_decimal(N) + ")");
  std::set<Int> out;
  for (const Int& m : {Int(N + 1 + a), Int(N + 1 - a)})
    for (const auto& q : prime_divisors(m)) out.insert(q);
  return {out.begin(), out.end()};
}

struct BoundInputs {
  long p = 0;
  Int B_p;
  long h = 0;
  unsigned long d = 0;
  Int norm_q3;
};

enum class DominatingTerm { c_prime, hasse_power };

inline std::string to_string(DominatingTerm t) {
  return t == DominatingTerm::c_prime ? "c_prime" : "hasse_power";
}

struct BoundReport {
  double c_prime_log10 = 0;
  double hasse_log10 = 0;
  double c_log10 = 0;
  DominatingTerm dominating_term = DominatingTerm::c_prime;
  std::optional<std::size_t> exact_digits;  // set when C(p) has < 10^6 digits
  std::vector<Int> pB_primes;               // primes of p B_p
};

inline constexpr double kMaxExactDigits = 1e6;

/// C(p) = max(C'(p), (sqrt(Norm q3) + 1)^{2d}) as a log10, with exact digit
/// counts for the dominating term when it is small enough to build.
inline BoundReport c_of_p(const BoundInputs& in) {
  require(in.p >= 2 && is_prime_u64(static_cast<std::uint64_t>(in.p)), ErrorKind::invalid_argument, "p must be prime");
  require(in.B_p > 0 && in.h >= 1 && in.d >= 1 && in.norm_q3 >= 2, ErrorKind::invalid_argument,
          "bound inputs must be positive");
  BoundReport r;
  r.c_prime_log10 = c_prime_log10(in.p, in.B_p, in.h);
  r.hasse_log10 = hasse_power_log10(in.norm_q3, in.d);
  r.dominating_term = r.hasse_log10 > r.c_prime_log10 ? DominatingTerm::hasse_power : DominatingTerm::c_prime;
  r.c_log10 = std::max(r.c_prime_log10, r.hasse_log10);
  if (r.c_log10 + 1 < kMaxExactDigits) {
    const Int exact = r.dominating_term == DominatingTerm::c_prime ? c_prime(in.p, in.B_p, in.h)
                                                                   : survivor_bound(in.norm_q3, in.d);
    r.exact_digits = decimal_digits(exact);
  }
  r.pB_primes = prime_divisors(in.B_p * in.p);
  return r;
}

}  // namespace fmk
