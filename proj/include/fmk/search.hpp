#pragma once

// Exhaustive desk-scale search for primitive solutions of
// x^2 + y^(2n) = z^(3p) and x^(2l) + y^(2m) = z^17.

#include <gmpxx.h>

#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fmk/descent.hpp"
#include "fmk/errors.hpp"
#include "fmk/integer.hpp"

namespace fmk {

inline constexpr long kSearchBudget = 1000000;

/// Every (A, B) with A^2 + B^2 = z^k, gcd(A, B) = 1, 1 <= z <= z_max, for odd
/// k >= 3. Z[i] is a UFD and every unit is a k-th power, so A + Bi = (c + di)^k
/// with c^2 + d^2 = z; z is odd since A, B cannot both be odd. One generator
/// per associate class is raised to the k-th power; the other three are unit
/// rotations of the result.
struct PrimitiveRep {
  Int A, B, z;
  bool operator<(const PrimitiveRep& o) const { return std::tie(A, B, z) < std::tie(o.A, o.B, o.z); }
  bool operator==(const PrimitiveRep& o) const { return A == o.A && B == o.B && z == o.z; }
};

inline std::vector<PrimitiveRep> primitive_representations(long z_max, unsigned long k, long budget = kSearchBudget,
                                                           long* steps_out = nullptr) {
  require(k >= 3 && k % 2 == 1, ErrorKind::invalid_argument, "exponent must be odd and at least 3");
  require(z_max >= 1, ErrorKind::invalid_argument, "z bound must be positive");
  // Lattice points to visit, counted before any work is done.
  long planned = 0;
  for (long c = 1; c * c <= z_max; ++c) planned += isqrt(Int(z_max - c * c)).get_si() + 1;
  if (planned > budget)
    fail(ErrorKind::budget_exceeded, std::to_string(planned) + " enumeration steps exceed the budget of " + std::to_string(budget));
  std::set<PrimitiveRep> out;
  long steps = 0;
  for (long c = 1; c * c <= z_max; ++c) {
    for (long d = 0; c * c + d * d <= z_max; ++d) {
      ++steps;
      if (std::gcd(c, d) != 1) continue;
      const long z = c * c + d * d;
      if (z % 2 == 0) continue;
      const Gaussian g = gaussian_pow({c, d}, k);
      if (gcd(g.re, g.im) != 1) continue;
      // Rotations by i: (A, B) -> (-B, A).
      Int A = g.re, B = g.im;
      for (int r = 0; r < 4; ++r) {
        out.insert({A, B, Int(z)});
        const Int t = -B;
        B = A;
        A = t;
      }
    }
  }
  if (steps_out) *steps_out = steps;
  return {out.begin(), out.end()};
}

struct Solution {
  Int x, y, z;
  bool trivial = false;
  bool congruences = false;  // y = 3 mod 6, x even, z odd
  bool operator<(const Solution& o) const { return std::tie(x, y, z) < std::tie(o.x, o.y, o.z); }
  bool operator==(const Solution& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct SearchReport {
  std::string mode;
  long p = 0, n = 0, z_max = 0;
  unsigned long z_exponent = 0;
  long steps = 0;
  std::vector<Solution> solutions;

  long nontrivial() const {
    long c = 0;
    for (const auto& s : solutions) c += !s.trivial;
    return c;
  }
};

inline bool congruence_filter(const Int& x, const Int& y, const Int& z) {
  Int ym = y % 6;
  if (ym < 0) ym += 6;
  return ym == 3 && mpz_even_p(x.get_mpz_t()) && mpz_odd_p(z.get_mpz_t());
}

/// Values r with r^e = |v| or r^e = -|v| (with sign when e is odd).
inline std::vector<Int> signed_roots(const Int& v, unsigned long e) {
  const auto r = exact_root(abs(v), e);
  if (!r) return {};
  if (*r == 0) return {Int(0)};
  return {*r, -*r};
}

/// Primitive solutions of x^2 + y^(2n) = z^(3p) with 1 <= z <= z_max.
inline SearchReport search_z3p(long p, long n, long z_max, long budget = kSearchBudget) {
  require(p >= 1 && n >= 1, ErrorKind::invalid_argument, "need p >= 1 and n >= 1");
  SearchReport rep{"z3p", p, n, z_max, static_cast<unsigned long>(3 * p), 0, {}};
  std::set<Solution> found;
  if (rep.z_exponent == 1) fail(ErrorKind::invalid_argument, "exponent 3p must be at least 3");
  for (const auto& r : primitive_representations(z_max, rep.z_exponent, budget, &rep.steps)) {
    // x = +-A and y^n = +-B.
    for (const Int& y : signed_roots(r.B, static_cast<unsigned long>(n)))
      for (const Int& x : {r.A, Int(-r.A)}) {
        require(x * x + pow_int(y, static_cast<unsigned long>(2 * n)) == pow_int(r.z, rep.z_exponent), ErrorKind::internal_error,
                "search produced a non-solution");
        found.insert({x, y, r.z, x == 0 || y == 0, congruence_filter(x, y, r.z)});
      }
  }
  rep.solutions.assign(found.begin(), found.end());
  return rep;
}

/// Primitive solutions of x^(2l) + y^(2m) = z^17 with l, m >= 2 and
/// 1 <= z <= z_max. x and y are reported with the largest exponent that fits
/// (so x^l is written with |x| minimal); 0 and +-1 stand for every exponent.
inline SearchReport search_z17(long z_max, long budget = kSearchBudget) {
  SearchReport rep{"z17", 17, 0, z_max, 17, 0, {}};
  std::set<Solution> found;
  auto minimal_root = [](const Int& v) -> std::optional<std::pair<Int, unsigned long>> {
    const Int a = abs(v);
    if (a <= 1) return std::make_pair(a, 2ul);
    for (unsigned long e = mpz_sizeinbase(a.get_mpz_t(), 2); e >= 2; --e)
      if (const auto r = exact_root(a, e)) return std::make_pair(*r, e);
    return std::nullopt;
  };
  for (const auto& r : primitive_representations(z_max, 17, budget, &rep.steps)) {
    const auto rx = minimal_root(r.A), ry = minimal_root(r.B);
    if (!rx || !ry) continue;
    for (const Int& x : {rx->first, Int(-rx->first)})
      for (const Int& y : {ry->first, Int(-ry->first)}) {
        require(pow_int(x, 2 * rx->second) + pow_int(y, 2 * ry->second) == pow_int(r.z, 17), ErrorKind::internal_error,
                "search produced a non-solution");
        found.insert({x, y, r.z, x == 0 || y == 0, congruence_filter(x, y, r.z)});
      }
  }
  rep.solutions.assign(found.begin(), found.end());
  return rep;
}

}  // namespace fmk
