#include <gtest/gtest.h>

#include <random>

#include "fmk/bounds.hpp"

using namespace fmk;

namespace {

// Oracle: r <= A + B sqrt(N) < r + 1, decided with integer comparisons only.
bool brackets(const Int& r, const Int& N, unsigned long d) {
  const auto q = sqrt_plus_one_power(N, d);
  auto le = [&](const Int& x) {  // x <= A + B sqrt(N)
    const Int diff = x - q.A;
    return diff <= 0 || diff * diff <= q.B * q.B * N;
  };
  auto lt = [&](const Int& x) {  // x < A + B sqrt(N), N not a square
    const Int diff = x - q.A;
    return diff < 0 || diff * diff < q.B * q.B * N;
  };
  return le(r) && !lt(r + 1);
}

// Oracle for (sqrt(N) + 1)^{2d} by direct multiprecision evaluation.
Int floor_power_mpf(const Int& N, unsigned long d) {
  const mp_bitcnt_t prec = 64 + 8 * d * mpz_sizeinbase(N.get_mpz_t(), 2);
  mpf_class s(N, prec);
  s = sqrt(s) + 1;
  mpf_class acc(1, prec);
  for (unsigned long i = 0; i < 2 * d; ++i) acc *= s;
  mpf_class f(0, prec);
  mpf_floor(f.get_mpf_t(), acc.get_mpf_t());
  return Int(f);
}

}  // namespace

TEST(Bounds, PmidyBound) {
  EXPECT_EQ(pmidy_bound(7), 13);
  EXPECT_EQ(pmidy_bound(5), 10);
  EXPECT_THROW(pmidy_bound(4), Error);
  EXPECT_THROW(pmidy_bound(3), Error);
  for (long p : {5L, 7L, 11L, 13L, 17L, 101L, 1000003L}) {
    const Int r = pmidy_bound(p);
    // (r - p - 1)^2 < 4p <= (r + 1 - p - 1)^2.
    EXPECT_LT((r - p - 1) * (r - p - 1), 4 * p) << p;
    EXPECT_GE((r - p) * (r - p), 4 * p) << p;
  }
}

TEST(Bounds, CPrime) {
  EXPECT_EQ(c_prime(11, 1, 1), (1 + pow_int(3, 30)) * (1 + pow_int(3, 30)));
  const Int B13 = pow_int(2, 18) * pow_int(3, 12) * pow_int(5, 6) * pow_int(13, 3);
  const Int c13 = c_prime(13, B13, 1);
  EXPECT_EQ(c13, B13 * (1 + pow_int(3, 36)) * (1 + pow_int(3, 36)));
  EXPECT_NEAR(c_prime_log10(13, B13, 1), log10_int(c13), 1e-9);
  EXPECT_THROW(c_prime(11, 0, 1), Error);
}

TEST(Bounds, SurvivorBound) {
  EXPECT_EQ(survivor_bound(27, 1), 38);
  EXPECT_LT(survivor_bound(27, 4), 10000000);
  EXPECT_GT(survivor_bound(27, 5), 10000000);
  EXPECT_THROW(survivor_bound(1, 1), Error);
  EXPECT_THROW(survivor_bound(27, 0), Error);
}

TEST(Bounds, SurvivorBoundProperties) {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 200; ++it) {
    Int N = 2 + static_cast<long>(rng() % 5000);
    while (is_square(N)) N += 1;
    const unsigned long d = 1 + rng() % 12;
    const Int r = survivor_bound(N, d);
    EXPECT_TRUE(brackets(r, N, d)) << N << " " << d;
    EXPECT_EQ(r, floor_power_mpf(N, d)) << N << " " << d;
    EXPECT_LE(r, survivor_bound(N + 1, d));
    EXPECT_LE(r, survivor_bound(N, d + 1));
  }
}

TEST(Bounds, IrredThreshold) {
  EXPECT_EQ(irred_threshold_cubic(), 3032640);
  EXPECT_LT(irred_threshold_cubic(), 10000000);
  EXPECT_GT(irred_threshold_cubic(), pmidy_bound(7));
}

TEST(Bounds, TraceDivisibility) {
  EXPECT_EQ(trace_divisibility(27, 4), (std::vector<Int>{2, 3}));
  EXPECT_EQ(trace_divisibility(27, 0), (std::vector<Int>{2, 7}));
  try {
    trace_divisibility(27, 11);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_eigenvalue);
  }
  for (long N : {27L, 243L, 729L, 6561L})
    for (long a = 0; a * a <= 4 * N; ++a) EXPECT_EQ(trace_divisibility(N, a), trace_divisibility(N, -a));
}

TEST(Bounds, COfP) {
  const auto r11 = c_of_p({11, 1, 1, 1201, pow_int(3, 5)});
  EXPECT_NEAR(r11.c_log10, 2930, 1);
  EXPECT_EQ(r11.dominating_term, DominatingTerm::hasse_power);
  ASSERT_TRUE(r11.exact_digits);
  // Exact digit count brackets the logarithm.
  EXPECT_LE(*r11.exact_digits - 1, r11.c_log10);
  EXPECT_GT(static_cast<double>(*r11.exact_digits), r11.c_log10);

  const Int B13 = pow_int(2, 18) * pow_int(3, 12) * pow_int(5, 6) * pow_int(13, 3);
  const auto r13 = c_of_p({13, B13, 1, 31422, pow_int(3, 6)});
  EXPECT_NEAR(r13.c_log10, 90946, 2);
  ASSERT_TRUE(r13.exact_digits);
  EXPECT_LE(*r13.exact_digits - 1, r13.c_log10);
  EXPECT_GT(static_cast<double>(*r13.exact_digits), r13.c_log10);
  EXPECT_EQ(r13.pB_primes, (std::vector<Int>{2, 3, 5, 13}));

  const Int B17 = pow_int(2, 32) * pow_int(5, 8) * pow_int(13, 8) * pow_int(17, 4) * pow_int(67, 8);
  const auto r17 = c_of_p({17, B17, 1, 41883752, pow_int(3, 8)});
  EXPECT_NEAR(r17.c_log10, 160315410, 10);
  EXPECT_FALSE(r17.exact_digits);
  EXPECT_GE(r17.c_log10, r17.c_prime_log10);

  EXPECT_THROW(c_of_p({11, 0, 1, 1201, 243}), Error);
}
