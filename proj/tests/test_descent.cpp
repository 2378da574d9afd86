#include <gtest/gtest.h>

#include <random>

#include "fmk/descent.hpp"

using namespace fmk;

namespace {

// Independent oracle: binomial expansion of Re((a + bi)^p).
Int real_part_binomial(const Int& a, const Int& b, unsigned long p) {
  Int acc = 0;
  for (unsigned long k = 0; k <= p; k += 2) {
    Int c;
    mpz_bin_uiui(c.get_mpz_t(), p, k);
    Int term = c * pow_int(a, p - k) * pow_int(b, k);
    if ((k / 2) % 2) term = -term;
    acc += term;
  }
  return acc;
}

}  // namespace

TEST(GaussianRoot, Examples) {
  auto r = gaussian_root(1, 0, 7);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, 1);
  EXPECT_EQ(r->second, 0);

  const auto g = gaussian_pow({3, 2}, 7);
  EXPECT_EQ(g.re, real_part_binomial(3, 2, 7));
  r = gaussian_root(g.re, g.im, 7);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, 3);
  EXPECT_EQ(r->second, 2);

  EXPECT_FALSE(gaussian_root(2, 0, 7));
  EXPECT_THROW(gaussian_root(0, 0, 7), Error);
}

TEST(GaussianRoot, NoSmallSeventhRootOfTwo) {
  // Oracle: exhaustive over |a|, |b| <= 2.
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) EXPECT_FALSE(gaussian_pow({a, b}, 7) == (Gaussian{2, 0}));
}

TEST(GaussianRoot, InvertsExpansion) {
  std::mt19937_64 rng(21);
  for (int p : {5, 7, 11, 13, 17}) {
    for (int it = 0; it < 40; ++it) {
      std::uniform_int_distribution<long> d(-100000, 100000);
      Int a = d(rng), b = d(rng);
      if (a == 0 && b == 0) continue;
      const auto g = gaussian_pow({a, b}, static_cast<unsigned long>(p));
      auto r = gaussian_root(g.re, g.im, p);
      ASSERT_TRUE(r) << a << " " << b;
      // The four associates i^k (a + bi) have distinct p-th powers, so the
      // root recovered must be the original one.
      EXPECT_EQ(r->first, a);
      EXPECT_EQ(r->second, b);
    }
  }
  // Large inputs exercise the multiprecision refinement.
  Int a("123456789012345678901"), b("-98765432109876543210");
  const auto g = gaussian_pow({a, b}, 17);
  auto r = gaussian_root(g.re, g.im, 17);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->first, a);
  EXPECT_EQ(r->second, b);
  EXPECT_FALSE(gaussian_root(g.re + 1, g.im, 17));
}

TEST(Beta, Substitution) {
  auto f = field_init(7);
  for (int j = 1; j <= 3; ++j) {
    EXPECT_EQ(beta(f, 1, 0, j), theta_index(f, j) + Int(2));
    EXPECT_EQ(beta(f, 0, 1, j), theta_index(f, j) - Int(2));
  }
}

TEST(Factorization, Examples) {
  auto f7 = field_init(7);
  RingElement prod = one(f7);
  for (int j = 1; j <= 3; ++j) prod = prod * (theta_index(f7, j) + Int(2));
  EXPECT_EQ(prod, one(f7));
  EXPECT_TRUE(verify_factorization(f7, 1, 0));
  EXPECT_TRUE(verify_factorization(f7, 3, 2));
  EXPECT_TRUE(verify_factorization(field_init(17), 2, 1));
  // The product of the beta_j norms times a^n is the norm of the real part.
  RingElement rp = RingElement::from_int(f7, real_part_binomial(3, 2, 7));
  EXPECT_EQ(norm(rp), norm(RingElement::from_int(f7, 3)) * norm(beta(f7, 3, 2, 1)) * norm(beta(f7, 3, 2, 2)) * norm(beta(f7, 3, 2, 3)));
}

TEST(Factorization, RandomPairs) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int p : {5, 7, 11, 13, 17}) {
    auto f = field_init(p);
    for (int it = 0; it < 200; ++it) EXPECT_TRUE(verify_factorization(f, d(rng), d(rng)));
  }
}

TEST(Factorization, BetaNormsOddForOddEvenWitness) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int p : {5, 7, 11, 13}) {
    auto f = field_init(p);
    for (int it = 0; it < 50; ++it) {
      const Int a = 2 * d(rng) + 1, b = 2 * d(rng);
      for (int j = 1; j <= f->degree(); ++j) EXPECT_TRUE(mpz_odd_p(norm(beta(f, a, b, j)).get_num().get_mpz_t()));
    }
  }
}

TEST(ThreeDividesA, Cases) {
  EXPECT_TRUE(check_three_divides_a(3, 2).pass);
  EXPECT_FALSE(check_three_divides_a(1, 1).pass);
  EXPECT_FALSE(check_three_divides_a(2, 3).pass);
  EXPECT_FALSE(check_three_divides_a(3, 2, Int(5)).pass);  // 5^3 != 13
}

TEST(Coprimality, Profiles) {
  auto f7 = field_init(7);
  auto rep = coprimality_profile(f7, 3, 2);
  EXPECT_TRUE(rep.pass());
  for (const auto& e : rep.entries)
    for (const auto& q : e.offending) EXPECT_EQ(q, 7);
  rep = coprimality_profile(f7, 1, 0);
  EXPECT_TRUE(rep.pass());
  for (const auto& n : rep.norms) EXPECT_EQ(n, 1);
  EXPECT_TRUE(coprimality_profile(field_init(5), 3, 4).pass());
  EXPECT_THROW(coprimality_profile(f7, 2, 3), Error);
}

TEST(Coprimality, RandomWitnessesAwayFromP) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> d(-30, 30);
  for (int p : {5, 7, 11}) {
    auto f = field_init(p);
    for (int it = 0; it < 20; ++it) {
      const Int a = 2 * d(rng) + 1, b = 2 * d(rng);
      if (gcd(a, b) != 1) continue;
      EXPECT_TRUE(coprimality_profile(f, a, b).pass()) << p << " " << a << " " << b;
    }
  }
}

TEST(PowerWitness, Checks) {
  auto f = field_init(5);
  auto res = check_power_witness(f, 1, 0, 5);
  for (const auto& r : res) EXPECT_TRUE(r.pass) << r.label;
  EXPECT_FALSE(check_power_witness(f, 3, 2, 5)[0].pass);
}
