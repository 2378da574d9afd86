#pragma once

// Gaussian-integer descent: recovering (a, b) from (a + bi)^p, the factors
// beta_j(a, b) of Re((a + bi)^p) over K, and the checks made on witnesses.

#include <gmpxx.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fmk/errors.hpp"
#include "fmk/integer.hpp"
#include "fmk/ring.hpp"

namespace fmk {

struct Gaussian {
  Int re, im;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

inline Gaussian gaussian_mul(const Gaussian& x, const Gaussian& y) {
  return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

inline Gaussian gaussian_pow(const Gaussian& x, unsigned long e) {
  Gaussian result{1, 0}, base = x;
  while (e) {
    if (e & 1) result = gaussian_mul(result, base);
    e >>= 1;
    if (e) base = gaussian_mul(base, base);
  }
  return result;
}

namespace detail {

struct ComplexF {
  mpf_class re, im;
};

inline ComplexF cmul(const ComplexF& x, const ComplexF& y) {
  return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

inline ComplexF cdiv(const ComplexF& x, const ComplexF& y) {
  const mpf_class d = y.re * y.re + y.im * y.im;
  return {(x.re * y.re + x.im * y.im) / d, (x.im * y.re - x.re * y.im) / d};
}

inline ComplexF cpow(const ComplexF& x, unsigned long e, mp_bitcnt_t prec) {
  ComplexF result{mpf_class(1, prec), mpf_class(0, prec)}, base = x;
  while (e) {
    if (e & 1) result = cmul(result, base);
    e >>= 1;
    if (e) base = cmul(base, base);
  }
  return result;
}

inline Int round_mpf(const mpf_class& x) {
  mpf_class shifted = x + (x >= 0 ? 0.5 : -0.5);
  mpf_class t;
  mpf_trunc(t.get_mpf_t(), shifted.get_mpf_t());
  return Int(t);
}

}  // namespace detail

/// (a, b) with (a + bi)^p = re + im i, or nullopt. The root is unique when it
/// exists: Z[i] has no non-trivial p-th roots of unity for odd p.
inline std::optional<std::pair<Int, Int>> gaussian_root(const Int& re, const Int& im, int p) {
  require(re != 0 || im != 0, ErrorKind::invalid_argument, "gaussian_root of 0");
  require(p >= 3 && p % 2 == 1, ErrorKind::invalid_argument, "p must be an odd prime");
  const Int n2 = re * re + im * im;
  // |a + bi|^2 is then an exact p-th root of re^2 + im^2.
  if (!exact_root(n2, static_cast<unsigned long>(p))) return std::nullopt;

  const std::size_t bits = std::max(mpz_sizeinbase(re.get_mpz_t(), 2), mpz_sizeinbase(im.get_mpz_t(), 2));
  const mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(2 * bits + 128);

  long e_re = 0, e_im = 0;
  const double m_re = mpz_get_d_2exp(&e_re, re.get_mpz_t());
  const double m_im = mpz_get_d_2exp(&e_im, im.get_mpz_t());
  const long e = std::max(re != 0 ? e_re : 0, im != 0 ? e_im : 0);
  const long double x = std::ldexp(static_cast<long double>(m_re), static_cast<int>(e_re - e));
  const long double y = std::ldexp(static_cast<long double>(m_im), static_cast<int>(e_im - e));
  const long double log_r = (std::log(std::hypot(x, y)) + e * std::numbers::ln2_v<long double>) / p;
  const long double arg = std::atan2(y, x) / p;

  const detail::ComplexF target{mpf_class(re, prec), mpf_class(im, prec)};
  for (int k = 0; k < p; ++k) {
    const long double phi = arg + 2.0L * std::numbers::pi_v<long double> * k / p;
    // Seed from the polar form, keeping the magnitude exact in mpf.
    mpf_class mag(0, prec);
    {
      const long double scaled = log_r / std::numbers::ln2_v<long double>;
      const long whole = static_cast<long>(std::floor(scaled));
      mag = mpf_class(static_cast<double>(std::exp2(scaled - whole)), prec);
      if (whole >= 0)
        mpf_mul_2exp(mag.get_mpf_t(), mag.get_mpf_t(), static_cast<mp_bitcnt_t>(whole));
      else
        mpf_div_2exp(mag.get_mpf_t(), mag.get_mpf_t(), static_cast<mp_bitcnt_t>(-whole));
    }
    detail::ComplexF w{mpf_class(mag * static_cast<double>(std::cos(phi)), prec), mpf_class(mag * static_cast<double>(std::sin(phi)), prec)};
    // Newton on w^p - target.
    for (int iter = 0; iter < 200; ++iter) {
      const detail::ComplexF wp1 = detail::cpow(w, static_cast<unsigned long>(p - 1), prec);
      const detail::ComplexF wp = detail::cmul(wp1, w);
      const detail::ComplexF num{wp.re - target.re, wp.im - target.im};
      const detail::ComplexF den{wp1.re * p, wp1.im * p};
      if (den.re == 0 && den.im == 0) break;
      const detail::ComplexF step = detail::cdiv(num, den);
      w.re -= step.re;
      w.im -= step.im;
      if (abs(step.re) < 1e-3 && abs(step.im) < 1e-3) break;
    }
    const Int a0 = detail::round_mpf(w.re), b0 = detail::round_mpf(w.im);
    for (int da = -1; da <= 1; ++da)
      for (int db = -1; db <= 1; ++db) {
        const Gaussian cand{a0 + da, b0 + db};
        if (gaussian_pow(cand, static_cast<unsigned long>(p)) == Gaussian{re, im}) return std::make_pair(cand.re, cand.im);
      }
  }
  return std::nullopt;
}

/// beta_j = (theta_j + 2) a^2 + (theta_j - 2) b^2.
inline RingElement beta(const Field& field, const Int& a, const Int& b, int j) {
  const RingElement t = theta_index(field, j);
  return (t + Int(2)) * Int(a * a) + (t - Int(2)) * Int(b * b);
}

/// Re((a + bi)^p) = a * prod_j beta_j, checked exactly in O_K.
inline bool verify_factorization(const Field& field, const Int& a, const Int& b) {
  const Gaussian g = gaussian_pow({a, b}, static_cast<unsigned long>(field->p()));
  RingElement prod = RingElement::from_int(field, a);
  for (int j = 1; j <= field->degree(); ++j) prod = prod * beta(field, a, b, j);
  return prod == RingElement::from_int(field, g.re);
}

/// Whether the witness is consistent with 3 | a. If 3 divides neither a nor
/// b then a^2 + b^2 = 2 mod 3, which the reason string records together with
/// what it forces on z (z^3 = z mod 3).
inline CheckResult check_three_divides_a(const Int& a, const Int& b, const std::optional<Int>& z = std::nullopt) {
  CheckResult out;
  out.label = "3 | a";
  const Int s = a * a + b * b;
  if (gcd(a, b) != 1) {
    out.detail = "gcd(a, b) != 1";
    return out;
  }
  if (z && pow_int(*z, 3) != s) {
    out.detail = "z^3 != a^2 + b^2";
    return out;
  }
  const bool a3 = mpz_divisible_ui_p(a.get_mpz_t(), 3) != 0;
  const bool b3 = mpz_divisible_ui_p(b.get_mpz_t(), 3) != 0;
  out.pass = a3;
  if (a3)
    out.detail = "3 | a";
  else if (b3)
    out.detail = "3 | b, not a";
  else
    out.detail = "3 divides neither a nor b: a^2 + b^2 = 2 mod 3, forcing z = 2 mod 3";
  return out;
}

struct CoprimalityEntry {
  std::string pair;  // "j,k" or "j,a"
  Int gcd;           // gcd of the absolute norms
  std::vector<Int> candidates;  // primes that could divide both sides
  std::vector<Int> offending;   // candidates with a prime ideal dividing both sides
};

struct CoprimalityReport {
  std::vector<CoprimalityEntry> entries;
  std::vector<Int> norms;  // |Norm(beta_j)|, j = 1..n

  bool pass() const {
    for (const auto& e : entries)
      if (!e.offending.empty()) return false;
    return true;
  }
};

/// Checks that the beta_j are pairwise coprime, and coprime to a, away from
/// p. The beta_j are Galois conjugates, so their norms coincide and the norm
/// gcd alone says little. A prime dividing beta_j and beta_k divides
/// beta_j - beta_k = (theta_j - theta_k)(a^2 + b^2), and one dividing beta_j
/// and a divides (theta_j - 2) b^2; so candidates are the primes of the norm
/// gcd that also divide a^2 + b^2 (resp. b), each settled ideal by ideal.
/// Candidates too large for word-size residue arithmetic count as offending.
inline CoprimalityReport coprimality_profile(const Field& field, const Int& a, const Int& b) {
  require(gcd(a, b) == 1, ErrorKind::invalid_witness, "gcd(a, b) != 1");
  require(mpz_odd_p(a.get_mpz_t()) != 0 && mpz_even_p(b.get_mpz_t()) != 0, ErrorKind::invalid_witness,
          "expected a odd and b even");
  const int n = field->degree();
  CoprimalityReport rep;
  std::vector<RingElement> betas;
  for (int j = 1; j <= n; ++j) {
    betas.push_back(beta(field, a, b, j));
    rep.norms.push_back(abs(norm(betas.back()).get_num()));
  }
  const RingElement a_elem = RingElement::from_int(field, a);

  auto fill = [&](CoprimalityEntry& e, const RingElement& x, const RingElement& y, const Int& filter) {
    if (e.gcd == 0) {
      e.offending.push_back(0);
      return;
    }
    for (const auto& q : prime_divisors(gcd(e.gcd, filter))) {
      if (q == field->p()) continue;
      e.candidates.push_back(q);
      if (q > Int(3037000499L)) {
        e.offending.push_back(q);
        continue;
      }
      for (const auto& P : factor_rational_prime(field, q.get_si())) {
        if (reduce_mod(x, P).is_zero() && reduce_mod(y, P).is_zero()) {
          e.offending.push_back(q);
          break;
        }
      }
    }
  };

  const Int an = pow_int(abs(a), static_cast<unsigned long>(n));
  for (int j = 1; j <= n; ++j) {
    const Int& nj = rep.norms[static_cast<std::size_t>(j - 1)];
    const auto& bj = betas[static_cast<std::size_t>(j - 1)];
    for (int k = j + 1; k <= n; ++k) {
      CoprimalityEntry e{std::to_string(j) + "," + std::to_string(k), gcd(nj, rep.norms[static_cast<std::size_t>(k - 1)]), {}, {}};
      fill(e, bj, betas[static_cast<std::size_t>(k - 1)], Int(a * a + b * b));
      rep.entries.push_back(std::move(e));
    }
    CoprimalityEntry e{std::to_string(j) + ",a", gcd(nj, an), {}, {}};
    fill(e, bj, a_elem, b);
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

/// For a hypothetical solution witness: |a| and every |Norm(beta_j)| must be
/// perfect ell-th powers.
inline std::vector<CheckResult> check_power_witness(const Field& field, const Int& a, const Int& b, unsigned long ell) {
  std::vector<CheckResult> out;
  out.push_back({"|a| is an ell-th power", exact_root(abs(a), ell).has_value(), to_decimal(a)});
  for (int j = 1; j <= field->degree(); ++j) {
    const Int nj = abs(norm(beta(field, a, b, j)).get_num());
    out.push_back({"|Norm(beta_" + std::to_string(j) + ")| is an ell-th power", exact_root(nj, ell).has_value(), to_decimal(nj)});
  }
  return out;
}

}  // namespace fmk
