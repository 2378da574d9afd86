#pragma once

// Frey curves attached to a descent witness (a, b): E_{j,k}, F1 and F2 over
// K, and local reduction data at primes of O_K.

#include <optional>
#include <string>
#include <vector>

#include "fmk/descent.hpp"
#include "fmk/errors.hpp"
#include "fmk/integer.hpp"
#include "fmk/ring.hpp"
#include "fmk/tate.hpp"

namespace fmk {

enum class FreyKind { E_jk, F1, F2, W_rational };

inline std::string to_string(FreyKind k) {
  switch (k) {
    case FreyKind::E_jk: return "E";
    case FreyKind::F1: return "F1";
    case FreyKind::F2: return "F2";
    case FreyKind::W_rational: return "W";
  }
  return "unknown";
}

/// Y^2 = X (X - r1) (X + r2), stored through its Legendre-form data. For E the
/// roots are (v, w); for F1 (u, v); for F2 (u', v').
struct FreyCurve {
  Field field;
  FreyKind kind = FreyKind::E_jk;
  int j = 0, k = 0;
  Int a, b;
  RingElement u, v, w;  // primed values for F2
  RingElement a2, a4;   // Y^2 = X^3 + a2 X^2 + a4 X
  RingElement c4, c6, disc;
  bool singular = false;

  Weierstrass<RingElement> model() const {
    const RingElement zero(field);
    return {zero, a2, zero, a4, zero};
  }
};

namespace detail {

inline void check_indices(const Field& field, int j, int k) {
  require(1 <= j && j < k && k <= field->degree(), ErrorKind::invalid_witness,
          "need 1 <= j < k <= " + std::to_string(field->degree()));
}

inline FreyCurve finish_curve(FreyCurve c, RingElement r1, RingElement r2) {
  // Y^2 = X (X - r1)(X + r2) = X^3 + (r2 - r1) X^2 - r1 r2 X.
  c.a2 = r2 - r1;
  c.a4 = -(r1 * r2);
  const auto W = c.model();
  c.c4 = W.c4();
  c.c6 = W.c6();
  c.disc = W.disc();
  require((c.u + c.v + c.w).is_zero(), ErrorKind::internal_error, "u + v + w != 0");
  c.singular = c.disc.is_zero();
  return c;
}

/// u, v, w of the descent: u = beta_j, v = -(theta_j - 2)/(theta_k - 2) beta_k,
/// w = 4 (theta_j - theta_k)/(theta_k - 2) a^2.
inline void uvw(const Field& f, const Int& a, const Int& b, int j, int k, RingElement& u, RingElement& v, RingElement& w) {
  const RingElement tj = theta_index(f, j), tk = theta_index(f, k);
  const RingElement pk = tk - Int(2);
  u = beta(f, a, b, j);
  const RingElement ratio = exact_div(tj - Int(2), pk);
  require(ratio.is_integral(), ErrorKind::internal_error, "(theta_j - 2)/(theta_k - 2) not integral");
  v = -(ratio * beta(f, a, b, k));
  const RingElement wr = exact_div(tj - tk, pk);
  require(wr.is_integral(), ErrorKind::internal_error, "(theta_j - theta_k)/(theta_k - 2) not integral");
  w = wr * Int(4 * a * a);
}

}  // namespace detail

/// E_{j,k}: Y^2 = X (X - v)(X + w) for a witness with a odd, b even, 3 | a.
inline FreyCurve build_E(const Field& field, const Int& a, const Int& b, int j, int k) {
  detail::check_indices(field, j, k);
  require(gcd(a, b) == 1, ErrorKind::invalid_witness, "gcd(a, b) != 1");
  require(mpz_odd_p(a.get_mpz_t()) && mpz_even_p(b.get_mpz_t()), ErrorKind::invalid_witness, "need a odd, b even");
  require(mpz_divisible_ui_p(a.get_mpz_t(), 3) != 0, ErrorKind::invalid_witness, "need 3 | a");
  FreyCurve c;
  c.field = field;
  c.kind = FreyKind::E_jk;
  c.j = j;
  c.k = k;
  c.a = a;
  c.b = b;
  detail::uvw(field, a, b, j, k, c.u, c.v, c.w);
  RingElement r1 = c.v, r2 = c.w;
  return detail::finish_curve(std::move(c), std::move(r1), std::move(r2));
}

inline void check_F_witness(const Field& field, const Int& a, const Int& b, int j, int k) {
  detail::check_indices(field, j, k);
  require(gcd(a, b) == 1, ErrorKind::invalid_witness, "gcd(a, b) != 1");
  require(mpz_even_p(a.get_mpz_t()) && mpz_odd_p(b.get_mpz_t()), ErrorKind::invalid_witness, "need a even, b odd");
}

/// F1: Y^2 = X (X - u)(X + v).
inline FreyCurve build_F1(const Field& field, const Int& a, const Int& b, int j = 1, int k = 4) {
  check_F_witness(field, a, b, j, k);
  FreyCurve c;
  c.field = field;
  c.kind = FreyKind::F1;
  c.j = j;
  c.k = k;
  c.a = a;
  c.b = b;
  detail::uvw(field, a, b, j, k, c.u, c.v, c.w);
  RingElement r1 = c.u, r2 = c.v;
  return detail::finish_curve(std::move(c), std::move(r1), std::move(r2));
}

/// F2: Y^2 = X (X - u')(X + v') with u' = beta_j/(theta_j - 2),
/// v' = -beta_k/(theta_k - 2), w' = 4 (theta_j - theta_k) a^2 / ((theta_j - 2)(theta_k - 2)).
inline FreyCurve build_F2(const Field& field, const Int& a, const Int& b, int j = 1, int k = 4) {
  check_F_witness(field, a, b, j, k);
  FreyCurve c;
  c.field = field;
  c.kind = FreyKind::F2;
  c.j = j;
  c.k = k;
  c.a = a;
  c.b = b;
  const RingElement tj = theta_index(field, j), tk = theta_index(field, k);
  const RingElement pj = tj - Int(2), pk = tk - Int(2);
  c.u = exact_div(beta(field, a, b, j), pj);
  c.v = -exact_div(beta(field, a, b, k), pk);
  c.w = exact_div((tj - tk) * Int(4 * a * a), pj * pk);
  RingElement r1 = c.u, r2 = c.v;
  return detail::finish_curve(std::move(c), std::move(r1), std::move(r2));
}

inline FreyCurve build_frey(FreyKind kind, const Field& field, const Int& a, const Int& b, int j, int k) {
  switch (kind) {
    case FreyKind::E_jk: return build_E(field, a, b, j, k);
    case FreyKind::F1: return build_F1(field, a, b, j, k);
    case FreyKind::F2: return build_F2(field, a, b, j, k);
    case FreyKind::W_rational: break;
  }
  fail(ErrorKind::invalid_argument, "W is a rational curve; use build_W");
}

inline RingElement j_invariant(const FreyCurve& c) {
  require(!c.disc.is_zero(), ErrorKind::singular_curve, "j-invariant of a singular curve");
  return exact_div(c.c4 * c.c4 * c.c4, c.disc);
}

// ---------------------------------------------------------------------------
// Local data

struct LocalData {
  PrimeIdealData ideal;
  Reduction reduction = Reduction::good;
  long v_disc = 0;      // valuation of the given model's discriminant
  long v_disc_min = 0;  // after Tate's algorithm (or the given model if minimal)
  long cond_exp = 0;
  std::string kodaira = "I0";
  std::string route;    // "criterion" or "tate"
  std::vector<std::string> trace;
};

/// theta_j^(2^((p-1) f - 1)), a square root of theta_j modulo any prime of
/// residue degree f above 2. Computed by squaring with coordinates mod 4.
inline RingElement two_adic_sqrt_hint(const Field& field, int j, int f) {
  RingElement x = theta_index(field, j);
  const long squarings = static_cast<long>(field->p() - 1) * f - 1;
  for (long i = 0; i < squarings; ++i) {
    std::vector<Int> num = (x * x).numerators();
    for (auto& c : num) {
      c %= 4;
      if (c < 0) c += 4;
    }
    x = RingElement(field, std::move(num));
  }
  return x;
}

/// Reduction type of the curve at a prime of O_K. At odd primes the
/// classification uses v(disc), v(c4) and whether -c6 is a square, and is
/// cross-checked against Tate's algorithm; above 2 Tate's algorithm is run
/// directly (for E with the explicit Step 6 square root).
inline LocalData local_data(const FreyCurve& curve, const PrimeIdealData& ideal) {
  require(!curve.singular, ErrorKind::singular_curve, "curve is singular");
  LocalData out;
  out.ideal = ideal;
  const LocalContextK ctx(curve.field, ideal);
  out.v_disc = ctx.val(curve.disc);

  std::optional<RingElement> hint;
  if (ideal.q == 2 && curve.kind == FreyKind::E_jk) hint = two_adic_sqrt_hint(curve.field, curve.j, ideal.residue_degree);
  const TateResult tate = TateExecutor<LocalContextK>(ctx, hint).run(curve.model());

  if (ideal.q != 2 && tate.scaling == 0) {
    out.route = "criterion";
    if (out.v_disc == 0) {
      out.reduction = Reduction::good;
      out.kodaira = "I0";
    } else if (ctx.val(curve.c4) == 0) {
      const auto k = ideal.residue_field();
      out.reduction = k.is_square(ctx.reduce(-curve.c6)) ? Reduction::mult_split : Reduction::mult_nonsplit;
      out.cond_exp = 1;
      out.kodaira = "I" + std::to_string(out.v_disc);
    } else {
      out.route = "tate";
    }
    if (out.route == "criterion") {
      out.v_disc_min = out.v_disc;
      require(tate.reduction == out.reduction && tate.cond_exp == out.cond_exp && tate.kodaira == out.kodaira,
              ErrorKind::internal_error, "Tate's algorithm disagrees with the c4/c6 criterion at " + ideal.label());
      out.trace = {"criterion: v(disc)=" + std::to_string(out.v_disc)};
      return out;
    }
  }
  out.route = "tate";
  out.reduction = tate.reduction;
  out.v_disc_min = tate.v_disc_min;
  out.cond_exp = tate.cond_exp;
  out.kodaira = tate.kodaira;
  out.trace = tate.trace;
  return out;
}

struct ObstructionResult {
  bool holds = false;                 // outside F_2 at some prime above 2
  std::vector<PrimeIdealData> primes;  // all primes above 2, in index order
  std::vector<bool> outside_f2;        // per prime
  int witness_index = -1;              // first prime where it holds
};

/// Reduces theta_j^2 theta_k^2 / (theta_j - theta_k)^2 modulo the primes
/// above 2 and records whether it falls outside F_2. A single such prime is
/// enough for the obstruction, so `holds` is the disjunction.
inline ObstructionResult residue_obstruction(const Field& field, int j, int k) {
  detail::check_indices(field, j, k);
  ObstructionResult out;
  out.primes = factor_rational_prime(field, 2);
  const RingElement tj = theta_index(field, j), tk = theta_index(field, k);
  const RingElement d = tj - tk;
  for (std::size_t i = 0; i < out.primes.size(); ++i) {
    const auto& Q = out.primes[i];
    const auto kf = Q.residue_field();
    const auto num = reduce_mod(tj * tj * tk * tk, Q).rep;
    const auto den = reduce_mod(d * d, Q).rep;
    require(!den.empty(), ErrorKind::internal_error, "theta_j - theta_k vanishes mod 2");
    const bool outside = !kf.in_prime_subfield(kf.mul(num, kf.inv(den)));
    out.outside_f2.push_back(outside);
    if (outside && out.witness_index < 0) out.witness_index = static_cast<int>(i);
  }
  out.holds = out.witness_index >= 0;
  return out;
}

// ---------------------------------------------------------------------------
// The rational curve W used for the p | y bound. The model is not used: the
// minimal discriminant and conductor are recorded from their closed forms.

struct WData {
  Int u, v;
  Rat disc_min;  // 2^6 3^-3 v^4 (3u^2 - v^2)
  Int rad23;     // product of primes > 3 dividing disc_min
  Int conductor; // 2^5 * 3 * rad23
};

inline WData build_W(const Int& u, const Int& v) {
  require(v != 0, ErrorKind::invalid_witness, "v must be non-zero");
  require(gcd(u, v) == 1, ErrorKind::invalid_witness, "gcd(u, v) != 1");
  require(mpz_divisible_ui_p(v.get_mpz_t(), 3) != 0, ErrorKind::invalid_witness, "need 3 | v");
  require(mpz_even_p(u.get_mpz_t()) && mpz_odd_p(v.get_mpz_t()), ErrorKind::invalid_witness, "need u even, v odd");
  WData w;
  w.u = u;
  w.v = v;
  w.disc_min = Rat(Int(64) * pow_int(v, 4) * (3 * u * u - v * v), Int(27));
  w.disc_min.canonicalize();
  require(w.disc_min != 0, ErrorKind::invalid_witness, "3u^2 = v^2");
  w.rad23 = radical_away_from_6(abs(w.disc_min.get_num()));
  w.conductor = Int(96) * w.rad23;
  return w;
}

}  // namespace fmk
