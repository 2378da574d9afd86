#pragma once

// Tate's algorithm, Steps 1-7, over a discretely valued field described by a
// local context. The walk follows the classical presentation: translate the
// singular point to (0, 0), classify I_n / II / III / IV, then the auxiliary
// cubic for I0* and the double-root loop for I_m*. Triple roots (IV*, III*,
// II* and non-minimal models) are outside the implemented range.
//
// A context supplies:
//   using Elem;                    field elements, with + - * and equality
//   Elem constant(long) const;
//   long val(const Elem&) const;   kInfiniteValuation for zero
//   ResidueField::Elem reduce(const Elem&) const;
//   Elem lift(const ResidueField::Elem&) const;
//   const ResidueField& residue() const;
//   Elem div_pi(const Elem&, long k) const;   x / pi^k
//   Elem mul_pi(const Elem&, long k) const;   x * pi^k

#include <optional>
#include <string>
#include <vector>

#include "fmk/errors.hpp"
#include "fmk/integer.hpp"
#include "fmk/residue_field.hpp"
#include "fmk/ring.hpp"

namespace fmk {

enum class Reduction { good, mult_split, mult_nonsplit, additive };

inline std::string to_string(Reduction r) {
  switch (r) {
    case Reduction::good: return "good";
    case Reduction::mult_split: return "mult_split";
    case Reduction::mult_nonsplit: return "mult_nonsplit";
    case Reduction::additive: return "additive";
  }
  return "unknown";
}

inline Rat scalar_like(const Rat&, long c) { return Rat(c); }
inline RingElement scalar_like(const RingElement& x, long c) { return RingElement::from_int(x.field(), c); }

template <class Elem>
struct Weierstrass {
  Elem a1, a2, a3, a4, a6;

  Elem b2() const { return a1 * a1 + a4_coef(4) * a2; }
  Elem b4() const { return a1 * a3 + a4_coef(2) * a4; }
  Elem b6() const { return a3 * a3 + a4_coef(4) * a6; }
  Elem b8() const { return a1 * a1 * a6 + a4_coef(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
  Elem c4() const { return b2() * b2() - a4_coef(24) * b4(); }
  Elem c6() const { return -(b2() * b2() * b2()) + a4_coef(36) * b2() * b4() - a4_coef(216) * b6(); }
  Elem disc() const {
    const Elem B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -(B2 * B2 * B8) - a4_coef(8) * B4 * B4 * B4 - a4_coef(27) * B6 * B6 + a4_coef(9) * B2 * B4 * B6;
  }

  /// (x, y) -> (x + r, y + s x + t), u = 1.
  Weierstrass rst(const Elem& r, const Elem& s, const Elem& t) const {
    Weierstrass o;
    o.a1 = a1 + a4_coef(2) * s;
    o.a2 = a2 - s * a1 + a4_coef(3) * r - s * s;
    o.a3 = a3 + r * a1 + a4_coef(2) * t;
    o.a4 = a4 - s * a3 + a4_coef(2) * r * a2 - (t + r * s) * a1 + a4_coef(3) * r * r - a4_coef(2) * s * t;
    o.a6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    return o;
  }

 private:
  // Integer constants in the element type, built from a1 so that field
  // elements pick up the right field.
  Elem a4_coef(long c) const { return scalar_like(a1, c); }
};

struct TateResult {
  Reduction reduction = Reduction::good;
  long v_disc_min = 0;
  long cond_exp = 0;
  std::string kodaira = "I0";
  long scaling = 0;                 // model was scaled by pi^scaling to make it integral
  std::vector<std::string> trace;   // steps visited, for reports
};

template <class Ctx>
class TateExecutor {
 public:
  using Elem = typename Ctx::Elem;
  using Res = ResidueField::Elem;

  /// sqrt_hint, if given, is used as the Step 6 square root in residue
  /// characteristic 2 after checking that it is one.
  TateExecutor(const Ctx& ctx, std::optional<Elem> sqrt_hint = std::nullopt) : ctx_(ctx), hint_(std::move(sqrt_hint)) {}

  TateResult run(Weierstrass<Elem> C) const {
    TateResult out;
    const auto& k = ctx_.residue();
    const std::int64_t ch = k.characteristic();

    // Make the model integral: (a_i) -> (pi^(i e) a_i).
    long e = 0;
    for (;;) {
      const long need = std::max({neg_part(ctx_.val(C.a1), 1), neg_part(ctx_.val(C.a2), 2), neg_part(ctx_.val(C.a3), 3),
                                  neg_part(ctx_.val(C.a4), 4), neg_part(ctx_.val(C.a6), 6)});
      if (need == 0) break;
      e += need;
      C.a1 = ctx_.mul_pi(C.a1, need);
      C.a2 = ctx_.mul_pi(C.a2, 2 * need);
      C.a3 = ctx_.mul_pi(C.a3, 3 * need);
      C.a4 = ctx_.mul_pi(C.a4, 4 * need);
      C.a6 = ctx_.mul_pi(C.a6, 6 * need);
    }
    out.scaling = e;
    if (e) out.trace.push_back("scaled model by pi^" + std::to_string(e));

    const Elem D = C.disc();
    require(!is_zero(D), ErrorKind::singular_curve, "discriminant is zero");
    const long vD = ctx_.val(D);
    out.v_disc_min = vD;
    if (vD == 0) {
      out.trace.push_back("step1: v(disc)=0");
      return out;
    }

    // Step 2: move the singular point of the reduction to (0, 0).
    Elem r = ctx_.constant(0), t = ctx_.constant(0);
    const Elem b2 = C.b2();
    if (ch == 2) {
      if (divisible(b2)) {
        r = proot(C.a4);
        t = proot(((r + C.a2) * r + C.a4) * r + C.a6);
      } else {
        const Elem inv = pinv(C.a1);
        r = inv * C.a3;
        t = inv * (C.a4 + r * r);
      }
    } else if (ch == 3) {
      if (divisible(b2))
        r = proot(-C.b6());
      else
        r = -pinv(b2) * C.b4();
      t = C.a1 * r + C.a3;
    } else {
      const Elem c4 = C.c4();
      if (divisible(c4))
        r = -pinv(ctx_.constant(12)) * b2;
      else
        r = -pinv(ctx_.constant(12) * c4) * (C.c6() + b2 * c4);
      t = -pinv(ctx_.constant(2)) * (C.a1 * r + C.a3);
    }
    r = preduce(r);
    t = preduce(t);
    C = C.rst(r, ctx_.constant(0), t);
    out.trace.push_back("step2: singular point moved to (0,0)");

    if (!divisible(C.c4())) {
      const bool split = k.quadratic_has_root(k.one(), ctx_.reduce(C.a1), ctx_.reduce(-C.a2));
      out.reduction = split ? Reduction::mult_split : Reduction::mult_nonsplit;
      out.cond_exp = 1;
      out.kodaira = "I" + std::to_string(vD);
      out.trace.push_back("step2: multiplicative");
      return out;
    }
    out.reduction = Reduction::additive;

    // Steps 3-5.
    if (ctx_.val(C.a6) < 2) {
      out.kodaira = "II";
      out.cond_exp = vD;
      out.trace.push_back("step3: II");
      return out;
    }
    if (ctx_.val(C.b8()) < 3) {
      out.kodaira = "III";
      out.cond_exp = vD - 1;
      out.trace.push_back("step4: III");
      return out;
    }
    if (ctx_.val(C.b6()) < 3) {
      out.kodaira = "IV";
      out.cond_exp = vD - 2;
      out.trace.push_back("step5: IV");
      return out;
    }

    // Step 6: pi | a1, a2; pi^2 | a3, a4; pi^3 | a6.
    Elem s = ctx_.constant(0);
    t = ctx_.constant(0);
    if (ch == 2) {
      if (hint_) {
        require(ctx_.reduce(*hint_ * *hint_ - C.a2).empty(), ErrorKind::internal_error,
                "square-root hint does not square to a2");
        s = *hint_;
        out.trace.push_back("step6: square root of a2 from hint");
      } else {
        s = proot(C.a2);
      }
      t = ctx_.mul_pi(proot(ctx_.div_pi(C.a6, 2)), 1);
    } else if (ch == 3) {
      s = C.a1;
      t = C.a3;
    } else {
      s = -C.a1 * pinv(ctx_.constant(2));
      t = -C.a3 * pinv(ctx_.constant(2));
    }
    C = C.rst(ctx_.constant(0), s, t);
    out.trace.push_back("step6: translated");

    const Elem b = ctx_.div_pi(C.a2, 1), c = ctx_.div_pi(C.a4, 2), d = ctx_.div_pi(C.a6, 3);
    const Elem w = ctx_.constant(27) * d * d - b * b * c * c + ctx_.constant(4) * b * b * b * d - ctx_.constant(18) * b * c * d +
                   ctx_.constant(4) * c * c * c;
    const Elem x = ctx_.constant(3) * c - b * b;
    if (!divisible(w)) {
      out.kodaira = "I0*";
      out.cond_exp = vD - 4;
      out.trace.push_back("step6: distinct roots, I0*");
      return out;
    }
    if (divisible(x)) fail(ErrorKind::unsupported_reduction, "auxiliary cubic has a triple root (beyond step 7)");

    // Step 7: double root; move it to 0 and run the subprocedure.
    if (ch == 2)
      r = proot(c);
    else if (ch == 3)
      r = c * pinv(b);
    else
      r = (b * c - ctx_.constant(9) * d) * pinv(ctx_.constant(2) * x);
    r = ctx_.mul_pi(preduce(r), 1);
    C = C.rst(r, ctx_.constant(0), ctx_.constant(0));
    out.trace.push_back("step7: double root moved to 0");

    long ix = 3, iy = 3;  // mx = pi^(ix-1), my = pi^(iy-1)
    for (;;) {
      Elem a2t = ctx_.div_pi(C.a2, 1);
      Elem a3t = ctx_.div_pi(C.a3, iy - 1);
      Elem a4t = ctx_.div_pi(C.a4, ix);
      Elem a6t = ctx_.div_pi(C.a6, ix - 1 + iy - 1);
      if (!divisible(a3t * a3t + ctx_.constant(4) * a6t)) break;
      if (ch == 2)
        t = ctx_.mul_pi(proot(a6t), iy - 1);
      else
        t = ctx_.mul_pi(preduce(-a3t * pinv(ctx_.constant(2))), iy - 1);
      C = C.rst(ctx_.constant(0), ctx_.constant(0), t);
      ++iy;
      a2t = ctx_.div_pi(C.a2, 1);
      a4t = ctx_.div_pi(C.a4, ix);
      a6t = ctx_.div_pi(C.a6, ix - 1 + iy - 1);
      if (!divisible(a4t * a4t - ctx_.constant(4) * a6t * a2t)) break;
      if (ch == 2)
        r = ctx_.mul_pi(proot(a6t * pinv(a2t)), ix - 1);
      else
        r = ctx_.mul_pi(preduce(-a4t * pinv(ctx_.constant(2) * a2t)), ix - 1);
      C = C.rst(r, ctx_.constant(0), ctx_.constant(0));
      ++ix;
    }
    const long m = ix + iy - 5;
    out.kodaira = "I" + std::to_string(m) + "*";
    out.cond_exp = vD - m - 4;
    out.trace.push_back("step7: I" + std::to_string(m) + "*");
    return out;
  }

 private:
  static long neg_part(long v, long weight) {
    if (v >= 0 || v == kInfiniteValuation) return 0;
    return (-v + weight - 1) / weight;
  }

  bool is_zero(const Elem& x) const { return ctx_.val(x) == kInfiniteValuation; }
  bool divisible(const Elem& x) const { return ctx_.val(x) > 0; }
  Elem preduce(const Elem& x) const { return ctx_.lift(ctx_.reduce(x)); }
  Elem pinv(const Elem& x) const { return ctx_.lift(ctx_.residue().inv(ctx_.reduce(x))); }
  // Characteristic-th root in the residue field (square root in char 2,
  // cube root in char 3), lifted.
  Elem proot(const Elem& x) const { return ctx_.lift(ctx_.residue().frobenius_root(ctx_.reduce(x))); }

  const Ctx& ctx_;
  std::optional<Elem> hint_;
};

// ---------------------------------------------------------------------------
// Contexts

/// Local context at a prime of O_K.
class LocalContextK {
 public:
  using Elem = RingElement;

  LocalContextK(Field field, PrimeIdealData ideal)
      : field_(std::move(field)), ideal_(std::move(ideal)), k_(ideal_.residue_field()) {
    if (ideal_.is_ramified()) {
      pi_ = theta_index(field_, 1) - Int(2);
      pi_inv_ = inverse(pi_);
    } else {
      pi_ = RingElement::from_int(field_, ideal_.q);
      pi_inv_ = one(field_).divided_by(ideal_.q);
    }
  }

  Elem constant(long c) const { return RingElement::from_int(field_, c); }
  long val(const Elem& x) const { return valuation_or_infinity(x, ideal_); }
  ResidueField::Elem reduce(const Elem& x) const { return reduce_local(x, ideal_).rep; }
  Elem lift(const ResidueField::Elem& r) const { return fmk::lift(field_, r); }
  const ResidueField& residue() const { return k_; }
  Elem div_pi(const Elem& x, long k) const { return x * pi_inv_.pow(static_cast<unsigned long>(k)); }
  Elem mul_pi(const Elem& x, long k) const { return x * pi_.pow(static_cast<unsigned long>(k)); }
  const PrimeIdealData& ideal() const { return ideal_; }
  const Elem& uniformizer() const { return pi_; }

 private:
  Field field_;
  PrimeIdealData ideal_;
  ResidueField k_;
  RingElement pi_, pi_inv_;
};

/// Local context at a rational prime ell.
class LocalContextQ {
 public:
  using Elem = Rat;

  explicit LocalContextQ(std::int64_t ell) : ell_(ell), k_(ell, fq::Poly{0, 1}) {
    require(ell >= 2 && is_prime_u64(static_cast<std::uint64_t>(ell)), ErrorKind::invalid_argument, "ell must be prime");
  }

  Elem constant(long c) const { return Rat(c); }
  long val(const Elem& x) const {
    if (x == 0) return kInfiniteValuation;
    return static_cast<long>(valuation(x.get_num(), static_cast<unsigned long>(ell_))) -
           static_cast<long>(valuation(x.get_den(), static_cast<unsigned long>(ell_)));
  }
  ResidueField::Elem reduce(const Elem& x) const {
    const Int l(ell_);
    Int den = x.get_den() % l;
    require(den != 0, ErrorKind::not_reducible, "denominator divisible by " + std::to_string(ell_));
    Int num = x.get_num() % l;
    const auto v = fq::mod(fq::mod(num.get_si(), ell_) * fq::inv_mod(den.get_si(), ell_), ell_);
    return k_.from_int(v);
  }
  Elem lift(const ResidueField::Elem& r) const { return r.empty() ? Rat(0) : Rat(r[0]); }
  const ResidueField& residue() const { return k_; }
  Elem div_pi(const Elem& x, long k) const {
    Rat out = x / Rat(pow_int(Int(ell_), static_cast<unsigned long>(k)));
    out.canonicalize();
    return out;
  }
  Elem mul_pi(const Elem& x, long k) const {
    Rat out = x * Rat(pow_int(Int(ell_), static_cast<unsigned long>(k)));
    out.canonicalize();
    return out;
  }

 private:
  std::int64_t ell_;
  ResidueField k_;
};

}  // namespace fmk
