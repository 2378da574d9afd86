#pragma once

// Exact arithmetic in the real cyclotomic field K = Q(zeta_p + zeta_p^-1)
// and its ring of integers Z[theta], theta = zeta_p + zeta_p^-1, in the
// power basis 1, theta, ..., theta^(n-1) with n = (p-1)/2.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "fmk/errors.hpp"
#include "fmk/integer.hpp"
#include "fmk/poly_fq.hpp"
#include "fmk/residue_field.hpp"

namespace fmk {

class CyclotomicField;
using Field = std::shared_ptr<const CyclotomicField>;

class CyclotomicField {
 public:
  int p() const { return p_; }
  int degree() const { return n_; }

  /// Monic minimal polynomial of theta_1, constant term first.
  const std::vector<Int>& minpoly() const { return minpoly_; }

  /// Power-basis coordinates of theta_j for 0 <= j <= n (theta_0 = 2).
  const std::vector<Int>& theta_coords(int j) const { return theta_[static_cast<std::size_t>(j)]; }

  /// theta^(n + i) in the power basis, i = 0 .. n-2.
  const std::vector<Int>& high_power(int i) const { return high_powers_[static_cast<std::size_t>(i)]; }

  /// Generator of Gal(K/Q) as an exponent t acting by zeta -> zeta^t.
  int galois_generator() const { return galois_gen_; }

  /// Folds j into 1..n via theta_j = theta_{-j} = theta_{p-j}.
  int fold(long j) const {
    long r = ((j % p_) + p_) % p_;
    if (r > n_) r = p_ - r;
    return static_cast<int>(r);
  }

  friend Field field_init(int p);

 private:
  CyclotomicField() = default;

  int p_ = 0;
  int n_ = 0;
  int galois_gen_ = 1;
  std::vector<Int> minpoly_;
  std::vector<std::vector<Int>> theta_;
  std::vector<std::vector<Int>> high_powers_;
};

/// Element of K stored as integer numerators over a common positive
/// denominator, always in lowest terms. Integral iff the denominator is 1.
class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(Field field) : field_(std::move(field)), num_(static_cast<std::size_t>(field_->degree())), den_(1) {}

  RingElement(Field field, std::vector<Int> num, Int den = 1) : field_(std::move(field)), num_(std::move(num)), den_(std::move(den)) {
    require(num_.size() == static_cast<std::size_t>(field_->degree()), ErrorKind::invalid_argument,
            "coordinate vector has wrong length");
    require(den_ != 0, ErrorKind::division_by_zero, "zero denominator");
    normalize();
  }

  static RingElement from_int(const Field& field, const Int& c) {
    RingElement out(field);
    out.num_[0] = c;
    return out;
  }

  static RingElement from_rational(const Field& field, const Rat& c) {
    RingElement out(field);
    out.num_[0] = c.get_num();
    out.den_ = c.get_den();
    out.normalize();
    return out;
  }

  const Field& field() const { return field_; }
  const std::vector<Int>& numerators() const { return num_; }
  const Int& denominator() const { return den_; }

  Rat coeff(std::size_t i) const {
    Rat r(num_[i], den_);
    r.canonicalize();
    return r;
  }

  bool is_integral() const { return den_ == 1; }

  bool is_zero() const {
    for (const auto& c : num_)
      if (c != 0) return false;
    return true;
  }

  /// Rational integer if all higher coordinates vanish.
  bool is_rational() const {
    for (std::size_t i = 1; i < num_.size(); ++i)
      if (num_[i] != 0) return false;
    return true;
  }

  RingElement operator-() const {
    RingElement out(*this);
    for (auto& c : out.num_) c = -c;
    return out;
  }

  friend RingElement operator+(const RingElement& a, const RingElement& b) { return combine(a, b, 1); }
  friend RingElement operator-(const RingElement& a, const RingElement& b) { return combine(a, b, -1); }

  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    same_field(a, b);
    const int n = a.field_->degree();
    std::vector<Int> prod(static_cast<std::size_t>(2 * n - 1));
    for (int i = 0; i < n; ++i) {
      if (a.num_[static_cast<std::size_t>(i)] == 0) continue;
      for (int j = 0; j < n; ++j) prod[static_cast<std::size_t>(i + j)] += a.num_[static_cast<std::size_t>(i)] * b.num_[static_cast<std::size_t>(j)];
    }
    std::vector<Int> out(prod.begin(), prod.begin() + n);
    for (int k = n; k < 2 * n - 1; ++k) {
      const Int& c = prod[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      const auto& red = a.field_->high_power(k - n);
      for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] += c * red[static_cast<std::size_t>(i)];
    }
    return RingElement(a.field_, std::move(out), a.den_ * b.den_);
  }

  friend RingElement operator*(const RingElement& a, const Int& c) {
    RingElement out(a);
    for (auto& x : out.num_) x *= c;
    out.normalize();
    return out;
  }
  friend RingElement operator*(const Int& c, const RingElement& a) { return a * c; }

  friend RingElement operator+(const RingElement& a, const Int& c) { return a + from_int(a.field_, c); }
  friend RingElement operator-(const RingElement& a, const Int& c) { return a - from_int(a.field_, c); }

  RingElement divided_by(const Int& c) const {
    require(c != 0, ErrorKind::division_by_zero, "division of field element by zero");
    RingElement out(*this);
    out.den_ *= c;
    if (out.den_ < 0) {
      out.den_ = -out.den_;
      for (auto& x : out.num_) x = -x;
    }
    out.normalize();
    return out;
  }

  RingElement pow(unsigned long e) const {
    RingElement result = from_int(field_, 1), base = *this;
    while (e) {
      if (e & 1) result = result * base;
      e >>= 1;
      if (e) base = base * base;
    }
    return result;
  }

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return a.field_->p() == b.field_->p() && a.den_ == b.den_ && a.num_ == b.num_;
  }

  /// Value under the real embedding theta -> 2 cos(2 pi j / p).
  long double embedding(int j) const {
    const long double x = 2.0L * std::cos(2.0L * std::numbers::pi_v<long double> * j / field_->p());
    long double acc = 0;
    for (std::size_t i = num_.size(); i-- > 0;) acc = acc * x + num_[i].get_d();
    return acc / den_.get_d();
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < num_.size(); ++i) {
      if (i) s += ",";
      s += coeff(i).get_str();
    }
    return s + ")";
  }

 private:
  static void same_field(const RingElement& a, const RingElement& b) {
    require(a.field_ && b.field_ && a.field_->p() == b.field_->p(), ErrorKind::invalid_argument,
            "elements belong to different fields");
  }

  static RingElement combine(const RingElement& a, const RingElement& b, int sign) {
    same_field(a, b);
    std::vector<Int> out(a.num_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (sign > 0)
        out[i] = a.num_[i] * b.den_ + b.num_[i] * a.den_;
      else
        out[i] = a.num_[i] * b.den_ - b.num_[i] * a.den_;
    }
    return RingElement(a.field_, std::move(out), a.den_ * b.den_);
  }

  void normalize() {
    if (den_ < 0) {
      den_ = -den_;
      for (auto& c : num_) c = -c;
    }
    if (den_ == 1) return;
    Int g = den_;
    for (const auto& c : num_) {
      if (g == 1) break;
      g = gcd(g, c);
    }
    if (g != 1) {
      for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
      mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
  }

  Field field_;
  std::vector<Int> num_;
  Int den_ = 1;
};

/// A prime of O_K above the rational prime q, given by Dedekind-Kummer as
/// (q, gen_poly(theta)).
struct PrimeIdealData {
  std::int64_t q = 0;
  fq::Poly gen_poly;  // monic irreducible factor of minpoly mod q
  int residue_degree = 0;
  int ramification = 0;
  int index = 0;
  // Product of the other factors of minpoly mod q: an element lying in every
  // other prime above q but not in this one. Used for valuations.
  fq::Poly cofactor;
  int field_p = 0;

  Int norm() const { return pow_int(Int(q), static_cast<unsigned long>(residue_degree)); }
  bool is_ramified() const { return ramification > 1; }
  ResidueField residue_field() const { return ResidueField(q, gen_poly); }

  std::string label() const {
    std::string s = "q=" + std::to_string(q) + "[";
    for (std::size_t i = 0; i < gen_poly.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(gen_poly[i]);
    }
    return s + "]";
  }
};

struct ResidueElement {
  ResidueField field;
  fq::Poly rep;

  bool is_zero() const { return rep.empty(); }
  bool in_prime_subfield() const { return field.in_prime_subfield(rep); }
};

inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

// ---------------------------------------------------------------------------
// Construction

/// Field data for an odd prime p >= 5. theta_j is built from the recursion
/// theta_{j+1} = theta_1 theta_j - theta_{j-1} as integer polynomials D_j in
/// theta_1; the minimal polynomial is then 1 + sum_{j=1}^n D_j(x), which is
/// the relation 1 + zeta + ... + zeta^(p-1) = 0 folded onto real parts.
inline Field field_init(int p) {
  require(p >= 5 && p % 2 == 1 && is_prime_u64(static_cast<std::uint64_t>(p)), ErrorKind::invalid_argument,
          "p must be an odd prime >= 5, got " + std::to_string(p));
  auto field = std::shared_ptr<CyclotomicField>(new CyclotomicField());
  field->p_ = p;
  const int n = (p - 1) / 2;
  field->n_ = n;

  // D_j as integer polynomials in x (low degree first).
  std::vector<std::vector<Int>> d(static_cast<std::size_t>(n + 1));
  d[0] = {Int(2)};
  d[1] = {Int(0), Int(1)};
  for (int j = 1; j < n; ++j) {
    std::vector<Int> next(static_cast<std::size_t>(j + 2));
    for (std::size_t i = 0; i < d[static_cast<std::size_t>(j)].size(); ++i) next[i + 1] += d[static_cast<std::size_t>(j)][i];
    for (std::size_t i = 0; i < d[static_cast<std::size_t>(j - 1)].size(); ++i) next[i] -= d[static_cast<std::size_t>(j - 1)][i];
    d[static_cast<std::size_t>(j + 1)] = std::move(next);
  }
  std::vector<Int> minpoly(static_cast<std::size_t>(n + 1));
  minpoly[0] = 1;
  for (int j = 1; j <= n; ++j)
    for (std::size_t i = 0; i < d[static_cast<std::size_t>(j)].size(); ++i) minpoly[i] += d[static_cast<std::size_t>(j)][i];
  require(minpoly.back() == 1, ErrorKind::internal_error, "minimal polynomial is not monic");
  field->minpoly_ = minpoly;

  // theta^(n+i) reduced mod minpoly.
  std::vector<Int> cur(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) cur[static_cast<std::size_t>(i)] = -minpoly[static_cast<std::size_t>(i)];  // theta^n
  for (int k = 0; k < n - 1; ++k) {
    field->high_powers_.push_back(cur);
    std::vector<Int> next(static_cast<std::size_t>(n));
    const Int top = cur[static_cast<std::size_t>(n - 1)];
    for (int i = n - 1; i >= 1; --i) next[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i - 1)];
    for (int i = 0; i < n; ++i) next[static_cast<std::size_t>(i)] -= top * minpoly[static_cast<std::size_t>(i)];
    cur = std::move(next);
  }

  // theta_j coordinates; D_j has degree j <= n, so only D_n needs reducing.
  for (int j = 0; j <= n; ++j) {
    std::vector<Int> coords(static_cast<std::size_t>(n));
    const auto& dj = d[static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < dj.size(); ++i) {
      if (static_cast<int>(i) < n) {
        coords[i] += dj[i];
      } else {
        const auto& red = field->high_powers_[i - static_cast<std::size_t>(n)];
        for (int t = 0; t < n; ++t) coords[static_cast<std::size_t>(t)] += dj[i] * red[static_cast<std::size_t>(t)];
      }
    }
    field->theta_.push_back(std::move(coords));
  }

  // A generator of (Z/p)^x / {+-1}.
  for (int g = 2; g < p; ++g) {
    int order = 1;
    long x = g;
    while (x != 1 && x != p - 1) {
      x = x * g % p;
      ++order;
    }
    if (order == n) {
      field->galois_gen_ = g;
      break;
    }
  }
  return field;
}

// ---------------------------------------------------------------------------
// Elements

inline RingElement theta_index(const Field& field, int j) {
  require(j >= 1 && j <= field->degree(), ErrorKind::invalid_argument,
          "theta index " + std::to_string(j) + " outside 1.." + std::to_string(field->degree()));
  return RingElement(field, field->theta_coords(j));
}

/// theta_j for any integer j, folded (theta_0 = 2).
inline RingElement theta_any(const Field& field, long j) { return RingElement(field, field->theta_coords(field->fold(j))); }

inline RingElement one(const Field& field) { return RingElement::from_int(field, 1); }

namespace detail {

// Fraction-free Gaussian elimination (Bareiss); exact determinant over Z.
inline Int bareiss_det(std::vector<std::vector<Int>> m) {
  const std::size_t n = m.size();
  Int sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        m[i][j] = std::move(t);
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace detail

/// Norm_{K/Q}, computed as the determinant of multiplication by elem on the
/// power basis (equivalently the resultant with the minimal polynomial).
inline Rat norm(const RingElement& elem) {
  const auto& field = elem.field();
  const int n = field->degree();
  std::vector<std::vector<Int>> m(static_cast<std::size_t>(n), std::vector<Int>(static_cast<std::size_t>(n)));
  RingElement integral(field, elem.numerators());
  RingElement basis = one(field);
  const RingElement theta = theta_index(field, 1);
  for (int col = 0; col < n; ++col) {
    RingElement img = integral * basis;
    for (int row = 0; row < n; ++row) m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = img.numerators()[static_cast<std::size_t>(row)];
    basis = basis * theta;
  }
  Rat out(detail::bareiss_det(std::move(m)), pow_int(elem.denominator(), static_cast<unsigned long>(n)));
  out.canonicalize();
  return out;
}

/// The automorphism induced by zeta -> zeta^t.
inline RingElement galois_apply(const RingElement& elem, long t) {
  const auto& field = elem.field();
  require(t % field->p() != 0, ErrorKind::invalid_argument, "Galois exponent must be coprime to p");
  const RingElement image = theta_any(field, t);
  const auto& num = elem.numerators();
  RingElement acc(field);
  for (std::size_t i = num.size(); i-- > 0;) acc = acc * image + num[i];
  return acc.divided_by(elem.denominator());
}

/// Multiplicative inverse as (product of the other conjugates) / norm.
inline RingElement inverse(const RingElement& elem) {
  require(!elem.is_zero(), ErrorKind::division_by_zero, "inverse of zero");
  const auto& field = elem.field();
  RingElement conj_product = one(field);
  long t = field->galois_generator();
  for (int i = 1; i < field->degree(); ++i) {
    conj_product = conj_product * galois_apply(elem, t);
    t = t * field->galois_generator() % field->p();
  }
  const RingElement full = elem * conj_product;
  require(full.is_rational(), ErrorKind::internal_error, "conjugate product is not rational");
  const Rat n = full.coeff(0);
  return (conj_product * Int(n.get_den())).divided_by(n.get_num());
}

/// a / b in K; the result reports is_integral() when a/b lies in O_K.
inline RingElement exact_div(const RingElement& a, const RingElement& b) {
  require(!b.is_zero(), ErrorKind::division_by_zero, "exact_div by zero");
  return a * inverse(b);
}

// ---------------------------------------------------------------------------
// Primes

inline fq::Poly minpoly_mod(const Field& field, std::int64_t q) {
  fq::Poly out;
  for (const auto& c : field->minpoly()) {
    Int r = c % Int(q);
    out.push_back(fq::mod(r.get_si(), q));
  }
  fq::trim(out);
  return out;
}

/// Primes of O_K above q, ordered lexicographically by generator polynomial.
inline std::vector<PrimeIdealData> factor_rational_prime(const Field& field, std::int64_t q) {
  require(q >= 2 && is_prime_u64(static_cast<std::uint64_t>(q)), ErrorKind::invalid_argument,
          "q must be prime, got " + std::to_string(q));
  const int n = field->degree();
  std::vector<PrimeIdealData> out;
  if (q == field->p()) {
    PrimeIdealData P;
    P.q = q;
    P.gen_poly = fq::normalized(fq::Poly{-2, 1}, q);
    P.residue_degree = 1;
    P.ramification = n;
    P.index = 0;
    P.cofactor = {1};
    P.field_p = field->p();
    out.push_back(P);
    return out;
  }
  const fq::Poly f = minpoly_mod(field, q);
  const auto factors = fq::factor_squarefree(f, q);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    PrimeIdealData P;
    P.q = q;
    P.gen_poly = factors[i];
    P.residue_degree = fq::degree(factors[i]);
    P.ramification = 1;
    P.index = static_cast<int>(i);
    P.cofactor = {1};
    for (std::size_t k = 0; k < factors.size(); ++k)
      if (k != i) P.cofactor = fq::mul(P.cofactor, factors[k], q);
    P.field_p = field->p();
    out.push_back(P);
  }
  return out;
}

inline PrimeIdealData prime_above(const Field& field, std::int64_t q, int index = 0) {
  auto primes = factor_rational_prime(field, q);
  require(index >= 0 && index < static_cast<int>(primes.size()), ErrorKind::invalid_argument,
          "prime index " + std::to_string(index) + " out of range for q=" + std::to_string(q));
  return primes[static_cast<std::size_t>(index)];
}

/// Image of elem in O_K / P. The denominator must be prime to q.
inline ResidueElement reduce_mod(const RingElement& elem, const PrimeIdealData& ideal) {
  const std::int64_t q = ideal.q;
  const Int qq(q);
  Int den_mod = elem.denominator() % qq;
  require(den_mod != 0, ErrorKind::not_reducible, "denominator divisible by " + std::to_string(q));
  const fq::Coeff den_inv = fq::inv_mod(den_mod.get_si(), q);
  fq::Poly rep;
  for (const auto& c : elem.numerators()) {
    Int r = c % qq;
    rep.push_back(fq::mod(fq::mod(r.get_si(), q) * den_inv, q));
  }
  ResidueField k = ideal.residue_field();
  auto reduced = k.reduce(rep);
  return ResidueElement{std::move(k), std::move(reduced)};
}

/// Canonical lift of a residue to O_K (coefficients in [0, q)).
inline RingElement lift(const Field& field, const fq::Poly& rep) {
  std::vector<Int> num(static_cast<std::size_t>(field->degree()));
  for (std::size_t i = 0; i < rep.size(); ++i) num[i] = rep[i];
  return RingElement(field, std::move(num));
}

/// Image in O_K / P of an element that is P-integral but may carry q in its
/// denominator. For unramified P, multiplying by tau^k (tau in every other
/// prime above q, not in P) clears q^k; at the ramified prime, p / pi^n is a
/// unit that does the same.
inline ResidueElement reduce_local(const RingElement& elem, const PrimeIdealData& ideal) {
  const auto& field = elem.field();
  const Int qq(ideal.q);
  if (!mpz_divisible_p(elem.denominator().get_mpz_t(), qq.get_mpz_t())) return reduce_mod(elem, ideal);
  const auto k = static_cast<unsigned long>(valuation(elem.denominator(), static_cast<unsigned long>(ideal.q)));
  RingElement helper = ideal.is_ramified()
                           ? exact_div(RingElement::from_int(field, qq), (theta_index(field, 1) - Int(2)).pow(static_cast<unsigned long>(ideal.ramification)))
                           : lift(field, ideal.cofactor);
  const RingElement cleared = elem * helper.pow(k);
  require(!mpz_divisible_p(cleared.denominator().get_mpz_t(), qq.get_mpz_t()), ErrorKind::not_reducible,
          "element is not integral at " + ideal.label());
  ResidueElement out = reduce_mod(cleared, ideal);
  const auto h = reduce_mod(helper, ideal);
  out.rep = out.field.mul(out.rep, out.field.inv(out.field.pow(h.rep, Int(static_cast<long>(k)))));
  return out;
}

/// P-adic valuation; kInfiniteValuation for zero. Non-integral elements are
/// handled by subtracting the valuation of the rational denominator.
inline long valuation_or_infinity(const RingElement& elem, const PrimeIdealData& ideal) {
  if (elem.is_zero()) return kInfiniteValuation;
  const auto& field = elem.field();
  long v = 0;
  if (!elem.is_integral()) v -= static_cast<long>(valuation(elem.denominator(), static_cast<unsigned long>(ideal.q))) * ideal.ramification;

  std::vector<Int> num = elem.numerators();
  Int content = 0;
  for (const auto& c : num) content = gcd(content, c);
  const auto vq = static_cast<long>(valuation(content, static_cast<unsigned long>(ideal.q)));
  if (vq > 0) {
    const Int scale = pow_int(Int(ideal.q), static_cast<unsigned long>(vq));
    for (auto& c : num) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), scale.get_mpz_t());
    v += vq * ideal.ramification;
  }
  RingElement x(field, std::move(num));

  if (ideal.is_ramified()) {
    // The ramified prime is principal, generated by theta_1 - 2.
    static thread_local int cached_p = 0;
    static thread_local RingElement inv_pi;
    if (cached_p != field->p()) {
      inv_pi = inverse(theta_index(field, 1) - Int(2));
      cached_p = field->p();
    }
    RingElement inv_here(field, inv_pi.numerators(), inv_pi.denominator());
    while (reduce_mod(x, ideal).is_zero()) {
      x = x * inv_here;
      require(x.is_integral(), ErrorKind::internal_error, "division by the ramified uniformizer left O_K");
      ++v;
    }
    return v;
  }

  const RingElement tau = lift(field, ideal.cofactor);
  const Int qq(ideal.q);
  while (reduce_mod(x, ideal).is_zero()) {
    x = x * tau;
    std::vector<Int> next = x.numerators();
    for (auto& c : next) {
      require(mpz_divisible_p(c.get_mpz_t(), qq.get_mpz_t()) != 0, ErrorKind::internal_error,
              "valuation step failed: element not divisible by q");
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), qq.get_mpz_t());
    }
    x = RingElement(field, std::move(next));
    ++v;
  }
  return v;
}

inline long element_valuation(const RingElement& elem, const PrimeIdealData& ideal) {
  require(!elem.is_zero(), ErrorKind::invalid_argument, "valuation of zero");
  return valuation_or_infinity(elem, ideal);
}

// ---------------------------------------------------------------------------
// Lemma-style checks

struct CheckResult {
  std::string label;
  bool pass = false;
  std::string detail;
};

/// theta_j and theta_j + 2 are units, theta_j - 2 and theta_j - theta_k
/// have norm +-p.
inline std::vector<CheckResult> verify_unit_lemma(const Field& field) {
  std::vector<CheckResult> out;
  const int n = field->degree();
  const Rat p(field->p());
  auto abs_norm = [](const RingElement& x) { return Rat(abs(norm(x))); };
  for (int j = 1; j <= n; ++j) {
    const RingElement t = theta_index(field, j);
    const Rat a = abs_norm(t), b = abs_norm(t + Int(2)), c = abs_norm(t - Int(2));
    const std::string js = std::to_string(j);
    out.push_back({"|N(theta_" + js + ")| = 1", a == 1, a.get_str()});
    out.push_back({"|N(theta_" + js + " + 2)| = 1", b == 1, b.get_str()});
    out.push_back({"|N(theta_" + js + " - 2)| = p", c == p, c.get_str()});
    for (int k = j + 1; k <= n; ++k) {
      const Rat d = abs_norm(t - theta_index(field, k));
      out.push_back({"|N(theta_" + js + " - theta_" + std::to_string(k) + ")| = p", d == p, d.get_str()});
    }
  }
  return out;
}

/// theta_j^(2^((p-1)m)) reduced mod 4, via (p-1)m successive squarings with
/// coordinates reduced mod 4 after each step.
inline std::vector<int> binom_power_mod4(const Field& field, int j, int m) {
  require(m >= 1, ErrorKind::invalid_argument, "m must be >= 1");
  RingElement x = theta_index(field, j);
  auto reduce4 = [&](const RingElement& e) {
    std::vector<Int> num = e.numerators();
    for (auto& c : num) {
      c %= 4;
      if (c < 0) c += 4;
    }
    return RingElement(field, std::move(num));
  };
  const long squarings = static_cast<long>(field->p() - 1) * m;
  for (long i = 0; i < squarings; ++i) x = reduce4(x * x);
  std::vector<int> out;
  for (const auto& c : x.numerators()) out.push_back(static_cast<int>(c.get_si()));
  return out;
}

inline std::vector<int> coords_mod4(const RingElement& e) {
  std::vector<int> out;
  for (const auto& c : e.numerators()) {
    Int r = c % 4;
    if (r < 0) r += 4;
    out.push_back(static_cast<int>(r.get_si()));
  }
  return out;
}

inline bool verify_binom_congruence(const Field& field, int j, int m) {
  return binom_power_mod4(field, j, m) == coords_mod4(theta_index(field, j) + Int(2));
}

/// v_2 of binomial(2^r, i) by Kummer's carry count: s(i) + s(2^r - i) - 1.
inline unsigned v2_binomial(unsigned r, std::uint64_t i) {
  require(r >= 1 && r < 63, ErrorKind::invalid_argument, "r out of range");
  const std::uint64_t top = std::uint64_t{1} << r;
  require(i <= top, ErrorKind::invalid_argument, "i must satisfy 0 <= i <= 2^r");
  return static_cast<unsigned>(std::popcount(i) + std::popcount(top - i) - 1);
}

/// Certificate that minpoly is irreducible over Q: a prime q at which it
/// stays irreducible. Returns 0 if none was found below the search bound.
inline std::int64_t irreducibility_witness(const Field& field, std::int64_t bound = 10000) {
  for (std::int64_t q = 2; q < bound; ++q) {
    if (!is_prime_u64(static_cast<std::uint64_t>(q)) || q == field->p()) continue;
    if (fq::is_irreducible(minpoly_mod(field, q), q)) return q;
  }
  return 0;
}

}  // namespace fmk
