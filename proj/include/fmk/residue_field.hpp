#pragma once

#include <cstdint>
#include <vector>

#include "fmk/errors.hpp"
#include "fmk/integer.hpp"
#include "fmk/poly_fq.hpp"

namespace fmk {

/// The finite field F_q[x]/(g) for a monic irreducible g over F_q.
/// Elements are reduced polynomials of degree < f.
class ResidueField {
 public:
  using Elem = fq::Poly;

  ResidueField(std::int64_t q, fq::Poly modulus) : q_(q), modulus_(fq::monic(fq::normalized(std::move(modulus), q), q)) {
    require(q >= 2, ErrorKind::invalid_argument, "residue characteristic must be >= 2");
    require(fq::degree(modulus_) >= 1, ErrorKind::invalid_argument, "residue modulus must have degree >= 1");
    size_ = pow_int(Int(q_), static_cast<unsigned long>(degree()));
  }

  std::int64_t characteristic() const { return q_; }
  int degree() const { return fq::degree(modulus_); }
  const fq::Poly& modulus() const { return modulus_; }
  const Int& size() const { return size_; }

  Elem reduce(const fq::Poly& a) const { return fq::rem(fq::normalized(a, q_), modulus_, q_); }
  Elem from_int(std::int64_t c) const { return fq::normalized(fq::Poly{c}, q_); }
  Elem one() const { return Elem{1}; }

  Elem add(const Elem& a, const Elem& b) const { return fq::add(a, b, q_); }
  Elem sub(const Elem& a, const Elem& b) const { return fq::sub(a, b, q_); }
  Elem neg(const Elem& a) const { return fq::sub(Elem{}, a, q_); }
  Elem mul(const Elem& a, const Elem& b) const { return fq::mulmod(a, b, modulus_, q_); }
  Elem pow(const Elem& a, const Int& e) const { return fq::powmod(a, e, modulus_, q_); }

  Elem inv(const Elem& a) const {
    require(!a.empty(), ErrorKind::division_by_zero, "inverse of zero in residue field");
    return pow(a, Int(size_ - 2));
  }

  bool is_zero(const Elem& a) const { return a.empty(); }
  bool in_prime_subfield(const Elem& a) const { return fq::degree(a) <= 0; }

  bool is_square(const Elem& a) const {
    if (a.empty() || q_ == 2) return true;
    return pow(a, Int((size_ - 1) / 2)) == Elem{1};
  }

  /// The unique characteristic-th root (inverse Frobenius); e.g. the square
  /// root in characteristic 2.
  Elem frobenius_root(const Elem& a) const { return pow(a, Int(size_ / q_)); }

  /// Absolute trace to F_q.
  std::int64_t trace(const Elem& a) const {
    Elem acc, term = a;
    for (int i = 0; i < degree(); ++i) {
      acc = add(acc, term);
      term = pow(term, Int(q_));
    }
    require(fq::degree(acc) <= 0, ErrorKind::internal_error, "trace left the prime field");
    return acc.empty() ? 0 : acc[0];
  }

  /// Whether a*T^2 + b*T + c has a root in this field.
  bool quadratic_has_root(const Elem& a, const Elem& b, const Elem& c) const {
    if (is_zero(a)) return !is_zero(b) || is_zero(c);
    if (q_ != 2) return is_square(sub(mul(b, b), mul(from_int(4), mul(a, c))));
    if (is_zero(b)) return true;
    // T = (b/a) S turns it into S^2 + S + ac/b^2, solvable iff the trace vanishes.
    const Elem delta = mul(mul(a, c), inv(mul(b, b)));
    return trace(delta) == 0;
  }

  // Base-q digit encoding, used for lookup tables over the whole field.
  std::uint64_t to_index(const Elem& a) const {
    std::uint64_t idx = 0;
    for (std::size_t i = a.size(); i-- > 0;) idx = idx * static_cast<std::uint64_t>(q_) + static_cast<std::uint64_t>(a[i]);
    return idx;
  }

  Elem from_index(std::uint64_t idx) const {
    Elem out;
    for (int i = 0; i < degree(); ++i) {
      out.push_back(static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(q_)));
      idx /= static_cast<std::uint64_t>(q_);
    }
    fq::trim(out);
    return out;
  }

  bool operator==(const ResidueField& o) const { return q_ == o.q_ && modulus_ == o.modulus_; }

 private:
  std::int64_t q_;
  fq::Poly modulus_;
  Int size_;
};

}  // namespace fmk
