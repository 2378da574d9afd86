#pragma once

// Newform elimination sieve: residue pairs A_q, traces of specialized Frey
// curves, the B_q norm products and their gcd across primes.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fmk/errors.hpp"
#include "fmk/frey.hpp"
#include "fmk/integer.hpp"
#include "fmk/residue_field.hpp"
#include "fmk/ring.hpp"

namespace fmk {

struct HeckeEntry {
  std::int64_t q = 0;
  int ideal_index = 0;
  int residue_degree = 0;
  std::vector<Int> minpoly;  // ascending coefficients, monic
};

struct NewformRecord {
  std::string label;
  std::string level_label;
  int eigenfield_degree = 0;
  std::vector<HeckeEntry> hecke;

  const HeckeEntry* find(std::int64_t q, int ideal_index) const {
    for (const auto& e : hecke)
      if (e.q == q && e.ideal_index == ideal_index) return &e;
    return nullptr;
  }
};

/// Worker count: FMK_THREADS if set and positive, else the machine's.
inline unsigned default_threads() {
  if (const char* s = std::getenv("FMK_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Runs body(i) for i in [0, count) over up to `threads` workers, each taking
/// a contiguous block.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// The q^2 - 1 pairs (eta, mu) != (0, 0), row-major.
inline std::vector<std::pair<std::int64_t, std::int64_t>> enumerate_A_q(std::int64_t q) {
  require(q >= 2, ErrorKind::invalid_argument, "enumerate_A_q needs q >= 2");
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(static_cast<std::size_t>(q * q - 1));
  for (std::int64_t eta = 0; eta < q; ++eta)
    for (std::int64_t mu = 0; mu < q; ++mu)
      if (eta || mu) out.emplace_back(eta, mu);
  return out;
}

// ---------------------------------------------------------------------------
// Point counting

inline constexpr std::uint64_t kMaxCountField = 10000000;

/// Y^2 = X^3 + a2 X^2 + a4 X + a6 over a residue field of odd characteristic.
struct ResidueCurve {
  ResidueField::Elem a2, a4, a6;
};

/// Tables reused across curves over one field: every element, the square
/// indicator, and x^2, x^3.
class PointCounter {
 public:
  explicit PointCounter(ResidueField k) : k_(std::move(k)) {
    require(k_.characteristic() != 2, ErrorKind::invalid_argument, "point counting needs odd characteristic");
    require(k_.size() <= kMaxCountField, ErrorKind::invalid_argument, "residue field too large to enumerate");
    const std::uint64_t n = k_.size().get_ui();
    elems_.reserve(n);
    x2_.reserve(n);
    x3_.reserve(n);
    square_.assign(n, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      elems_.push_back(k_.from_index(i));
      x2_.push_back(k_.mul(elems_.back(), elems_.back()));
      x3_.push_back(k_.mul(x2_.back(), elems_.back()));
      square_[k_.to_index(x2_.back())] = 1;
    }
  }

  const ResidueField& field() const { return k_; }

  /// chi(x): 0 at 0, 1 on non-zero squares, -1 otherwise.
  int chi(const ResidueField::Elem& x) const {
    if (x.empty()) return 0;
    return square_[k_.to_index(x)] ? 1 : -1;
  }

  static ResidueField::Elem discriminant(const ResidueField& k, const ResidueCurve& c) {
    // 16 * disc(X^3 + a2 X^2 + a4 X + a6).
    auto mul = [&](const auto& x, const auto& y) { return k.mul(x, y); };
    auto cst = [&](long v) { return k.from_int(v); };
    const auto& [a2, a4, a6] = c;
    const auto a2sq = mul(a2, a2);
    ResidueField::Elem d = mul(a2sq, mul(a4, a4));
    d = k.sub(d, mul(cst(4), mul(a4, mul(a4, a4))));
    d = k.sub(d, mul(cst(4), mul(a2sq, mul(a2, a6))));
    d = k.add(d, mul(cst(18), mul(a2, mul(a4, a6))));
    d = k.sub(d, mul(cst(27), mul(a6, a6)));
    return mul(cst(16), d);
  }

  /// #E(k), the point at infinity included.
  Int count(const ResidueCurve& c) const {
    require(!discriminant(k_, c).empty(), ErrorKind::singular_reduction, "singular curve over the residue field");
    long sum = 0;
    for (std::size_t i = 0; i < elems_.size(); ++i) {
      auto y2 = k_.add(x3_[i], k_.mul(c.a2, x2_[i]));
      y2 = k_.add(y2, k_.mul(c.a4, elems_[i]));
      sum += chi(k_.add(y2, c.a6));
    }
    return Int(k_.size()) + 1 + sum;
  }

 private:
  ResidueField k_;
  std::vector<ResidueField::Elem> elems_, x2_, x3_;
  std::vector<std::uint8_t> square_;
};

/// #E(F_{q^f}) by exhaustive x-enumeration; Hasse checked.
inline Int count_points(const ResidueField& k, const ResidueCurve& c) {
  const Int n = PointCounter(k).count(c);
  const Int a = k.size() + 1 - n;
  require(a * a <= 4 * k.size(), ErrorKind::internal_error, "point count violates the Hasse bound");
  return n;
}

// ---------------------------------------------------------------------------
// Specialization

/// Roots (r1, r2) of Y^2 = X (X - r1)(X + r2) for the given kind, as forms in
/// (a, b); no parity or coprimality conditions.
inline std::pair<RingElement, RingElement> frey_roots(FreyKind kind, const Field& field, const Int& a, const Int& b, int j, int k) {
  detail::check_indices(field, j, k);
  RingElement u(field), v(field), w(field);
  detail::uvw(field, a, b, j, k, u, v, w);
  switch (kind) {
    case FreyKind::E_jk: return {v, w};
    case FreyKind::F1: return {u, v};
    case FreyKind::F2: {
      const RingElement pj = theta_index(field, j) - Int(2), pk = theta_index(field, k) - Int(2);
      return {exact_div(beta(field, a, b, j), pj), -exact_div(beta(field, a, b, k), pk)};
    }
    case FreyKind::W_rational: break;
  }
  fail(ErrorKind::invalid_argument, "no roots form for W");
}

struct TraceOutcome {
  bool multiplicative = false;
  Int a_q;  // meaningful when !multiplicative

  friend bool operator==(const TraceOutcome&, const TraceOutcome&) = default;
};

/// Reduces the Frey family at one prime: each root is X a^2 + Y b^2, so the
/// reductions of X and Y determine every specialization.
class FreySpecializer {
 public:
  FreySpecializer(const Field& field, FreyKind kind, int j, int k, const PrimeIdealData& ideal)
      : ideal_(checked(field, ideal)), counter_(ideal.residue_field()) {
    const auto [r1a, r2a] = frey_roots(kind, field, 1, 0, j, k);
    const auto [r1b, r2b] = frey_roots(kind, field, 0, 1, j, k);
    r1_ = {reduce_mod(r1a, ideal).rep, reduce_mod(r1b, ideal).rep};
    r2_ = {reduce_mod(r2a, ideal).rep, reduce_mod(r2b, ideal).rep};
  }

  const PrimeIdealData& ideal() const { return ideal_; }

  static const PrimeIdealData& checked(const Field& field, const PrimeIdealData& ideal) {
    require(ideal.q != 2 && ideal.q != field->p(), ErrorKind::unsupported_prime,
            "specialization needs a prime not above 2 or p, got " + ideal.label());
    return ideal;
  }

  ResidueCurve curve(std::int64_t eta, std::int64_t mu) const {
    const auto& k = counter_.field();
    const auto e2 = k.from_int(eta * eta % ideal_.q), m2 = k.from_int(mu * mu % ideal_.q);
    const auto r1 = k.add(k.mul(r1_.first, e2), k.mul(r1_.second, m2));
    const auto r2 = k.add(k.mul(r2_.first, e2), k.mul(r2_.second, m2));
    // X (X - r1)(X + r2) = X^3 + (r2 - r1) X^2 - r1 r2 X.
    return {k.sub(r2, r1), k.neg(k.mul(r1, r2)), {}};
  }

  TraceOutcome trace(std::int64_t eta, std::int64_t mu) const {
    require(eta || mu, ErrorKind::invalid_argument, "(eta, mu) = (0, 0)");
    require(eta >= 0 && mu >= 0 && eta < ideal_.q && mu < ideal_.q, ErrorKind::invalid_argument, "eta, mu must be residues mod q");
    const ResidueCurve c = curve(eta, mu);
    if (PointCounter::discriminant(counter_.field(), c).empty()) return {true, 0};
    return {false, Int(counter_.field().size() + 1 - counter_.count(c))};
  }

 private:
  PrimeIdealData ideal_;
  PointCounter counter_;
  std::pair<ResidueField::Elem, ResidueField::Elem> r1_, r2_;
};

inline TraceOutcome specialize_trace(const Field& field, FreyKind kind, int j, int k, const PrimeIdealData& ideal,
                                     std::int64_t eta, std::int64_t mu) {
  return FreySpecializer(field, kind, j, k, ideal).trace(eta, mu);
}

// ---------------------------------------------------------------------------
// Norm products

/// Monic canonical form: a leading coefficient of -1 is negated away.
inline std::vector<Int> canonical_minpoly(std::vector<Int> m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
  require(!m.empty(), ErrorKind::invalid_argument, "zero minimal polynomial");
  if (m.back() == -1)
    for (auto& c : m) c = -c;
  require(m.back() == 1, ErrorKind::invalid_argument, "minimal polynomial is not monic");
  return m;
}

inline Int eval_poly(const std::vector<Int>& m, const Int& x) {
  Int acc = 0;
  for (std::size_t i = m.size(); i-- > 0;) acc = acc * x + m[i];
  return acc;
}

/// Norm(a_q(f) - a_q(E)) at good pairs, Norm((N+1)^2 - a_q(f)^2) at
/// multiplicative ones; absolute values.
inline Int B_pair(const std::vector<Int>& minpoly, const TraceOutcome& outcome, const Int& N) {
  const auto m = canonical_minpoly(minpoly);
  if (!outcome.multiplicative) return abs(eval_poly(m, outcome.a_q));
  return abs(eval_poly(m, N + 1) * eval_poly(m, -(N + 1)));
}

struct SieveOptions {
  int j = 1, k = 4;
  unsigned threads = 1;
  // Pairs on one line through the origin give isomorphic curves (a2, a4
  // scale by lambda^2, lambda^4), so one trace per line suffices.
  bool projective_dedup = true;
};

/// Traces for every pair of A_q, in enumerate_A_q order.
inline std::vector<TraceOutcome> traces_A_q(const FreySpecializer& spec, const SieveOptions& opt) {
  const std::int64_t q = spec.ideal().q;
  const auto pairs = enumerate_A_q(q);
  std::vector<TraceOutcome> out(pairs.size());
  if (!opt.projective_dedup) {
    parallel_for(pairs.size(), opt.threads, [&](std::size_t i) { out[i] = spec.trace(pairs[i].first, pairs[i].second); });
    return out;
  }
  // Representatives (1, m) for m in [0, q) and (0, 1).
  std::vector<TraceOutcome> reps(static_cast<std::size_t>(q + 1));
  parallel_for(reps.size(), opt.threads, [&](std::size_t i) {
    const auto m = static_cast<std::int64_t>(i);
    reps[i] = m < q ? spec.trace(1, m) : spec.trace(0, 1);
  });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [eta, mu] = pairs[i];
    if (eta == 0) {
      out[i] = reps[static_cast<std::size_t>(q)];
    } else {
      const std::int64_t m = mu * fq::inv_mod(eta, q) % q;
      out[i] = reps[static_cast<std::size_t>(m)];
    }
  }
  return out;
}

/// q * prod over A_q of B_pair.
inline Int B_q_total(const NewformRecord& record, const Field& field, FreyKind kind, std::int64_t q, int ideal_index,
                     const SieveOptions& opt = {}) {
  const HeckeEntry* entry = record.find(q, ideal_index);
  require(entry != nullptr, ErrorKind::missing_eigenvalue,
          record.label + " has no eigenvalue at q=" + std::to_string(q) + " index " + std::to_string(ideal_index));
  const PrimeIdealData ideal = prime_above(field, q, ideal_index);
  require(entry->residue_degree == ideal.residue_degree, ErrorKind::missing_eigenvalue,
          record.label + ": residue degree mismatch at " + ideal.label());
  const FreySpecializer spec(field, kind, opt.j, opt.k, ideal);
  const auto traces = traces_A_q(spec, opt);
  const Int N = ideal.norm();
  std::vector<Int> factors(traces.size());
  parallel_for(traces.size(), opt.threads, [&](std::size_t i) { factors[i] = B_pair(entry->minpoly, traces[i], N); });
  factors.push_back(Int(q));
  return product_tree(std::move(factors));
}

struct SieveReport {
  std::string label;
  std::string status;  // eliminated, survivors, inconclusive, missing-eigenvalue
  std::vector<std::pair<std::string, Int>> B_q;  // keyed by "q:index", sorted
  Int gcd;
  std::vector<Int> surviving_primes;  // prime divisors of gcd above the floor
  std::vector<Int> excluded_small;    // prime divisors of gcd at or below the floor
  Int unfactored = 1;                 // composite part of gcd left unfactored
  long eliminated_above = 0;
  std::string detail;
};

inline std::string prime_key(std::int64_t q, int idx) { return std::to_string(q) + ":" + std::to_string(idx); }

inline std::vector<SieveReport> run_sieve(const std::vector<NewformRecord>& records, const Field& field, FreyKind kind,
                                          std::vector<std::pair<std::int64_t, int>> primes, long floor,
                                          const SieveOptions& opt = {}) {
  require(!primes.empty(), ErrorKind::invalid_argument, "run_sieve needs at least one prime");
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<SieveReport> out;
  for (const auto& rec : records) {
    SieveReport r;
    r.label = rec.label;
    r.eliminated_above = floor;
    r.gcd = 0;
    bool missing = false;
    for (const auto& [q, idx] : primes) {
      try {
        const Int B = B_q_total(rec, field, kind, q, idx, opt);
        r.B_q.emplace_back(prime_key(q, idx), B);
        r.gcd = gcd(r.gcd, B);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::missing_eigenvalue) throw;
        missing = true;
        r.detail = e.what();
        break;
      }
    }
    if (missing) {
      r.status = "missing-eigenvalue";
      r.B_q.clear();
      r.gcd = 0;
    } else if (r.gcd == 0) {
      r.status = "inconclusive";
      r.detail = "every B_q vanishes";
    } else {
      const Factorization f = factor(r.gcd);
      for (const auto& [ell, e] : f.factors) (ell > floor ? r.surviving_primes : r.excluded_small).push_back(ell);
      r.unfactored = f.unfactored;
      const bool clean = r.surviving_primes.empty() && f.complete();
      r.status = clean ? "eliminated" : "survivors";
      r.detail = clean ? "no surviving ell > " + std::to_string(floor) : "";
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fmk
