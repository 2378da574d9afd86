#pragma once

// JSON formats: bound constants, newform eigenvalue records, rational curve
// fixtures, and deterministic report emission.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fmk/bounds.hpp"
#include "fmk/errors.hpp"
#include "fmk/integer.hpp"
#include "fmk/sieve.hpp"
#include "fmk/tate.hpp"

namespace fmk {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Reading helpers

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::load_error, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::load_error, path + ": malformed JSON: " + e.what());
  }
}

/// FNV-1a, 64-bit; identifies input files in report headers.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

inline const Json& field_at(const Json& obj, const std::string& key, const std::string& where) {
  require(obj.is_object(), ErrorKind::load_error, where + ": expected an object");
  const auto it = obj.find(key);
  require(it != obj.end(), ErrorKind::load_error, where + "." + key + ": missing key \"" + key + "\"");
  return *it;
}

/// Integers may be JSON numbers or decimal strings.
inline Int json_int(const Json& v, const std::string& where) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? Int(std::to_string(v.get<std::uint64_t>())) : Int(v.get<long>());
  if (v.is_string()) {
    try {
      return parse_int(v.get<std::string>());
    } catch (const Error&) {
      fail(ErrorKind::load_error, where + ": not a decimal integer");
    }
  }
  fail(ErrorKind::load_error, where + ": expected an integer or decimal string");
}

inline long json_long(const Json& v, const std::string& where) {
  const Int x = json_int(v, where);
  require(x.fits_slong_p(), ErrorKind::load_error, where + ": out of range");
  return x.get_si();
}

/// Parses "2^18*3^12*5^6*13^3" (or "1") into its value, checking each base is prime.
inline Int parse_factorization(const std::string& s, const std::string& where) {
  Int acc = 1;
  std::stringstream ss(s);
  std::string term;
  while (std::getline(ss, term, '*')) {
    const auto caret = term.find('^');
    try {
      const Int base = parse_int(term.substr(0, caret));
      const unsigned long e = caret == std::string::npos ? 1 : std::stoul(term.substr(caret + 1));
      require(base == 1 || is_probable_prime(base), ErrorKind::load_error, where + ": " + to_decimal(base) + " is not prime");
      acc *= pow_int(base, e);
    } catch (const std::logic_error&) {
      fail(ErrorKind::load_error, where + ": cannot parse factor \"" + term + "\"");
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Constants

struct ConstantsEntry {
  long p = 0;
  std::optional<Int> B_p;  // absent where the irreducibility constant is not used
  std::string B_p_factorization;
  long h = 0;
  std::map<std::string, long> d_levels;
  Int norm_q3;
  std::string main_level;  // level label whose dimension feeds C(p)
  std::string provenance;
};

struct ConstantsFile {
  std::map<long, ConstantsEntry> entries;

  const ConstantsEntry& at(long p) const {
    const auto it = entries.find(p);
    require(it != entries.end(), ErrorKind::load_error, "no constants for p=" + std::to_string(p));
    return it->second;
  }
};

inline ConstantsFile parse_constants(const Json& root, const std::string& path) {
  ConstantsFile out;
  const Json& arr = field_at(root, "constants", path);
  require(arr.is_array(), ErrorKind::load_error, path + ".constants: expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = path + ".constants[" + std::to_string(i) + "]";
    const Json& e = arr[i];
    ConstantsEntry c;
    c.p = json_long(field_at(e, "p", where), where + ".p");
    const Json& B = field_at(e, "B_p", where);
    if (!B.is_null()) {
      c.B_p = json_int(B, where + ".B_p");
      require(*c.B_p > 0, ErrorKind::load_error, where + ".B_p: must be positive");
      c.B_p_factorization = field_at(e, "B_p_factorization", where).get<std::string>();
      require(parse_factorization(c.B_p_factorization, where + ".B_p_factorization") == *c.B_p, ErrorKind::load_error,
              where + ".B_p: does not match B_p_factorization");
    }
    c.h = json_long(field_at(e, "h", where), where + ".h");
    require(c.h > 0, ErrorKind::load_error, where + ".h: must be positive");
    const Json& d = field_at(e, "d_levels", where);
    require(d.is_object() && !d.empty(), ErrorKind::load_error, where + ".d_levels: expected a non-empty object");
    for (const auto& [label, val] : d.items()) {
      c.d_levels[label] = json_long(val, where + ".d_levels." + label);
      require(c.d_levels[label] > 0, ErrorKind::load_error, where + ".d_levels." + label + ": must be positive");
    }
    c.main_level = field_at(e, "main_level", where).get<std::string>();
    require(c.d_levels.count(c.main_level), ErrorKind::load_error, where + ".main_level: not a key of d_levels");
    c.norm_q3 = json_int(field_at(e, "norm_q3", where), where + ".norm_q3");
    require(c.norm_q3 >= 2, ErrorKind::load_error, where + ".norm_q3: must be at least 2");
    c.provenance = field_at(e, "provenance", where).get<std::string>();
    require(out.entries.emplace(c.p, c).second, ErrorKind::load_error, where + ".p: duplicate entry");
  }
  for (long p : {7L, 11L, 13L, 17L})
    require(out.entries.count(p), ErrorKind::load_error, path + ".constants: no entry for p=" + std::to_string(p));
  return out;
}

inline ConstantsFile load_constants(const std::string& path) {
  try {
    return parse_constants(parse_json(read_file(path), path), path);
  } catch (const Json::exception& e) {
    fail(ErrorKind::load_error, path + ": " + e.what());
  }
}

inline BoundInputs bound_inputs(const ConstantsEntry& c) {
  require(c.B_p.has_value(), ErrorKind::load_error, "B_p is not given for p=" + std::to_string(c.p));
  return {c.p, *c.B_p, c.h, static_cast<unsigned long>(c.d_levels.at(c.main_level)), c.norm_q3};
}

// ---------------------------------------------------------------------------
// Newforms

namespace detail {

using RatPoly = std::vector<Rat>;  // ascending, no trailing zeros

inline void trim(RatPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline RatPoly rem(RatPoly a, const RatPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const Rat c = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

inline int sign_at(const RatPoly& f, const Rat& x) {
  Rat acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return sgn(acc);
}

inline int sign_at_infinity(const RatPoly& f, bool positive) {
  const int s = sgn(f.back());
  return (positive || (f.size() - 1) % 2 == 0) ? s : -s;
}

inline int variations(const std::vector<int>& signs) {
  int v = 0, last = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (last && s != last) ++v;
    last = s;
  }
  return v;
}

}  // namespace detail

/// Number of distinct real roots of f, in total and in (lo, hi], by Sturm.
inline std::pair<int, int> sturm_counts(const std::vector<Int>& coeffs, const Rat& lo, const Rat& hi) {
  detail::RatPoly f;
  for (const auto& c : coeffs) f.emplace_back(c);
  detail::trim(f);
  require(f.size() >= 2, ErrorKind::invalid_argument, "Sturm sequence needs a non-constant polynomial");
  std::vector<detail::RatPoly> seq{f};
  detail::RatPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long>(i));
  seq.push_back(d);
  while (seq.back().size() > 1) {
    auto r = detail::rem(seq[seq.size() - 2], seq.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    seq.push_back(std::move(r));
  }
  auto count = [&](auto sign_of) {
    std::vector<int> s;
    for (const auto& g : seq) s.push_back(sign_of(g));
    return detail::variations(s);
  };
  const int total = count([](const auto& g) { return detail::sign_at_infinity(g, false); }) -
                    count([](const auto& g) { return detail::sign_at_infinity(g, true); });
  const int inside = count([&](const auto& g) { return detail::sign_at(g, lo); }) -
                     count([&](const auto& g) { return detail::sign_at(g, hi); });
  return {total, inside};
}

inline constexpr long kHasseSlackPpm = 1;  // relative slack 10^-6

/// Rational L >= 2 sqrt(N) (1 + 10^-6), within 10^-9 of it.
inline Rat hasse_limit(const Int& N) {
  const Int scale = pow_int(Int(10), 9);
  Rat L(isqrt(4 * N * scale * scale) + 1, scale);
  L *= Rat(1000000 + kHasseSlackPpm, 1000000);
  L.canonicalize();
  return L;
}

/// Empty when every real root of minpoly lies in [-2 sqrt(N), 2 sqrt(N)] up
/// to the slack; otherwise the reason.
inline std::string hasse_violation(const std::vector<Int>& minpoly, const Int& N) {
  const Rat L = hasse_limit(N);
  const auto [total, inside] = sturm_counts(minpoly, -L, L);
  if (total == inside) return "";
  return std::to_string(total - inside) + " real root(s) of the minimal polynomial exceed 2 sqrt(" + to_decimal(N) + ")";
}

struct RejectedRecord {
  std::string label;
  std::string reason;
};

struct NewformsFile {
  std::vector<NewformRecord> records;
  std::vector<RejectedRecord> rejected;
};

inline NewformsFile parse_newforms(const Json& root, const std::string& path) {
  NewformsFile out;
  const Json& arr = root.is_array() ? root : field_at(root, "newforms", path);
  require(arr.is_array(), ErrorKind::load_error, path + ": expected an array of newforms");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = path + "[" + std::to_string(i) + "]";
    const Json& e = arr[i];
    NewformRecord r;
    r.label = field_at(e, "label", where).get<std::string>();
    r.level_label = field_at(e, "level", where).get<std::string>();
    r.eigenfield_degree = static_cast<int>(json_long(field_at(e, "eigenfield_degree", where), where + ".eigenfield_degree"));
    require(r.eigenfield_degree > 0, ErrorKind::load_error, where + ".eigenfield_degree: must be positive");
    const Json& hecke = field_at(e, "hecke", where);
    require(hecke.is_array(), ErrorKind::load_error, where + ".hecke: expected an array");
    std::string reason;
    for (std::size_t t = 0; t < hecke.size(); ++t) {
      const std::string hw = where + ".hecke[" + std::to_string(t) + "]";
      HeckeEntry h;
      h.q = json_long(field_at(hecke[t], "q", hw), hw + ".q");
      require(h.q >= 2 && is_prime_u64(static_cast<std::uint64_t>(h.q)), ErrorKind::load_error, hw + ".q: not prime");
      h.ideal_index = static_cast<int>(json_long(field_at(hecke[t], "ideal_index", hw), hw + ".ideal_index"));
      h.residue_degree = static_cast<int>(json_long(field_at(hecke[t], "residue_degree", hw), hw + ".residue_degree"));
      require(h.residue_degree >= 1, ErrorKind::load_error, hw + ".residue_degree: must be positive");
      const Json& m = field_at(hecke[t], "minpoly", hw);
      require(m.is_array() && m.size() >= 2, ErrorKind::load_error, hw + ".minpoly: expected at least two coefficients");
      for (std::size_t c = 0; c < m.size(); ++c) h.minpoly.push_back(json_int(m[c], hw + ".minpoly[" + std::to_string(c) + "]"));
      require(h.minpoly.back() == 1, ErrorKind::load_error, hw + ".minpoly: not monic");
      const int deg = static_cast<int>(h.minpoly.size()) - 1;
      require(r.eigenfield_degree % deg == 0, ErrorKind::load_error, hw + ".minpoly: degree does not divide eigenfield_degree");
      if (reason.empty()) {
        const std::string v = hasse_violation(h.minpoly, pow_int(Int(h.q), static_cast<unsigned long>(h.residue_degree)));
        if (!v.empty()) reason = hw + ": " + v;
      }
      r.hecke.push_back(std::move(h));
    }
    if (reason.empty())
      out.records.push_back(std::move(r));
    else
      out.rejected.push_back({r.label, reason});
  }
  return out;
}

inline NewformsFile load_newforms(const std::string& path) {
  try {
    return parse_newforms(parse_json(read_file(path), path), path);
  } catch (const Json::exception& e) {
    fail(ErrorKind::load_error, path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Rational curves

struct RationalCurveFixture {
  std::string label;
  std::vector<Int> ainvs;  // a1, a2, a3, a4, a6
  Int conductor;
  std::string provenance;

  Weierstrass<Rat> model() const {
    return {Rat(ainvs[0]), Rat(ainvs[1]), Rat(ainvs[2]), Rat(ainvs[3]), Rat(ainvs[4])};
  }
};

/// Conductor from Tate's algorithm at every prime of the discriminant.
inline Int conductor_of(const Weierstrass<Rat>& W) {
  const Rat D = W.disc();
  require(D != 0, ErrorKind::singular_curve, "discriminant is zero");
  require(D.get_den() == 1, ErrorKind::invalid_argument, "conductor_of needs an integral model");
  const Factorization f = factor(abs(D.get_num()));
  require(f.complete(), ErrorKind::internal_error, "could not factor the discriminant");
  Int N = 1;
  for (const auto& [ell, e] : f.factors) {
    require(ell.fits_slong_p(), ErrorKind::internal_error, "discriminant prime too large");
    const auto r = TateExecutor<LocalContextQ>(LocalContextQ(ell.get_si())).run(W);
    N *= pow_int(ell, static_cast<unsigned long>(r.cond_exp));
  }
  return N;
}

inline std::vector<RationalCurveFixture> parse_curves(const Json& root, const std::string& path) {
  std::vector<RationalCurveFixture> out;
  const Json& arr = field_at(root, "curves", path);
  require(arr.is_array(), ErrorKind::load_error, path + ".curves: expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = path + ".curves[" + std::to_string(i) + "]";
    RationalCurveFixture c;
    c.label = field_at(arr[i], "label", where).get<std::string>();
    const Json& a = field_at(arr[i], "ainvs", where);
    require(a.is_array() && a.size() == 5, ErrorKind::load_error, where + ".ainvs: expected five integers");
    for (std::size_t t = 0; t < 5; ++t) c.ainvs.push_back(json_int(a[t], where + ".ainvs[" + std::to_string(t) + "]"));
    c.conductor = json_int(field_at(arr[i], "conductor", where), where + ".conductor");
    c.provenance = field_at(arr[i], "provenance", where).get<std::string>();
    require(c.model().disc() != 0, ErrorKind::load_error, where + ": singular curve");
    require(conductor_of(c.model()) == c.conductor, ErrorKind::load_error,
            where + ".conductor: Tate's algorithm gives " + to_decimal(conductor_of(c.model())));
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<RationalCurveFixture> load_curves(const std::string& path) {
  try {
    return parse_curves(parse_json(read_file(path), path), path);
  } catch (const Json::exception& e) {
    fail(ErrorKind::load_error, path + ": " + e.what());
  }
}

/// Reduction of a rational curve to Y^2 = X^3 + a2 X^2 + a4 X + a6 over F_ell,
/// ell odd, by completing the square.
inline ResidueCurve reduce_rational_curve(const Weierstrass<Rat>& W, std::int64_t ell) {
  require(ell > 2, ErrorKind::invalid_argument, "needs odd ell");
  const LocalContextQ ctx(ell);
  const auto& k = ctx.residue();
  const auto inv4 = k.inv(k.from_int(4)), inv2 = k.inv(k.from_int(2));
  return {k.mul(ctx.reduce(W.b2()), inv4), k.mul(ctx.reduce(W.b4()), inv2), k.mul(ctx.reduce(W.b6()), inv4)};
}

struct PmidyEntry {
  std::string label;
  Int a_p;
  std::vector<Int> divisors;
};

struct PmidyReport {
  long p = 0;
  Int bound;
  std::vector<PmidyEntry> curves;
  bool within_bound = true;  // every divisor is at most the bound
};

inline PmidyReport pmidy_report(long p, const std::vector<RationalCurveFixture>& fixtures) {
  require(!fixtures.empty(), ErrorKind::invalid_argument, "no fixture curves");
  PmidyReport r;
  r.p = p;
  r.bound = pmidy_bound(p);
  const ResidueField k(p, fq::Poly{0, 1});
  for (const auto& c : fixtures) {
    require(!mpz_divisible_ui_p(c.conductor.get_mpz_t(), static_cast<unsigned long>(p)), ErrorKind::invalid_argument,
            c.label + " has bad reduction at p");
    ResidueCurve rc = reduce_rational_curve(c.model(), p);
    Int n;
    try {
      n = count_points(k, rc);
    } catch (const Error& e) {
      fail(ErrorKind::internal_error, c.label + ": " + e.what());
    }
    PmidyEntry e{c.label, Int(p + 1) - n, {}};
    e.divisors = trace_divisibility(Int(p), e.a_p);
    for (const auto& ell : e.divisors) r.within_bound = r.within_bound && ell <= r.bound;
    r.curves.push_back(std::move(e));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Emission

inline std::string dec(const Int& x) { return to_decimal(x); }

inline double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

inline Json to_json(const std::vector<Int>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(dec(x));
  return a;
}

inline std::vector<Int> ints_from_json(const Json& a, const std::string& where) {
  std::vector<Int> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(json_int(a[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json to_json(const SieveReport& r) {
  Json B = Json::object();
  for (const auto& [key, val] : r.B_q) B[key] = dec(val);
  return Json{{"label", r.label},
              {"status", r.status},
              {"B_q", B},
              {"gcd", dec(r.gcd)},
              {"surviving_primes", to_json(r.surviving_primes)},
              {"excluded_small", to_json(r.excluded_small)},
              {"unfactored", dec(r.unfactored)},
              {"eliminated_above", r.eliminated_above},
              {"detail", r.detail}};
}

inline SieveReport sieve_report_from_json(const Json& j) {
  SieveReport r;
  r.label = j.at("label").get<std::string>();
  r.status = j.at("status").get<std::string>();
  for (const auto& [key, val] : j.at("B_q").items()) r.B_q.emplace_back(key, json_int(val, "B_q." + key));
  r.gcd = json_int(j.at("gcd"), "gcd");
  r.surviving_primes = ints_from_json(j.at("surviving_primes"), "surviving_primes");
  r.excluded_small = ints_from_json(j.at("excluded_small"), "excluded_small");
  r.unfactored = json_int(j.at("unfactored"), "unfactored");
  r.eliminated_above = j.at("eliminated_above").get<long>();
  r.detail = j.at("detail").get<std::string>();
  return r;
}

inline bool operator==(const SieveReport& a, const SieveReport& b) {
  return a.label == b.label && a.status == b.status && a.B_q == b.B_q && a.gcd == b.gcd &&
         a.surviving_primes == b.surviving_primes && a.excluded_small == b.excluded_small && a.unfactored == b.unfactored &&
         a.eliminated_above == b.eliminated_above && a.detail == b.detail;
}

inline Json to_json(const BoundReport& r) {
  Json j{{"c_prime_log10", round3(r.c_prime_log10)},
         {"hasse_log10", round3(r.hasse_log10)},
         {"c_log10", round3(r.c_log10)},
         {"dominating_term", to_string(r.dominating_term)},
         {"pB_primes", to_json(r.pB_primes)}};
  j["exact_digits"] = r.exact_digits ? Json(*r.exact_digits) : Json(nullptr);
  return j;
}

inline Json to_json(const PmidyReport& r) {
  Json curves = Json::array();
  for (const auto& c : r.curves) curves.push_back({{"label", c.label}, {"a_p", dec(c.a_p)}, {"divisors", to_json(c.divisors)}});
  return {{"p", r.p}, {"bound", dec(r.bound)}, {"curves", curves}, {"within_bound", r.within_bound}};
}

/// Sorted keys, two-space indent, trailing newline.
inline std::string serialize(const Json& j) { return j.dump(2) + "\n"; }

inline void emit_report(const Json& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::write_error, path + ": cannot open for writing");
  out << serialize(report);
  out.flush();
  require(static_cast<bool>(out), ErrorKind::write_error, path + ": write failed");
}

inline constexpr const char* kVersion = "1.0.0";

/// Reproducibility header: tool version, arguments, and a hash per input file.
inline Json repro_header(const std::string& command, const std::vector<std::string>& args,
                         const std::vector<std::string>& input_paths) {
  Json inputs = Json::object();
  for (const auto& p : input_paths) inputs[p] = fnv1a_hex(read_file(p));
  return {{"tool", "fmk"}, {"version", kVersion}, {"command", command}, {"args", args}, {"inputs", inputs}};
}

}  // namespace fmk
