#pragma once

// Subcommand bodies for the fmk tool. Each returns the JSON report and the
// exit code; argument parsing and output live in tools/fmk.cpp.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fmk/bounds.hpp"
#include "fmk/data_io.hpp"
#include "fmk/descent.hpp"
#include "fmk/errors.hpp"
#include "fmk/frey.hpp"
#include "fmk/ring.hpp"
#include "fmk/search.hpp"
#include "fmk/sieve.hpp"

namespace fmk {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 2, exit_data_error = 3, exit_budget = 4, exit_usage = 64 };

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return exit_usage;
    case ErrorKind::load_error:
    case ErrorKind::write_error:
    case ErrorKind::missing_eigenvalue:
    case ErrorKind::invalid_eigenvalue: return exit_data_error;
    case ErrorKind::budget_exceeded: return exit_budget;
    default: return exit_check_failed;
  }
}

struct CommandResult {
  Json body;
  int exit_code = exit_ok;
  std::vector<std::string> inputs;  // files read, hashed into the header
};

inline std::string default_data_path(const std::string& name) { return std::string(FMK_DATA_DIR) + "/" + name; }

inline Json to_json(const CheckResult& c) { return {{"label", c.label}, {"pass", c.pass}, {"detail", c.detail}}; }

inline Json poly_json(const fq::Poly& f) {
  Json a = Json::array();
  for (auto c : f) a.push_back(c);
  return a;
}

inline Json to_json(const PrimeIdealData& P) {
  return {{"label", P.label()},
          {"q", P.q},
          {"index", P.index},
          {"gen_poly", poly_json(P.gen_poly)},
          {"residue_degree", P.residue_degree},
          {"ramification", P.ramification},
          {"norm", dec(P.norm())}};
}

inline Json to_json(const RingElement& x) { return {{"num", to_json(x.numerators())}, {"den", dec(x.denominator())}}; }

inline Json splitting_json(const Field& field, std::int64_t q) {
  Json primes = Json::array();
  for (const auto& P : factor_rational_prime(field, q)) primes.push_back(to_json(P));
  return primes;
}

// ---------------------------------------------------------------------------
// field

inline CommandResult cmd_field(int p) {
  const Field field = field_init(p);
  CommandResult r;
  Json& j = r.body;
  j["p"] = p;
  j["degree"] = field->degree();
  j["minpoly"] = to_json(field->minpoly());
  j["irreducibility_witness"] = irreducibility_witness(field);

  bool ok = true;
  Json unit = Json::array();
  for (const auto& c : verify_unit_lemma(field)) {
    ok = ok && c.pass;
    unit.push_back(to_json(c));
  }
  j["unit_lemma"] = unit;

  Json binom = Json::array();
  for (int idx = 1; idx <= field->degree(); ++idx)
    for (int m : {1, 2}) {
      const bool pass = verify_binom_congruence(field, idx, m);
      ok = ok && pass;
      binom.push_back({{"j", idx}, {"m", m}, {"pass", pass}});
    }
  j["binom_congruence"] = binom;

  Json split = Json::object();
  for (std::int64_t q : {std::int64_t{2}, std::int64_t{3}, std::int64_t{p}}) split[std::to_string(q)] = splitting_json(field, q);
  j["splitting"] = split;
  const auto above3 = factor_rational_prime(field, 3);
  j["three_inert"] = above3.size() == 1 && above3[0].ramification == 1;
  j["lemma_checks_pass"] = ok;
  r.exit_code = ok ? exit_ok : exit_check_failed;
  return r;
}

// ---------------------------------------------------------------------------
// descent

inline CommandResult cmd_descent(int p, const Int& a, const Int& b, const std::optional<Int>& z,
                                 const std::optional<unsigned long>& ell) {
  const Field field = field_init(p);
  CommandResult r;
  Json& j = r.body;
  j["p"] = p;
  j["a"] = dec(a);
  j["b"] = dec(b);
  const Gaussian g = gaussian_pow({a, b}, static_cast<unsigned long>(p));
  j["re_power"] = dec(g.re);
  bool ok = verify_factorization(field, a, b);
  j["factorization"] = ok;
  const CheckResult three = check_three_divides_a(a, b, z);
  j["three_divides_a"] = to_json(three);
  ok = ok && three.pass;

  const CoprimalityReport cop = coprimality_profile(field, a, b);
  Json entries = Json::array();
  for (const auto& e : cop.entries)
    entries.push_back({{"pair", e.pair}, {"gcd", dec(e.gcd)}, {"candidates", to_json(e.candidates)}, {"offending", to_json(e.offending)}});
  j["coprimality"] = {{"pass", cop.pass()}, {"norms", to_json(cop.norms)}, {"entries", entries}};
  ok = ok && cop.pass();

  if (ell) {
    Json pw = Json::array();
    for (const auto& c : check_power_witness(field, a, b, *ell)) {
      ok = ok && c.pass;
      pw.push_back(to_json(c));
    }
    j["power_witness"] = {{"ell", *ell}, {"checks", pw}};
  }
  j["checks_pass"] = ok;
  r.exit_code = ok ? exit_ok : exit_check_failed;
  return r;
}

// ---------------------------------------------------------------------------
// frey

inline constexpr std::int64_t kFreyNormPrimeLimit = 10000;

inline FreyKind parse_frey_kind(const std::string& s) {
  if (s == "E") return FreyKind::E_jk;
  if (s == "F1") return FreyKind::F1;
  if (s == "F2") return FreyKind::F2;
  fail(ErrorKind::invalid_argument, "unknown curve kind \"" + s + "\"");
}

/// Primes q <= limit dividing the numerator or denominator of x.
inline void small_primes_of(const Rat& x, std::int64_t limit, std::set<std::int64_t>& out) {
  for (const Int& n : {Int(abs(x.get_num())), Int(x.get_den())}) {
    if (n == 0) continue;
    for (std::int64_t q = 2; q <= limit; ++q)
      if (is_prime_u64(static_cast<std::uint64_t>(q)) && mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q)))
        out.insert(q);
  }
}

inline Json to_json(const LocalData& d) {
  return {{"ideal", to_json(d.ideal)},     {"reduction", to_string(d.reduction)}, {"v_disc", d.v_disc},
          {"v_disc_min", d.v_disc_min},    {"cond_exp", d.cond_exp},             {"kodaira", d.kodaira},
          {"route", d.route},              {"trace", d.trace}};
}

inline CommandResult cmd_frey(int p, const Int& a, const Int& b, int j_idx, int k_idx, FreyKind kind) {
  const Field field = field_init(p);
  const FreyCurve c = build_frey(kind, field, a, b, j_idx, k_idx);
  CommandResult r;
  Json& j = r.body;
  j["curve"] = {{"kind", to_string(kind)}, {"p", p},           {"a", dec(a)},          {"b", dec(b)},
                {"j", j_idx},              {"k", k_idx},       {"a2", to_json(c.a2)},  {"a4", to_json(c.a4)},
                {"singular", c.singular},  {"u", to_json(c.u)}, {"v", to_json(c.v)},    {"w", to_json(c.w)}};
  if (kind != FreyKind::E_jk) {
    const ObstructionResult ob = residue_obstruction(field, j_idx, k_idx);
    j["residue_obstruction"] = {{"holds", ob.holds}, {"outside_f2", ob.outside_f2}, {"witness_index", ob.witness_index}};
  }
  if (c.singular) {
    j["local_data"] = Json::array();
    j["detail"] = "the Frey curve is singular for this witness";
    return r;
  }

  std::set<std::int64_t> qs{2, 3, p};
  for (const RingElement* x : {&c.u, &c.v, &c.w}) small_primes_of(norm(*x), kFreyNormPrimeLimit, qs);
  Json local = Json::array();
  bool ok = true;
  for (std::int64_t q : qs) {
    for (const auto& P : factor_rational_prime(field, q)) {
      try {
        local.push_back(to_json(local_data(c, P)));
      } catch (const Error& e) {
        ok = false;
        local.push_back({{"ideal", to_json(P)}, {"error", std::string(to_string(e.kind()))}, {"detail", e.what()}});
      }
    }
  }
  j["local_data"] = local;
  j["norm_prime_limit"] = kFreyNormPrimeLimit;
  r.exit_code = ok ? exit_ok : exit_check_failed;
  return r;
}

// ---------------------------------------------------------------------------
// bounds

inline constexpr long kEndgameCap = 10000000;

inline CommandResult cmd_bounds(int p, const std::string& constants_path, const std::string& curves_path) {
  CommandResult r;
  r.inputs.push_back(constants_path);
  const ConstantsFile file = load_constants(constants_path);
  const ConstantsEntry& e = file.at(p);
  const Field field = field_init(p);
  Json& j = r.body;
  j["p"] = p;
  j["inputs"] = {{"B_p", e.B_p ? Json(dec(*e.B_p)) : Json(nullptr)},
                 {"h", e.h},
                 {"d", e.d_levels.at(e.main_level)},
                 {"main_level", e.main_level},
                 {"norm_q3", dec(e.norm_q3)},
                 {"provenance", e.provenance}};

  const auto above3 = factor_rational_prime(field, 3);
  bool norms_match = true;
  Json norms = Json::array();
  for (const auto& P : above3) {
    norms.push_back(dec(P.norm()));
    norms_match = norms_match && P.norm() == e.norm_q3;
  }
  j["consistency"] = {{"primes_above_3", static_cast<long>(above3.size())},
                      {"prime_norms_above_3", norms},
                      {"norm_q3_is_prime_norm", norms_match}};

  if (e.B_p) j["bound"] = to_json(c_of_p(bound_inputs(e)));

  if (p == 7) {
    r.inputs.push_back(curves_path);
    const auto fixtures = load_curves(curves_path);
    const unsigned long d = static_cast<unsigned long>(e.d_levels.at(e.main_level));
    unsigned long max_power = 0;
    while (survivor_bound(e.norm_q3, max_power + 1) < kEndgameCap) ++max_power;
    j["endgame"] = {{"survivor_bound_d1", dec(survivor_bound(e.norm_q3, 1))},
                    {"survivor_bound_d", dec(survivor_bound(e.norm_q3, d))},
                    {"cap", kEndgameCap},
                    {"largest_d_below_cap", max_power},
                    {"irreducibility_threshold", dec(irred_threshold_cubic())},
                    {"pmidy", to_json(pmidy_report(p, fixtures))}};
  }
  return r;
}

// ---------------------------------------------------------------------------
// sieve

inline std::vector<std::pair<std::int64_t, int>> parse_prime_list(const std::string& s) {
  std::vector<std::pair<std::int64_t, int>> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string item = s.substr(pos, comma - pos);
    const std::size_t colon = item.find(':');
    try {
      std::size_t used = 0;
      const long q = std::stol(item.substr(0, colon), &used);
      require(used == std::min(colon, item.size()), ErrorKind::invalid_argument, "");
      int idx = 0;
      if (colon != std::string::npos) {
        idx = std::stoi(item.substr(colon + 1), &used);
        require(used == item.size() - colon - 1, ErrorKind::invalid_argument, "");
      }
      require(q >= 2 && is_prime_u64(static_cast<std::uint64_t>(q)) && idx >= 0, ErrorKind::invalid_argument, "");
      out.emplace_back(q, idx);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, "bad prime entry \"" + item + "\"; expected q or q:index");
    }
    pos = comma + 1;
  }
  return out;
}

inline CommandResult cmd_sieve(int p, const std::string& newforms_path, FreyKind kind, const std::string& primes, long floor,
                               int j_idx, int k_idx, unsigned threads) {
  require(kind == FreyKind::F1 || kind == FreyKind::F2, ErrorKind::invalid_argument, "sieve supports F1 and F2");
  const auto prime_list = parse_prime_list(primes);
  CommandResult r;
  r.inputs.push_back(newforms_path);
  const NewformsFile data = load_newforms(newforms_path);
  const Field field = field_init(p);
  for (const auto& [q, idx] : prime_list) {
    require(q != 2 && q != p, ErrorKind::invalid_argument, "sieve primes must avoid 2 and p");
    require(idx < static_cast<int>(factor_rational_prime(field, q).size()), ErrorKind::invalid_argument,
            "no prime " + prime_key(q, idx) + " in this field");
  }
  const SieveOptions opt{j_idx, k_idx, threads, true};
  Json reports = Json::array();
  for (const auto& rep : run_sieve(data.records, field, kind, prime_list, floor, opt)) reports.push_back(to_json(rep));
  Json rejected = Json::array();
  for (const auto& rej : data.rejected) rejected.push_back({{"label", rej.label}, {"reason", rej.reason}});
  r.body = {{"p", p}, {"kind", to_string(kind)}, {"j", j_idx}, {"k", k_idx}, {"floor", floor}, {"reports", reports}, {"rejected", rejected}};
  return r;
}

// ---------------------------------------------------------------------------
// search

inline Json to_json(const Solution& s) {
  return {{"x", dec(s.x)}, {"y", dec(s.y)}, {"z", dec(s.z)}, {"congruences", s.congruences}};
}

inline CommandResult cmd_search(const std::string& mode, long p, long n, long z_max, long budget = kSearchBudget) {
  SearchReport rep;
  if (mode == "z3p")
    rep = search_z3p(p, n, z_max, budget);
  else if (mode == "z17")
    rep = search_z17(z_max, budget);
  else
    fail(ErrorKind::invalid_argument, "unknown search mode \"" + mode + "\"");
  Json trivial = Json::array(), nontrivial = Json::array();
  for (const auto& s : rep.solutions) (s.trivial ? trivial : nontrivial).push_back(to_json(s));
  CommandResult r;
  r.body = {{"mode", rep.mode},
            {"z_max", rep.z_max},
            {"z_exponent", rep.z_exponent},
            {"steps", rep.steps},
            {"budget", budget},
            {"trivial", trivial},
            {"nontrivial", nontrivial}};
  if (mode == "z3p") {
    r.body["p"] = rep.p;
    r.body["n"] = rep.n;
  }
  return r;
}

}  // namespace fmk
