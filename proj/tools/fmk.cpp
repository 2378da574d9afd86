#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fmk/commands.hpp"

using namespace fmk;

namespace {

const CLI::Validator kFieldPrime(
    [](const std::string& s) -> std::string {
      try {
        std::size_t used = 0;
        const long p = std::stol(s, &used);
        if (used == s.size() && p >= 5 && is_prime_u64(static_cast<std::uint64_t>(p))) return {};
      } catch (const std::exception&) {
      }
      return "p must be a prime >= 5, got " + s;
    },
    "PRIME>=5");

Int parse_int_flag(const std::string& name, const std::string& s) {
  require(!s.empty(), ErrorKind::invalid_argument, name + ": empty value");
  return parse_int(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computations for x^2 + y^(2n) = z^(3p) and x^(2l) + y^(2m) = z^17"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");

  int p = 0;
  std::string a_str, b_str, z_str, kind_str = "E", newforms_path, primes_str, mode;
  int j_idx = 0, k_idx = 0;
  unsigned long ell = 0;
  long floor = 5, n = 1, z_max = 0, search_p = 7;
  std::string constants_path = default_data_path("constants.json"), curves_path = default_data_path("curves96.json");

  auto* field = app.add_subcommand("field", "Field data, unit lemma and splitting of 2, 3, p");
  field->add_option("--p", p)->required()->check(kFieldPrime);

  auto* descent = app.add_subcommand("descent", "Factorization identity and witness checks");
  descent->add_option("--p", p)->required()->check(kFieldPrime);
  descent->add_option("--a", a_str)->required();
  descent->add_option("--b", b_str)->required();
  descent->add_option("--z", z_str, "Check z^3 = a^2 + b^2");
  auto* ell_opt = descent->add_option("--ell", ell, "Check the ell-th power conditions")->check(CLI::Range(2ul, 1000000ul));

  auto* frey = app.add_subcommand("frey", "Frey curve and local data");
  frey->add_option("--p", p)->required()->check(kFieldPrime);
  frey->add_option("--a", a_str)->required();
  frey->add_option("--b", b_str)->required();
  auto* j_opt = frey->add_option("--j", j_idx)->check(CLI::PositiveNumber);
  auto* k_opt = frey->add_option("--k", k_idx)->check(CLI::PositiveNumber);
  frey->add_option("--kind", kind_str)->check(CLI::IsMember({"E", "F1", "F2"}));

  auto* bounds = app.add_subcommand("bounds", "Bound constants and the p=7 endgame");
  bounds->add_option("--p", p)->required()->check(kFieldPrime);
  bounds->add_option("--constants", constants_path);
  bounds->add_option("--curves", curves_path, "Rational curves for the p=7 endgame");

  auto* sieve = app.add_subcommand("sieve", "Newform elimination sieve");
  sieve->add_option("--newforms", newforms_path)->required();
  sieve->add_option("--p", p)->required()->check(kFieldPrime);
  sieve->add_option("--kind", kind_str)->required()->check(CLI::IsMember({"F1", "F2"}));
  sieve->add_option("--primes", primes_str, "Comma-separated q or q:index")->required();
  sieve->add_option("--floor", floor, "Primes at or below this are not counted as survivors")->check(CLI::NonNegativeNumber);
  auto* sj_opt = sieve->add_option("--j", j_idx)->check(CLI::PositiveNumber);
  auto* sk_opt = sieve->add_option("--k", k_idx)->check(CLI::PositiveNumber);

  auto* search = app.add_subcommand("search", "Desk-scale search for primitive solutions");
  search->add_option("--mode", mode)->required()->check(CLI::IsMember({"z3p", "z17"}));
  search->add_option("--p", search_p)->check(CLI::PositiveNumber);
  search->add_option("--n", n)->check(CLI::PositiveNumber);
  search->add_option("--max", z_max, "Bound on z")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  const std::vector<std::string> args(argv + 1, argv + argc);
  CLI::App* cmd = app.get_subcommands().front();
  try {
    CommandResult result;
    if (cmd == field) {
      result = cmd_field(p);
    } else if (cmd == descent) {
      std::optional<Int> z;
      if (!z_str.empty()) z = parse_int_flag("--z", z_str);
      result = cmd_descent(p, parse_int_flag("--a", a_str), parse_int_flag("--b", b_str), z,
                           ell_opt->count() ? std::optional<unsigned long>(ell) : std::nullopt);
    } else if (cmd == frey) {
      const FreyKind kind = parse_frey_kind(kind_str);
      const bool is_e = kind == FreyKind::E_jk;
      result = cmd_frey(p, parse_int_flag("--a", a_str), parse_int_flag("--b", b_str), j_opt->count() ? j_idx : 1,
                        k_opt->count() ? k_idx : (is_e ? 2 : 4), kind);
    } else if (cmd == bounds) {
      result = cmd_bounds(p, constants_path, curves_path);
    } else if (cmd == sieve) {
      result = cmd_sieve(p, newforms_path, parse_frey_kind(kind_str), primes_str, floor, sj_opt->count() ? j_idx : 1,
                         sk_opt->count() ? k_idx : 4, default_threads());
    } else {
      result = cmd_search(mode, search_p, n, z_max);
    }
    const Json report{{"header", repro_header(cmd->get_name(), args, result.inputs)}, {"report", result.body}};
    if (out_path.empty())
      std::cout << serialize(report);
    else
      emit_report(report, out_path);
    return result.exit_code;
  } catch (const Error& e) {
    std::cerr << "fmk " << cmd->get_name() << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}
