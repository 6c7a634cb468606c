// Command-line front end: exact arithmetic subderivatives, Leibniz-additive
// function specs, reconstruction, condition checking, bound verdicts, and the
// verification sweep.
//
// Exit codes: 0 success / property holds, 1 property rejected or violated,
// 2 usage or input error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "subderiv/bounds.hpp"
#include "subderiv/funcspec.hpp"
#include "subderiv/prime_set.hpp"
#include "subderiv/primes.hpp"
#include "subderiv/rational.hpp"
#include "subderiv/reconstruction.hpp"
#include "subderiv/subderivative.hpp"
#include "subderiv/sweep.hpp"
#include "subderiv/table.hpp"

namespace {

using namespace subderiv;

std::vector<Integer> parse_prime_list(const std::string& csv) {
  std::vector<Integer> out;
  std::string token;
  std::istringstream in(csv);
  while (std::getline(in, token, ',')) {
    if (token.empty()) throw std::invalid_argument("empty entry in prime list '" + csv + "'");
    out.push_back(parse_integer(token));
  }
  if (out.empty()) throw std::invalid_argument("prime list must not be empty");
  return out;
}

struct SetFlags {
  bool all = false;
  std::string set_csv;
  std::string complement_csv;
  CLI::Option* set_opt = nullptr;
  CLI::Option* comp_opt = nullptr;

  void attach(CLI::App* cmd) {
    auto* all_opt = cmd->add_flag("--all", all, "use the set of all primes");
    set_opt = cmd->add_option("--set", set_csv, "comma-separated primes, e.g. 2,5");
    comp_opt = cmd->add_option("--complement", complement_csv, "all primes except these");
    all_opt->excludes(set_opt)->excludes(comp_opt);
    set_opt->excludes(comp_opt);
  }

  bool set_given() const { return set_opt != nullptr && set_opt->count() > 0; }
  bool comp_given() const { return comp_opt != nullptr && comp_opt->count() > 0; }
  bool given() const { return all || set_given() || comp_given(); }

  // Defaults to all primes when no flag was given.  An explicitly empty list
  // is an error either way: S must be a nonempty set of primes.
  PrimeSet build() const {
    if (set_given()) return PrimeSet::finite(parse_prime_list(set_csv));
    if (comp_given()) return PrimeSet::complement(parse_prime_list(complement_csv));
    return PrimeSet::all();
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FunctionTable load_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return FunctionTable::load_csv(in);
}

std::string approx_column(const Rational& v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v.approx());
  return buf;
}

void print_value(const Rational& v, bool with_float) {
  if (with_float) {
    std::cout << v.str() << "\t" << approx_column(v) << "\n";
  } else {
    std::cout << v.str() << "\n";
  }
}

std::string format_verdict(const BoundVerdict& v) {
  std::string rel = relation_name(v.relation);
  if (v.relation == Relation::PreconditionViolated && !v.note.empty()) rel += "(" + v.note + ")";
  return v.name + ": " + v.lhs.str() + " " + rel + " " + v.rhs.str();
}

// Builtin names accepted where an L-additive spec is needed.
LAdditiveSpec builtin_l_additive(const std::string& name, const std::optional<PrimeSet>& s) {
  const BuiltinSpec b = builtin(name, s);
  if (const auto* f = std::get_if<LAdditiveSpec>(&b)) return *f;
  if (const auto* g = std::get_if<CAdditiveSpec>(&b)) return as_l_additive(*g);
  throw std::invalid_argument("builtin '" + name + "' is not Leibniz-additive");
}

std::string builtin_label(const std::string& name, const SetFlags& flags) {
  if (!flags.given() || flags.all) return name;
  return name + "_" + flags.build().str();
}

int run(int argc, char** argv) {
  CLI::App app{"Exact arithmetic subderivatives and Leibniz-additive functions"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---- factor ----------------------------------------------------------
  std::string factor_n;
  auto* cmd_factor = app.add_subcommand("factor", "print the prime factorization of n");
  cmd_factor->add_option("n", factor_n, "positive integer")->required();
  cmd_factor->callback([&] {
    const Integer n = parse_integer(factor_n);
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (n == 1) {
      std::cout << "1\n";
      return;
    }
    std::string line;
    for (const PrimePower& pp : factorize(n)) {
      if (!line.empty()) line += " * ";
      line += pp.prime.get_str();
      if (pp.exponent > 1) line += "^" + std::to_string(pp.exponent);
    }
    std::cout << line << "\n";
  });

  // ---- deriv / ld ------------------------------------------------------
  std::string deriv_n;
  SetFlags deriv_set;
  bool deriv_float = false;
  auto* cmd_deriv = app.add_subcommand("deriv", "arithmetic subderivative D_S(n)");
  cmd_deriv->add_option("n", deriv_n, "positive integer")->required();
  deriv_set.attach(cmd_deriv);
  cmd_deriv->add_flag("--float", deriv_float, "append an approximate decimal column");
  cmd_deriv->callback([&] {
    const Integer n = parse_integer(deriv_n);
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    print_value(Rational(subderivative(n, deriv_set.build())), deriv_float);
  });

  std::string ld_n;
  SetFlags ld_set;
  bool ld_float = false;
  auto* cmd_ld = app.add_subcommand("ld", "logarithmic subderivative ld_S(n) = D_S(n)/n");
  cmd_ld->add_option("n", ld_n, "positive integer")->required();
  ld_set.attach(cmd_ld);
  cmd_ld->add_flag("--float", ld_float, "append an approximate decimal column");
  cmd_ld->callback([&] {
    const Integer n = parse_integer(ld_n);
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    print_value(log_subderivative(n, ld_set.build()), ld_float);
  });

  // ---- eval / decompose ------------------------------------------------
  std::string eval_spec_path, eval_n;
  bool eval_float = false;
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a function-spec JSON file at n");
  cmd_eval->add_option("spec", eval_spec_path, "spec JSON file")->required();
  cmd_eval->add_option("n", eval_n, "positive integer")->required();
  cmd_eval->add_flag("--float", eval_float, "append an approximate decimal column");
  cmd_eval->callback([&] {
    const LAdditiveSpec spec = spec_from_json(read_file(eval_spec_path));
    const Integer n = parse_integer(eval_n);
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    print_value(eval_l_additive(spec, n), eval_float);
  });

  std::string decompose_spec_path;
  auto* cmd_decompose = app.add_subcommand("decompose", "split a spec into g (additive) and h (multiplicative)");
  cmd_decompose->add_option("spec", decompose_spec_path, "spec JSON file")->required();
  cmd_decompose->callback([&] {
    const LAdditiveSpec spec = spec_from_json(read_file(decompose_spec_path));
    const auto [g, h] = decompose(spec);
    std::cout << decomposition_to_json(g, h);
  });

  // ---- reconstruct / check ----------------------------------------------
  std::string recon_table_path;
  std::uint64_t recon_primes = 97;
  auto* cmd_recon = app.add_subcommand("reconstruct", "recover h at small primes from a value table");
  cmd_recon->add_option("table", recon_table_path, "CSV table of f")->required();
  cmd_recon->add_option("--primes", recon_primes, "reconstruct h(p) for primes p up to this bound");
  cmd_recon->callback([&] {
    if (recon_primes < 2) throw std::invalid_argument("--primes must be >= 2");
    const FunctionTable table = load_table(recon_table_path);
    const std::uint64_t bound = std::min<std::uint64_t>(recon_primes, table.limit());
    std::cout << prime_values_to_json(reconstruct_h(table, bound));
  });

  std::string check_table_path;
  std::uint64_t check_primes = 30;
  auto* cmd_check = app.add_subcommand("check", "decide whether a value table is Leibniz-additive");
  cmd_check->add_option("table", check_table_path, "CSV table of f")->required();
  cmd_check->add_option("--primes", check_primes, "resolve h(p) for primes p up to this bound");
  cmd_check->callback([&] {
    if (check_primes < 2) throw std::invalid_argument("--primes must be >= 2");
    const FunctionTable table = load_table(check_table_path);
    const LAdditivityCheck result = check_l_additive(table, std::min<std::uint64_t>(check_primes, table.limit()));
    if (result.accepted) {
      std::cout << "accepted\n";
      return;
    }
    std::cout << "rejected: " << result.rejection << "\n";
    if (result.report.pair_additivity.witness) {
      for (const auto& [k, v] : result.report.pair_additivity.witness->data) {
        std::cout << "  " << k << " = " << v << "\n";
      }
    }
    exit_code = 1;
  });

  // ---- bounds ------------------------------------------------------------
  std::string bounds_n, bounds_spec_path;
  auto* cmd_bounds = app.add_subcommand("bounds", "verdicts for the bound chain at n");
  cmd_bounds->add_option("n", bounds_n, "integer >= 2")->required();
  cmd_bounds->add_option("--spec", bounds_spec_path, "spec JSON file for the extended bounds");
  cmd_bounds->callback([&] {
    const Integer n = parse_integer(bounds_n);
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    std::vector<BoundVerdict> verdicts;
    if (bounds_spec_path.empty()) {
      verdicts = classic_bounds(n);
      verdicts.push_back(westrick_bound(n));
      verdicts.push_back(westrick_improvement(n));
    } else {
      const LAdditiveSpec spec = spec_from_json(read_file(bounds_spec_path));
      verdicts = extended_upper(spec, n);
      verdicts.push_back(extended_westrick(spec, n));
      verdicts.push_back(extended_lower(spec, n));
    }
    bool bad = false;
    for (const BoundVerdict& v : verdicts) {
      std::cout << format_verdict(v) << "\n";
      bad = bad || v.relation == Relation::Violated;
    }
    if (bad) exit_code = 1;
  });

  // ---- sweep --------------------------------------------------------------
  std::uint64_t sweep_max = 0;
  std::string sweep_props;
  std::vector<std::string> sweep_builtins, sweep_spec_paths;
  std::string sweep_table_path;
  SetFlags sweep_set;
  unsigned sweep_workers = 1;
  std::uint64_t sweep_cap = 100;
  auto* cmd_sweep = app.add_subcommand("sweep", "verify properties over [1, max] and print a JSON report");
  cmd_sweep->add_option("--max", sweep_max, "upper end of the range")->required();
  cmd_sweep->add_option("--props", sweep_props,
                        "comma-separated: leibniz, chain-eq10, westrick-eq11, extended-eq15, "
                        "extended-eq16, extended-lower, reconstruction-roundtrip, conditions")
      ->required();
  cmd_sweep->add_option("--builtin", sweep_builtins, "builtin function name (repeatable)");
  cmd_sweep->add_option("--spec", sweep_spec_paths, "spec JSON file (repeatable)");
  cmd_sweep->add_option("--table", sweep_table_path, "CSV table for table-driven properties");
  sweep_set.attach(cmd_sweep);
  cmd_sweep->add_option("--workers", sweep_workers, "worker threads (default 1)");
  cmd_sweep->add_option("--cap", sweep_cap, "maximum recorded violation witnesses per property");
  cmd_sweep->callback([&] {
    SweepConfig cfg;
    cfg.max_n = sweep_max;
    cfg.workers = sweep_workers;
    cfg.violation_cap = sweep_cap;
    const std::optional<PrimeSet> s = sweep_set.given() ? std::optional<PrimeSet>(sweep_set.build()) : std::nullopt;
    for (const std::string& name : sweep_builtins) {
      cfg.specs.push_back({builtin_label(name, sweep_set), builtin_l_additive(name, s)});
    }
    for (const std::string& path : sweep_spec_paths) {
      cfg.specs.push_back({path, spec_from_json(read_file(path))});
    }
    if (!sweep_table_path.empty()) {
      cfg.table = load_table(sweep_table_path);
      cfg.table_label = sweep_table_path;
    }
    std::string token;
    std::istringstream in(sweep_props);
    while (std::getline(in, token, ',')) cfg.properties.push_back(property_from_token(token));
    const SweepReport report = run_sweep(cfg);
    std::cout << report.to_json();
    if (report.has_violations()) exit_code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  return run(argc, argv);
}
