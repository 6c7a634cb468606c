#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subderiv/funcspec.hpp"
#include "subderiv/table.hpp"

namespace subderiv {

// Primes up to a bound, split by whether the table value is nonzero there.
struct SupportPartition {
  std::vector<Integer> u_primes;     // f(p) != 0
  std::vector<Integer> v_primes;     // f(p) == 0
  std::optional<Integer> witness_q;  // smallest u-prime, when one exists
};

// Requires prime_bound <= table.limit().
SupportPartition support_partition(const FunctionTable& table, std::uint64_t prime_bound);

// Recovers h at every prime p <= prime_bound from a table of f:
//   f(p) != 0:  h(p) = f(p^2) / (2 f(p))
//   f(p) == 0:  h(p) = f(p q) / f(q), q the smallest prime with f(q) != 0
// Throws std::domain_error when f vanishes at every prime <= prime_bound
// (every h is consistent with such a table) or when a derived h value is
// zero; std::runtime_error when the table is too short for a needed entry.
std::map<Integer, Rational> reconstruct_h(const FunctionTable& table, std::uint64_t prime_bound);

// f = g * h with g(p) = x(p)/y(p) completely additive and h the y part.
// Throws std::domain_error when the quotient of the two default rules is not
// expressible as a default rule (finitely many overrides cannot capture it).
std::pair<CAdditiveSpec, CMultiplicativeSpec> decompose(const LAdditiveSpec& spec);

enum class Verdict {
  Holds,     // every in-range instance checked out
  Violated,  // witness found
  Vacuous,   // nothing to check (no qualifying instance)
};

struct Witness {
  std::string summary;
  std::vector<std::pair<std::string, std::string>> data;  // ordered key/value
};

struct ConditionCheck {
  Verdict verdict = Verdict::Vacuous;
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;  // instances whose entries fall outside the table
  std::optional<Witness> witness;
};

struct ConditionParams {
  std::uint64_t prime_bound = 30;
  unsigned max_exponent = 3;
};

// Structural consequences of the Leibniz rule, each checkable on a bare
// table.  u-primes are those with f(p) != 0, v-primes the others.
struct ConditionReport {
  // (f(p^{a+1}) / ((a+1) f(p)))^b == (f(p^{b+1}) / ((b+1) f(p)))^a
  // for u-primes p and 1 <= a < b <= max_exponent.
  ConditionCheck power_ratio;
  // f(p^a q^b) == f(p^a) f(q^{b+1}) / ((b+1) f(q))
  //             + f(q^b) f(p^{a+1}) / ((a+1) f(p))
  // for distinct u-primes p < q and 0 <= a, b <= max_exponent.
  ConditionCheck cross_product;
  // f(p q1) f(q2) == f(p q2) f(q1) with both products nonzero, for v-primes p
  // and u-primes q1 <= q2.
  ConditionCheck cancellation;
  // f(p^2) != 0 for u-primes p.
  ConditionCheck square_nonzero;
  // f(mn) == f(m) h(n) + f(n) h(m) over the tested pairs; filled in by
  // check_l_additive, Vacuous when only check_conditions ran.
  ConditionCheck pair_additivity;
};

ConditionReport check_conditions(const FunctionTable& table, const ConditionParams& params);

struct LAdditivityCheck {
  bool accepted = false;
  std::string rejection;  // empty when accepted

  // Reconstructed h and g = f/h at primes <= prime_bound that were
  // resolvable from the table (accepted runs only).
  std::map<Integer, Rational> h_at_prime;
  std::map<Integer, Rational> g_at_prime;

  ConditionReport report;
  std::uint64_t pairs_checked = 0;
  std::uint64_t pairs_skipped = 0;  // h unresolved for one of the factors
};

// Decides whether the table restricted to [1, limit] can be L-additive:
// builds the only candidate h prime by prime and then verifies the Leibniz
// identity on every pair m <= n with m * n <= limit.  The first failing pair
// in that order is reported, phrased additively via g = f/h.
LAdditivityCheck check_l_additive(const FunctionTable& table, std::uint64_t prime_bound);

}  // namespace subderiv
