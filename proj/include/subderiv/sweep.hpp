#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subderiv/funcspec.hpp"
#include "subderiv/prime_set.hpp"
#include "subderiv/reconstruction.hpp"
#include "subderiv/table.hpp"

namespace subderiv {

enum class SweepProperty {
  Leibniz,                  // f(mn) == f(m) h(n) + f(n) h(m) on all pairs in range
  ChainBounds,              // the three-link chain for D
  WestrickBound,            // the refined upper bound for D and its relation to the linear cap
  ExtendedUpper,            // scaled linear/log2 uppers for each spec
  ExtendedWestrick,         // refined upper for each spec (requires s == r)
  ExtendedLower,            // scaled am-gm lower for each spec
  ReconstructionRoundtrip,  // h recovered from a value table matches and rebuilds the table
  Conditions,               // structural conditions on a value table
};

// Wire tokens: leibniz, chain-eq10, westrick-eq11, extended-eq15,
// extended-eq16, extended-lower, reconstruction-roundtrip, conditions.
SweepProperty property_from_token(const std::string& token);
std::string property_token(SweepProperty property);

struct SpecEntry {
  std::string label;
  LAdditiveSpec spec;
};

struct SweepConfig {
  std::uint64_t max_n = 10000;  // range [2, max_n]; at most the sieve bound
  std::vector<SpecEntry> specs;            // spec-driven properties
  std::optional<FunctionTable> table;      // table-driven properties
  std::string table_label = "table";
  std::vector<SweepProperty> properties;   // nonempty; report keeps this order
  unsigned workers = 1;
  std::uint64_t condition_prime_bound = 30;
  unsigned condition_max_exponent = 3;
  std::uint64_t reconstruction_prime_bound = 97;
  std::uint64_t violation_cap = 100;  // stored witnesses; counts are never capped
};

// A spot where observed equality behaviour differs from the documented
// equality set of a bound.  Deviations are findings, not failures: they do
// not affect has_violations() or exit codes.
struct Deviation {
  std::string subject;
  std::string claim;
  std::string observed;
  std::string witness;  // smallest n in range exhibiting the difference
  std::uint64_t count = 0;
};

struct PropertyReport {
  std::string property;
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
  std::uint64_t violation_count = 0;
  std::vector<Witness> violations;  // first violation_cap of them, scan order
  // link name (prefixed with the spec label where one applies) -> equality
  // class -> number of equality cases
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::uint64_t>>>> equality_classes;
  std::vector<Deviation> deviations;
};

struct SweepReport {
  std::vector<PropertyReport> properties;

  bool has_violations() const;

  // Two-space indented JSON, one object per property in config order.
  // Byte-identical output for identical configs regardless of worker count.
  std::string to_json() const;
};

// Deterministic: chunked scan with results merged in chunk order, so the
// report does not depend on the worker count.
SweepReport run_sweep(const SweepConfig& config);

// D_S(n) straight from the definition: factor n by ascending trial division
// (no sieve, no shared factoring code) and sum nu_p(n) * n/p over p in S.
Integer definition_oracle_D(const Integer& n, const PrimeSet& s);

}  // namespace subderiv
