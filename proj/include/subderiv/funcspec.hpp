#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "subderiv/prime_set.hpp"
#include "subderiv/rational.hpp"

namespace subderiv {

// Rule applied to every prime without an explicit override.
enum class DefaultKind { Const, PrimeItself, ReciprocalPrime };

struct DefaultRule {
  DefaultKind kind = DefaultKind::Const;
  Rational value;  // meaningful only when kind == Const

  static DefaultRule constant(const Rational& v) { return {DefaultKind::Const, v}; }
  static DefaultRule prime_itself() { return {DefaultKind::PrimeItself, 0}; }
  static DefaultRule reciprocal_prime() { return {DefaultKind::ReciprocalPrime, 0}; }

  // Value at a prime p.
  Rational apply(const Integer& p) const;

  // True when some prime maps to zero under this rule.
  bool can_vanish() const { return kind == DefaultKind::Const && value.is_zero(); }

  friend bool operator==(const DefaultRule& a, const DefaultRule& b) {
    return a.kind == b.kind && (a.kind != DefaultKind::Const || a.value == b.value);
  }
};

// A rational value for every prime: finitely many overrides on top of a
// default rule.  Override keys are validated to be prime at construction;
// at() assumes its argument is prime.
class PrimeMap {
 public:
  explicit PrimeMap(DefaultRule def, std::map<Integer, Rational> overrides = {});

  Rational at(const Integer& p) const;

  const std::map<Integer, Rational>& overrides() const { return overrides_; }
  const DefaultRule& default_rule() const { return default_; }

  // True when no prime maps to zero.
  bool never_zero() const;

 private:
  DefaultRule default_;
  std::map<Integer, Rational> overrides_;
};

// g(n) = sum over p of nu_p(n) * x(p); completely additive.
struct CAdditiveSpec {
  PrimeMap x;
};

// h(n) = product over p of y(p)^nu_p(n); completely multiplicative and
// nowhere zero, which the constructor enforces on y.
struct CMultiplicativeSpec {
  explicit CMultiplicativeSpec(PrimeMap y_map);

  PrimeMap y;
};

// f(n) = (sum nu_p(n) * x(p)/y(p)) * (product y(p)^nu_p(n)); the y part must
// be nowhere zero, enforced at construction.
struct LAdditiveSpec {
  LAdditiveSpec(PrimeMap x_map, PrimeMap y_map);

  PrimeMap x;
  PrimeMap y;
};

// All eval arguments must satisfy n >= 1; value at 1 is the empty sum/product.
Rational eval_c_additive(const CAdditiveSpec& spec, const Integer& n);
Rational eval_c_multiplicative(const CMultiplicativeSpec& spec, const Integer& n);
Rational eval_l_additive(const LAdditiveSpec& spec, const Integer& n);

// f(p^a) = a * x(p) * y(p)^(a-1) without factoring.  p must be prime.
Rational eval_prime_power(const LAdditiveSpec& spec, const Integer& p, unsigned long a);

// Subderivative with respect to a prime set S: x = 1 on S and 0 off it,
// y(p) = p everywhere.
LAdditiveSpec subderivative_spec(const PrimeSet& s);

// Logarithmic subderivative: x = 1/p on S and 0 off it.
CAdditiveSpec log_subderivative_spec(const PrimeSet& s);

CMultiplicativeSpec identity_spec();  // n -> n
CMultiplicativeSpec unit_spec();      // n -> 1
LAdditiveSpec zero_spec();            // n -> 0

// Embeds a completely additive g as the Leibniz form with h = 1.
LAdditiveSpec as_l_additive(const CAdditiveSpec& g);

using BuiltinSpec = std::variant<CAdditiveSpec, CMultiplicativeSpec, LAdditiveSpec>;

// Named functions: "D", "D_S", "ld", "ld_S", "N", "E", "theta".  The _S forms
// require a prime set; D and ld default to all primes; N, E, theta reject one.
BuiltinSpec builtin(const std::string& name, const std::optional<PrimeSet>& s = std::nullopt);

// JSON wire format:
//   {"x": {"overrides": {"2": "1/3"}, "default": {"kind": "const", "value": "0"}},
//    "y": {"overrides": {}, "default": {"kind": "prime"}}}
// Kinds: "const" (requires "value"), "prime", "reciprocal-prime" (no "value").
// Override keys must be primes, values canonical rationals; unknown keys are
// rejected.  Serialization round-trips exactly.
LAdditiveSpec spec_from_json(const std::string& text);
std::string spec_to_json(const LAdditiveSpec& spec);

// {"g": {...}, "h": {...}} with each side in the prime-map wire format.
std::string decomposition_to_json(const CAdditiveSpec& g, const CMultiplicativeSpec& h);

// {"2": "2", "3": "3", ...} — values at primes, keys in numeric order.
std::string prime_values_to_json(const std::map<Integer, Rational>& values);

}  // namespace subderiv
