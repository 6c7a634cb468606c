#include "subderiv/subderivative.hpp"

#include <stdexcept>

#include "subderiv/primes.hpp"

namespace subderiv {

Integer subderivative(const Integer& n, const PrimeSet& s) {
  if (n < 1) throw std::invalid_argument("subderivative: argument must be >= 1");
  Integer acc = 0;
  for (const PrimePower& pp : factorize(n)) {
    if (!s.contains(pp.prime)) continue;
    acc += pp.exponent * (n / pp.prime);  // exact: pp.prime divides n
  }
  return acc;
}

Integer arithmetic_derivative(const Integer& n) {
  return subderivative(n, PrimeSet::all());
}

Integer partial_derivative(const Integer& n, const Integer& p) {
  if (!is_prime(p)) throw std::invalid_argument("partial_derivative: " + p.get_str() + " is not prime");
  return subderivative(n, PrimeSet::finite({p}));
}

Rational log_subderivative(const Integer& n, const PrimeSet& s) {
  if (n < 1) throw std::invalid_argument("log_subderivative: argument must be >= 1");
  Rational acc = 0;
  for (const PrimePower& pp : factorize(n)) {
    if (!s.contains(pp.prime)) continue;
    acc += Rational(Integer(pp.exponent), pp.prime);
  }
  return acc;
}

}  // namespace subderiv
