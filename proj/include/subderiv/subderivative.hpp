#pragma once

#include "subderiv/prime_set.hpp"
#include "subderiv/rational.hpp"

namespace subderiv {

// D_S(n) = n * sum over primes p in S of nu_p(n)/p, computed term by term as
// nu_p(n) * (n/p).  Always an integer.  Requires n >= 1; D_S(1) = 0.
Integer subderivative(const Integer& n, const PrimeSet& s);

// D(n) with S = all primes.
Integer arithmetic_derivative(const Integer& n);

// D_{p}(n) = nu_p(n) * n/p for a single prime p (throws if p is not prime).
Integer partial_derivative(const Integer& n, const Integer& p);

// ld_S(n) = D_S(n)/n = sum of nu_p(n)/p over p in S.
Rational log_subderivative(const Integer& n, const PrimeSet& s);

}  // namespace subderiv
