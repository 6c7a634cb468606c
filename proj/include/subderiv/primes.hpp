#pragma once

#include <cstdint>
#include <vector>

#include "subderiv/rational.hpp"

namespace subderiv {

// Everything up to this bound is handled by a smallest-prime-factor sieve;
// larger inputs fall back to deterministic Miller-Rabin witness sets (proven
// correct below ~3.3e24), a strong Lucas test beyond that, and Pollard rho
// for splitting composites.
inline constexpr std::uint64_t kSieveBound = 1'000'000;

// Primes up to kSieveBound, ascending.
const std::vector<std::uint32_t>& small_primes();

// Smallest prime factor of k; requires 2 <= k <= kSieveBound.
std::uint32_t smallest_prime_factor(std::uint64_t k);

struct PrimePower {
  Integer prime;
  unsigned exponent;

  friend bool operator==(const PrimePower& a, const PrimePower& b) {
    return a.prime == b.prime && a.exponent == b.exponent;
  }
};

// Prime factorization with primes strictly increasing and exponents >= 1.
// The empty vector is the factorization of 1.
using Factorization = std::vector<PrimePower>;

bool is_prime(const Integer& n);

// Throws std::invalid_argument for n < 1.
Factorization factorize(const Integer& n);

// Product of the listed prime powers; inverse of factorize.
Integer unfactor(const Factorization& f);

// p-adic valuation of n.  Requires n >= 1 and p prime.
unsigned nu(const Integer& n, const Integer& p);

// Prime divisors of n listed with multiplicity, ascending.  Empty for n == 1.
std::vector<Integer> prime_multiset(const Integer& n);

namespace detail {
// Strong Lucas probable-prime test (Selfridge parameters) for odd n >= 3
// that is not a perfect square.  Exposed for direct testing; is_prime
// combines it with Miller-Rabin base 2 outside the proven witness range.
bool strong_lucas_probable_prime(const Integer& n);
}  // namespace detail

}  // namespace subderiv
