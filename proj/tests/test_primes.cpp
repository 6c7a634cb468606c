#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "subderiv/primes.hpp"

using namespace subderiv;

namespace {

// Oracle: trial division, nothing shared with the library.
bool trial_is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Oracle: Miller-Rabin to base 2 on 64-bit words via 128-bit products.
bool mr2(std::uint64_t n) {
  if (n % 2 == 0) return n == 2;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  auto mulmod = [n](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
  };
  std::uint64_t x = 1;
  std::uint64_t base = 2 % n;
  for (std::uint64_t e = d; e > 0; e >>= 1) {
    if (e & 1) x = mulmod(x, base);
    base = mulmod(base, base);
  }
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod(x, x);
    if (x == n - 1) return true;
  }
  return false;
}

// Oracle: Lucas-Lehmer test for 2^p - 1 with p an odd prime.
bool lucas_lehmer(unsigned p) {
  const Integer m = pow2(p) - 1;
  Integer s = 4;
  for (unsigned i = 0; i + 2 < p; ++i) {
    s = (s * s - 2) % m;
  }
  return s == 0;
}

}  // namespace

TEST_CASE("small_primes basics") {
  const auto& primes = small_primes();
  REQUIRE(primes.size() >= 5);
  CHECK(primes[0] == 2);
  CHECK(primes[1] == 3);
  CHECK(primes[2] == 5);
  CHECK(primes[3] == 7);
  CHECK(primes[4] == 11);
  CHECK(primes.size() == 78498);  // pi(10^6)
  CHECK(primes.back() == 999983);
}

TEST_CASE("sieve against trial division below 1e5") {
  std::size_t idx = 0;
  const auto& primes = small_primes();
  for (std::uint64_t n = 2; n <= 100000; ++n) {
    const bool prime = trial_is_prime(n);
    CHECK(is_prime(Integer(static_cast<unsigned long>(n))) == prime);
    if (prime) {
      REQUIRE(idx < primes.size());
      CHECK(primes[idx] == n);
      ++idx;
      CHECK(smallest_prime_factor(n) == n);
    } else {
      const std::uint32_t p = smallest_prime_factor(n);
      CHECK(n % p == 0);
      CHECK(trial_is_prime(p));
      // smallest: no smaller divisor > 1
      for (std::uint32_t d = 2; d < p; ++d) CHECK(n % d != 0);
    }
  }
}

TEST_CASE("is_prime edge cases") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(Integer(-7)));
  CHECK(is_prime(2));
  CHECK(is_prime(999983));
  CHECK_FALSE(is_prime(999983ul * 2));
}

TEST_CASE("carmichael and strong-pseudoprime boundaries") {
  // Carmichael numbers fool Fermat tests; these must all be composite.
  for (unsigned long n : {561ul, 1105ul, 1729ul, 2465ul, 2821ul, 6601ul, 8911ul}) {
    CHECK_FALSE(is_prime(Integer(n)));
  }
  // Smallest composites passing Miller-Rabin for prefixes of {2,3,5,...}:
  // each is the exact threshold where one more witness becomes necessary.
  for (const char* s : {"2047", "1373653", "25326001", "3215031751", "2152302898747", "3474749660383",
                        "341550071728321", "3825123056546413051", "318665857834031151167461",
                        "3317044064679887385961981"}) {
    CAPTURE(s);
    CHECK_FALSE(is_prime(Integer(s)));
  }
}

TEST_CASE("large primes and composites beyond the witness ladder") {
  const Integer m61 = pow2(61) - 1;  // Mersenne prime
  const Integer m67 = pow2(67) - 1;  // Mersenne composite: 193707721 * 761838257287
  const Integer m89 = pow2(89) - 1;  // Mersenne prime, above the proven ladder

  CHECK(lucas_lehmer(61));
  CHECK_FALSE(lucas_lehmer(67));
  CHECK(lucas_lehmer(89));

  CHECK(is_prime(m61));
  CHECK_FALSE(is_prime(m67));
  CHECK(is_prime(m89));
  CHECK(is_prime(Integer("1000000000000000009")));

  // composite products of large primes
  CHECK_FALSE(is_prime(m61 * (pow2(31) - 1)));
  CHECK_FALSE(is_prime(m61 * m61));  // perfect square exercises the Lucas pre-check
  CHECK_FALSE(is_prime(m89 * m89));
}

TEST_CASE("strong Lucas agrees with BPSW expectations below 1e5") {
  // No composite below 1e5 (or anywhere known) passes both Miller-Rabin
  // base 2 and the strong Lucas test; every prime passes both.
  for (std::uint64_t n = 3; n <= 100000; n += 2) {
    const Integer nn(static_cast<unsigned long>(n));
    if (mpz_perfect_square_p(nn.get_mpz_t())) continue;
    const bool bpsw = mr2(n) && detail::strong_lucas_probable_prime(nn);
    CAPTURE(n);
    CHECK(bpsw == trial_is_prime(n));
  }
  // Strong Lucas alone admits pseudoprimes; the first is 5459 = 53 * 103.
  CHECK(detail::strong_lucas_probable_prime(5459));
  CHECK_FALSE(trial_is_prime(5459));
}

TEST_CASE("factorize basic shapes") {
  CHECK(factorize(1).empty());
  CHECK(factorize(2) == Factorization{{2, 1}});
  CHECK(factorize(360) == Factorization{{2, 3}, {3, 2}, {5, 1}});
  CHECK(factorize(999983) == Factorization{{999983, 1}});
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
  CHECK_THROWS_AS(factorize(Integer(-4)), std::invalid_argument);
}

TEST_CASE("factorize and unfactor round-trip with correct valuations") {
  for (unsigned long n = 1; n <= 200000; ++n) {
    const Factorization f = factorize(n);
    CHECK(unfactor(f) == n);
    Integer prev = 1;
    for (const PrimePower& pp : f) {
      CHECK(pp.prime > prev);
      prev = pp.prime;
      CHECK(pp.exponent >= 1);
      // valuation check: p^e | n, p^(e+1) does not
      const Integer pe = ipow(pp.prime, pp.exponent);
      CHECK(n % pe == 0);
      CHECK(Integer(n % (pe * pp.prime)) != 0);
    }
  }
}

TEST_CASE("factorize beyond the sieve uses rho and the primality test") {
  // semiprime of two 7-digit primes
  const Integer a(1000003), b(1000033);
  CHECK(factorize(a * b) == Factorization{{a, 1}, {b, 1}});
  // semiprime of two 10-digit primes
  const Integer c(1000000007), d(1000000009);
  CHECK(factorize(c * d) == Factorization{{c, 1}, {d, 1}});
  // mixed small and large factors, with squares
  const Integer n = ipow(2, 4) * ipow(c, 2) * b;
  CHECK(factorize(n) == Factorization{{2, 4}, {b, 1}, {c, 2}});
  // large prime alone
  const Integer m61 = pow2(61) - 1;
  CHECK(factorize(m61) == Factorization{{m61, 1}});
  // a Mersenne composite with no small factors
  const Integer m67 = pow2(67) - 1;
  CHECK(factorize(m67) == Factorization{{193707721, 1}, {Integer("761838257287"), 1}});
}

TEST_CASE("nu and prime_multiset") {
  CHECK(nu(48, 2) == 4);
  CHECK(nu(48, 3) == 1);
  CHECK(nu(48, 5) == 0);
  CHECK(nu(1, 7) == 0);
  const Integer big = ipow(Integer("1000000007"), 3) * 2;
  CHECK(nu(big, Integer("1000000007")) == 3);
  CHECK(prime_multiset(12) == std::vector<Integer>{2, 2, 3});
  CHECK(prime_multiset(1).empty());
  CHECK(prime_multiset(97) == std::vector<Integer>{97});
}

TEST_CASE("smallest_prime_factor domain") {
  CHECK(smallest_prime_factor(2) == 2);
  CHECK(smallest_prime_factor(kSieveBound) == 2);
  CHECK(smallest_prime_factor(999983) == 999983);
}
