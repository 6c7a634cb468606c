#pragma once

#include <string>
#include <vector>

#include "subderiv/funcspec.hpp"
#include "subderiv/rational.hpp"

namespace subderiv {

// Every verdict claims lhs <= rhs; the sides are chosen so that the
// comparison is exact in rational arithmetic (fractional exponents are
// cleared by raising both sides to an integer power first).
enum class Relation { Strict, Equal, Violated, PreconditionViolated };

struct BoundVerdict {
  std::string name;
  Rational lhs;
  Rational rhs;
  Relation relation = Relation::Strict;
  std::string note;  // reason for a failed precondition; empty otherwise
};

// Quantities shared by the extended bounds.  q_list is the prime multiset
// q_1 <= ... <= q_r of n; p_list keeps the q_i where x is nonzero (s = its
// size); f_max and f_min are the extremes of x over the whole q-list.
struct BoundContext {
  Integer n;
  std::vector<Integer> q_list;
  std::vector<Integer> p_list;
  unsigned r = 0;
  unsigned s = 0;
  Rational f_max;
  Rational f_min;
  Rational f_n;
  Rational h_n;
};

// Requires n >= 2.
BoundContext bound_context(const LAdditiveSpec& spec, const Integer& n);

// The chain for the full derivative D, in integer-comparable form:
//   am-gm-lower:    r^r * n^(r-1)  vs  D(n)^r
//   linear-upper:   2 D(n)         vs  r n
//   log2-upper:     2^r            vs  n
std::vector<BoundVerdict> classic_bounds(const Integer& n);

// westrick-upper: 2 D(n) vs (r-1) n + 2^r.
BoundVerdict westrick_bound(const Integer& n);

// The linear cap exceeds the refined one by (n - 2^r)/2, so the refinement
// is genuine exactly when 2^r <= n; stored as westrick-vs-linear.
BoundVerdict westrick_improvement(const Integer& n);

// scaled-linear-upper: f(n) vs s M h(n) / 2, and scaled-log2-upper: 2^s vs n
// (both sides zero when s = 0, reported Equal).  Preconditions: x >= 0 over
// the q-list, y(p) >= p over the p-list, h(n) > 0.
std::vector<BoundVerdict> extended_upper(const LAdditiveSpec& spec, const Integer& n);

// extended-westrick-upper: f(n) vs ((s-1) h(n) / 2 + y(2)^(s-1)) M.  On top
// of the extended_upper preconditions this requires s == r: the bound is
// derived for n built from u-primes only, and fails otherwise (the sides are
// still reported).
BoundVerdict extended_westrick(const LAdditiveSpec& spec, const Integer& n);

// scaled-am-gm-lower: r^r m^r h(n)^(r-1) vs f(n)^r.  Preconditions: x >= 0
// and y > 0 over the q-list.
BoundVerdict extended_lower(const LAdditiveSpec& spec, const Integer& n);

// Where a bound holds with equality; the classes that actually occur.
enum class EqualityClass { Prime, PowerOfTwo, PrimePower, TwoSmoothTail, Other };

struct EqualityClassification {
  EqualityClass cls = EqualityClass::Other;
  Integer base;          // p for prime and prime-power, 2 for power-of-two
  unsigned exponent = 0; // k in p^k where applicable
};

// Precedence: prime, power-of-two, prime-power, two-smooth-tail, other.
// Requires n >= 2.
EqualityClassification classify_equality(const Integer& n);

std::string equality_class_name(EqualityClass cls);
std::string relation_name(Relation relation);

bool is_prime_power(const Integer& n);  // p^k with k >= 1
bool is_power_of_two(const Integer& n); // 2^k with k >= 1

// q_1 = ... = q_{r-1} = 2 in the sorted prime multiset; vacuously true for
// primes, true for powers of two.
bool has_two_smooth_tail(const Integer& n);

}  // namespace subderiv
