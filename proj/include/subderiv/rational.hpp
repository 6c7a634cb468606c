#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <string_view>

namespace subderiv {

// Arbitrary-precision signed integer.  Operations that need nonnegative or
// positive arguments check for themselves; the type carries no constraint.
using Integer = mpz_class;

// base^exp by binary exponentiation.  ipow(0, 0) == 1.
Integer ipow(const Integer& base, unsigned long exp);

// 2^exp.
Integer pow2(unsigned long exp);

// Floor of the square root of n (n >= 0).
Integer isqrt(const Integer& n);

// Strict decimal parse: optional '-', then "0" or a nonzero leading digit.
// Rejects empty input, signs on zero, leading zeros, and stray characters.
Integer parse_integer(std::string_view text);

// Exact rational number, kept in lowest terms with a positive denominator.
// All arithmetic preserves that invariant, so equality is plain comparison
// of numerator and denominator and str() output is canonical.
class Rational {
 public:
  Rational() : q_(0) {}
  Rational(long n) : q_(n) {}  // NOLINT: implicit by design, enables literals
  Rational(const Integer& n) : q_(n) {}
  Rational(const Integer& num, const Integer& den);

  // Parses "a" or "a/b".  With require_lowest_terms the text must already be
  // the canonical form (lowest terms, positive denominator, b > 1 when a
  // denominator is shown); otherwise any valid fraction is reduced.
  static Rational parse(std::string_view text, bool require_lowest_terms = false);

  Integer num() const { return q_.get_num(); }
  Integer den() const { return q_.get_den(); }

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  // Conversion to Integer; throws std::domain_error unless denominator is 1.
  Integer as_integer() const;

  // q^e with q^0 == 1 (also for q == 0).
  Rational pow(unsigned long e) const;

  // Canonical text: "a" when integral, otherwise "a/b" in lowest terms.
  std::string str() const;

  double approx() const { return q_.get_d(); }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { Rational r; r.q_ = -a.q_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) < 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) > 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) <= 0; }
  friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) >= 0; }

 private:
  mpq_class q_;  // invariant: canonicalized
};

Rational abs(const Rational& q);

std::ostream& operator<<(std::ostream& os, const Rational& q);

}  // namespace subderiv
