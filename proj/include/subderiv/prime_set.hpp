#pragma once

#include <set>
#include <string>
#include <vector>

#include "subderiv/primes.hpp"
#include "subderiv/rational.hpp"

namespace subderiv {

// A set of primes: either all primes, a finite nonempty list, or the
// complement of a finite list.  Construction validates that every listed
// value is prime, so a PrimeSet in hand is always well formed.
class PrimeSet {
 public:
  enum class Kind { All, Finite, Complement };

  static PrimeSet all();
  static PrimeSet finite(const std::vector<Integer>& primes);      // must be nonempty
  static PrimeSet complement(const std::vector<Integer>& primes);  // excluded list, may be empty

  Kind kind() const { return kind_; }

  // Listed members (Finite) or excluded members (Complement); empty for All.
  const std::set<Integer>& listed() const { return listed_; }

  bool contains(const Integer& p) const;

  // "P", "{2,5}", or "P\{2,5}".
  std::string str() const;

 private:
  PrimeSet(Kind kind, std::set<Integer> listed) : kind_(kind), listed_(std::move(listed)) {}

  Kind kind_;
  std::set<Integer> listed_;
};

}  // namespace subderiv
