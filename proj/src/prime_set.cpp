#include "subderiv/prime_set.hpp"

#include <sstream>
#include <stdexcept>

namespace subderiv {

namespace {

std::set<Integer> validated(const std::vector<Integer>& primes) {
  std::set<Integer> out;
  for (const Integer& p : primes) {
    if (!is_prime(p)) throw std::invalid_argument("prime set: " + p.get_str() + " is not prime");
    out.insert(p);
  }
  return out;
}

}  // namespace

PrimeSet PrimeSet::all() {
  return PrimeSet(Kind::All, {});
}

PrimeSet PrimeSet::finite(const std::vector<Integer>& primes) {
  if (primes.empty()) throw std::invalid_argument("prime set: finite set must be nonempty");
  return PrimeSet(Kind::Finite, validated(primes));
}

PrimeSet PrimeSet::complement(const std::vector<Integer>& primes) {
  return PrimeSet(Kind::Complement, validated(primes));
}

bool PrimeSet::contains(const Integer& p) const {
  switch (kind_) {
    case Kind::All:
      return true;
    case Kind::Finite:
      return listed_.count(p) != 0;
    case Kind::Complement:
      return listed_.count(p) == 0;
  }
  return false;
}

std::string PrimeSet::str() const {
  if (kind_ == Kind::All) return "P";
  std::ostringstream os;
  if (kind_ == Kind::Complement) {
    os << "P\\";
    if (listed_.empty()) return "P";
  }
  os << '{';
  bool first = true;
  for (const Integer& p : listed_) {
    if (!first) os << ',';
    os << p.get_str();
    first = false;
  }
  os << '}';
  return os.str();
}

}  // namespace subderiv
