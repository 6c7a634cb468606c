#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "subderiv/funcspec.hpp"
#include "subderiv/rational.hpp"

namespace subderiv {

// Dense table of function values f(1), ..., f(N).  The CSV form has header
// "n,f" and one "n,value" row per n in order, with no gaps or duplicates.
class FunctionTable {
 public:
  // values[k] is f(k+1); must be nonempty.
  explicit FunctionTable(std::vector<Rational> values);

  std::uint64_t limit() const { return values_.size(); }

  // 1-based and range-checked.
  const Rational& at(std::uint64_t n) const;

  // Replaces f(n); used to build deliberately inconsistent tables in tests.
  void set(std::uint64_t n, const Rational& value);

  static FunctionTable load_csv(std::istream& in);
  void save_csv(std::ostream& out) const;

 private:
  std::vector<Rational> values_;
};

// Values of the spec on [1, limit].
FunctionTable tabulate(const LAdditiveSpec& spec, std::uint64_t limit);

}  // namespace subderiv
