#include "subderiv/table.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace subderiv {

FunctionTable::FunctionTable(std::vector<Rational> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("table: needs at least the value at n = 1");
}

const Rational& FunctionTable::at(std::uint64_t n) const {
  if (n < 1 || n > values_.size()) {
    throw std::out_of_range("table: n = " + std::to_string(n) + " outside [1, " + std::to_string(values_.size()) + "]");
  }
  return values_[n - 1];
}

void FunctionTable::set(std::uint64_t n, const Rational& value) {
  at(n);  // range check
  values_[n - 1] = value;
}

FunctionTable FunctionTable::load_csv(std::istream& in) {
  std::string line;
  std::uint64_t lineno = 0;

  auto fail = [&](const std::string& what) -> std::runtime_error {
    return std::runtime_error("table csv, line " + std::to_string(lineno) + ": " + what);
  };

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw std::runtime_error("table csv: empty input");
  if (line != "n,f") throw fail("expected header 'n,f', got '" + line + "'");

  std::vector<Rational> values;
  while (next_line()) {
    if (line.empty()) {
      // Allow a single trailing newline, nothing after it.
      if (next_line()) throw fail("content after blank line");
      break;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw fail("expected exactly one comma");
    }
    Integer n;
    Rational value;
    try {
      n = parse_integer(line.substr(0, comma));
      value = Rational::parse(line.substr(comma + 1), /*require_lowest_terms=*/true);
    } catch (const std::invalid_argument& e) {
      throw fail(e.what());
    }
    if (n != Integer(values.size() + 1)) {
      throw fail("expected row for n = " + std::to_string(values.size() + 1) + ", got n = " + n.get_str());
    }
    values.push_back(value);
  }
  if (values.empty()) throw std::runtime_error("table csv: no data rows");
  return FunctionTable(std::move(values));
}

void FunctionTable::save_csv(std::ostream& out) const {
  out << "n,f\n";
  for (std::uint64_t n = 1; n <= values_.size(); ++n) {
    out << n << ',' << values_[n - 1].str() << '\n';
  }
}

FunctionTable tabulate(const LAdditiveSpec& spec, std::uint64_t limit) {
  if (limit < 1) throw std::invalid_argument("tabulate: limit must be >= 1");
  std::vector<Rational> values;
  values.reserve(limit);
  for (std::uint64_t n = 1; n <= limit; ++n) {
    values.push_back(eval_l_additive(spec, Integer(static_cast<unsigned long>(n))));
  }
  return FunctionTable(std::move(values));
}

}  // namespace subderiv
