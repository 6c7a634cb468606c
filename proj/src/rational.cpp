#include "subderiv/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace subderiv {

Integer ipow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Integer pow2(unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, exp);
  return r;
}

Integer isqrt(const Integer& n) {
  if (n < 0) throw std::domain_error("isqrt: negative argument");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Integer parse_integer(std::string_view text) {
  const std::string_view original = text;
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (text.empty()) throw std::invalid_argument("integer: empty input");
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument("integer: invalid character in '" + std::string(original) + "'");
  }
  if (text.size() > 1 && text.front() == '0') throw std::invalid_argument("integer: leading zero in '" + std::string(original) + "'");
  if (negative && text == "0") throw std::invalid_argument("integer: negative zero");
  Integer r;
  if (mpz_set_str(r.get_mpz_t(), std::string(original).c_str(), 10) != 0) {
    throw std::invalid_argument("integer: unparsable '" + std::string(original) + "'");
  }
  return r;
}

Rational::Rational(const Integer& num, const Integer& den) {
  if (sgn(den) == 0) throw std::domain_error("rational: zero denominator");
  q_ = mpq_class(num);
  q_ /= mpq_class(den);
}

Rational Rational::parse(std::string_view text, bool require_lowest_terms) {
  const std::string original(text);
  const auto slash = text.find('/');
  Integer num, den = 1;
  if (slash == std::string_view::npos) {
    num = parse_integer(text);
  } else {
    num = parse_integer(text.substr(0, slash));
    const std::string_view den_text = text.substr(slash + 1);
    if (!den_text.empty() && den_text.front() == '-') {
      throw std::invalid_argument("rational: signed denominator in '" + original + "'");
    }
    den = parse_integer(den_text);
    if (sgn(den) == 0) throw std::invalid_argument("rational: zero denominator in '" + original + "'");
  }
  Rational r(num, den);
  if (require_lowest_terms && r.str() != original) {
    throw std::invalid_argument("rational: '" + original + "' is not in lowest terms (expected '" + r.str() + "')");
  }
  return r;
}

Integer Rational::as_integer() const {
  if (!is_integer()) throw std::domain_error("rational: " + str() + " is not an integer");
  return num();
}

Rational Rational::pow(unsigned long e) const {
  Rational r;
  // Numerator and denominator are coprime, so powering them separately
  // keeps the result canonical.
  mpz_pow_ui(mpq_numref(r.q_.get_mpq_t()), mpq_numref(q_.get_mpq_t()), e);
  mpz_pow_ui(mpq_denref(r.q_.get_mpq_t()), mpq_denref(q_.get_mpq_t()), e);
  return r;
}

std::string Rational::str() const {
  return q_.get_str();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational: division by zero");
  q_ /= o.q_;
  return *this;
}

Rational abs(const Rational& q) {
  return q.sign() < 0 ? -q : q;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) {
  return os << q.str();
}

}  // namespace subderiv
