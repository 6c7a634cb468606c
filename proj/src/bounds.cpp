#include "subderiv/bounds.hpp"

#include <stdexcept>

#include "subderiv/primes.hpp"
#include "subderiv/subderivative.hpp"

namespace subderiv {

namespace {

void require_at_least_two(const Integer& n, const char* who) {
  if (n < 2) throw std::invalid_argument(std::string(who) + ": argument must be >= 2");
}

Relation compare(const Rational& lhs, const Rational& rhs) {
  if (lhs == rhs) return Relation::Equal;
  return lhs < rhs ? Relation::Strict : Relation::Violated;
}

BoundVerdict verdict(std::string name, Rational lhs, Rational rhs) {
  BoundVerdict v{std::move(name), std::move(lhs), std::move(rhs), Relation::Strict, ""};
  v.relation = compare(v.lhs, v.rhs);
  return v;
}

// Empty when all preconditions hold, otherwise the first failure.
std::string upper_precondition_failure(const BoundContext& ctx, const LAdditiveSpec& spec) {
  for (const Integer& q : ctx.q_list) {
    if (spec.x.at(q).sign() < 0) return "f(" + q.get_str() + ") < 0";
  }
  for (const Integer& p : ctx.p_list) {
    if (spec.y.at(p) < Rational(p)) return "h(" + p.get_str() + ") < " + p.get_str();
  }
  if (ctx.h_n.sign() <= 0) return "h(n) <= 0";
  return "";
}

}  // namespace

BoundContext bound_context(const LAdditiveSpec& spec, const Integer& n) {
  require_at_least_two(n, "bound_context");
  BoundContext ctx;
  ctx.n = n;
  ctx.q_list = prime_multiset(n);
  ctx.r = static_cast<unsigned>(ctx.q_list.size());
  ctx.f_n = eval_l_additive(spec, n);
  ctx.h_n = 1;
  bool first = true;
  for (const Integer& q : ctx.q_list) {
    const Rational xq = spec.x.at(q);
    ctx.h_n *= spec.y.at(q);
    if (!xq.is_zero()) ctx.p_list.push_back(q);
    if (first) {
      ctx.f_max = ctx.f_min = xq;
      first = false;
    } else {
      if (xq > ctx.f_max) ctx.f_max = xq;
      if (xq < ctx.f_min) ctx.f_min = xq;
    }
  }
  ctx.s = static_cast<unsigned>(ctx.p_list.size());
  return ctx;
}

std::vector<BoundVerdict> classic_bounds(const Integer& n) {
  require_at_least_two(n, "classic_bounds");
  const Integer d = arithmetic_derivative(n);
  const unsigned long r = prime_multiset(n).size();
  std::vector<BoundVerdict> out;
  out.push_back(verdict("am-gm-lower", Rational(ipow(Integer(static_cast<long>(r)), r) * ipow(n, r - 1)),
                        Rational(ipow(d, r))));
  out.push_back(verdict("linear-upper", Rational(2 * d), Rational(r * n)));
  out.push_back(verdict("log2-upper", Rational(pow2(r)), Rational(n)));
  return out;
}

BoundVerdict westrick_bound(const Integer& n) {
  require_at_least_two(n, "westrick_bound");
  const Integer d = arithmetic_derivative(n);
  const unsigned long r = prime_multiset(n).size();
  return verdict("westrick-upper", Rational(2 * d), Rational((r - 1) * n + pow2(r)));
}

BoundVerdict westrick_improvement(const Integer& n) {
  require_at_least_two(n, "westrick_improvement");
  const unsigned long r = prime_multiset(n).size();
  return verdict("westrick-vs-linear", Rational(pow2(r)), Rational(n));
}

std::vector<BoundVerdict> extended_upper(const LAdditiveSpec& spec, const Integer& n) {
  const BoundContext ctx = bound_context(spec, n);
  const std::string failure = upper_precondition_failure(ctx, spec);

  std::vector<BoundVerdict> out;
  BoundVerdict linear = verdict("scaled-linear-upper", ctx.f_n,
                                Rational(static_cast<long>(ctx.s)) * ctx.f_max * ctx.h_n / Rational(2));
  BoundVerdict log2 = ctx.s == 0 ? verdict("scaled-log2-upper", 0, 0)
                                 : verdict("scaled-log2-upper", Rational(pow2(ctx.s)), Rational(n));
  if (!failure.empty()) {
    linear.relation = log2.relation = Relation::PreconditionViolated;
    linear.note = log2.note = failure;
  }
  out.push_back(std::move(linear));
  out.push_back(std::move(log2));
  return out;
}

BoundVerdict extended_westrick(const LAdditiveSpec& spec, const Integer& n) {
  const BoundContext ctx = bound_context(spec, n);
  std::string failure = upper_precondition_failure(ctx, spec);
  if (failure.empty() && ctx.s != ctx.r) failure = "s < r";

  const Rational y2 = spec.y.at(2);
  const Rational bound = ctx.s == 0
                             ? Rational(0)
                             : (Rational(static_cast<long>(ctx.s) - 1) * ctx.h_n / Rational(2) + y2.pow(ctx.s - 1)) *
                                   ctx.f_max;
  BoundVerdict v = verdict("extended-westrick-upper", ctx.f_n, bound);
  if (!failure.empty()) {
    v.relation = Relation::PreconditionViolated;
    v.note = failure;
  }
  return v;
}

BoundVerdict extended_lower(const LAdditiveSpec& spec, const Integer& n) {
  const BoundContext ctx = bound_context(spec, n);
  std::string failure;
  for (const Integer& q : ctx.q_list) {
    if (spec.x.at(q).sign() < 0) {
      failure = "f(" + q.get_str() + ") < 0";
      break;
    }
    if (spec.y.at(q).sign() <= 0) {
      failure = "h(" + q.get_str() + ") <= 0";
      break;
    }
  }
  const Rational lhs = Rational(ipow(Integer(static_cast<long>(ctx.r)), ctx.r)) * ctx.f_min.pow(ctx.r) *
                       ctx.h_n.pow(ctx.r - 1);
  BoundVerdict v = verdict("scaled-am-gm-lower", lhs, ctx.f_n.pow(ctx.r));
  if (!failure.empty()) {
    v.relation = Relation::PreconditionViolated;
    v.note = failure;
  }
  return v;
}

EqualityClassification classify_equality(const Integer& n) {
  require_at_least_two(n, "classify_equality");
  const Factorization f = factorize(n);
  EqualityClassification out;
  if (f.size() == 1) {
    const auto& [p, e] = f.front();
    out.base = p;
    out.exponent = e;
    if (e == 1) {
      out.cls = EqualityClass::Prime;
    } else if (p == 2) {
      out.cls = EqualityClass::PowerOfTwo;
    } else {
      out.cls = EqualityClass::PrimePower;
    }
    return out;
  }
  if (f.size() == 2 && f.front().prime == 2 && f.back().exponent == 1) {
    out.cls = EqualityClass::TwoSmoothTail;
    return out;
  }
  out.cls = EqualityClass::Other;
  return out;
}

std::string equality_class_name(EqualityClass cls) {
  switch (cls) {
    case EqualityClass::Prime:
      return "prime";
    case EqualityClass::PowerOfTwo:
      return "power-of-two";
    case EqualityClass::PrimePower:
      return "prime-power";
    case EqualityClass::TwoSmoothTail:
      return "two-smooth-tail";
    case EqualityClass::Other:
      return "other";
  }
  return "?";
}

std::string relation_name(Relation relation) {
  switch (relation) {
    case Relation::Strict:
      return "strict";
    case Relation::Equal:
      return "equal";
    case Relation::Violated:
      return "violated";
    case Relation::PreconditionViolated:
      return "precondition-violated";
  }
  return "?";
}

bool is_prime_power(const Integer& n) {
  if (n < 2) return false;
  return factorize(n).size() == 1;
}

bool is_power_of_two(const Integer& n) {
  if (n < 2) return false;
  mpz_class m = n;
  return mpz_scan1(m.get_mpz_t(), 0) == mpz_sizeinbase(m.get_mpz_t(), 2) - 1;
}

bool has_two_smooth_tail(const Integer& n) {
  if (n < 2) return false;
  const Factorization f = factorize(n);
  if (f.size() == 1) return f.front().prime == 2 || f.front().exponent == 1;
  return f.size() == 2 && f.front().prime == 2 && f.back().exponent == 1;
}

}  // namespace subderiv
