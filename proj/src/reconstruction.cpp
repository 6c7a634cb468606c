#include "subderiv/reconstruction.hpp"

#include <algorithm>
#include <stdexcept>

#include "subderiv/primes.hpp"

namespace subderiv {

namespace {

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  if (bound > kSieveBound) {
    throw std::invalid_argument("prime enumeration: bound " + std::to_string(bound) + " exceeds sieve range");
  }
  std::vector<std::uint64_t> out;
  for (std::uint32_t p : small_primes()) {
    if (p > bound) break;
    out.push_back(p);
  }
  return out;
}

// p^e when it stays within the table, as a plain index.
bool pow_within(std::uint64_t p, unsigned e, std::uint64_t limit, std::uint64_t& out) {
  const Integer v = ipow(Integer(static_cast<unsigned long>(p)), e);
  if (v > Integer(static_cast<unsigned long>(limit))) return false;
  out = v.get_ui();
  return true;
}

void finish(ConditionCheck& c) {
  if (c.verdict != Verdict::Violated) c.verdict = c.checked > 0 ? Verdict::Holds : Verdict::Vacuous;
}

}  // namespace

SupportPartition support_partition(const FunctionTable& table, std::uint64_t prime_bound) {
  if (prime_bound > table.limit()) {
    throw std::invalid_argument("support_partition: prime bound exceeds table limit");
  }
  SupportPartition out;
  for (std::uint64_t p : primes_up_to(prime_bound)) {
    if (table.at(p).is_zero()) {
      out.v_primes.emplace_back(static_cast<unsigned long>(p));
    } else {
      out.u_primes.emplace_back(static_cast<unsigned long>(p));
    }
  }
  if (!out.u_primes.empty()) out.witness_q = out.u_primes.front();
  return out;
}

std::map<Integer, Rational> reconstruct_h(const FunctionTable& table, std::uint64_t prime_bound) {
  const SupportPartition part = support_partition(table, prime_bound);
  if (!part.witness_q) {
    throw std::domain_error("reconstruct_h: f vanishes at every prime <= " + std::to_string(prime_bound) +
                            "; any completely multiplicative h is consistent with the table");
  }
  const std::uint64_t limit = table.limit();
  const std::uint64_t q = part.witness_q->get_ui();
  const Rational& f_q = table.at(q);

  std::map<Integer, Rational> h;
  for (std::uint64_t p : primes_up_to(prime_bound)) {
    const Rational& f_p = table.at(p);
    Rational h_p;
    if (!f_p.is_zero()) {
      if (p * p > limit) {
        throw std::runtime_error("reconstruct_h: need f(" + std::to_string(p * p) + ") for p = " +
                                 std::to_string(p) + " but the table stops at " + std::to_string(limit));
      }
      h_p = table.at(p * p) / (Rational(2) * f_p);
      if (h_p.is_zero()) {
        throw std::domain_error("reconstruct_h: f(" + std::to_string(p * p) + ") = 0, so h(" +
                                std::to_string(p) + ") would be zero");
      }
    } else {
      if (p * q > limit) {
        throw std::runtime_error("reconstruct_h: need f(" + std::to_string(p * q) + ") for p = " +
                                 std::to_string(p) + " but the table stops at " + std::to_string(limit));
      }
      h_p = table.at(p * q) / f_q;
      if (h_p.is_zero()) {
        throw std::domain_error("reconstruct_h: f(" + std::to_string(p * q) + ") = 0, so h(" +
                                std::to_string(p) + ") would be zero");
      }
    }
    h.emplace(Integer(static_cast<unsigned long>(p)), h_p);
  }
  return h;
}

namespace {

DefaultRule quotient_default(const DefaultRule& x, const DefaultRule& y) {
  const auto fail = [&]() -> std::domain_error {
    return std::domain_error("decompose: the quotient of the default rules is not expressible as a default rule");
  };
  switch (y.kind) {
    case DefaultKind::Const:  // y.value != 0 by the spec invariant
      if (x.kind == DefaultKind::Const) return DefaultRule::constant(x.value / y.value);
      if (y.value == Rational(1)) return x;
      throw fail();
    case DefaultKind::PrimeItself:
      if (x.kind == DefaultKind::PrimeItself) return DefaultRule::constant(1);
      if (x.kind == DefaultKind::Const && x.value.is_zero()) return DefaultRule::constant(0);
      if (x.kind == DefaultKind::Const && x.value == Rational(1)) return DefaultRule::reciprocal_prime();
      throw fail();
    case DefaultKind::ReciprocalPrime:
      if (x.kind == DefaultKind::ReciprocalPrime) return DefaultRule::constant(1);
      if (x.kind == DefaultKind::Const && x.value.is_zero()) return DefaultRule::constant(0);
      if (x.kind == DefaultKind::Const && x.value == Rational(1)) return DefaultRule::prime_itself();
      throw fail();
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::pair<CAdditiveSpec, CMultiplicativeSpec> decompose(const LAdditiveSpec& spec) {
  std::map<Integer, Rational> g_overrides;
  for (const auto& [p, xv] : spec.x.overrides()) g_overrides.emplace(p, xv / spec.y.at(p));
  for (const auto& [p, yv] : spec.y.overrides()) {
    if (g_overrides.count(p)) continue;
    g_overrides.emplace(p, spec.x.at(p) / yv);
  }
  CAdditiveSpec g{PrimeMap(quotient_default(spec.x.default_rule(), spec.y.default_rule()), std::move(g_overrides))};
  return {std::move(g), CMultiplicativeSpec(spec.y)};
}

ConditionReport check_conditions(const FunctionTable& table, const ConditionParams& params) {
  const SupportPartition part = support_partition(table, params.prime_bound);
  const std::uint64_t limit = table.limit();
  const unsigned max_e = params.max_exponent;

  std::vector<std::uint64_t> u, v;
  for (const Integer& p : part.u_primes) u.push_back(p.get_ui());
  for (const Integer& p : part.v_primes) v.push_back(p.get_ui());

  ConditionReport rep;

  // Power-ratio consistency across exponents at a single u-prime.
  {
    ConditionCheck& c = rep.power_ratio;
    for (std::uint64_t p : u) {
      for (unsigned a = 1; a <= max_e && c.verdict != Verdict::Violated; ++a) {
        for (unsigned b = a + 1; b <= max_e; ++b) {
          std::uint64_t pa1 = 0, pb1 = 0;
          if (!pow_within(p, a + 1, limit, pa1) || !pow_within(p, b + 1, limit, pb1)) {
            ++c.skipped;
            continue;
          }
          const Rational& f_p = table.at(p);
          const Rational lhs = (table.at(pa1) / (Rational(static_cast<long>(a) + 1) * f_p)).pow(b);
          const Rational rhs = (table.at(pb1) / (Rational(static_cast<long>(b) + 1) * f_p)).pow(a);
          ++c.checked;
          if (lhs != rhs) {
            c.verdict = Verdict::Violated;
            c.witness = Witness{
                "power-ratio mismatch at p = " + std::to_string(p) + " between exponents " +
                    std::to_string(a) + " and " + std::to_string(b),
                {{"p", std::to_string(p)},
                 {"a", std::to_string(a)},
                 {"b", std::to_string(b)},
                 {"f(p)", f_p.str()},
                 {"f(p^(a+1))", table.at(pa1).str()},
                 {"f(p^(b+1))", table.at(pb1).str()},
                 {"lhs", lhs.str()},
                 {"rhs", rhs.str()}}};
            break;
          }
        }
      }
      if (c.verdict == Verdict::Violated) break;
    }
    finish(c);
  }

  // Two-prime product expansion.
  {
    ConditionCheck& c = rep.cross_product;
    for (std::size_t i = 0; i < u.size() && c.verdict != Verdict::Violated; ++i) {
      for (std::size_t j = i + 1; j < u.size() && c.verdict != Verdict::Violated; ++j) {
        const std::uint64_t p = u[i], q = u[j];
        for (unsigned a = 0; a <= max_e && c.verdict != Verdict::Violated; ++a) {
          for (unsigned b = 0; b <= max_e; ++b) {
            std::uint64_t pa = 0, qb = 0, pa1 = 0, qb1 = 0;
            if (!pow_within(p, a, limit, pa) || !pow_within(q, b, limit, qb) ||
                !pow_within(p, a + 1, limit, pa1) || !pow_within(q, b + 1, limit, qb1) ||
                pa > limit / qb) {
              ++c.skipped;
              continue;
            }
            const std::uint64_t paqb = pa * qb;
            const Rational lhs = table.at(paqb);
            const Rational rhs = table.at(pa) * table.at(qb1) / (Rational(static_cast<long>(b) + 1) * table.at(q)) +
                                 table.at(qb) * table.at(pa1) / (Rational(static_cast<long>(a) + 1) * table.at(p));
            ++c.checked;
            if (lhs != rhs) {
              c.verdict = Verdict::Violated;
              c.witness = Witness{
                  "two-prime product mismatch at " + std::to_string(p) + "^" + std::to_string(a) + " * " +
                      std::to_string(q) + "^" + std::to_string(b) + " = " + std::to_string(paqb),
                  {{"p", std::to_string(p)},
                   {"a", std::to_string(a)},
                   {"q", std::to_string(q)},
                   {"b", std::to_string(b)},
                   {"f(p^a q^b)", lhs.str()},
                   {"expected", rhs.str()}}};
              break;
            }
          }
        }
      }
    }
    finish(c);
  }

  // Cancellation: v-prime times u-prime products are nonzero and their
  // ratios do not depend on the v-prime.
  {
    ConditionCheck& c = rep.cancellation;
    for (std::uint64_t p : v) {
      for (std::size_t i = 0; i < u.size() && c.verdict != Verdict::Violated; ++i) {
        for (std::size_t j = i; j < u.size(); ++j) {
          const std::uint64_t q1 = u[i], q2 = u[j];
          if (p > limit / q1 || p > limit / q2) {
            ++c.skipped;
            continue;
          }
          const Rational& f_pq1 = table.at(p * q1);
          const Rational& f_pq2 = table.at(p * q2);
          ++c.checked;
          if (f_pq1.is_zero() || f_pq2.is_zero()) {
            const std::uint64_t bad_q = f_pq1.is_zero() ? q1 : q2;
            c.verdict = Verdict::Violated;
            c.witness = Witness{"f(" + std::to_string(p * bad_q) + ") = 0 although f(" + std::to_string(bad_q) +
                                    ") != 0 and p = " + std::to_string(p),
                                {{"p", std::to_string(p)},
                                 {"q", std::to_string(bad_q)},
                                 {"f(q)", table.at(bad_q).str()},
                                 {"f(p q)", "0"}}};
            break;
          }
          if (f_pq1 * table.at(q2) != f_pq2 * table.at(q1)) {
            c.verdict = Verdict::Violated;
            c.witness = Witness{"cancellation mismatch at p = " + std::to_string(p) + " against q1 = " +
                                    std::to_string(q1) + ", q2 = " + std::to_string(q2),
                                {{"p", std::to_string(p)},
                                 {"q1", std::to_string(q1)},
                                 {"q2", std::to_string(q2)},
                                 {"f(p q1)", f_pq1.str()},
                                 {"f(p q2)", f_pq2.str()},
                                 {"f(q1)", table.at(q1).str()},
                                 {"f(q2)", table.at(q2).str()}}};
            break;
          }
        }
      }
      if (c.verdict == Verdict::Violated) break;
    }
    finish(c);
  }

  // Squares of u-primes cannot vanish.
  {
    ConditionCheck& c = rep.square_nonzero;
    for (std::uint64_t p : u) {
      if (p > limit / p) {
        ++c.skipped;
        continue;
      }
      ++c.checked;
      if (table.at(p * p).is_zero()) {
        c.verdict = Verdict::Violated;
        c.witness = Witness{"f(" + std::to_string(p * p) + ") = 0 although f(" + std::to_string(p) + ") != 0",
                            {{"p", std::to_string(p)}, {"f(p)", table.at(p).str()}, {"f(p^2)", "0"}}};
        break;
      }
    }
    finish(c);
  }

  return rep;
}

LAdditivityCheck check_l_additive(const FunctionTable& table, std::uint64_t prime_bound) {
  const std::uint64_t limit = table.limit();
  if (limit > kSieveBound) {
    throw std::invalid_argument("check_l_additive: table limit exceeds sieve range");
  }
  const std::uint64_t bound_eff = std::min<std::uint64_t>(prime_bound, limit);

  LAdditivityCheck out;
  out.report = check_conditions(table, {bound_eff, 3});

  auto reject_pair = [&](const std::string& rejection, Witness w) {
    out.rejection = rejection;
    out.report.pair_additivity.verdict = Verdict::Violated;
    out.report.pair_additivity.checked = out.pairs_checked;
    out.report.pair_additivity.skipped = out.pairs_skipped;
    out.report.pair_additivity.witness = std::move(w);
  };

  // f(1) = f(1*1) = 2 f(1) h(1) forces f(1) = 0.
  if (!table.at(1).is_zero()) {
    reject_pair("f(1) = " + table.at(1).str() + " but the Leibniz rule forces f(1) = 0",
                Witness{"f(1) must vanish", {{"f(1)", table.at(1).str()}}});
    return out;
  }

  const std::vector<std::uint64_t> primes = primes_up_to(limit);
  std::vector<std::uint64_t> u_all;
  for (std::uint64_t p : primes) {
    if (!table.at(p).is_zero()) u_all.push_back(p);
  }

  if (u_all.empty()) {
    // f vanishes at every prime.  Then any Leibniz expansion of a composite
    // is zero, so a nonzero value anywhere refutes the table; an all-zero
    // table is the zero function, consistent with every h.
    for (std::uint64_t k = 2; k <= limit; ++k) {
      if (table.at(k).is_zero()) continue;
      const std::uint64_t m = smallest_prime_factor(k);
      const std::uint64_t n = k / m;  // >= 2: primes carry f = 0, so k is composite
      reject_pair("f(" + std::to_string(k) + ") = " + table.at(k).str() +
                      " although f vanishes at every prime, forcing f(" + std::to_string(k) + ") = 0",
                  Witness{"f(" + std::to_string(m) + ") = f(" + std::to_string(n) + ") = 0 but f(" +
                              std::to_string(k) + ") != 0",
                          {{"m", std::to_string(m)},
                           {"n", std::to_string(n)},
                           {"mn", std::to_string(k)},
                           {"f(m)", "0"},
                           {"f(n)", "0"},
                           {"f(mn)", table.at(k).str()}}});
      return out;
    }
    throw std::domain_error("check_l_additive: table is identically zero; every completely multiplicative h is consistent");
  }

  // Resolve h prime by prime.  u-primes with their square in range pin h
  // directly; v-primes use the smallest u-prime as reference; u-primes whose
  // square overflows the table are solved through a pair with an already
  // resolved u-prime.  Whatever stays unresolved only causes skipped pairs.
  std::map<std::uint64_t, Rational> h_p;
  std::vector<std::uint64_t> deferred;
  const std::uint64_t q0 = u_all.front();
  const Rational& f_q0 = table.at(q0);

  for (std::uint64_t p : primes) {
    const Rational& f_p = table.at(p);
    if (!f_p.is_zero()) {
      if (p <= limit / p) {
        const Rational h = table.at(p * p) / (Rational(2) * f_p);
        if (h.is_zero()) {
          Witness w{"f(" + std::to_string(p * p) + ") = 0 although f(" + std::to_string(p) + ") != 0",
                    {{"p", std::to_string(p)}, {"f(p)", f_p.str()}, {"f(p^2)", "0"}}};
          out.rejection = "h(" + std::to_string(p) + ") = 0 forced by f(" + std::to_string(p * p) +
                          ") = 0; h must be nowhere zero";
          out.report.square_nonzero.verdict = Verdict::Violated;
          out.report.square_nonzero.witness = w;
          return out;
        }
        h_p.emplace(p, h);
      } else {
        deferred.push_back(p);
      }
    } else if (p <= limit / q0) {
      const Rational h = table.at(p * q0) / f_q0;
      if (h.is_zero()) {
        Witness w{"f(" + std::to_string(p * q0) + ") = 0 although f(" + std::to_string(q0) + ") != 0 and p = " +
                      std::to_string(p),
                  {{"p", std::to_string(p)}, {"q", std::to_string(q0)}, {"f(q)", f_q0.str()}, {"f(p q)", "0"}}};
        out.rejection = "h(" + std::to_string(p) + ") = 0 forced by f(" + std::to_string(p * q0) +
                        ") = 0; h must be nowhere zero";
        out.report.cancellation.verdict = Verdict::Violated;
        out.report.cancellation.witness = w;
        return out;
      }
      h_p.emplace(p, h);
    }
  }

  for (std::uint64_t p : deferred) {
    for (std::uint64_t q : u_all) {
      if (q == p || p > limit / q) continue;
      const auto it = h_p.find(q);
      if (it == h_p.end()) continue;
      // f(pq) = f(p) h(q) + f(q) h(p), solved for h(p).
      const Rational h = (table.at(p * q) - table.at(p) * it->second) / table.at(q);
      if (h.is_zero()) {
        reject_pair("h(" + std::to_string(p) + ") = 0 forced by the pair (" + std::to_string(p) + ", " +
                        std::to_string(q) + "); h must be nowhere zero",
                    Witness{"h(" + std::to_string(p) + ") = 0 forced",
                            {{"p", std::to_string(p)},
                             {"q", std::to_string(q)},
                             {"f(p)", table.at(p).str()},
                             {"f(q)", table.at(q).str()},
                             {"f(p q)", table.at(p * q).str()},
                             {"h(q)", it->second.str()}}});
        return out;
      }
      h_p.emplace(p, h);
      break;
    }
  }

  // h on [1, limit], multiplicative closure over resolved primes.
  std::vector<char> has_h(limit + 1, 0);
  std::vector<Rational> h_val(limit + 1);
  has_h[1] = 1;
  h_val[1] = 1;
  for (std::uint64_t k = 2; k <= limit; ++k) {
    const std::uint64_t p = smallest_prime_factor(k);
    const auto it = h_p.find(p);
    if (it != h_p.end() && has_h[k / p]) {
      h_val[k] = it->second * h_val[k / p];
      has_h[k] = 1;
    }
  }

  // The Leibniz identity over every pair in range, smallest products first
  // within each m.  The witness is phrased through g = f/h, which must be
  // completely additive for an L-additive table.
  for (std::uint64_t m = 2; m <= limit / m; ++m) {
    for (std::uint64_t n = m; n <= limit / m; ++n) {
      if (!has_h[m] || !has_h[n]) {
        ++out.pairs_skipped;
        continue;
      }
      const Rational expected = table.at(m) * h_val[n] + table.at(n) * h_val[m];
      ++out.pairs_checked;
      const Rational& actual = table.at(m * n);
      if (actual != expected) {
        const Rational h_mn = h_val[m] * h_val[n];
        const Rational g_m = table.at(m) / h_val[m];
        const Rational g_n = table.at(n) / h_val[n];
        const Rational g_mn = actual / h_mn;
        const std::string summary = "g(" + std::to_string(m * n) + ") != g(" + std::to_string(m) + ") + g(" +
                                    std::to_string(n) + ")";
        reject_pair(summary, Witness{summary,
                                     {{"m", std::to_string(m)},
                                      {"n", std::to_string(n)},
                                      {"mn", std::to_string(m * n)},
                                      {"f(m)", table.at(m).str()},
                                      {"f(n)", table.at(n).str()},
                                      {"f(mn)", actual.str()},
                                      {"h(m)", h_val[m].str()},
                                      {"h(n)", h_val[n].str()},
                                      {"expected f(mn)", expected.str()},
                                      {"g(m)", g_m.str()},
                                      {"g(n)", g_n.str()},
                                      {"g(mn)", g_mn.str()}}});
        return out;
      }
    }
  }

  out.accepted = true;
  out.report.pair_additivity.verdict = out.pairs_checked > 0 ? Verdict::Holds : Verdict::Vacuous;
  out.report.pair_additivity.checked = out.pairs_checked;
  out.report.pair_additivity.skipped = out.pairs_skipped;
  for (std::uint64_t p : primes_up_to(bound_eff)) {
    const auto it = h_p.find(p);
    if (it == h_p.end()) continue;
    out.h_at_prime.emplace(Integer(static_cast<unsigned long>(p)), it->second);
    out.g_at_prime.emplace(Integer(static_cast<unsigned long>(p)), table.at(p) / it->second);
  }
  return out;
}

}  // namespace subderiv
