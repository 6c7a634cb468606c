#include "subderiv/sweep.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "subderiv/bounds.hpp"
#include "subderiv/primes.hpp"

namespace subderiv {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kChunk = 4096;

// The sweep carries its own factoring so that a defect in the library sieve
// cannot hide itself: only the function-spec lookups are shared with the
// code under test.
struct LocalSieve {
  std::vector<std::uint32_t> spf;

  explicit LocalSieve(std::uint64_t bound) : spf(bound + 1, 0) {
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= bound; ++i) {
      if (spf[i] == 0) {
        spf[i] = static_cast<std::uint32_t>(i);
        primes.push_back(static_cast<std::uint32_t>(i));
      }
      for (std::uint32_t p : primes) {
        if (p > spf[i] || i * p > bound) break;
        spf[i * p] = p;
      }
    }
  }
};

struct LocalFactor {
  std::uint64_t p;
  unsigned e;
};

void local_factorize(const LocalSieve& sieve, std::uint64_t n, std::vector<LocalFactor>& out) {
  out.clear();
  while (n > 1) {
    const std::uint64_t p = sieve.spf[n];
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
}

EqualityClass classify_local(const std::vector<LocalFactor>& f) {
  if (f.size() == 1) {
    if (f[0].e == 1) return EqualityClass::Prime;
    return f[0].p == 2 ? EqualityClass::PowerOfTwo : EqualityClass::PrimePower;
  }
  if (f.size() == 2 && f[0].p == 2 && f[1].e == 1) return EqualityClass::TwoSmoothTail;
  return EqualityClass::Other;
}

bool local_prime_power(const std::vector<LocalFactor>& f) {
  return f.size() == 1;
}

bool local_power_of_two(const std::vector<LocalFactor>& f) {
  return f.size() == 1 && f[0].p == 2;
}

bool local_two_smooth_tail(const std::vector<LocalFactor>& f) {
  if (f.size() == 1) return f[0].p == 2 || f[0].e == 1;
  return f.size() == 2 && f[0].p == 2 && f[1].e == 1;
}

// Fixed-size chunks claimed through an atomic counter; slot i always holds
// the results for the i-th chunk, so merging in slot order is reproducible
// for any worker count.
template <typename Slot, typename Fn>
std::vector<Slot> run_chunks(std::uint64_t lo, std::uint64_t hi, unsigned workers, const Fn& fn) {
  if (hi < lo) return {};
  const std::uint64_t chunk_count = (hi - lo) / kChunk + 1;
  std::vector<Slot> slots(chunk_count);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= chunk_count) return;
      const std::uint64_t a = lo + i * kChunk;
      const std::uint64_t b = std::min(hi, a + kChunk - 1);
      fn(a, b, slots[i]);
    }
  };
  const unsigned count = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunk_count));
  if (count <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(count);
    for (unsigned w = 0; w < count; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  return slots;
}

struct DevCell {
  std::uint64_t count = 0;
  std::uint64_t witness = 0;  // meaningful when count > 0
};

struct ChunkStats {
  std::uint64_t checked = 0;
  std::uint64_t skipped = 0;
  std::uint64_t violation_count = 0;
  std::vector<Witness> violations;
  std::vector<std::array<std::uint64_t, 5>> equality;  // [link][equality class]
  std::vector<DevCell> dev;
};

struct Registry {
  std::vector<std::string> links;
  std::vector<Deviation> dev_protos;  // subject/claim/observed prefilled

  ChunkStats make_slot() const {
    ChunkStats s;
    s.equality.assign(links.size(), {0, 0, 0, 0, 0});
    s.dev.assign(dev_protos.size(), {});
    return s;
  }
};

struct PropertyAccum {
  PropertyReport report;
  std::uint64_t cap = 100;

  void note_violation(ChunkStats& s, Witness w) const {
    ++s.violation_count;
    if (s.violations.size() < cap) s.violations.push_back(std::move(w));
  }

  void absorb(const Registry& reg, const std::vector<ChunkStats>& slots) {
    std::vector<std::array<std::uint64_t, 5>> eq(reg.links.size(), {0, 0, 0, 0, 0});
    std::vector<DevCell> dev(reg.dev_protos.size());
    for (const ChunkStats& s : slots) {
      report.checked += s.checked;
      report.skipped += s.skipped;
      report.violation_count += s.violation_count;
      for (const Witness& w : s.violations) {
        if (report.violations.size() < cap) report.violations.push_back(w);
      }
      for (std::size_t i = 0; i < eq.size(); ++i) {
        for (int c = 0; c < 5; ++c) eq[i][c] += s.equality[i][c];
      }
      for (std::size_t i = 0; i < dev.size(); ++i) {
        if (s.dev[i].count == 0) continue;
        if (dev[i].count == 0) dev[i].witness = s.dev[i].witness;
        dev[i].count += s.dev[i].count;
      }
    }
    for (std::size_t i = 0; i < reg.links.size(); ++i) {
      std::vector<std::pair<std::string, std::uint64_t>> classes;
      for (int c = 0; c < 5; ++c) {
        if (eq[i][c] > 0) classes.emplace_back(equality_class_name(static_cast<EqualityClass>(c)), eq[i][c]);
      }
      report.equality_classes.emplace_back(reg.links[i], std::move(classes));
    }
    for (std::size_t i = 0; i < reg.dev_protos.size(); ++i) {
      if (dev[i].count == 0) continue;
      Deviation d = reg.dev_protos[i];
      d.witness = std::to_string(dev[i].witness);
      d.count = dev[i].count;
      report.deviations.push_back(std::move(d));
    }
  }
};

// Tracks equality bookkeeping for one bound link at one n: bound violations,
// equality-class tallies, optional exact-set assertion, and deviations from
// the documented equality set.
struct LinkOutcome {
  std::size_t link;
  std::uint64_t n;
  EqualityClass cls;
  int cmp;  // sign of lhs - rhs for the claim lhs <= rhs
  std::string lhs;
  std::string rhs;
  const bool* verified_set = nullptr;  // exact equality set, when proven
  bool documented_set = false;
  std::size_t dev_beyond = 0;
  std::size_t dev_absent = 0;
  std::string spec_label;  // empty for D-only properties
};

void record_link(const PropertyAccum& acc, const Registry& reg, ChunkStats& s, const LinkOutcome& o) {
  const std::string& link_name = reg.links[o.link];
  if (o.cmp > 0) {
    std::vector<std::pair<std::string, std::string>> data;
    if (!o.spec_label.empty()) data.emplace_back("spec", o.spec_label);
    data.emplace_back("link", link_name);
    data.emplace_back("n", std::to_string(o.n));
    data.emplace_back("lhs", o.lhs);
    data.emplace_back("rhs", o.rhs);
    acc.note_violation(s, Witness{link_name + " violated at n = " + std::to_string(o.n), std::move(data)});
    return;
  }
  const bool equal = o.cmp == 0;
  if (equal) ++s.equality[o.link][static_cast<int>(o.cls)];
  if (o.verified_set != nullptr && equal != *o.verified_set) {
    std::vector<std::pair<std::string, std::string>> data;
    if (!o.spec_label.empty()) data.emplace_back("spec", o.spec_label);
    data.emplace_back("link", link_name);
    data.emplace_back("n", std::to_string(o.n));
    data.emplace_back("lhs", o.lhs);
    data.emplace_back("rhs", o.rhs);
    data.emplace_back("in_set", *o.verified_set ? "yes" : "no");
    acc.note_violation(s, Witness{link_name + " equality set mismatch at n = " + std::to_string(o.n), std::move(data)});
    return;
  }
  if (equal && !o.documented_set) {
    DevCell& cell = s.dev[o.dev_beyond];
    if (cell.count == 0) cell.witness = o.n;
    ++cell.count;
  } else if (!equal && o.documented_set) {
    DevCell& cell = s.dev[o.dev_absent];
    if (cell.count == 0) cell.witness = o.n;
    ++cell.count;
  }
}

bool theta_like(const PrimeMap& x) {
  if (!x.default_rule().can_vanish()) return false;
  for (const auto& [p, v] : x.overrides()) {
    (void)p;
    if (!v.is_zero()) return false;
  }
  return true;
}

std::uint64_t floor_sqrt(std::uint64_t n) {
  return isqrt(Integer(static_cast<unsigned long>(n))).get_ui();
}

// ---------------------------------------------------------------- leibniz

void run_leibniz(const SweepConfig& cfg, PropertyAccum& acc) {
  const std::uint64_t n_max = cfg.max_n;
  for (const SpecEntry& entry : cfg.specs) {
    std::vector<Rational> f(n_max + 1), h(n_max + 1);
    const CMultiplicativeSpec h_spec(entry.spec.y);
    run_chunks<char>(1, n_max, cfg.workers, [&](std::uint64_t a, std::uint64_t b, char&) {
      for (std::uint64_t k = a; k <= b; ++k) {
        const Integer kk(static_cast<unsigned long>(k));
        f[k] = eval_l_additive(entry.spec, kk);
        h[k] = eval_c_multiplicative(h_spec, kk);
      }
    });

    const Registry reg;  // no equality links, no deviations
    const std::uint64_t pair_limit = floor_sqrt(n_max);
    auto slots = run_chunks<ChunkStats>(2, pair_limit, cfg.workers, [&](std::uint64_t a, std::uint64_t b, ChunkStats& s) {
      s = reg.make_slot();
      for (std::uint64_t m = a; m <= b; ++m) {
        for (std::uint64_t n = m; n <= n_max / m; ++n) {
          const Rational expected = f[m] * h[n] + f[n] * h[m];
          ++s.checked;
          if (f[m * n] != expected) {
            acc.note_violation(s, Witness{entry.label + ": f(" + std::to_string(m * n) +
                                              ") != f(m) h(n) + f(n) h(m) for (m, n) = (" + std::to_string(m) +
                                              ", " + std::to_string(n) + ")",
                                          {{"spec", entry.label},
                                           {"m", std::to_string(m)},
                                           {"n", std::to_string(n)},
                                           {"f(mn)", f[m * n].str()},
                                           {"expected", expected.str()}}});
          }
        }
      }
    });
    acc.absorb(reg, slots);
  }
}

// ----------------------------------------------------- chain and westrick

void run_chain(const SweepConfig& cfg, const LocalSieve& sieve, PropertyAccum& acc) {
  Registry reg;
  reg.links = {"am-gm-lower", "linear-upper", "log2-upper"};
  reg.dev_protos = {
      {"am-gm-lower equality beyond documented set", "equality only at primes and powers of two",
       "equality at further prime powers", "", 0},
      {"am-gm-lower equality missing from documented set", "equality only at primes and powers of two",
       "strict inequality inside the documented set", "", 0},
      {"linear-upper equality beyond documented set", "equality only at powers of two",
       "equality outside the documented set", "", 0},
      {"linear-upper equality missing from documented set", "equality only at powers of two",
       "strict inequality inside the documented set", "", 0},
      {"log2-upper equality beyond documented set", "equality only at powers of two",
       "equality outside the documented set", "", 0},
      {"log2-upper equality missing from documented set", "equality only at powers of two",
       "strict inequality inside the documented set", "", 0},
  };

  auto slots = run_chunks<ChunkStats>(2, cfg.max_n, cfg.workers, [&](std::uint64_t a, std::uint64_t b, ChunkStats& s) {
    s = reg.make_slot();
    std::vector<LocalFactor> fac;
    for (std::uint64_t n = a; n <= b; ++n) {
      local_factorize(sieve, n, fac);
      unsigned r = 0;
      std::uint64_t d = 0;
      for (const LocalFactor& pf : fac) {
        r += pf.e;
        d += pf.e * (n / pf.p);
      }
      const EqualityClass cls = classify_local(fac);
      const bool prime_power = local_prime_power(fac);
      const bool pow2 = local_power_of_two(fac);
      const bool prime_or_pow2 = fac.size() == 1 && (fac[0].e == 1 || fac[0].p == 2);
      ++s.checked;

      {
        const Integer lhs = ipow(Integer(static_cast<unsigned long>(r)), r) *
                            ipow(Integer(static_cast<unsigned long>(n)), r - 1);
        const Integer rhs = ipow(Integer(static_cast<unsigned long>(d)), r);
        record_link(acc, reg, s,
                    {0, n, cls, cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1), lhs.get_str(), rhs.get_str(),
                     &prime_power, prime_or_pow2, 0, 1, ""});
      }
      {
        const std::uint64_t lhs = 2 * d;
        const std::uint64_t rhs = static_cast<std::uint64_t>(r) * n;
        record_link(acc, reg, s,
                    {1, n, cls, lhs < rhs ? -1 : (lhs == rhs ? 0 : 1), std::to_string(lhs), std::to_string(rhs),
                     &pow2, pow2, 2, 3, ""});
      }
      {
        const std::uint64_t lhs = std::uint64_t{1} << r;  // r <= 20 for n <= 1e6
        record_link(acc, reg, s,
                    {2, n, cls, lhs < n ? -1 : (lhs == n ? 0 : 1), std::to_string(lhs), std::to_string(n),
                     &pow2, pow2, 4, 5, ""});
      }
    }
  });
  acc.absorb(reg, slots);
}

void run_westrick(const SweepConfig& cfg, const LocalSieve& sieve, PropertyAccum& acc) {
  Registry reg;
  reg.links = {"westrick-upper", "westrick-vs-linear"};
  reg.dev_protos = {
      {"westrick-upper equality beyond documented set", "equality only at primes and two-smooth tails",
       "equality outside the documented set", "", 0},
      {"westrick-upper equality missing from documented set", "equality only at primes and two-smooth tails",
       "strict inequality inside the documented set", "", 0},
      {"westrick-vs-linear equality beyond documented set", "equality only at powers of two",
       "equality outside the documented set", "", 0},
      {"westrick-vs-linear equality missing from documented set", "equality only at powers of two",
       "strict inequality inside the documented set", "", 0},
  };

  auto slots = run_chunks<ChunkStats>(2, cfg.max_n, cfg.workers, [&](std::uint64_t a, std::uint64_t b, ChunkStats& s) {
    s = reg.make_slot();
    std::vector<LocalFactor> fac;
    for (std::uint64_t n = a; n <= b; ++n) {
      local_factorize(sieve, n, fac);
      unsigned r = 0;
      std::uint64_t d = 0;
      for (const LocalFactor& pf : fac) {
        r += pf.e;
        d += pf.e * (n / pf.p);
      }
      const EqualityClass cls = classify_local(fac);
      const bool tail = local_two_smooth_tail(fac);
      const bool pow2 = local_power_of_two(fac);
      ++s.checked;

      {
        const std::uint64_t lhs = 2 * d;
        const std::uint64_t rhs = static_cast<std::uint64_t>(r - 1) * n + (std::uint64_t{1} << r);
        record_link(acc, reg, s,
                    {0, n, cls, lhs < rhs ? -1 : (lhs == rhs ? 0 : 1), std::to_string(lhs), std::to_string(rhs),
                     &tail, tail, 0, 1, ""});
      }
      {
        const std::uint64_t lhs = std::uint64_t{1} << r;
        record_link(acc, reg, s,
                    {1, n, cls, lhs < n ? -1 : (lhs == n ? 0 : 1), std::to_string(lhs), std::to_string(n),
                     &pow2, pow2, 2, 3, ""});
      }
    }
  });
  acc.absorb(reg, slots);
}

// ------------------------------------------------------- extended bounds

struct ExtValues {
  unsigned r = 0;
  unsigned s = 0;
  Rational f;
  Rational h;
  Rational f_max;
  Rational f_min;
  bool nonneg = true;   // x >= 0 over the q-list
  bool hassump = true;  // y(p) >= p over the p-list
  bool y_pos = true;    // y > 0 over the q-list
};

void ext_values(const LAdditiveSpec& spec, const std::vector<LocalFactor>& fac, ExtValues& v) {
  v = ExtValues{};
  Rational sum = 0;
  v.h = 1;
  bool first = true;
  for (const LocalFactor& pf : fac) {
    const Integer p(static_cast<unsigned long>(pf.p));
    const Rational xp = spec.x.at(p);
    const Rational yp = spec.y.at(p);
    v.r += pf.e;
    if (!xp.is_zero()) v.s += pf.e;
    sum += Rational(static_cast<long>(pf.e)) * xp / yp;
    v.h *= yp.pow(pf.e);
    if (xp.sign() < 0) v.nonneg = false;
    if (!xp.is_zero() && yp < Rational(p)) v.hassump = false;
    if (yp.sign() <= 0) v.y_pos = false;
    if (first) {
      v.f_max = v.f_min = xp;
      first = false;
    } else {
      if (xp > v.f_max) v.f_max = xp;
      if (xp < v.f_min) v.f_min = xp;
    }
  }
  v.f = sum * v.h;
}

void run_extended_upper(const SweepConfig& cfg, const LocalSieve& sieve, PropertyAccum& acc) {
  for (const SpecEntry& entry : cfg.specs) {
    Registry reg;
    reg.links = {entry.label + "/scaled-linear-upper", entry.label + "/scaled-log2-upper"};
    reg.dev_protos = {
        {entry.label + "/scaled-linear-upper equality beyond documented set", "equality only at powers of two",
         "equality outside the documented set", "", 0},
        {entry.label + "/scaled-linear-upper equality missing from documented set", "equality only at powers of two",
         "strict inequality inside the documented set", "", 0},
        {entry.label + "/scaled-log2-upper equality beyond documented set", "equality only at powers of two",
         "equality outside the documented set", "", 0},
        {entry.label + "/scaled-log2-upper equality missing from documented set", "equality only at powers of two",
         "strict inequality inside the documented set", "", 0},
    };
    const bool theta = theta_like(entry.spec.x);

    auto slots = run_chunks<ChunkStats>(2, cfg.max_n, cfg.workers, [&](std::uint64_t a, std::uint64_t b, ChunkStats& s) {
      s = reg.make_slot();
      if (theta) {  // the scaled uppers say nothing about the zero function
        s.skipped += b - a + 1;
        return;
      }
      std::vector<LocalFactor> fac;
      ExtValues v;
      for (std::uint64_t n = a; n <= b; ++n) {
        local_factorize(sieve, n, fac);
        ext_values(entry.spec, fac, v);
        if (!(v.nonneg && v.hassump && v.h.sign() > 0)) {
          ++s.skipped;
          continue;
        }
        const EqualityClass cls = classify_local(fac);
        const bool pow2 = local_power_of_two(fac);
        ++s.checked;
        {
          const Rational rhs = Rational(static_cast<long>(v.s)) * v.f_max * v.h / Rational(2);
          const int c = v.f < rhs ? -1 : (v.f == rhs ? 0 : 1);
          record_link(acc, reg, s, {0, n, cls, c, v.f.str(), rhs.str(), nullptr, pow2, 0, 1, entry.label});
        }
        if (v.s == 0) {
          record_link(acc, reg, s, {1, n, cls, 0, "0", "0", nullptr, pow2, 2, 3, entry.label});
        } else {
          const std::uint64_t lhs = std::uint64_t{1} << v.s;  // s <= r <= 20
          const int c = lhs < n ? -1 : (lhs == n ? 0 : 1);
          record_link(acc, reg, s, {1, n, cls, c, std::to_string(lhs), std::to_string(n), nullptr, pow2, 2, 3, entry.label});
        }
      }
    });
    acc.absorb(reg, slots);
  }
}

void run_extended_westrick(const SweepConfig& cfg, const LocalSieve& sieve, PropertyAccum& acc) {
  for (const SpecEntry& entry : cfg.specs) {
    Registry reg;
    reg.links = {entry.label + "/extended-westrick-upper"};
    reg.dev_protos = {
        {entry.label + "/extended-westrick-upper equality beyond documented set",
         "equality only at primes and two-smooth tails with h(2) = 2", "equality outside the documented set", "", 0},
        {entry.label + "/extended-westrick-upper equality missing from documented set",
         "equality only at primes and two-smooth tails with h(2) = 2", "strict inequality inside the documented set",
         "", 0},
    };
    const bool theta = theta_like(entry.spec.x);
    const Rational y2 = entry.spec.y.at(2);
    const bool y2_is_two = y2 == Rational(2);

    auto slots = run_chunks<ChunkStats>(2, cfg.max_n, cfg.workers, [&](std::uint64_t a, std::uint64_t b, ChunkStats& s) {
      s = reg.make_slot();
      if (theta) {
        s.skipped += b - a + 1;
        return;
      }
      std::vector<LocalFactor> fac;
      ExtValues v;
      for (std::uint64_t n = a; n <= b; ++n) {
        local_factorize(sieve, n, fac);
        ext_values(entry.spec, fac, v);
        if (!(v.nonneg && v.hassump && v.h.sign() > 0 && v.s == v.r)) {
          ++s.skipped;
          continue;
        }
        const EqualityClass cls = classify_local(fac);
        const bool documented = v.r == 1 || (local_two_smooth_tail(fac) && y2_is_two);
        ++s.checked;
        const Rational rhs = (Rational(static_cast<long>(v.s) - 1) * v.h / Rational(2) + y2.pow(v.s - 1)) * v.f_max;
        const int c = v.f < rhs ? -1 : (v.f == rhs ? 0 : 1);
        record_link(acc, reg, s, {0, n, cls, c, v.f.str(), rhs.str(), nullptr, documented, 0, 1, entry.label});
      }
    });
    acc.absorb(reg, slots);
  }
}

void run_extended_lower(const SweepConfig& cfg, const LocalSieve& sieve, PropertyAccum& acc) {
  for (const SpecEntry& entry : cfg.specs) {
    Registry reg;
    reg.links = {entry.label + "/scaled-am-gm-lower"};
    reg.dev_protos = {
        {entry.label + "/scaled-am-gm-lower equality beyond documented set",
         "equality only at primes and powers of two", "equality outside the documented set", "", 0},
        {entry.label + "/scaled-am-gm-lower equality missing from documented set",
         "equality only at primes and powers of two", "strict inequality inside the documented set", "", 0},
    };

    auto slots = run_chunks<ChunkStats>(2, cfg.max_n, cfg.workers, [&](std::uint64_t a, std::uint64_t b, ChunkStats& s) {
      s = reg.make_slot();
      std::vector<LocalFactor> fac;
      ExtValues v;
      for (std::uint64_t n = a; n <= b; ++n) {
        local_factorize(sieve, n, fac);
        ext_values(entry.spec, fac, v);
        if (!(v.nonneg && v.y_pos)) {
          ++s.skipped;
          continue;
        }
        const EqualityClass cls = classify_local(fac);
        const bool prime_or_pow2 = fac.size() == 1 && (fac[0].e == 1 || fac[0].p == 2);
        ++s.checked;
        // f(n)^r >= r^r m^r h(n)^(r-1), claim phrased as lhs <= rhs
        const Rational lhs = Rational(ipow(Integer(static_cast<unsigned long>(v.r)), v.r)) * v.f_min.pow(v.r) *
                             v.h.pow(v.r - 1);
        const Rational rhs = v.f.pow(v.r);
        const int c = lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
        record_link(acc, reg, s, {0, n, cls, c, lhs.str(), rhs.str(), nullptr, prime_or_pow2, 0, 1, entry.label});
      }
    });
    acc.absorb(reg, slots);
  }
}

// --------------------------------------------- table-driven properties

struct TableSource {
  std::string label;
  FunctionTable table;
};

std::vector<TableSource> table_sources(const SweepConfig& cfg) {
  std::vector<TableSource> out;
  for (const SpecEntry& entry : cfg.specs) {
    out.push_back({entry.label, tabulate(entry.spec, cfg.max_n)});
  }
  if (cfg.table) out.push_back({cfg.table_label, *cfg.table});
  return out;
}

void run_roundtrip(const SweepConfig& cfg, const LocalSieve& sieve, PropertyAccum& acc) {
  const std::vector<TableSource> sources = table_sources(cfg);
  for (std::size_t src_idx = 0; src_idx < sources.size(); ++src_idx) {
    const TableSource& src = sources[src_idx];
    const LAdditiveSpec* truth = src_idx < cfg.specs.size() ? &cfg.specs[src_idx].spec : nullptr;
    const FunctionTable& tab = src.table;
    const std::uint64_t limit = tab.limit();
    const Registry reg;
    std::vector<ChunkStats> slots(1);
    ChunkStats& s = slots[0];
    s = reg.make_slot();

    const std::uint64_t bound_req = std::min(cfg.reconstruction_prime_bound, limit);
    std::vector<std::uint64_t> req_primes;
    for (std::uint32_t p : small_primes()) {
      if (p > bound_req) break;
      req_primes.push_back(p);
    }

    const SupportPartition part = support_partition(tab, bound_req);
    if (!part.witness_q) {
      s.skipped += req_primes.size();
      acc.absorb(reg, slots);
      continue;
    }
    const std::uint64_t q0 = part.witness_q->get_ui();

    // Largest prefix of the primes whose defining entries fit in the table.
    std::uint64_t bound_eff = 0;
    std::size_t usable = 0;
    for (std::uint64_t p : req_primes) {
      const bool in_u = !tab.at(p).is_zero();
      if (in_u ? p > limit / p : p > limit / q0) break;
      bound_eff = p;
      ++usable;
    }
    s.skipped += req_primes.size() - usable;
    if (usable == 0) {
      acc.absorb(reg, slots);
      continue;
    }

    std::map<Integer, Rational> h;
    try {
      h = reconstruct_h(tab, bound_eff);
    } catch (const std::domain_error&) {
      // e.g. no u-prime within reach; nothing reconstructible
      s.skipped += usable;
      acc.absorb(reg, slots);
      continue;
    }

    // Recovered h must match the spec that generated the table.
    if (truth != nullptr) {
      for (const auto& [p, hp] : h) {
        ++s.checked;
        const Rational expected = truth->y.at(p);
        if (hp != expected) {
          acc.note_violation(s, Witness{src.label + ": reconstructed h(" + p.get_str() + ") differs from the spec",
                                        {{"spec", src.label},
                                         {"p", p.get_str()},
                                         {"reconstructed", hp.str()},
                                         {"expected", expected.str()}}});
        }
      }
    }

    // The reference ratio must not depend on the chosen u-prime.
    for (const Integer& pp : part.v_primes) {
      const std::uint64_t p = pp.get_ui();
      if (p > bound_eff) break;
      const Rational& base = h.at(pp);
      for (const Integer& qq : part.u_primes) {
        const std::uint64_t q = qq.get_ui();
        if (p > limit / q) continue;
        ++s.checked;
        const Rational ratio = tab.at(p * q) / tab.at(q);
        if (ratio != base) {
          acc.note_violation(s, Witness{src.label + ": h(" + std::to_string(p) + ") depends on the reference prime",
                                        {{"spec", src.label},
                                         {"p", std::to_string(p)},
                                         {"q", std::to_string(q)},
                                         {"f(p q)/f(q)", ratio.str()},
                                         {"h(p)", base.str()}}});
        }
      }
    }

    // Rebuild the table from (g, h) at the reconstructed primes.
    std::map<std::uint64_t, std::pair<Rational, Rational>> gh;  // p -> (g(p), h(p))
    for (const auto& [p, hp] : h) gh.emplace(p.get_ui(), std::make_pair(tab.at(p.get_ui()) / hp, hp));
    std::vector<LocalFactor> fac;
    for (std::uint64_t n = 1; n <= limit; ++n) {
      local_factorize(sieve, n, fac);
      Rational g_sum = 0;
      Rational h_prod = 1;
      bool covered = true;
      for (const LocalFactor& pf : fac) {
        const auto it = gh.find(pf.p);
        if (it == gh.end()) {
          covered = false;
          break;
        }
        g_sum += Rational(static_cast<long>(pf.e)) * it->second.first;
        h_prod *= it->second.second.pow(pf.e);
      }
      if (!covered) {
        ++s.skipped;
        continue;
      }
      ++s.checked;
      const Rational rebuilt = g_sum * h_prod;
      if (rebuilt != tab.at(n)) {
        acc.note_violation(s, Witness{src.label + ": table does not round-trip through (g, h) at n = " +
                                          std::to_string(n),
                                      {{"spec", src.label},
                                       {"n", std::to_string(n)},
                                       {"f(n)", tab.at(n).str()},
                                       {"rebuilt", rebuilt.str()}}});
      }
    }

    acc.absorb(reg, slots);
  }
}

void run_conditions(const SweepConfig& cfg, PropertyAccum& acc) {
  for (const TableSource& src : table_sources(cfg)) {
    const Registry reg;
    std::vector<ChunkStats> slots(1);
    ChunkStats& s = slots[0];
    s = reg.make_slot();

    const ConditionParams params{std::min(cfg.condition_prime_bound, src.table.limit()), cfg.condition_max_exponent};
    const ConditionReport rep = check_conditions(src.table, params);
    const std::pair<const char*, const ConditionCheck*> checks[] = {
        {"power-ratio", &rep.power_ratio},
        {"two-prime-product", &rep.cross_product},
        {"cancellation", &rep.cancellation},
        {"square-nonzero", &rep.square_nonzero},
    };
    for (const auto& [name, check] : checks) {
      s.checked += check->checked;
      s.skipped += check->skipped;
      if (check->verdict == Verdict::Violated && check->witness) {
        Witness w = *check->witness;
        w.summary = src.label + ": " + std::string(name) + ": " + w.summary;
        w.data.insert(w.data.begin(), {std::string("condition"), std::string(name)});
        w.data.insert(w.data.begin(), {std::string("spec"), src.label});
        acc.note_violation(s, std::move(w));
      }
    }
    acc.absorb(reg, slots);
  }
}

}  // namespace

SweepProperty property_from_token(const std::string& token) {
  if (token == "leibniz") return SweepProperty::Leibniz;
  if (token == "chain-eq10") return SweepProperty::ChainBounds;
  if (token == "westrick-eq11") return SweepProperty::WestrickBound;
  if (token == "extended-eq15") return SweepProperty::ExtendedUpper;
  if (token == "extended-eq16") return SweepProperty::ExtendedWestrick;
  if (token == "extended-lower") return SweepProperty::ExtendedLower;
  if (token == "reconstruction-roundtrip") return SweepProperty::ReconstructionRoundtrip;
  if (token == "conditions") return SweepProperty::Conditions;
  throw std::invalid_argument("sweep: unknown property '" + token + "'");
}

std::string property_token(SweepProperty property) {
  switch (property) {
    case SweepProperty::Leibniz:
      return "leibniz";
    case SweepProperty::ChainBounds:
      return "chain-eq10";
    case SweepProperty::WestrickBound:
      return "westrick-eq11";
    case SweepProperty::ExtendedUpper:
      return "extended-eq15";
    case SweepProperty::ExtendedWestrick:
      return "extended-eq16";
    case SweepProperty::ExtendedLower:
      return "extended-lower";
    case SweepProperty::ReconstructionRoundtrip:
      return "reconstruction-roundtrip";
    case SweepProperty::Conditions:
      return "conditions";
  }
  return "?";
}

bool SweepReport::has_violations() const {
  for (const PropertyReport& p : properties) {
    if (p.violation_count > 0) return true;
  }
  return false;
}

std::string SweepReport::to_json() const {
  ordered_json root = ordered_json::object();
  for (const PropertyReport& pr : properties) {
    ordered_json p = ordered_json::object();
    p["checked"] = pr.checked;
    p["skipped"] = pr.skipped;
    p["violation_count"] = pr.violation_count;
    ordered_json violations = ordered_json::array();
    for (const Witness& w : pr.violations) {
      ordered_json wj = ordered_json::object();
      wj["summary"] = w.summary;
      ordered_json data = ordered_json::object();
      for (const auto& [k, v] : w.data) data[k] = v;
      wj["data"] = std::move(data);
      violations.push_back(std::move(wj));
    }
    p["violations"] = std::move(violations);
    ordered_json eq = ordered_json::object();
    for (const auto& [link, classes] : pr.equality_classes) {
      ordered_json cj = ordered_json::object();
      for (const auto& [cls, count] : classes) cj[cls] = count;
      eq[link] = std::move(cj);
    }
    p["equality_classes"] = std::move(eq);
    ordered_json devs = ordered_json::array();
    for (const Deviation& d : pr.deviations) {
      ordered_json dj = ordered_json::object();
      dj["subject"] = d.subject;
      dj["claim"] = d.claim;
      dj["observed"] = d.observed;
      dj["witness"] = d.witness;
      dj["count"] = d.count;
      devs.push_back(std::move(dj));
    }
    p["deviations"] = std::move(devs);
    root[pr.property] = std::move(p);
  }
  return root.dump(2) + "\n";
}

SweepReport run_sweep(const SweepConfig& config) {
  if (config.max_n < 2) throw std::invalid_argument("sweep: max_n must be >= 2");
  if (config.max_n > kSieveBound) throw std::invalid_argument("sweep: max_n exceeds the sieve bound");
  if (config.properties.empty()) throw std::invalid_argument("sweep: no properties requested");
  if (config.table && config.table->limit() > kSieveBound) {
    throw std::invalid_argument("sweep: table limit exceeds the sieve bound");
  }

  std::vector<SweepProperty> props;
  for (SweepProperty p : config.properties) {
    if (std::find(props.begin(), props.end(), p) == props.end()) props.push_back(p);
  }

  for (SweepProperty p : props) {
    const bool spec_only = p == SweepProperty::Leibniz || p == SweepProperty::ExtendedUpper ||
                           p == SweepProperty::ExtendedWestrick || p == SweepProperty::ExtendedLower;
    const bool table_ok = p == SweepProperty::ReconstructionRoundtrip || p == SweepProperty::Conditions;
    if (spec_only && config.specs.empty()) {
      throw std::invalid_argument("sweep: property '" + property_token(p) + "' needs at least one spec");
    }
    if (table_ok && config.specs.empty() && !config.table) {
      throw std::invalid_argument("sweep: property '" + property_token(p) + "' needs a spec or a table");
    }
  }

  SweepConfig cfg = config;
  cfg.properties = props;
  if (cfg.workers == 0) cfg.workers = 1;

  const std::uint64_t sieve_bound = std::max(cfg.max_n, cfg.table ? cfg.table->limit() : 0);
  const LocalSieve sieve(sieve_bound);

  SweepReport report;
  for (SweepProperty p : props) {
    PropertyAccum acc;
    acc.cap = cfg.violation_cap;
    acc.report.property = property_token(p);
    switch (p) {
      case SweepProperty::Leibniz:
        run_leibniz(cfg, acc);
        break;
      case SweepProperty::ChainBounds:
        run_chain(cfg, sieve, acc);
        break;
      case SweepProperty::WestrickBound:
        run_westrick(cfg, sieve, acc);
        break;
      case SweepProperty::ExtendedUpper:
        run_extended_upper(cfg, sieve, acc);
        break;
      case SweepProperty::ExtendedWestrick:
        run_extended_westrick(cfg, sieve, acc);
        break;
      case SweepProperty::ExtendedLower:
        run_extended_lower(cfg, sieve, acc);
        break;
      case SweepProperty::ReconstructionRoundtrip:
        run_roundtrip(cfg, sieve, acc);
        break;
      case SweepProperty::Conditions:
        run_conditions(cfg, acc);
        break;
    }
    report.properties.push_back(std::move(acc.report));
  }
  return report;
}

Integer definition_oracle_D(const Integer& n, const PrimeSet& s) {
  if (n < 1) throw std::invalid_argument("definition_oracle_D: argument must be >= 1");
  if (mpz_fits_ulong_p(n.get_mpz_t())) {
    const std::uint64_t nn = n.get_ui();
    Integer acc = 0;
    std::uint64_t m = nn;
    for (std::uint64_t d = 2; d * d <= m; ++d) {
      if (m % d != 0) continue;
      std::uint64_t e = 0;
      do {
        m /= d;
        ++e;
      } while (m % d == 0);
      if (s.contains(Integer(static_cast<unsigned long>(d)))) acc += Integer(e) * (nn / d);
    }
    if (m > 1 && s.contains(Integer(static_cast<unsigned long>(m)))) acc += nn / m;
    return acc;
  }
  Integer acc = 0;
  Integer m = n;
  for (Integer d = 2; d * d <= m; ++d) {
    if (!mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t())) continue;
    unsigned long e = 0;
    do {
      mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), d.get_mpz_t());
      ++e;
    } while (mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t()));
    if (s.contains(d)) acc += e * (n / d);
  }
  if (m > 1 && s.contains(m)) acc += n / m;
  return acc;
}

}  // namespace subderiv
