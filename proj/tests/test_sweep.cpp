#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "subderiv/funcspec.hpp"
#include "subderiv/prime_set.hpp"
#include "subderiv/subderivative.hpp"
#include "subderiv/sweep.hpp"
#include "subderiv/table.hpp"

using namespace subderiv;
using nlohmann::json;

namespace {

LAdditiveSpec d_spec() { return subderivative_spec(PrimeSet::all()); }
LAdditiveSpec d2_spec() { return subderivative_spec(PrimeSet::finite({Integer(2)})); }

LAdditiveSpec skew_spec() {
  PrimeMap x(DefaultRule::constant(1));
  PrimeMap y(DefaultRule::prime_itself(), {{Integer(2), Rational::parse("3/2")}});
  return {std::move(x), std::move(y)};
}

struct Shape {
  bool prime = false;
  bool prime_power = false;
  bool power_of_two = false;
  bool two_smooth_tail = false;
};

Shape shape_of(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> f;
  std::uint64_t m = n;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d) continue;
    unsigned e = 0;
    while (m % d == 0) {
      m /= d;
      ++e;
    }
    f.push_back({d, e});
  }
  if (m > 1) f.push_back({m, 1});
  Shape s;
  s.prime = f.size() == 1 && f[0].second == 1;
  s.prime_power = f.size() == 1;
  s.power_of_two = f.size() == 1 && f[0].first == 2;
  s.two_smooth_tail =
      s.prime || s.power_of_two || (f.size() == 2 && f[0].first == 2 && f[1].second == 1);
  return s;
}

const PropertyReport& report_for(const SweepReport& r, const std::string& token) {
  for (const PropertyReport& p : r.properties) {
    if (p.property == token) return p;
  }
  REQUIRE(false);
  return r.properties.front();
}

std::uint64_t class_total(const PropertyReport& p, const std::string& link) {
  for (const auto& [name, classes] : p.equality_classes) {
    if (name != link) continue;
    std::uint64_t total = 0;
    for (const auto& [cls, count] : classes) total += count;
    return total;
  }
  return 0;
}

}  // namespace

TEST_CASE("definition oracle matches the library on three prime sets") {
  const PrimeSet all = PrimeSet::all();
  const PrimeSet s2 = PrimeSet::finite({Integer(2)});
  const PrimeSet s25 = PrimeSet::finite({Integer(2), Integer(5)});
  CHECK(definition_oracle_D(60, all) == 92);
  CHECK(definition_oracle_D(60, s25) == 72);
  CHECK(definition_oracle_D(6, s2) == 3);
  CHECK(definition_oracle_D(1, all) == 0);
  for (long n = 1; n <= 10000; ++n) {
    CHECK(definition_oracle_D(n, all) == subderivative(n, all));
    CHECK(definition_oracle_D(n, s2) == subderivative(n, s2));
    CHECK(definition_oracle_D(n, s25) == subderivative(n, s25));
  }
}

TEST_CASE("leibniz property passes for genuine specs") {
  SweepConfig cfg;
  cfg.max_n = 300;
  cfg.specs.push_back({"D", d_spec()});
  cfg.specs.push_back({"skew", skew_spec()});
  cfg.specs.push_back({"theta", zero_spec()});
  cfg.properties = {SweepProperty::Leibniz};
  const SweepReport r = run_sweep(cfg);
  const PropertyReport& p = report_for(r, "leibniz");
  CHECK(p.violation_count == 0);
  CHECK(p.violations.empty());
  CHECK(p.checked > 0);
  CHECK_FALSE(r.has_violations());
}

TEST_CASE("chain property: equality classes and the documented deviation") {
  SweepConfig cfg;
  cfg.max_n = 10000;
  cfg.properties = {SweepProperty::ChainBounds, SweepProperty::WestrickBound};
  const SweepReport r = run_sweep(cfg);

  const PropertyReport& chain = report_for(r, "chain-eq10");
  CHECK(chain.checked == 9999);
  CHECK(chain.violation_count == 0);

  // independent tallies of the equality sets
  std::uint64_t prime_powers = 0, pow2s = 0, tails = 0;
  std::uint64_t first_odd_pp = 0, odd_pps = 0;
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    const Shape s = shape_of(n);
    prime_powers += s.prime_power;
    pow2s += s.power_of_two || n == 2;
    tails += s.two_smooth_tail;
    if (s.prime_power && !s.prime && !(s.power_of_two || n == 2)) {
      ++odd_pps;
      if (first_odd_pp == 0) first_odd_pp = n;
    }
  }
  CHECK(first_odd_pp == 9);

  CHECK(class_total(chain, "am-gm-lower") == prime_powers);
  CHECK(class_total(chain, "linear-upper") == pow2s);
  CHECK(class_total(chain, "log2-upper") == pow2s);

  // the left link's equality set exceeds the documented prime-or-power-of-two
  REQUIRE(!chain.deviations.empty());
  bool found = false;
  for (const Deviation& d : chain.deviations) {
    if (d.subject.find("am-gm-lower") == std::string::npos) continue;
    if (d.subject.find("beyond") == std::string::npos) continue;
    found = true;
    CHECK(d.witness == "9");
    CHECK(d.count == odd_pps);
  }
  CHECK(found);

  const PropertyReport& westrick = report_for(r, "westrick-eq11");
  CHECK(westrick.violation_count == 0);
  CHECK(class_total(westrick, "westrick-upper") == tails);
  CHECK(class_total(westrick, "westrick-vs-linear") == pow2s);
  CHECK(westrick.deviations.empty());  // the documented sets are exact here
}

TEST_CASE("extended properties for the partial derivative") {
  SweepConfig cfg;
  cfg.max_n = 1000;
  cfg.specs.push_back({"D_2", d2_spec()});
  cfg.properties = {SweepProperty::ExtendedUpper, SweepProperty::ExtendedWestrick, SweepProperty::ExtendedLower};
  const SweepReport r = run_sweep(cfg);

  // Eq-15 link 1 collapses to equality for every n; beyond the documented
  // power-of-two set everywhere else.
  const PropertyReport& up = report_for(r, "extended-eq15");
  CHECK(up.violation_count == 0);
  CHECK(up.checked == 999);
  std::uint64_t pow2s = 0;
  for (std::uint64_t n = 2; n <= 1000; ++n) pow2s += shape_of(n).power_of_two || n == 2;
  bool beyond = false;
  for (const Deviation& d : up.deviations) {
    if (d.subject != "D_2/scaled-linear-upper equality beyond documented set") continue;
    beyond = true;
    CHECK(d.witness == "3");
    CHECK(d.count == 999 - pow2s);
  }
  CHECK(beyond);

  // Eq-16 only applies when every prime factor carries weight: powers of two.
  const PropertyReport& ew = report_for(r, "extended-eq16");
  CHECK(ew.violation_count == 0);
  CHECK(ew.checked == pow2s);
  CHECK(ew.skipped == 999 - pow2s);
  CHECK(class_total(ew, "D_2/extended-westrick-upper") == pow2s);
  CHECK(ew.deviations.empty());

  const PropertyReport& lo = report_for(r, "extended-lower");
  CHECK(lo.violation_count == 0);
  CHECK(lo.checked == 999);
}

TEST_CASE("extended westrick for D matches the unscaled equality set") {
  SweepConfig cfg;
  cfg.max_n = 2000;
  cfg.specs.push_back({"D", d_spec()});
  cfg.properties = {SweepProperty::ExtendedWestrick, SweepProperty::ExtendedUpper};
  const SweepReport r = run_sweep(cfg);
  const PropertyReport& ew = report_for(r, "extended-eq16");
  CHECK(ew.violation_count == 0);
  CHECK(ew.skipped == 0);
  std::uint64_t tails = 0;
  for (std::uint64_t n = 2; n <= 2000; ++n) tails += shape_of(n).two_smooth_tail;
  CHECK(class_total(ew, "D/extended-westrick-upper") == tails);
  CHECK(ew.deviations.empty());

  const PropertyReport& up = report_for(r, "extended-eq15");
  CHECK(up.violation_count == 0);
  CHECK(up.deviations.empty());  // for D the scaled bounds keep the power-of-two set
}

TEST_CASE("extended lower for theta is equality everywhere") {
  SweepConfig cfg;
  cfg.max_n = 500;
  cfg.specs.push_back({"theta", zero_spec()});
  cfg.properties = {SweepProperty::ExtendedLower, SweepProperty::ExtendedUpper};
  const SweepReport r = run_sweep(cfg);
  const PropertyReport& lo = report_for(r, "extended-lower");
  CHECK(lo.violation_count == 0);
  CHECK(lo.checked == 499);
  bool beyond = false;
  for (const Deviation& d : lo.deviations) {
    if (d.subject.find("beyond") == std::string::npos) continue;
    beyond = true;
    CHECK(d.witness == "6");
  }
  CHECK(beyond);

  // the scaled upper bounds carry no content for the zero function
  const PropertyReport& up = report_for(r, "extended-eq15");
  CHECK(up.checked == 0);
  CHECK(up.skipped == 499);
}

TEST_CASE("reconstruction roundtrip for genuine and corrupted tables") {
  {
    SweepConfig cfg;
    cfg.max_n = 2000;
    cfg.specs.push_back({"D", d_spec()});
    cfg.specs.push_back({"D_2", d2_spec()});
    cfg.properties = {SweepProperty::ReconstructionRoundtrip};
    const SweepReport r = run_sweep(cfg);
    const PropertyReport& p = report_for(r, "reconstruction-roundtrip");
    CHECK(p.violation_count == 0);
    CHECK(p.checked > 0);
    CHECK_FALSE(r.has_violations());
  }
  {
    FunctionTable bad = tabulate(skew_spec(), 1000);
    bad.set(8, Rational(5));
    SweepConfig cfg;
    cfg.max_n = 1000;
    cfg.table = bad;
    cfg.table_label = "bad";
    cfg.properties = {SweepProperty::ReconstructionRoundtrip, SweepProperty::Conditions};
    const SweepReport r = run_sweep(cfg);
    CHECK(r.has_violations());
    const PropertyReport& rt = report_for(r, "reconstruction-roundtrip");
    REQUIRE(rt.violation_count > 0);
    CHECK(rt.violations.front().summary.find("round-trip") != std::string::npos);
    CHECK(rt.violations.front().summary.find("bad") != std::string::npos);
    const PropertyReport& cond = report_for(r, "conditions");
    CHECK(cond.violation_count > 0);
  }
}

TEST_CASE("conditions property over specs") {
  SweepConfig cfg;
  cfg.max_n = 1000;
  cfg.specs.push_back({"D", d_spec()});
  cfg.specs.push_back({"skew", skew_spec()});
  cfg.properties = {SweepProperty::Conditions};
  const SweepReport r = run_sweep(cfg);
  const PropertyReport& p = report_for(r, "conditions");
  CHECK(p.violation_count == 0);
  CHECK(p.checked > 0);
}

TEST_CASE("reports are byte-identical across worker counts") {
  FunctionTable table = tabulate(skew_spec(), 3000);
  auto make_cfg = [&](unsigned workers) {
    SweepConfig cfg;
    cfg.max_n = 20000;
    cfg.workers = workers;
    cfg.specs.push_back({"D", d_spec()});
    cfg.specs.push_back({"D_2", d2_spec()});
    cfg.table = table;
    cfg.table_label = "skew-table";
    cfg.properties = {SweepProperty::Leibniz,        SweepProperty::ChainBounds,
                      SweepProperty::WestrickBound,  SweepProperty::ExtendedUpper,
                      SweepProperty::ExtendedWestrick, SweepProperty::ExtendedLower,
                      SweepProperty::ReconstructionRoundtrip, SweepProperty::Conditions};
    return cfg;
  };
  const std::string one = run_sweep(make_cfg(1)).to_json();
  const std::string two = run_sweep(make_cfg(2)).to_json();
  const std::string five = run_sweep(make_cfg(5)).to_json();
  CHECK(one == two);
  CHECK(one == five);
  CHECK(json::parse(one).is_object());  // well-formed JSON
}

TEST_CASE("violation witnesses are capped but counted in full") {
  FunctionTable bad = tabulate(d_spec(), 400);
  // break every value above 300: plenty of violations
  for (std::uint64_t n = 301; n <= 400; ++n) bad.set(n, bad.at(n) + Rational(1));
  SweepConfig cfg;
  cfg.max_n = 400;
  cfg.table = bad;
  cfg.table_label = "mangled";
  cfg.violation_cap = 3;
  cfg.properties = {SweepProperty::ReconstructionRoundtrip};
  const SweepReport r = run_sweep(cfg);
  const PropertyReport& p = report_for(r, "reconstruction-roundtrip");
  CHECK(p.violation_count > 3);
  CHECK(p.violations.size() == 3);
}

TEST_CASE("property tokens round-trip") {
  for (const char* token : {"leibniz", "chain-eq10", "westrick-eq11", "extended-eq15", "extended-eq16",
                            "extended-lower", "reconstruction-roundtrip", "conditions"}) {
    CHECK(property_token(property_from_token(token)) == token);
  }
  CHECK_THROWS_AS(property_from_token("chain"), std::invalid_argument);
}

TEST_CASE("config validation") {
  SweepConfig cfg;
  cfg.max_n = 1;
  cfg.properties = {SweepProperty::ChainBounds};
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg.max_n = kSieveBound + 1;
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg.max_n = 100;
  cfg.properties = {};
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg.properties = {SweepProperty::Leibniz};  // needs a spec
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
  cfg.properties = {SweepProperty::Conditions};  // needs a spec or table
  CHECK_THROWS_AS(run_sweep(cfg), std::invalid_argument);
}

TEST_CASE("json report structure") {
  SweepConfig cfg;
  cfg.max_n = 100;
  cfg.specs.push_back({"D", d_spec()});
  cfg.properties = {SweepProperty::ChainBounds, SweepProperty::Leibniz};
  const SweepReport r = run_sweep(cfg);
  const std::string text = r.to_json();
  CHECK(text.back() == '\n');
  const json j = json::parse(text);
  REQUIRE(j.contains("chain-eq10"));
  REQUIRE(j.contains("leibniz"));
  for (const char* key : {"checked", "skipped", "violation_count", "violations", "equality_classes", "deviations"}) {
    CAPTURE(key);
    CHECK(j["chain-eq10"].contains(key));
  }
  CHECK(j["chain-eq10"]["violation_count"] == 0);
  CHECK(j["chain-eq10"]["equality_classes"].contains("am-gm-lower"));
  // property order in the report follows the config
  CHECK(text.find("chain-eq10") < text.find("leibniz"));
}
