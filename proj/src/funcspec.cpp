#include "subderiv/funcspec.hpp"

#include <json.hpp>

#include <stdexcept>
#include <utility>

#include "subderiv/primes.hpp"

namespace subderiv {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kind_token(DefaultKind kind) {
  switch (kind) {
    case DefaultKind::Const:
      return "const";
    case DefaultKind::PrimeItself:
      return "prime";
    case DefaultKind::ReciprocalPrime:
      return "reciprocal-prime";
  }
  return "?";
}

DefaultKind kind_from_token(const std::string& token) {
  if (token == "const") return DefaultKind::Const;
  if (token == "prime") return DefaultKind::PrimeItself;
  if (token == "reciprocal-prime") return DefaultKind::ReciprocalPrime;
  throw std::invalid_argument("spec json: unknown default kind '" + token + "'");
}

void require_keys(const ordered_json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw std::invalid_argument("spec json: unknown key '" + item.key() + "' in " + where);
  }
}

DefaultRule default_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("spec json: " + where + ".default must be an object");
  require_keys(j, {"kind", "value"}, where + ".default");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("spec json: " + where + ".default needs a string 'kind'");
  }
  const DefaultKind kind = kind_from_token(j["kind"].get<std::string>());
  if (kind == DefaultKind::Const) {
    if (!j.contains("value") || !j["value"].is_string()) {
      throw std::invalid_argument("spec json: " + where + ".default of kind 'const' needs a string 'value'");
    }
    return DefaultRule::constant(Rational::parse(j["value"].get<std::string>(), /*require_lowest_terms=*/true));
  }
  if (j.contains("value")) {
    throw std::invalid_argument("spec json: " + where + ".default of kind '" + std::string(kind_token(kind)) + "' must not carry a 'value'");
  }
  return {kind, 0};
}

PrimeMap map_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("spec json: '" + where + "' must be an object");
  require_keys(j, {"overrides", "default"}, where);
  if (!j.contains("default")) throw std::invalid_argument("spec json: '" + where + "' needs a 'default'");
  std::map<Integer, Rational> overrides;
  if (j.contains("overrides")) {
    const ordered_json& o = j["overrides"];
    if (!o.is_object()) throw std::invalid_argument("spec json: " + where + ".overrides must be an object");
    for (const auto& item : o.items()) {
      const Integer p = parse_integer(item.key());
      if (!item.value().is_string()) {
        throw std::invalid_argument("spec json: " + where + ".overrides[" + item.key() + "] must be a rational string");
      }
      overrides.emplace(p, Rational::parse(item.value().get<std::string>(), /*require_lowest_terms=*/true));
    }
  }
  return PrimeMap(default_from_json(j["default"], where), std::move(overrides));
}

ordered_json map_to_json(const PrimeMap& m) {
  ordered_json overrides = ordered_json::object();
  for (const auto& [p, v] : m.overrides()) overrides[p.get_str()] = v.str();
  ordered_json def = ordered_json::object();
  def["kind"] = kind_token(m.default_rule().kind);
  if (m.default_rule().kind == DefaultKind::Const) def["value"] = m.default_rule().value.str();
  ordered_json out = ordered_json::object();
  out["overrides"] = std::move(overrides);
  out["default"] = std::move(def);
  return out;
}

// x-side map that is `on` at members of s and 0 elsewhere.
PrimeMap support_map(const PrimeSet& s, const DefaultRule& on) {
  std::map<Integer, Rational> overrides;
  switch (s.kind()) {
    case PrimeSet::Kind::All:
      return PrimeMap(on);
    case PrimeSet::Kind::Finite:
      for (const Integer& p : s.listed()) overrides.emplace(p, on.apply(p));
      return PrimeMap(DefaultRule::constant(0), std::move(overrides));
    case PrimeSet::Kind::Complement:
      for (const Integer& p : s.listed()) overrides.emplace(p, 0);
      return PrimeMap(on, std::move(overrides));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Rational DefaultRule::apply(const Integer& p) const {
  switch (kind) {
    case DefaultKind::Const:
      return value;
    case DefaultKind::PrimeItself:
      return Rational(p);
    case DefaultKind::ReciprocalPrime:
      return Rational(Integer(1), p);
  }
  throw std::logic_error("unreachable");
}

PrimeMap::PrimeMap(DefaultRule def, std::map<Integer, Rational> overrides)
    : default_(def), overrides_(std::move(overrides)) {
  for (const auto& [p, v] : overrides_) {
    (void)v;
    if (!is_prime(p)) throw std::invalid_argument("prime map: override key " + p.get_str() + " is not prime");
  }
}

Rational PrimeMap::at(const Integer& p) const {
  const auto it = overrides_.find(p);
  return it != overrides_.end() ? it->second : default_.apply(p);
}

bool PrimeMap::never_zero() const {
  if (default_.can_vanish()) return false;
  for (const auto& [p, v] : overrides_) {
    (void)p;
    if (v.is_zero()) return false;
  }
  return true;
}

CMultiplicativeSpec::CMultiplicativeSpec(PrimeMap y_map) : y(std::move(y_map)) {
  if (!y.never_zero()) throw std::invalid_argument("multiplicative spec: y must be nonzero at every prime");
}

LAdditiveSpec::LAdditiveSpec(PrimeMap x_map, PrimeMap y_map) : x(std::move(x_map)), y(std::move(y_map)) {
  if (!y.never_zero()) throw std::invalid_argument("function spec: y must be nonzero at every prime");
}

Rational eval_c_additive(const CAdditiveSpec& spec, const Integer& n) {
  Rational sum = 0;
  for (const PrimePower& pp : factorize(n)) {
    sum += Rational(Integer(pp.exponent)) * spec.x.at(pp.prime);
  }
  return sum;
}

Rational eval_c_multiplicative(const CMultiplicativeSpec& spec, const Integer& n) {
  Rational prod = 1;
  for (const PrimePower& pp : factorize(n)) {
    prod *= spec.y.at(pp.prime).pow(pp.exponent);
  }
  return prod;
}

Rational eval_l_additive(const LAdditiveSpec& spec, const Integer& n) {
  Rational sum = 0;
  Rational prod = 1;
  for (const PrimePower& pp : factorize(n)) {
    const Rational xp = spec.x.at(pp.prime);
    const Rational yp = spec.y.at(pp.prime);
    sum += Rational(Integer(pp.exponent)) * xp / yp;
    prod *= yp.pow(pp.exponent);
  }
  return sum * prod;
}

Rational eval_prime_power(const LAdditiveSpec& spec, const Integer& p, unsigned long a) {
  if (!is_prime(p)) throw std::invalid_argument("eval_prime_power: base must be prime");
  if (a == 0) return 0;
  return Rational(Integer(a)) * spec.x.at(p) * spec.y.at(p).pow(a - 1);
}

LAdditiveSpec subderivative_spec(const PrimeSet& s) {
  return LAdditiveSpec(support_map(s, DefaultRule::constant(1)), PrimeMap(DefaultRule::prime_itself()));
}

CAdditiveSpec log_subderivative_spec(const PrimeSet& s) {
  return CAdditiveSpec{support_map(s, DefaultRule::reciprocal_prime())};
}

CMultiplicativeSpec identity_spec() {
  return CMultiplicativeSpec(PrimeMap(DefaultRule::prime_itself()));
}

CMultiplicativeSpec unit_spec() {
  return CMultiplicativeSpec(PrimeMap(DefaultRule::constant(1)));
}

LAdditiveSpec zero_spec() {
  return LAdditiveSpec(PrimeMap(DefaultRule::constant(0)), PrimeMap(DefaultRule::constant(1)));
}

LAdditiveSpec as_l_additive(const CAdditiveSpec& g) {
  return LAdditiveSpec(g.x, PrimeMap(DefaultRule::constant(1)));
}

BuiltinSpec builtin(const std::string& name, const std::optional<PrimeSet>& s) {
  const PrimeSet everywhere = PrimeSet::all();
  if (name == "D") return subderivative_spec(s.value_or(everywhere));
  if (name == "ld") return log_subderivative_spec(s.value_or(everywhere));
  if (name == "D_S" || name == "ld_S") {
    if (!s) throw std::invalid_argument("builtin: '" + name + "' requires a prime set");
    return name == "D_S" ? BuiltinSpec(subderivative_spec(*s)) : BuiltinSpec(log_subderivative_spec(*s));
  }
  if (name == "N" || name == "E" || name == "theta") {
    if (s) throw std::invalid_argument("builtin: '" + name + "' does not take a prime set");
    if (name == "N") return identity_spec();
    if (name == "E") return unit_spec();
    return zero_spec();
  }
  throw std::invalid_argument("builtin: unknown function '" + name + "'");
}

LAdditiveSpec spec_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("spec json: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("spec json: top level must be an object");
  require_keys(j, {"x", "y"}, "spec");
  if (!j.contains("x") || !j.contains("y")) throw std::invalid_argument("spec json: needs both 'x' and 'y'");
  return LAdditiveSpec(map_from_json(j["x"], "x"), map_from_json(j["y"], "y"));
}

std::string spec_to_json(const LAdditiveSpec& spec) {
  ordered_json j = ordered_json::object();
  j["x"] = map_to_json(spec.x);
  j["y"] = map_to_json(spec.y);
  return j.dump(2) + "\n";
}

std::string decomposition_to_json(const CAdditiveSpec& g, const CMultiplicativeSpec& h) {
  ordered_json j = ordered_json::object();
  j["g"] = map_to_json(g.x);
  j["h"] = map_to_json(h.y);
  return j.dump(2) + "\n";
}

std::string prime_values_to_json(const std::map<Integer, Rational>& values) {
  ordered_json j = ordered_json::object();
  for (const auto& [p, v] : values) j[p.get_str()] = v.str();
  return j.dump(2) + "\n";
}

}  // namespace subderiv
