#include "kmsphase/config.hpp"

#include <set>

#include "kmsphase/errors.hpp"
#include "kmsphase/measures.hpp"

namespace kms {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::Config, msg); }

Int json_int(const json& j, const std::string& what) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_string()) {
    Int v;
    if (v.set_str(j.get<std::string>(), 10) == 0) return v;
  }
  config_error(what + " must be an integer");
}

std::uint64_t json_u64(const json& j, const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long>() >= 0) return static_cast<std::uint64_t>(j.get<long>());
  config_error(what + " must be a nonnegative integer");
}

json int_json(const Int& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : obj.items())
    if (allowed.count(k) == 0) config_error("unknown key '" + k + "' in " + where);
}

}  // namespace

std::uint64_t Bounds::get(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) fail(ErrorCode::Argument, "no bound named " + name);
  return it->second;
}

std::map<std::string, std::uint64_t> default_bounds(const NumberField& K) {
  const bool q = K.is_rational();
  return {
      {"scan_bound", ClassTable::default_scan_bound(K)},
      {"zeta_bound", q ? 10000U : 1000U},
      {"euler_bound", q ? 10000U : 1000U},
      {"equidistribution_x", q ? 100000U : 10000U},
      {"normestimate_small", 50},
      {"normestimate_large", 5000},
      {"measure_prime_bound", kDefaultMeasurePrimeBound},
      {"valuation_cap", kDefaultValuationCap},
      {"samples", 100},
      {"borel_cantelli_x", q ? 1000U : 200U},
      {"divergence_max", 5000},
      {"class_measure_x", q ? 2000U : 300U},
      {"pair_budget", 1000000},
      {"seed", 1},
  };
}

Ideal ideal_from_json(const NumberField& K, const json& j) {
  Ideal I;
  if (j.is_number_integer() || j.is_string()) {
    const Int n = json_int(j, "ideal");
    if (n == 0) config_error("the zero ideal is not allowed");
    return K.rational_ideal(abs(n));
  }
  if (j.is_array()) {
    // rows [[a, b], [0, c]]
    if (j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2)
      config_error("ideal rows must be [[a, b], [0, c]]");
    if (json_int(j[1][0], "ideal row entry") != 0) config_error("ideal rows must be upper triangular");
    I.a = json_int(j[0][0], "a");
    I.b = json_int(j[0][1], "b");
    I.c = json_int(j[1][1], "c");
  } else if (j.is_object()) {
    only_keys(j, {"hnf", "den"}, "ideal");
    if (!j.contains("hnf") || !j["hnf"].is_array()) config_error("ideal needs an \"hnf\" array");
    const auto& h = j["hnf"];
    if (h.size() == 1) {
      I.a = json_int(h[0], "a");
    } else if (h.size() == 3) {
      I.a = json_int(h[0], "a");
      I.b = json_int(h[1], "b");
      I.c = json_int(h[2], "c");
    } else {
      config_error("\"hnf\" must be [a, b, c]");
    }
    if (j.contains("den")) I.den = json_int(j["den"], "den");
  } else {
    config_error("ideal must be an object, a row matrix or an integer");
  }
  if (!K.is_valid_hnf(I)) config_error("not an ideal in Hermite normal form");
  return K.normalize(I);
}

json ideal_to_json(const Ideal& I) {
  return json{{"hnf", json::array({int_json(I.a), int_json(I.b), int_json(I.c)})},
              {"den", int_json(I.den)}};
}

json element_to_json(const AlgebraicInteger& u) { return json::array({int_json(u.x), int_json(u.y)}); }

ResidueClass residue_from_json(const Congruence& C, const json& j) {
  const auto& K = C.field();
  ResidueClass r;
  json res;
  if (j.is_object()) {
    only_keys(j, {"signs", "residue"}, "Gamma generator");
    if (j.contains("signs")) {
      if (!j["signs"].is_array()) config_error("signs must be an array");
      for (const auto& s : j["signs"]) {
        if (!s.is_number_integer()) config_error("signs must be +1 or -1");
        r.signs.push_back(s.get<int>());
      }
    }
    res = j.contains("residue") ? j["residue"] : json(1);
  } else {
    res = j;
  }
  AlgebraicInteger u;
  if (res.is_array()) {
    if (res.empty() || res.size() > 2) config_error("residue must be [x] or [x, y]");
    u.x = json_int(res[0], "residue");
    if (res.size() == 2) u.y = json_int(res[1], "residue");
  } else {
    u.x = json_int(res, "residue");
  }
  if (K.is_rational() && u.y != 0) config_error("residues over Q have no omega part");
  r.residue = K.reduce(u, C.modulus().m0);
  if (r.signs.empty()) r.signs.assign(static_cast<std::size_t>(C.modulus().infinite_count()), 1);
  return r;
}

json residue_to_json(const ResidueClass& r) {
  return json{{"signs", r.signs}, {"residue", element_to_json(r.residue)}};
}

Config parse_config(const json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  only_keys(doc, {"field", "modulus", "gamma", "bounds", "precision"}, "config");
  Config c;
  if (doc.contains("field")) {
    if (!doc["field"].is_string()) config_error("field must be a string like \"Q\" or \"Q(sqrt,-5)\"");
    c.field = doc["field"].get<std::string>();
  }
  const NumberField K = NumberField::parse(c.field);
  c.minf.assign(static_cast<std::size_t>(K.real_embedding_count()), 0);
  if (doc.contains("modulus")) {
    const auto& m = doc["modulus"];
    if (!m.is_object()) config_error("modulus must be an object");
    only_keys(m, {"minf", "m0"}, "modulus");
    if (m.contains("minf")) {
      if (!m["minf"].is_array()) config_error("minf must be an array");
      c.minf.clear();
      for (const auto& f : m["minf"]) {
        if (!f.is_number_integer() || (f.get<long>() != 0 && f.get<long>() != 1))
          config_error("minf flags must be 0 or 1");
        c.minf.push_back(f.get<int>());
      }
    }
    if (m.contains("m0")) c.m0 = m["m0"];
  }
  if (c.minf.size() != static_cast<std::size_t>(K.real_embedding_count()))
    config_error("minf needs one flag per real embedding (" + std::to_string(K.real_embedding_count()) + ")");
  // validated here so a bad ideal is a config error, not a later failure
  const Ideal m0 = ideal_from_json(K, c.m0);
  if (!m0.integral()) config_error("m0 must be integral");
  c.m0 = ideal_to_json(m0);
  if (doc.contains("gamma")) {
    const auto& g = doc["gamma"];
    if (g.is_string()) {
      const auto s = g.get<std::string>();
      if (s == "trivial")
        c.gamma_kind = GammaKind::Trivial;
      else if (s == "full")
        c.gamma_kind = GammaKind::Full;
      else
        config_error("gamma must be \"trivial\", \"full\" or {\"generators\": [...]}");
    } else if (g.is_object()) {
      only_keys(g, {"generators"}, "gamma");
      if (!g.contains("generators") || !g["generators"].is_array())
        config_error("gamma needs a \"generators\" array");
      c.gamma_kind = GammaKind::Generators;
      c.gamma_generators = g["generators"];
    } else {
      config_error("gamma must be a string or an object");
    }
  }
  auto defaults = default_bounds(K);
  if (doc.contains("bounds")) {
    const auto& b = doc["bounds"];
    if (!b.is_object()) config_error("bounds must be an object");
    for (const auto& [k, v] : b.items()) {
      if (defaults.count(k) == 0) config_error("unknown bound '" + k + "'");
      c.bounds.values[k] = json_u64(v, "bound " + k);
    }
  }
  for (const auto& [k, v] : defaults) {
    if (c.bounds.values.count(k) != 0) continue;
    c.bounds.values[k] = v;
    c.bounds.defaulted.push_back(k);
  }
  for (const char* k : {"scan_bound", "zeta_bound", "euler_bound", "equidistribution_x",
                        "normestimate_small", "normestimate_large", "valuation_cap", "samples",
                        "borel_cantelli_x", "divergence_max", "class_measure_x", "pair_budget"})
    if (c.bounds.values[k] == 0) config_error(std::string("bound ") + k + " must be positive");
  if (c.bounds.values["normestimate_small"] > c.bounds.values["normestimate_large"])
    config_error("normestimate_small must not exceed normestimate_large");
  if (c.bounds.values["valuation_cap"] > 1000) config_error("valuation_cap is limited to 1000");
  if (doc.contains("precision")) {
    if (!doc["precision"].is_number_integer()) config_error("precision must be an integer");
    c.precision = doc["precision"].get<long>();
    if (c.precision != kDefaultPrecision)
      config_error("only " + std::to_string(kDefaultPrecision) + "-bit interval precision is supported");
  }
  return c;
}

Config parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

Analysis Analysis::build(const Config& config) {
  const NumberField K = NumberField::parse(config.field);
  const Ideal m0 = ideal_from_json(K, config.m0);
  Congruence C(K, make_modulus(K, config.minf, m0));
  GammaSubgroup G = GammaSubgroup::trivial(C);
  if (config.gamma_kind == GammaKind::Full) {
    G = GammaSubgroup::full(C);
  } else if (config.gamma_kind == GammaKind::Generators) {
    std::vector<ResidueClass> gens;
    for (const auto& g : config.gamma_generators) gens.push_back(residue_from_json(C, g));
    G = GammaSubgroup(C, std::move(gens));
  }
  ClassTable T = ClassTable::build(C, G, config.bounds.get("scan_bound"));
  UnitGroupMG U = unit_group_mg(T.congruence(), T.gamma());
  return Analysis(config, std::move(T), std::move(U));
}

int Analysis::resolve_class(const std::string& spec) const {
  if (spec.empty()) fail(ErrorCode::Argument, "empty class spec");
  if (spec.front() == '[') {
    json j;
    try {
      j = json::parse(spec);
    } catch (const json::parse_error&) {
      fail(ErrorCode::Argument, "bad class spec " + spec);
    }
    json ideal;
    if (j.size() == 1)
      ideal = j[0];
    else if (j.size() == 3)
      ideal = json{{"hnf", j}};
    else
      fail(ErrorCode::Argument, "class spec must be [n] or [a,b,c]");
    Ideal I;
    try {
      I = ideal_from_json(field(), ideal);
    } catch (const Error& e) {
      fail(ErrorCode::Argument, e.what());
    }
    return table_.class_of(I);
  }
  std::size_t used = 0;
  int k = -1;
  try {
    k = std::stoi(spec, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Argument, "bad class spec " + spec);
  }
  if (used != spec.size() || k < 0 || k >= table_.order())
    fail(ErrorCode::Argument, "no class " + spec + " (there are " + std::to_string(table_.order()) + ")");
  return k;
}

}  // namespace kms
