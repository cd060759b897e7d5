#pragma once

// Analysis configuration: the field, the modulus, Gamma and every bound the
// diagnostics use, read from JSON. Unset bounds take field-dependent
// defaults, and the resolved values are what the report echoes.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "kmsphase/class_structure.hpp"
#include "kmsphase/scalar.hpp"

namespace kms {

struct Bounds {
  std::map<std::string, std::uint64_t> values;
  std::vector<std::string> defaulted;  // names filled in from defaults

  std::uint64_t get(const std::string& name) const;
};

// Names and defaults of every bound, for the given field.
std::map<std::string, std::uint64_t> default_bounds(const NumberField& K);

enum class GammaKind { Trivial, Full, Generators };

struct Config {
  std::string field = "Q";
  std::vector<int> minf;
  nlohmann::json m0 = 1;  // ideal record as given
  GammaKind gamma_kind = GammaKind::Trivial;
  nlohmann::json gamma_generators = nlohmann::json::array();
  Bounds bounds;
  long precision = kDefaultPrecision;
};

// Raises ErrorCode::Config on any malformed or unknown entry.
Config parse_config(const nlohmann::json& doc);
Config parse_config_text(const std::string& text);

// {"hnf":[a,b,c],"den":n}, [[a,b],[0,c]] rows, or a bare integer n for nR.
Ideal ideal_from_json(const NumberField& K, const nlohmann::json& j);
nlohmann::json ideal_to_json(const Ideal& I);
// {"signs":[...],"residue":[x,y]} or a bare integer residue.
ResidueClass residue_from_json(const Congruence& C, const nlohmann::json& j);
nlohmann::json residue_to_json(const ResidueClass& r);
nlohmann::json element_to_json(const AlgebraicInteger& u);

// Everything a command needs, built once from a config.
class Analysis {
 public:
  static Analysis build(const Config& config);

  const Config& config() const { return config_; }
  const ClassTable& table() const { return table_; }
  const Congruence& congruence() const { return table_.congruence(); }
  const GammaSubgroup& gamma() const { return table_.gamma(); }
  const NumberField& field() const { return table_.congruence().field(); }
  const UnitGroupMG& units() const { return units_; }
  std::uint64_t bound(const std::string& name) const { return config_.bounds.get(name); }

  // "3" is a class index; "[n]" or "[a,b,c]" is the class of that ideal.
  int resolve_class(const std::string& spec) const;

 private:
  Analysis(Config c, ClassTable t, UnitGroupMG u)
      : config_(std::move(c)), table_(std::move(t)), units_(std::move(u)) {}

  Config config_;
  ClassTable table_;
  UnitGroupMG units_;
};

}  // namespace kms
