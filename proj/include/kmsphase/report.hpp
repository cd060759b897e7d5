#pragma once

// The phase-diagram report: input echo, class data, the regime tables of the
// four dynamical systems and the diagnostic verdicts, with a versioned JSON
// form and a text rendering.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "kmsphase/config.hpp"

namespace kms {

inline constexpr const char* kReportSchema = "kmsphase.phase_report";
inline constexpr const char* kReportSchemaVersion = "1.0.0";

struct Provenance {
  std::string module;
  std::map<std::string, std::uint64_t> bounds;
  bool operator==(const Provenance&) const = default;
};

struct InputEcho {
  std::string field;
  std::vector<int> minf;
  nlohmann::json m0;
  std::string gamma;  // "trivial", "full" or "generators"
  nlohmann::json gamma_generators;
  std::map<std::string, std::uint64_t> bounds;
  std::vector<std::string> defaulted_bounds;
  long precision = 0;
  bool operator==(const InputEcho&) const = default;
};

struct FieldRecord {
  std::string spec;
  std::string discriminant;
  int degree = 1;
  int real_embeddings = 1;
  int class_number = 1;
  int torsion_order = 2;
  std::string fundamental_unit;  // empty when the unit rank is 0
  bool operator==(const FieldRecord&) const = default;
};

struct ClassRecord {
  int index = 0;
  nlohmann::json representative;
  std::string min_norm;
  int k = 1;
  std::vector<nlohmann::json> norm_minimizing;
  std::vector<long> coordinates;
  bool operator==(const ClassRecord&) const = default;
};

struct ClassTableRecord {
  int h = 1;
  int field_class_number = 1;
  std::uint64_t gamma_order = 1;
  std::uint64_t unit_image_order = 1;
  std::vector<long> elementary_divisors;
  long exponent = 1;
  std::vector<ClassRecord> classes;
  std::vector<std::vector<int>> multiplication;
  Provenance provenance;
  bool operator==(const ClassTableRecord&) const = default;
};

struct UnitRecord {
  int torsion_order = 1;
  int free_rank = 0;
  nlohmann::json free_generator;  // null when the rank is 0
  int free_exponent = 0;
  std::string description;
  Provenance provenance;
  bool operator==(const UnitRecord&) const = default;
};

struct BlockRecord {
  int cls = 0;
  std::string size;
  std::string group;
  bool operator==(const BlockRecord&) const = default;
};

struct RegimeRecord {
  std::string lower;  // "-inf", "0", "1", "2", "inf"
  bool lower_closed = false;
  std::string upper;
  bool upper_closed = false;
  std::string kind;  // none, invariant, unique, characters, simplex, kms_infinity, ground
  std::string description;
  std::string status;  // "quoted": classification from the theorems, not verified here
  std::vector<std::string> ingredients;  // diagnostics feeding the numeric side
  std::vector<BlockRecord> blocks;
  bool operator==(const RegimeRecord&) const = default;
};

struct SystemRecord {
  std::string algebra;
  std::vector<std::string> boundaries;
  std::vector<RegimeRecord> regimes;
  std::string ground_total;
  bool ground_exceeds_kms_infinity = false;
  bool operator==(const SystemRecord&) const = default;
};

struct KmsSample {
  nlohmann::json ideal;
  std::string value;
  bool operator==(const KmsSample&) const = default;
};

struct BoundaryQuotientRecord {
  std::string description;
  std::string status;
  std::vector<KmsSample> samples;
  std::vector<std::string> ingredients;
  bool operator==(const BoundaryQuotientRecord&) const = default;
};

struct DiagnosticRecord {
  std::string name;
  std::string module;
  bool pass = false;
  std::map<std::string, std::uint64_t> bounds;
  nlohmann::json detail;
  bool operator==(const DiagnosticRecord&) const = default;
};

struct PhaseReport {
  std::string schema = kReportSchema;
  std::string schema_version = kReportSchemaVersion;
  std::string scope;
  InputEcho input;
  FieldRecord field;
  ClassTableRecord class_table;
  UnitRecord unit_group;
  SystemRecord full_system;
  BoundaryQuotientRecord boundary_quotient;
  SystemRecord multiplicative;
  SystemRecord principal_multiplicative;
  std::vector<DiagnosticRecord> diagnostics;
  bool all_pass = false;
  bool operator==(const PhaseReport&) const = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(Provenance, module, bounds)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(InputEcho, field, minf, m0, gamma, gamma_generators, bounds,
                                   defaulted_bounds, precision)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(FieldRecord, spec, discriminant, degree, real_embeddings,
                                   class_number, torsion_order, fundamental_unit)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClassRecord, index, representative, min_norm, k,
                                   norm_minimizing, coordinates)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClassTableRecord, h, field_class_number, gamma_order,
                                   unit_image_order, elementary_divisors, exponent, classes,
                                   multiplication, provenance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(UnitRecord, torsion_order, free_rank, free_generator,
                                   free_exponent, description, provenance)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BlockRecord, cls, size, group)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RegimeRecord, lower, lower_closed, upper, upper_closed, kind,
                                   description, status, ingredients, blocks)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(SystemRecord, algebra, boundaries, regimes, ground_total,
                                   ground_exceeds_kms_infinity)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(KmsSample, ideal, value)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(BoundaryQuotientRecord, description, status, samples,
                                   ingredients)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DiagnosticRecord, name, module, pass, bounds, detail)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(PhaseReport, schema, schema_version, scope, input, field,
                                   class_table, unit_group, full_system, boundary_quotient,
                                   multiplicative, principal_multiplicative, diagnostics, all_pass)

// The resolved configuration as the report echoes it.
InputEcho analyze_input(const Analysis& A);
ClassTableRecord class_table_record(const Analysis& A);
UnitRecord unit_record(const Analysis& A);

PhaseReport analyze(const Analysis& A);

// The diagnostics on their own, in report order.
std::vector<DiagnosticRecord> run_diagnostics(const Analysis& A);

nlohmann::json report_to_json(const PhaseReport& r);
// Raises ErrorCode::Config for a document of another schema or version.
PhaseReport report_from_json(const nlohmann::json& j);

enum class Format { Json, Text };
std::string emit(const PhaseReport& r, Format format);

}  // namespace kms
