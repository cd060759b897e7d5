#pragma once

// The finite quotient I_m / i(K_{m,Gamma}): classes, norm-minimising ideals,
// multiplication table, elementary divisors and characters.

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "kmsphase/congruence.hpp"

namespace kms {

// num / den with num, den in R.
struct KElement {
  AlgebraicInteger num{1};
  AlgebraicInteger den{1};
};

// a b^{-1} = x R with [x]_m in Gamma; returns such an x.
std::optional<KElement> same_class(const Congruence& C, const GammaSubgroup& G, const Ideal& a,
                                   const Ideal& b);

// Class number of K, by a principality scan up to the Minkowski bound.
int field_class_number(const NumberField& K);

struct ClassInfo {
  Ideal representative;  // least (norm, a, b, c) among the norm minimisers
  Int min_norm;
  std::vector<Ideal> norm_minimizing;
  int k() const { return static_cast<int>(norm_minimizing.size()); }
};

// chi(g_i) = exp(2 pi i * values[i].first / values[i].second) on the
// elementary-divisor generators g_i.
struct Character {
  int index = 0;
  std::vector<std::pair<long, long>> values;
  long order = 1;
};

class ClassTable {
 public:
  static ClassTable build(const Congruence& C, const GammaSubgroup& G, std::uint64_t scan_bound);
  static std::uint64_t default_scan_bound(const NumberField& K);

  const Congruence& congruence() const { return C_; }
  const GammaSubgroup& gamma() const { return G_; }

  int order() const { return static_cast<int>(classes_.size()); }
  const std::vector<ClassInfo>& classes() const { return classes_; }
  const ClassInfo& info(int k) const { return classes_.at(static_cast<std::size_t>(k)); }
  int identity() const { return 0; }
  int mul(int i, int j) const { return table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  int inverse(int i) const;
  int power(int i, long e) const;
  const std::vector<std::vector<int>>& multiplication_table() const { return table_; }

  // Class of an integral ideal coprime to m0.
  int class_of(const Ideal& a) const;

  const std::vector<long>& elementary_divisors() const { return divisors_; }
  long exponent() const { return exponent_; }
  // Coordinates of a class along the elementary-divisor generators.
  const std::vector<long>& coordinates(int k) const { return coords_.at(static_cast<std::size_t>(k)); }

  std::vector<Character> characters() const;
  Character character(int index) const;
  // chi(class) = zeta_e^{result} with e = exponent().
  long character_exponent(const Character& chi, int k) const;

  std::uint64_t scan_bound() const { return scan_bound_; }
  int field_class_number() const { return h_field_; }
  // |Gamma * rho(R*)| inside (R/m)*.
  std::size_t unit_image_order() const { return gamma_units_.size(); }

 private:
  ClassTable(Congruence C, GammaSubgroup G) : C_(std::move(C)), G_(std::move(G)) {}

  struct FieldClass {
    Ideal rep;
    AlgebraicInteger beta;  // in rep, coprime to m0
    Ideal cofactor;  // beta * rep^{-1}, integral and coprime to m0
  };

  // (field class, coset of Gamma*rho(R*)) for an integral ideal coprime to m0.
  std::optional<std::pair<int, int>> locate(const Ideal& a) const;
  void compute_structure();

  Congruence C_;
  GammaSubgroup G_;
  std::uint64_t scan_bound_ = 0;
  int h_field_ = 1;
  std::set<ResidueClass> gamma_units_;
  std::map<ResidueClass, int> coset_of_;
  std::vector<FieldClass> field_classes_;
  std::map<std::pair<int, int>, int> class_index_;
  std::vector<ClassInfo> classes_;
  std::vector<std::vector<int>> table_;
  std::vector<long> divisors_;
  long exponent_ = 1;
  std::vector<std::vector<long>> coords_;
};

}  // namespace kms
