#pragma once

// Moduli m = m_inf * m_0, the residue group (R/m)*, the residue map, the
// subgroup Gamma and the congruence monoid it cuts out.

#include <optional>
#include <set>
#include <vector>

#include "kmsphase/number_field.hpp"

namespace kms {

struct Modulus {
  std::vector<int> minf;  // 0/1 per real embedding
  Ideal m0;
  std::vector<PrimePower> support;  // factorisation of m0

  int infinite_count() const;
};

Modulus make_modulus(const NumberField& K, std::vector<int> minf, const Ideal& m0);

struct ResidueClass {
  std::vector<int> signs;  // one entry per embedding w with minf(w) = 1
  AlgebraicInteger residue;  // reduced modulo m0

  friend bool operator==(const ResidueClass& a, const ResidueClass& b) {
    return a.signs == b.signs && a.residue == b.residue;
  }
  friend bool operator<(const ResidueClass& a, const ResidueClass& b) {
    if (a.signs != b.signs) return a.signs < b.signs;
    return a.residue < b.residue;
  }
};

// A field together with a modulus; all residue computations go through here.
class Congruence {
 public:
  Congruence(NumberField K, Modulus m);

  const NumberField& field() const { return K_; }
  const Modulus& modulus() const { return m_; }

  bool coprime(const AlgebraicInteger& a) const;
  bool coprime(const Ideal& a) const;
  ResidueClass residue_of(const AlgebraicInteger& a) const;
  // [a][b]^{-1}
  ResidueClass residue_of_quotient(const AlgebraicInteger& a, const AlgebraicInteger& b) const;

  ResidueClass identity() const;
  ResidueClass mul(const ResidueClass& r, const ResidueClass& s) const;
  ResidueClass inverse(const ResidueClass& r) const;
  ResidueClass pow(const ResidueClass& r, Int e) const;

  // |(R/m_0)*|, from the factorisation of m_0.
  const Int& phi() const { return phi_; }
  // |(R/m)*| = 2^{#m_inf} * phi.
  Int group_order() const;
  // All of (R/m)*, sorted. Enumerated coset by coset.
  std::vector<ResidueClass> group_elements() const;

 private:
  NumberField K_;
  Modulus m_;
  std::vector<int> embeddings_;  // indices w with minf(w) = 1
  Int phi_;
};

class GammaSubgroup {
 public:
  GammaSubgroup(const Congruence& C, std::vector<ResidueClass> generators);
  static GammaSubgroup trivial(const Congruence& C);
  static GammaSubgroup full(const Congruence& C);

  bool contains(const ResidueClass& r) const { return elements_.count(r) != 0; }
  const std::set<ResidueClass>& elements() const { return elements_; }
  const std::vector<ResidueClass>& generators() const { return generators_; }
  std::size_t order() const { return elements_.size(); }

 private:
  std::vector<ResidueClass> generators_;
  std::set<ResidueClass> elements_;
};

// a in R_{m,Gamma}: a coprime to m_0 with residue in Gamma.
bool monoid_contains(const Congruence& C, const GammaSubgroup& G, const AlgebraicInteger& a);

struct UnitGroupMG {
  std::vector<AlgebraicInteger> torsion_elements;
  int free_rank = 0;
  std::optional<AlgebraicInteger> free_generator;  // zeta * eps^k, k minimal
  int free_exponent = 0;  // that k
};

UnitGroupMG unit_group_mg(const Congruence& C, const GammaSubgroup& G);

}  // namespace kms
