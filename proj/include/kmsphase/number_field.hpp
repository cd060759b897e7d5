#pragma once

// Exact arithmetic in Q and in quadratic fields Q(sqrt d).
//
// Elements of the ring of integers R are stored as x + y*omega in the integral
// basis {1, omega}, where omega = sqrt(d) for d = 2, 3 mod 4 and
// omega = (1 + sqrt(d))/2 for d = 1 mod 4. Over Q, y is always 0.
//
// Ideals are Z-lattices in row-style Hermite normal form
//     Z*a + Z*(b + c*omega),   a, c > 0,  c | a,  c | b,  0 <= b < a,
// divided by a positive denominator (1 for integral ideals). Over Q an ideal
// is (a/den) Z with b = 0 and c = 1.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kmsphase/arith.hpp"

namespace kms {

struct AlgebraicInteger {
  Int x{0};
  Int y{0};

  AlgebraicInteger() = default;
  AlgebraicInteger(Int x_, Int y_ = 0) : x(std::move(x_)), y(std::move(y_)) {}  // NOLINT
  AlgebraicInteger(long v) : x(v), y(0) {}  // NOLINT

  bool is_zero() const { return x == 0 && y == 0; }
  friend bool operator==(const AlgebraicInteger& a, const AlgebraicInteger& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const AlgebraicInteger& a, const AlgebraicInteger& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

struct Ideal {
  Int a{1};
  Int b{0};
  Int c{1};
  Int den{1};

  // Norm of the integral lattice part; equals N(ideal) when den == 1.
  Int lattice_norm() const { return a * c; }
  Rational norm() const;
  bool integral() const { return den == 1; }
  bool is_unit() const { return a == 1 && c == 1 && den == 1; }

  friend bool operator==(const Ideal& l, const Ideal& r) {
    return l.a == r.a && l.b == r.b && l.c == r.c && l.den == r.den;
  }
};

// Enumeration order: (norm, a, b, c).
bool ideal_less(const Ideal& l, const Ideal& r);

struct PrimeIdeal {
  Ideal ideal;
  std::uint64_t residue_char = 0;
  int residue_degree = 1;
  bool ramified = false;

  std::uint64_t norm() const {
    return residue_degree == 1 ? residue_char : residue_char * residue_char;
  }
};

struct PrimePower {
  PrimeIdeal prime;
  int exponent = 1;
};

struct UnitGroup {
  std::vector<AlgebraicInteger> torsion;  // all roots of unity in R
  std::optional<AlgebraicInteger> fundamental;  // real quadratic only; > 1 at embedding 0

  int torsion_order() const { return static_cast<int>(torsion.size()); }
};

enum class FieldKind { Rational, Quadratic };

class NumberField {
 public:
  static NumberField rational();
  static NumberField quadratic(long d);
  // "Q" or "Q(sqrt,d)".
  static NumberField parse(const std::string& spec);

  std::string spec() const;
  FieldKind kind() const { return kind_; }
  bool is_rational() const { return kind_ == FieldKind::Rational; }
  long d() const { return d_; }
  int degree() const { return is_rational() ? 1 : 2; }
  const Int& discriminant() const { return disc_; }
  int real_embedding_count() const;
  // omega satisfies omega^2 = t*omega - n.
  const Int& omega_trace() const { return t_; }
  const Int& omega_norm() const { return n_; }
  // Minkowski bound: every ideal class has an integral ideal of norm <= this.
  double minkowski_bound() const;

  // --- elements ---
  AlgebraicInteger add(const AlgebraicInteger& u, const AlgebraicInteger& v) const;
  AlgebraicInteger sub(const AlgebraicInteger& u, const AlgebraicInteger& v) const;
  AlgebraicInteger mul(const AlgebraicInteger& u, const AlgebraicInteger& v) const;
  AlgebraicInteger neg(const AlgebraicInteger& u) const;
  AlgebraicInteger conj(const AlgebraicInteger& u) const;
  AlgebraicInteger pow(const AlgebraicInteger& u, unsigned e) const;
  // u / v when v divides u in R.
  std::optional<AlgebraicInteger> div_exact(const AlgebraicInteger& u,
                                            const AlgebraicInteger& v) const;

  // Signed field norm x^2 + t x y + n y^2 (x over Q).
  Int norm(const AlgebraicInteger& u) const;
  Int abs_norm(const AlgebraicInteger& u) const { return abs(norm(u)); }
  // Exact sign of u under real embedding `w` (0-based; sqrt(d) -> +/- sqrt(d)).
  int sign_at(const AlgebraicInteger& u, int w) const;
  double embed(const AlgebraicInteger& u, int w) const;
  bool is_unit(const AlgebraicInteger& u) const;
  std::string format(const AlgebraicInteger& u) const;

  // --- ideals ---
  Ideal unit_ideal() const { return Ideal{}; }
  Ideal principal(const AlgebraicInteger& g) const;
  Ideal rational_ideal(const Int& n) const { return principal(AlgebraicInteger(n)); }
  // HNF of the Z-lattice spanned by `vectors` (coordinates in {1, omega}).
  Ideal lattice_hnf(const std::vector<AlgebraicInteger>& vectors) const;
  // The ideal generated as an R-module.
  Ideal ideal_from_generators(const std::vector<AlgebraicInteger>& gens) const;
  Ideal ideal_mul(const Ideal& p, const Ideal& q) const;
  Ideal ideal_pow(const Ideal& p, unsigned e) const;
  Ideal ideal_add(const Ideal& p, const Ideal& q) const;
  Ideal ideal_conj(const Ideal& p) const;
  Ideal ideal_inverse(const Ideal& p) const;
  // p*q^{-1} for integral ideals; integral when q | p.
  Ideal ideal_quotient(const Ideal& p, const Ideal& q) const;
  // Scales a lattice by 1/n; precondition (checked): n divides the lattice.
  Ideal divide_lattice(const Ideal& p, const Int& n) const;
  Ideal normalize(Ideal p) const;
  bool is_valid_hnf(const Ideal& p) const;

  bool contains(const Ideal& p, const AlgebraicInteger& u) const;
  // q subset of p (integral ideals).
  bool contains(const Ideal& p, const Ideal& q) const;
  bool divides(const Ideal& p, const Ideal& q) const { return contains(p, q); }
  bool coprime(const Ideal& p, const Ideal& q) const;
  bool coprime(const AlgebraicInteger& u, const Ideal& q) const;

  // Canonical representative of u modulo the integral ideal p.
  AlgebraicInteger reduce(const AlgebraicInteger& u, const Ideal& p) const;
  // Representatives of R/p, in canonical order.
  std::vector<AlgebraicInteger> residues(const Ideal& p) const;

  std::vector<PrimePower> factor_rational_prime(std::uint64_t p) const;
  std::vector<PrimePower> factor_ideal(const Ideal& p) const;
  int valuation(const PrimeIdeal& P, const Ideal& p) const;
  // Prime ideals of norm <= bound, sorted by (norm, hnf).
  std::vector<PrimeIdeal> prime_ideals_up_to(std::uint64_t bound) const;

  // Integral ideals of norm <= bound, coprime to `coprime_to` when given,
  // in (norm, a, b, c) order.
  std::vector<Ideal> enumerate_ideals(std::uint64_t bound,
                                      const std::optional<Ideal>& coprime_to = std::nullopt) const;

  std::optional<AlgebraicInteger> is_principal(const Ideal& p) const;
  const UnitGroup& unit_group() const { return units_; }

 private:
  NumberField() = default;
  void init_units();

  FieldKind kind_ = FieldKind::Rational;
  long d_ = 1;
  Int disc_{1};
  Int t_{0};
  Int n_{0};
  UnitGroup units_;
};

// Fundamental unit of a real quadratic field, from the continued fraction
// expansion of omega. The result is > 1 under embedding 0.
AlgebraicInteger fundamental_unit(const NumberField& K);

}  // namespace kms
