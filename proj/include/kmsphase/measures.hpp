#pragma once

// Truncated product measures nu_beta on the valuation space, the class
// measures nu_{beta,kappa}, cylinder masses, KMS values on the spanning
// projections, Borel-Cantelli sums, the class-extension of nu and the
// ground-state block data.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kmsphase/analytic.hpp"
#include "kmsphase/class_structure.hpp"
#include "kmsphase/scalar.hpp"

namespace kms {

inline constexpr int kDefaultValuationCap = 30;
inline constexpr std::uint64_t kDefaultMeasurePrimeBound = 1000;

// Product over F of the geometric laws (1 - q^-b) q^{-n b}, n < M, with the
// remaining mass q^{-M b} lumped at ">= M". beta = 0 is the point mass at 0.
class TruncatedMeasure {
 public:
  TruncatedMeasure(const NumberField& K, double beta, std::vector<PrimeIdeal> primes,
                   int cap = kDefaultValuationCap, mpfr_prec_t prec = kDefaultPrecision);
  // Primes of norm <= prime_bound not dividing m0.
  static TruncatedMeasure for_modulus(const Congruence& C, double beta,
                                      std::uint64_t prime_bound = kDefaultMeasurePrimeBound,
                                      int cap = kDefaultValuationCap);

  const NumberField& field() const { return K_; }
  double beta() const { return beta_.value(); }
  const Exponent& exponent() const { return beta_; }
  bool dirac_zero() const { return dirac_; }
  bool exact() const { return dirac_ || beta_.is_integer(); }
  int cap() const { return cap_; }
  const std::vector<PrimeIdeal>& primes() const { return primes_; }
  std::optional<std::size_t> index_of(const Ideal& p) const;

  // Masses at 0, 1, ..., M-1 and ">= M" for the i-th prime.
  const std::vector<Scalar>& distribution(std::size_t i) const { return dist_.at(i); }
  // nu_p(v >= n), 0 <= n <= M.
  const Scalar& upper_tail(std::size_t i, int n) const;

  // nu(U_a) for an integral ideal a.
  Scalar nu(const Ideal& a) const;

 private:
  NumberField K_;
  Exponent beta_;
  bool dirac_ = false;
  int cap_;
  std::vector<PrimeIdeal> primes_;
  std::map<std::tuple<Int, Int, Int>, std::size_t> index_;
  std::vector<std::vector<Scalar>> dist_;
  std::vector<std::vector<Scalar>> tails_;
};

// sum_i w_i nu_i, weights nonnegative with total 1.
class MeasureMixture {
 public:
  void add(Rational weight, TruncatedMeasure measure);
  const std::vector<std::pair<Rational, TruncatedMeasure>>& components() const { return parts_; }
  Scalar nu(const Ideal& a) const;

 private:
  std::vector<std::pair<Rational, TruncatedMeasure>> parts_;
};

struct CheckReport {
  Scalar lhs;
  Scalar rhs;
  bool pass = false;
  double width = 0;
};

CheckReport compare(const Scalar& lhs, const Scalar& rhs);

// k a, for k = num/den; it must be an integral ideal.
Ideal scale_ideal(const NumberField& K, const KElement& k, const Ideal& a);
Rational element_norm(const NumberField& K, const KElement& k);

// nu(U_{k a}) against N(k)^{-beta} nu(U_a).
CheckReport scaling_check(const TruncatedMeasure& nu, const KElement& k, const Ideal& a);

// mu(V_{(x+a) x a^x}) = N(a)^{-1} nu(U_a), where `shifted` is nu_{beta - 1}.
Scalar cylinder_mass(const TruncatedMeasure& shifted, const AlgebraicInteger& x, const Ideal& a);
// sum over x in R/a of the cylinder masses.
Scalar disintegration_sum(const TruncatedMeasure& shifted, const Ideal& a);
// phi_beta on the projection for x + a, beta >= 1; a coprime to m0.
Scalar kms_value(const Congruence& C, double beta, const AlgebraicInteger& x, const Ideal& a);

// nu_{beta,kappa}: mass N(a)^-beta / Z on the ideals of class kappa with
// N(a) <= X, Z the truncated partial zeta value.
class ClassMeasure {
 public:
  static ClassMeasure build(const ClassTable& T, int cls, double beta, std::uint64_t X);

  int cls() const { return cls_; }
  double beta() const { return beta_; }
  std::uint64_t X() const { return X_; }
  const std::vector<std::pair<Ideal, Scalar>>& weights() const { return weights_; }
  const Scalar& normalizer() const { return normalizer_; }
  // Upper bound on (zeta_kappa(beta) - Z) / Z.
  double tail_fraction() const { return tail_fraction_; }
  Scalar total_mass() const;
  std::optional<Scalar> weight(const Ideal& a) const;

 private:
  int cls_ = 0;
  double beta_ = 2;
  std::uint64_t X_ = 0;
  std::vector<std::pair<Ideal, Scalar>> weights_;
  Scalar normalizer_;
  double tail_fraction_ = 0;
};

// weight(a) against N(k)^{-beta} weight(b) for a = k b.
CheckReport class_measure_scaling(const ClassMeasure& m, const NumberField& K, const KElement& k,
                                  const Ideal& b);

struct ClassIdentity {
  int cls = 0;
  Scalar lhs;  // sum_{a in kappa, N(a) <= X} nu(U_a)
  Scalar rhs;  // zeta_kappa(beta, X) N(a_kappa)^beta nu(U_{a_kappa})
  bool pass = false;
};

struct BorelCantelli {
  double beta = 2;
  std::uint64_t X = 0;
  Scalar partial_sum;  // sum_{N(a) <= X} nu(U_a)
  Scalar direct_sum;   // sum_{N(a) <= X} N(a)^-beta
  std::vector<ClassIdentity> classes;
  bool identity_ok = false;
};

BorelCantelli borel_cantelli_sum(const ClassTable& T, double beta, std::uint64_t X);

struct DivergenceWitness {
  bool found = false;
  std::uint64_t X = 0;
  Rational sum;
};
// Least X with sum_{N(a) <= X} nu_1(U_a) > threshold, searching N(a) <= x_max.
DivergenceWitness divergence_witness(const ClassTable& T, const Rational& threshold,
                                     std::uint64_t x_max);

// nu~({kappa} x U_a) = sum_k' N(a_k')^b nu(a_k' Z cap Y_{a_k'}); `reps`
// defaults to the class-table representatives.
Scalar extension_measure_value(const TruncatedMeasure& nu, const ClassTable& T, int cls,
                               const Ideal& a, const std::vector<Ideal>* reps = nullptr);
// nu~(b Z) against N(b)^-beta nu~(Z) for Z = {kappa} x U_a.
CheckReport extension_scaling_check(const TruncatedMeasure& nu, const ClassTable& T, int cls,
                                    const Ideal& a, const Ideal& b);
// Another integral representative per class (R stays R).
std::vector<Ideal> alternate_representatives(const ClassTable& T);

struct GroundBlock {
  int cls = 0;
  Int size;
  std::string group;
};

struct GroundStates {
  std::vector<GroundBlock> full;            // k N(a_{kappa,1}) over a x| R*_{m,Gamma}
  std::vector<GroundBlock> multiplicative;  // k over C*(R*_{m,Gamma})
  std::vector<GroundBlock> principal;       // k over C

  Int full_total() const;
  Int multiplicative_total() const;
};

std::string unit_group_description(const UnitGroupMG& U);
GroundStates ground_state_blocks(const ClassTable& T, const UnitGroupMG& U);

}  // namespace kms
