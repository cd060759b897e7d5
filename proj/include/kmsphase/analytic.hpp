#pragma once

// Partial zeta functions, Hecke L-series of class-table characters, the
// norm-estimate product, per-class prime counts and the prime-pair boxes.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kmsphase/class_structure.hpp"
#include "kmsphase/scalar.hpp"

namespace kms {

struct ComplexInterval {
  Interval re;
  Interval im;

  ComplexInterval() = default;
  ComplexInterval(Interval r, Interval i) : re(std::move(r)), im(std::move(i)) {}
  Interval abs() const;
  friend ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b);
  friend ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b);
  ComplexInterval reciprocal() const;
};

// zeta_e^j as an enclosure.
ComplexInterval root_of_unity(long j, long e, mpfr_prec_t prec = kDefaultPrecision);

// sum_j buckets[j] * zeta_e^j over Q(zeta_e), exact when every bucket is.
struct CyclotomicSum {
  long order = 1;
  std::vector<Scalar> buckets{Scalar()};

  bool exact() const;
  ComplexInterval numeric(mpfr_prec_t prec = kDefaultPrecision) const;
  // Exact equality in Q(zeta_e); both sides must be exact and share e.
  bool exactly_equals(const CyclotomicSum& o) const;
};

struct SeriesValue {
  CyclotomicSum value;
  double tail_bound = 0;  // |true - value| <= tail_bound when tail_claimed
  bool tail_claimed = true;
  std::uint64_t X = 0;
  std::string mode = "series";

  double re() const;
  double im() const;
};

// Norms and classes of all integral ideals coprime to m0 with norm <= X.
struct IdealCensus {
  std::uint64_t X = 0;
  std::vector<std::pair<std::uint64_t, int>> entries;
};
IdealCensus ideal_census(const ClassTable& T, std::uint64_t X);

SeriesValue partial_zeta(const ClassTable& T, const IdealCensus& census, int cls, double s);
SeriesValue partial_zeta(const ClassTable& T, int cls, double s, std::uint64_t X);
// Sum over every class, i.e. the truncated zeta function of ideals prime to m0.
SeriesValue total_zeta(const ClassTable& T, const IdealCensus& census, double s);

enum class LMode { Series, Euler };
SeriesValue hecke_L(const ClassTable& T, const IdealCensus& census, const Character& chi, double s);
SeriesValue hecke_L(const ClassTable& T, const Character& chi, double s, std::uint64_t X,
                    LMode mode = LMode::Series);

// sum_k chi(k) zeta_k(s) at the census truncation.
CyclotomicSum character_decomposition(const ClassTable& T, const IdealCensus& census,
                                      const Character& chi, double s);

struct ClassedPrime {
  PrimeIdeal prime;
  int cls = 0;
};
// Prime ideals coprime to m0 with norm <= bound, in (norm, hnf) order.
std::vector<ClassedPrime> classed_primes(const ClassTable& T, std::uint64_t bound);
// The first n such primes.
std::vector<ClassedPrime> first_classed_primes(const ClassTable& T, std::size_t n);

// prod_{Ft} |1 - q^-b|  /  prod_{Ft \ F} |1 - chi(p) q^-b|; F is the first
// `f_count` entries of `Ft`.
Scalar normestimate_ratio(const ClassTable& T, const Character& chi, double beta,
                          const std::vector<ClassedPrime>& Ft, std::size_t f_count);
// Ratios as Ft runs through the prefixes of `primes` (F empty). Entry i uses the
// first i + 1 primes.
std::vector<Interval> normestimate_sequence(const ClassTable& T, const Character& chi, double beta,
                                            const std::vector<ClassedPrime>& primes);

std::vector<std::uint64_t> prime_count_per_class(const ClassTable& T, std::uint64_t x);

struct PrimePair {
  PrimeIdeal p;
  PrimeIdeal q;
};

struct BoxSummary {
  int index = 0;
  double lower = 0;
  double upper = 0;
  int cls = 0;
  std::size_t size = 0;
};

struct PrimePairSequence {
  std::vector<PrimePair> pairs;
  double lambda = 0;
  double epsilon = 0;
  double beta = 1;
  double delta = 0;
  int k0 = 0;
  Scalar partial_sum;  // sum N(p_n)^{-beta}
  std::vector<BoxSummary> boxes;
};

double pick_delta(double lambda, double epsilon, double beta);
PrimePairSequence asymptotic_pairs(const ClassTable& T, int cls, double lambda, double epsilon,
                                   double beta, std::uint64_t budget);
// |N(q)^b / N(p)^b - lambda| < eps, decided exactly for b = 1 and by
// enclosure otherwise.
bool pair_inequality_holds(const PrimePair& pr, double lambda, double epsilon, double beta);

}  // namespace kms
