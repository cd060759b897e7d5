#include "kmsphase/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "kmsphase/cyclotomic.hpp"
#include "kmsphase/errors.hpp"

namespace kms {

// ---------------------------------------------------------------- complex

Interval ComplexInterval::abs() const { return (re.square() + im.square()).sqrt(); }

ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re - b.re, a.im - b.im};
}

ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
  return {a.re + b.re, a.im + b.im};
}

ComplexInterval ComplexInterval::reciprocal() const {
  const Interval n = re.square() + im.square();
  return {re / n, -im / n};
}

ComplexInterval root_of_unity(long j, long e, mpfr_prec_t prec) {
  return {Interval::cos_2pi(j, e, prec), Interval::sin_2pi(j, e, prec)};
}

bool CyclotomicSum::exact() const {
  return std::all_of(buckets.begin(), buckets.end(), [](const Scalar& s) { return s.exact(); });
}

ComplexInterval CyclotomicSum::numeric(mpfr_prec_t prec) const {
  ComplexInterval acc{Interval(prec), Interval(prec)};
  for (std::size_t j = 0; j < buckets.size(); ++j) {
    const Interval c = buckets[j].interval(prec);
    const ComplexInterval z = root_of_unity(static_cast<long>(j), order, prec);
    acc = acc + ComplexInterval{c * z.re, c * z.im};
  }
  return acc;
}

bool CyclotomicSum::exactly_equals(const CyclotomicSum& o) const {
  if (!exact() || !o.exact()) fail(ErrorCode::Argument, "exact comparison of inexact sums");
  if (order != o.order) fail(ErrorCode::Argument, "cyclotomic orders differ");
  std::vector<Rational> diff(static_cast<std::size_t>(order), Rational(0));
  for (std::size_t j = 0; j < buckets.size(); ++j) diff[j] += buckets[j].rational();
  for (std::size_t j = 0; j < o.buckets.size(); ++j) diff[j] -= o.buckets[j].rational();
  Int common = 1;
  for (const auto& q : diff) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), q.get_den_mpz_t());
  std::vector<Int> ints;
  for (const auto& q : diff) ints.push_back(q.get_num() * (common / q.get_den()));
  return cyclotomic_equals(ints, order, 0);
}

double SeriesValue::re() const { return value.numeric().re.mid(); }
double SeriesValue::im() const { return value.numeric().im.mid(); }

// ---------------------------------------------------------------- series

IdealCensus ideal_census(const ClassTable& T, std::uint64_t X) {
  IdealCensus c;
  c.X = X;
  const auto& C = T.congruence();
  for (const auto& I : C.field().enumerate_ideals(X, C.modulus().m0))
    c.entries.emplace_back(to_u64(I.lattice_norm()), T.class_of(I));
  return c;
}

namespace {

void require_series_s(double s) {
  if (!(s > 1.0)) fail(ErrorCode::Domain, "series mode needs s > 1");
}

double tail_bound(const IdealCensus& census, double s) {
  if (census.X == 0) return std::numeric_limits<double>::infinity();
  const double X = static_cast<double>(census.X);
  const double C = 2.0 * static_cast<double>(census.entries.size()) / X;
  return C * std::pow(X, 1.0 - s) / (s - 1.0);
}

// sum n^{-s} over the given norms.
Scalar power_sum(const std::vector<std::uint64_t>& norms, double s) {
  const Exponent e(s);
  if (e.is_integer() && e.integer() > 0)
    return inverse_power_sum(norms, static_cast<unsigned>(e.integer()));
  std::vector<Scalar> terms;
  terms.reserve(norms.size());
  for (auto n : norms) terms.push_back(inverse_power(Rational(static_cast<unsigned long>(n)), e));
  return sum(terms);
}

}  // namespace

SeriesValue partial_zeta(const ClassTable& T, const IdealCensus& census, int cls, double s) {
  require_series_s(s);
  if (cls < 0 || cls >= T.order()) fail(ErrorCode::Argument, "no class " + std::to_string(cls));
  std::vector<std::uint64_t> norms;
  for (const auto& [n, k] : census.entries)
    if (k == cls) norms.push_back(n);
  SeriesValue v;
  v.value.buckets = {power_sum(norms, s)};
  v.tail_bound = tail_bound(census, s);
  v.X = census.X;
  return v;
}

SeriesValue partial_zeta(const ClassTable& T, int cls, double s, std::uint64_t X) {
  return partial_zeta(T, ideal_census(T, X), cls, s);
}

SeriesValue total_zeta(const ClassTable& T, const IdealCensus& census, double s) {
  require_series_s(s);
  (void)T;
  std::vector<std::uint64_t> norms;
  for (const auto& e : census.entries) norms.push_back(e.first);
  SeriesValue v;
  v.value.buckets = {power_sum(norms, s)};
  v.tail_bound = tail_bound(census, s);
  v.X = census.X;
  return v;
}

SeriesValue hecke_L(const ClassTable& T, const IdealCensus& census, const Character& chi, double s) {
  require_series_s(s);
  const long e = T.exponent();
  std::vector<std::vector<std::uint64_t>> by_exp(static_cast<std::size_t>(e));
  std::vector<long> exp_of(static_cast<std::size_t>(T.order()));
  for (int k = 0; k < T.order(); ++k) exp_of[static_cast<std::size_t>(k)] = T.character_exponent(chi, k);
  for (const auto& [n, k] : census.entries)
    by_exp[static_cast<std::size_t>(exp_of[static_cast<std::size_t>(k)])].push_back(n);
  SeriesValue v;
  v.value.order = e;
  v.value.buckets.clear();
  for (const auto& norms : by_exp) v.value.buckets.push_back(power_sum(norms, s));
  v.tail_bound = tail_bound(census, s);
  v.X = census.X;
  return v;
}

SeriesValue hecke_L(const ClassTable& T, const Character& chi, double s, std::uint64_t X, LMode mode) {
  if (mode == LMode::Series) return hecke_L(T, ideal_census(T, X), chi, s);
  if (!(s > 0.0)) fail(ErrorCode::Domain, "Euler mode needs s > 0");
  // prod (1 - chi(p) N(p)^{-s})^{-1}; only a partial product, no tail claimed
  const long e = T.exponent();
  const Exponent ex(s);
  ComplexInterval prod{Interval::point(1.0), Interval(kDefaultPrecision)};
  for (const auto& cp : classed_primes(T, X)) {
    const Interval q = inverse_power(Rational(static_cast<unsigned long>(cp.prime.norm())), ex).interval();
    const ComplexInterval z = root_of_unity(T.character_exponent(chi, cp.cls), e);
    const ComplexInterval one{Interval::point(1.0), Interval(kDefaultPrecision)};
    prod = prod * (one - ComplexInterval{z.re * q, z.im * q}).reciprocal();
  }
  SeriesValue v;
  // re + im * i, written over zeta_4
  v.value.order = 4;
  v.value.buckets = {Scalar(prod.re), Scalar(prod.im), Scalar(), Scalar()};
  v.tail_claimed = false;
  v.tail_bound = 0;
  v.X = X;
  v.mode = "euler";
  return v;
}

CyclotomicSum character_decomposition(const ClassTable& T, const IdealCensus& census,
                                      const Character& chi, double s) {
  const long e = T.exponent();
  CyclotomicSum out;
  out.order = e;
  out.buckets.assign(static_cast<std::size_t>(e), Scalar());
  for (int k = 0; k < T.order(); ++k) {
    const auto z = partial_zeta(T, census, k, s);
    auto& b = out.buckets[static_cast<std::size_t>(T.character_exponent(chi, k))];
    b = b + z.value.buckets[0];
  }
  return out;
}

// ---------------------------------------------------------------- primes

std::vector<ClassedPrime> classed_primes(const ClassTable& T, std::uint64_t bound) {
  const auto& C = T.congruence();
  std::vector<ClassedPrime> out;
  for (auto& P : C.field().prime_ideals_up_to(bound)) {
    if (!C.coprime(P.ideal)) continue;
    const int k = T.class_of(P.ideal);
    out.push_back(ClassedPrime{std::move(P), k});
  }
  return out;
}

std::vector<ClassedPrime> first_classed_primes(const ClassTable& T, std::size_t n) {
  std::uint64_t bound = std::max<std::uint64_t>(64, 2 * n);
  while (true) {
    auto ps = classed_primes(T, bound);
    if (ps.size() >= n) {
      ps.resize(n);
      return ps;
    }
    bound *= 2;
  }
}

namespace {

Interval one_minus_power(std::uint64_t q, double beta) {
  return Interval::point(1.0) - inverse_power(Rational(static_cast<unsigned long>(q)), Exponent(beta)).interval();
}

// |1 - zeta_e^j r| = sqrt(1 - 2 r cos(2 pi j/e) + r^2)
Interval twisted_factor(std::uint64_t q, double beta, long j, long e) {
  const Interval r = inverse_power(Rational(static_cast<unsigned long>(q)), Exponent(beta)).interval();
  const Interval c = Interval::cos_2pi(j, e);
  const Interval v = Interval::point(1.0) - Interval::point(2.0) * r * c + r.square();
  return v.sqrt();
}

}  // namespace

Scalar normestimate_ratio(const ClassTable& T, const Character& chi, double beta,
                          const std::vector<ClassedPrime>& Ft, std::size_t f_count) {
  if (!(beta > 0.0)) fail(ErrorCode::Domain, "beta must be positive");
  if (f_count > Ft.size()) fail(ErrorCode::Argument, "F must be a subset of F-tilde");
  const Exponent ex(beta);
  const long e = T.exponent();
  // F part: prod |1 - q^-b| is exact for integer b
  std::vector<Scalar> f_terms;
  Scalar acc(Rational(1));
  for (std::size_t i = 0; i < f_count; ++i) {
    const auto q = Rational(static_cast<unsigned long>(Ft[i].prime.norm()));
    acc = acc * (Scalar(Rational(1)) - inverse_power(q, ex));
  }
  for (std::size_t i = f_count; i < Ft.size(); ++i) {
    const long j = T.character_exponent(chi, Ft[i].cls);
    if (j == 0) continue;  // factor is exactly 1
    const std::uint64_t q = Ft[i].prime.norm();
    acc = acc * Scalar(one_minus_power(q, beta) / twisted_factor(q, beta, j, e));
  }
  return acc;
}

std::vector<Interval> normestimate_sequence(const ClassTable& T, const Character& chi, double beta,
                                            const std::vector<ClassedPrime>& primes) {
  if (!(beta > 0.0)) fail(ErrorCode::Domain, "beta must be positive");
  const long e = T.exponent();
  std::vector<Interval> out;
  Interval acc = Interval::point(1.0);
  for (const auto& cp : primes) {
    const long j = T.character_exponent(chi, cp.cls);
    if (j != 0) {
      const std::uint64_t q = cp.prime.norm();
      acc = acc * (one_minus_power(q, beta) / twisted_factor(q, beta, j, e));
    }
    out.push_back(acc);
  }
  return out;
}

std::vector<std::uint64_t> prime_count_per_class(const ClassTable& T, std::uint64_t x) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(T.order()), 0);
  for (const auto& cp : classed_primes(T, x)) ++counts[static_cast<std::size_t>(cp.cls)];
  return counts;
}

// ---------------------------------------------------------------- pairs

double pick_delta(double lambda, double epsilon, double beta) {
  if (!(lambda > 1.0) || !(epsilon > 0.0) || !(beta > 0.0 && beta <= 1.0))
    fail(ErrorCode::Domain, "need lambda > 1, eps > 0 and beta in (0, 1]");
  // Boxes live on the norm scale lambda^{1/beta}; at beta = 1 this is
  // 0.9 * min(lambda - 1, eps / lambda).
  const double lam = std::pow(lambda, 1.0 / beta);
  return 0.9 * std::min(lam - 1.0, std::pow(1.0 + epsilon / lambda, 1.0 / beta) - 1.0);
}

bool pair_inequality_holds(const PrimePair& pr, double lambda, double epsilon, double beta) {
  const Rational np(static_cast<unsigned long>(pr.p.norm()));
  const Rational nq(static_cast<unsigned long>(pr.q.norm()));
  if (beta == 1.0) {
    Rational diff = nq / np - Rational(lambda);
    if (diff < 0) diff = -diff;
    return diff < Rational(epsilon);
  }
  const Interval ratio = (Interval::from_rational(nq) / Interval::from_rational(np)).pow(beta);
  const Interval diff = (ratio - Interval::point(lambda)).abs();
  return diff.upper() < epsilon;
}

PrimePairSequence asymptotic_pairs(const ClassTable& T, int cls, double lambda, double epsilon,
                                   double beta, std::uint64_t budget) {
  if (cls < 0 || cls >= T.order()) fail(ErrorCode::Argument, "no class " + std::to_string(cls));
  PrimePairSequence seq;
  seq.lambda = lambda;
  seq.epsilon = epsilon;
  seq.beta = beta;
  seq.delta = pick_delta(lambda, epsilon, beta);
  const double lam = std::pow(lambda, 1.0 / beta);

  const auto& C = T.congruence();
  const auto primes = C.field().prime_ideals_up_to(budget);
  // box n: lam^n < N(p) <= (1 + delta) lam^n, class [R] for even n, cls for odd n
  std::vector<std::vector<PrimeIdeal>> boxes;
  for (int n = 0;; ++n) {
    const double lo = std::pow(lam, n);
    const double hi = (1.0 + seq.delta) * lo;
    if (hi > static_cast<double>(budget)) break;
    const int want = (n % 2 == 0) ? T.identity() : cls;
    std::vector<PrimeIdeal> box;
    auto it = std::upper_bound(primes.begin(), primes.end(), lo,
                               [](double v, const PrimeIdeal& P) { return v < static_cast<double>(P.norm()); });
    for (; it != primes.end() && static_cast<double>(it->norm()) <= hi; ++it) {
      if (!C.coprime(it->ideal)) continue;
      if (T.class_of(it->ideal) == want) box.push_back(*it);
    }
    seq.boxes.push_back(BoxSummary{n, lo, hi, want, box.size()});
    boxes.push_back(std::move(box));
  }
  const int kmax = static_cast<int>(boxes.size()) / 2;  // pairs (2k, 2k+1) with k < kmax
  int k0 = kmax;
  for (int k = kmax - 1; k >= 0; --k) {
    if (boxes[static_cast<std::size_t>(2 * k + 1)].size() < boxes[static_cast<std::size_t>(2 * k)].size()) break;
    k0 = k;
  }
  seq.k0 = k0;
  std::vector<Scalar> terms;
  const Exponent ex(beta);
  for (int k = k0; k < kmax; ++k) {
    const auto& even = boxes[static_cast<std::size_t>(2 * k)];
    const auto& odd = boxes[static_cast<std::size_t>(2 * k + 1)];
    for (std::size_t i = 0; i < even.size(); ++i) {
      seq.pairs.push_back(PrimePair{even[i], odd[i]});
      terms.push_back(inverse_power(Rational(static_cast<unsigned long>(even[i].norm())), ex));
    }
  }
  if (seq.pairs.empty()) {
    std::string empty;
    for (const auto& b : seq.boxes)
      if (b.size == 0) empty += (empty.empty() ? "" : ", ") + std::to_string(b.index);
    fail(ErrorCode::EmptySequence, "no prime pairs within budget; empty boxes: " + (empty.empty() ? std::string("none") : empty));
  }
  seq.partial_sum = sum(terms);
  return seq;
}

}  // namespace kms
