#include "kmsphase/measures.hpp"

#include <algorithm>
#include <tuple>

#include "kmsphase/errors.hpp"

namespace kms {

namespace {

std::tuple<Int, Int, Int> key(const Ideal& p) { return {p.a, p.b, p.c}; }

void require_integral(const Ideal& a) {
  if (!a.integral()) fail(ErrorCode::Argument, "cylinder sets need an integral ideal");
}

int bit_length(std::uint64_t x) {
  int n = 0;
  while (x > 0) {
    ++n;
    x >>= 1U;
  }
  return n;
}

}  // namespace

TruncatedMeasure::TruncatedMeasure(const NumberField& K, double beta, std::vector<PrimeIdeal> primes,
                                   int cap, mpfr_prec_t prec)
    : K_(K), beta_(beta), cap_(cap), primes_(std::move(primes)) {
  if (!(beta >= 0)) fail(ErrorCode::Domain, "measure exponent must be >= 0");
  if (cap < 1) fail(ErrorCode::Argument, "valuation cap must be >= 1");
  dirac_ = beta == 0;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (!index_.emplace(key(primes_[i].ideal), i).second)
      fail(ErrorCode::Argument, "repeated prime in truncation set");
  }
  dist_.resize(primes_.size());
  tails_.resize(primes_.size());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    auto& d = dist_[i];
    if (dirac_) {
      d.assign(static_cast<std::size_t>(cap_) + 1, Scalar(Rational(0)));
      d.back() = Rational(1);
    } else {
      const Rational q(static_cast<unsigned long>(primes_[i].norm()));
      const Scalar r = inverse_power(q, beta_, prec);
      const Scalar one(Rational(1));
      Scalar rn = one;
      for (int n = 0; n < cap_; ++n) {
        d.push_back((one - r) * rn);
        rn = rn * r;
      }
      d.push_back(rn);
    }
    auto& t = tails_[i];
    t.assign(d.size(), Scalar());
    Scalar acc = d.back();
    t.back() = acc;
    for (std::size_t n = d.size() - 1; n-- > 0;) {
      acc = d[n] + acc;
      t[n] = acc;
    }
  }
}

TruncatedMeasure TruncatedMeasure::for_modulus(const Congruence& C, double beta,
                                               std::uint64_t prime_bound, int cap) {
  const auto& K = C.field();
  std::vector<PrimeIdeal> F;
  for (auto& P : K.prime_ideals_up_to(prime_bound))
    if (K.coprime(P.ideal, C.modulus().m0)) F.push_back(std::move(P));
  return TruncatedMeasure(K, beta, std::move(F), cap);
}

std::optional<std::size_t> TruncatedMeasure::index_of(const Ideal& p) const {
  auto it = index_.find(key(p));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const Scalar& TruncatedMeasure::upper_tail(std::size_t i, int n) const {
  if (n < 0 || n > cap_) fail(ErrorCode::OutOfTruncation, "valuation beyond the cap");
  return tails_.at(i)[static_cast<std::size_t>(n)];
}

Scalar TruncatedMeasure::nu(const Ideal& a) const {
  require_integral(a);
  if (dirac_) return Rational(1);
  Scalar out(Rational(1));
  for (const auto& pp : K_.factor_ideal(a)) {
    auto i = index_of(pp.prime.ideal);
    if (!i)
      fail(ErrorCode::OutOfTruncation,
           "prime of norm " + std::to_string(pp.prime.norm()) + " is outside the truncation set");
    if (pp.exponent > cap_)
      fail(ErrorCode::OutOfTruncation, "valuation " + std::to_string(pp.exponent) +
                                           " exceeds the cap " + std::to_string(cap_));
    out = out * upper_tail(*i, pp.exponent);
  }
  return out;
}

void MeasureMixture::add(Rational weight, TruncatedMeasure measure) {
  if (weight < 0) fail(ErrorCode::Argument, "mixture weights must be nonnegative");
  parts_.emplace_back(std::move(weight), std::move(measure));
}

Scalar MeasureMixture::nu(const Ideal& a) const {
  Rational total = 0;
  for (const auto& [w, m] : parts_) total += w;
  if (total != 1) fail(ErrorCode::Argument, "mixture weights must sum to 1");
  std::vector<Scalar> terms;
  for (const auto& [w, m] : parts_) terms.push_back(Scalar(w) * m.nu(a));
  return sum(terms);
}

CheckReport compare(const Scalar& lhs, const Scalar& rhs) {
  CheckReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.pass = lhs.agrees_with(rhs);
  r.width = std::max(lhs.width(), rhs.width());
  return r;
}

Ideal scale_ideal(const NumberField& K, const KElement& k, const Ideal& a) {
  if (k.num.is_zero() || k.den.is_zero()) fail(ErrorCode::Argument, "k must be nonzero");
  const Ideal top = K.ideal_mul(K.principal(k.num), a);
  const Ideal bottom = K.principal(k.den);
  if (!K.divides(bottom, top)) fail(ErrorCode::Argument, "k a is not an integral ideal");
  return K.ideal_quotient(top, bottom);
}

Rational element_norm(const NumberField& K, const KElement& k) {
  Rational q(K.abs_norm(k.num), K.abs_norm(k.den));
  q.canonicalize();
  return q;
}

CheckReport scaling_check(const TruncatedMeasure& nu, const KElement& k, const Ideal& a) {
  const auto& K = nu.field();
  const Scalar lhs = nu.nu(scale_ideal(K, k, a));
  const Scalar rhs = inverse_power(element_norm(K, k), nu.exponent()) * nu.nu(a);
  return compare(lhs, rhs);
}

Scalar cylinder_mass(const TruncatedMeasure& shifted, const AlgebraicInteger& x, const Ideal& a) {
  (void)x;  // the mass does not see the coset, only the lattice
  require_integral(a);
  const Rational N(a.lattice_norm());
  return Scalar(Rational(1) / N) * shifted.nu(a);
}

Scalar disintegration_sum(const TruncatedMeasure& shifted, const Ideal& a) {
  std::vector<Scalar> terms;
  for (const auto& x : shifted.field().residues(a)) terms.push_back(cylinder_mass(shifted, x, a));
  return sum(terms);
}

Scalar kms_value(const Congruence& C, double beta, const AlgebraicInteger& x, const Ideal& a) {
  if (!(beta >= 1)) fail(ErrorCode::Domain, "KMS values need beta >= 1");
  require_integral(a);
  if (!C.coprime(a)) fail(ErrorCode::NotCoprime, "ideal is not coprime to m0");
  const auto& K = C.field();
  std::vector<PrimeIdeal> F;
  int cap = 1;
  for (const auto& pp : K.factor_ideal(a)) {
    F.push_back(pp.prime);
    cap = std::max(cap, pp.exponent);
  }
  const TruncatedMeasure shifted(K, beta - 1, std::move(F), cap);
  return cylinder_mass(shifted, K.reduce(x, a), a);
}

ClassMeasure ClassMeasure::build(const ClassTable& T, int cls, double beta, std::uint64_t X) {
  if (!(beta > 1)) fail(ErrorCode::Domain, "class measures need beta > 1");
  if (cls < 0 || cls >= T.order()) fail(ErrorCode::Argument, "no class " + std::to_string(cls));
  const auto& C = T.congruence();
  ClassMeasure m;
  m.cls_ = cls;
  m.beta_ = beta;
  m.X_ = X;
  IdealCensus census;
  census.X = X;
  const Exponent s(beta);
  std::vector<Scalar> raw;
  for (const auto& I : C.field().enumerate_ideals(X, C.modulus().m0)) {
    const int k = T.class_of(I);
    census.entries.emplace_back(to_u64(I.lattice_norm()), k);
    if (k != cls) continue;
    raw.push_back(inverse_power(Rational(I.lattice_norm()), s));
    m.weights_.emplace_back(I, Scalar());
  }
  const SeriesValue z = partial_zeta(T, census, cls, beta);
  m.normalizer_ = z.value.buckets.at(0);
  for (std::size_t i = 0; i < raw.size(); ++i) m.weights_[i].second = raw[i] / m.normalizer_;
  m.tail_fraction_ = z.tail_bound / m.normalizer_.approx();
  return m;
}

Scalar ClassMeasure::total_mass() const {
  std::vector<Scalar> terms;
  for (const auto& w : weights_) terms.push_back(w.second);
  return sum(terms);
}

std::optional<Scalar> ClassMeasure::weight(const Ideal& a) const {
  for (const auto& [I, w] : weights_)
    if (I == a) return w;
  return std::nullopt;
}

CheckReport class_measure_scaling(const ClassMeasure& m, const NumberField& K, const KElement& k,
                                  const Ideal& b) {
  const Ideal a = scale_ideal(K, k, b);
  auto wa = m.weight(a);
  auto wb = m.weight(b);
  if (!wa || !wb) fail(ErrorCode::OutOfTruncation, "ideal outside the class-measure support");
  return compare(*wa, inverse_power(element_norm(K, k), Exponent(m.beta())) * *wb);
}

BorelCantelli borel_cantelli_sum(const ClassTable& T, double beta, std::uint64_t X) {
  if (!(beta > 1)) fail(ErrorCode::Domain, "the Borel-Cantelli sum needs beta > 1");
  const auto& C = T.congruence();
  const auto& K = C.field();
  const TruncatedMeasure nu = TruncatedMeasure::for_modulus(C, beta, X, std::max(1, bit_length(X)));
  const Exponent s(beta);

  BorelCantelli out;
  out.beta = beta;
  out.X = X;
  IdealCensus census;
  census.X = X;
  std::vector<Scalar> all_nu;
  std::vector<Scalar> all_direct;
  std::vector<std::vector<Scalar>> by_class(static_cast<std::size_t>(T.order()));
  for (const auto& I : K.enumerate_ideals(X, C.modulus().m0)) {
    const int k = T.class_of(I);
    census.entries.emplace_back(to_u64(I.lattice_norm()), k);
    Scalar v = nu.nu(I);
    all_direct.push_back(inverse_power(Rational(I.lattice_norm()), s));
    by_class[static_cast<std::size_t>(k)].push_back(v);
    all_nu.push_back(std::move(v));
  }
  out.partial_sum = sum(all_nu);
  out.direct_sum = sum(all_direct);
  out.identity_ok = out.partial_sum.agrees_with(out.direct_sum);
  for (int k = 0; k < T.order(); ++k) {
    ClassIdentity ci;
    ci.cls = k;
    ci.lhs = sum(by_class[static_cast<std::size_t>(k)]);
    const Ideal& rep = T.info(k).representative;
    const Scalar z = partial_zeta(T, census, k, beta).value.buckets.at(0);
    ci.rhs = z * inverse_power(Rational(rep.lattice_norm()), Exponent(-beta)) * nu.nu(rep);
    ci.pass = ci.lhs.agrees_with(ci.rhs);
    out.identity_ok = out.identity_ok && ci.pass;
    out.classes.push_back(std::move(ci));
  }
  return out;
}

DivergenceWitness divergence_witness(const ClassTable& T, const Rational& threshold,
                                     std::uint64_t x_max) {
  const auto& C = T.congruence();
  const TruncatedMeasure nu =
      TruncatedMeasure::for_modulus(C, 1.0, x_max, std::max(1, bit_length(x_max)));
  DivergenceWitness w;
  w.sum = 0;
  std::uint64_t current = 0;
  for (const auto& I : C.field().enumerate_ideals(x_max, C.modulus().m0)) {
    const std::uint64_t n = to_u64(I.lattice_norm());
    if (n != current && w.sum > threshold) break;
    current = n;
    w.sum += nu.nu(I).rational();
  }
  if (w.sum > threshold) {
    w.found = true;
    w.X = current;
  }
  return w;
}

Scalar extension_measure_value(const TruncatedMeasure& nu, const ClassTable& T, int cls,
                               const Ideal& a, const std::vector<Ideal>* reps) {
  if (cls < 0 || cls >= T.order()) fail(ErrorCode::Argument, "no class " + std::to_string(cls));
  require_integral(a);
  const auto& K = nu.field();
  std::vector<Scalar> terms;
  for (int kp = 0; kp < T.order(); ++kp) {
    const Ideal& r = reps != nullptr ? reps->at(static_cast<std::size_t>(kp))
                                     : T.info(kp).representative;
    // a_k' ({kappa} x U_a) = {k' kappa} x U_{a_k' a}; it meets Y_{a_k'} = {[R]} x U_{a_k'}
    // only when k' kappa is trivial, and then U_{a_k' a} lies inside U_{a_k'}.
    if (T.mul(kp, cls) != T.identity()) continue;
    const Ideal ra = K.ideal_mul(r, a);
    terms.push_back(inverse_power(Rational(r.lattice_norm()), Exponent(-nu.beta())) * nu.nu(ra));
  }
  return sum(terms);
}

CheckReport extension_scaling_check(const TruncatedMeasure& nu, const ClassTable& T, int cls,
                                    const Ideal& a, const Ideal& b) {
  const auto& K = nu.field();
  const int cb = T.class_of(b);
  const Scalar lhs = extension_measure_value(nu, T, T.mul(cb, cls), K.ideal_mul(b, a));
  const Scalar rhs = inverse_power(Rational(b.lattice_norm()), nu.exponent()) *
                     extension_measure_value(nu, T, cls, a);
  return compare(lhs, rhs);
}

std::vector<Ideal> alternate_representatives(const ClassTable& T) {
  const auto& C = T.congruence();
  std::vector<std::optional<Ideal>> alt(static_cast<std::size_t>(T.order()));
  alt[static_cast<std::size_t>(T.identity())] = C.field().unit_ideal();
  int missing = T.order() - 1;
  const std::uint64_t bound = std::max<std::uint64_t>(T.scan_bound(), 1);
  for (const auto& I : C.field().enumerate_ideals(bound, C.modulus().m0)) {
    if (missing == 0) break;
    const int k = T.class_of(I);
    auto& slot = alt[static_cast<std::size_t>(k)];
    if (slot.has_value() || I == T.info(k).representative) continue;
    slot = I;
    --missing;
  }
  std::vector<Ideal> out;
  for (int k = 0; k < T.order(); ++k) {
    const auto& slot = alt[static_cast<std::size_t>(k)];
    out.push_back(slot.has_value() ? *slot : T.info(k).representative);
  }
  return out;
}

std::string unit_group_description(const UnitGroupMG& U) {
  const std::size_t t = U.torsion_elements.size();
  std::string tors;
  if (t <= 1)
    tors = "{1}";
  else if (t == 2)
    tors = "{±1}";
  else
    tors = "μ_" + std::to_string(t);
  if (U.free_rank == 0) return tors;
  std::string free = U.free_rank == 1 ? "ℤ" : "ℤ^" + std::to_string(U.free_rank);
  if (t <= 1) return free;
  return "(" + tors + " × " + free + ")";
}

GroundStates ground_state_blocks(const ClassTable& T, const UnitGroupMG& U) {
  const int deg = T.congruence().field().degree();
  const std::string units = unit_group_description(U);
  const std::string additive = deg == 1 ? "ℤ" : "ℤ²";
  GroundStates g;
  for (int k = 0; k < T.order(); ++k) {
    const auto& info = T.info(k);
    const Int kk(info.k());
    g.full.push_back({k, kk * info.min_norm, additive + " ⋊ " + units});
    g.multiplicative.push_back({k, kk, units});
    g.principal.push_back({k, kk, "{1}"});
  }
  return g;
}

Int GroundStates::full_total() const {
  Int s = 0;
  for (const auto& b : full) s += b.size;
  return s;
}

Int GroundStates::multiplicative_total() const {
  Int s = 0;
  for (const auto& b : multiplicative) s += b.size;
  return s;
}

}  // namespace kms
