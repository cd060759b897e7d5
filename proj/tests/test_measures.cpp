#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kmsphase/errors.hpp"
#include "kmsphase/measures.hpp"
#include "oracles.hpp"

using namespace kms;

namespace {

struct Setup {
  Congruence C;
  GammaSubgroup G;
  ClassTable T;
};

Setup make_setup(const NumberField& K, std::vector<int> minf, const Ideal& m0, bool full,
                 std::uint64_t scan) {
  Congruence C(K, make_modulus(K, std::move(minf), m0));
  GammaSubgroup G = full ? GammaSubgroup::full(C) : GammaSubgroup::trivial(C);
  ClassTable T = ClassTable::build(C, G, scan);
  return {C, G, T};
}

Setup rational_setup(long m, bool inf, bool full = false) {
  const auto Q = NumberField::rational();
  return make_setup(Q, {inf ? 1 : 0}, Q.rational_ideal(m), full, 10000);
}

Setup quadratic_trivial(long d) {
  const auto K = NumberField::quadratic(d);
  std::vector<int> minf(static_cast<std::size_t>(K.real_embedding_count()), 0);
  return make_setup(K, minf, K.unit_ideal(), true, 1000);
}

int class_with_min_norm(const ClassTable& T, long n) {
  for (int k = 0; k < T.order(); ++k)
    if (T.info(k).min_norm == n) return k;
  return -1;
}

Rational inv_pow(const Int& n, long b) {
  Int p;
  mpz_pow_ui(p.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(b));
  return Rational(Int(1), p);
}

// Mass of the truncated geometric law at v, computed from the definition.
Rational atom_mass(std::uint64_t q, long beta, int v, int cap) {
  const Rational r = inv_pow(Int(static_cast<unsigned long>(q)), beta);
  Rational rv = 1;
  for (int i = 0; i < v; ++i) rv *= r;
  return v == cap ? rv : (1 - r) * rv;
}

}  // namespace

TEST_CASE("per-prime distributions close to one") {
  const auto triv = rational_setup(1, false, true);
  const auto nu = TruncatedMeasure::for_modulus(triv.C, 2.0, 50, 7);
  CHECK(nu.exact());
  for (std::size_t i = 0; i < nu.primes().size(); ++i) {
    const auto& d = nu.distribution(i);
    CHECK(d.size() == 8);
    CHECK(sum(d).rational() == 1);
    for (int n = 0; n <= 7; ++n) CHECK(d[static_cast<std::size_t>(n)].rational() == atom_mass(nu.primes()[i].norm(), 2, n, 7));
  }
  const auto nuf = TruncatedMeasure::for_modulus(triv.C, 1.5, 50, 7);
  CHECK_FALSE(nuf.exact());
  for (std::size_t i = 0; i < nuf.primes().size(); ++i) {
    const auto total = sum(nuf.distribution(i));
    CHECK(total.interval().contains(1.0));
    CHECK(total.width() < 1e-25);
  }
}

TEST_CASE("nu on cylinder sets: examples") {
  const auto triv = rational_setup(1, false, true);
  const auto& Q = triv.C.field();
  const auto nu = TruncatedMeasure::for_modulus(triv.C, 2.0);
  CHECK(nu.cap() == 30);
  CHECK(nu.nu(Q.unit_ideal()).rational() == 1);
  CHECK(nu.nu(Q.rational_ideal(6)).rational() == Rational(1, 36));

  const auto dirac = TruncatedMeasure::for_modulus(triv.C, 0.0);
  CHECK(dirac.dirac_zero());
  for (long n : {1L, 2L, 12L, 997L, 1L << 20}) CHECK(dirac.nu(Q.rational_ideal(n)).rational() == 1);

  CHECK_THROWS_AS(nu.nu(Q.rational_ideal(1009)), Error);
  try {
    (void)nu.nu(Q.rational_ideal(1009));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfTruncation);
  }
  const auto capped = TruncatedMeasure::for_modulus(triv.C, 2.0, 100, 3);
  CHECK(capped.nu(Q.rational_ideal(8)).rational() == Rational(1, 64));
  try {
    (void)capped.nu(Q.rational_ideal(16));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfTruncation);
  }
  CHECK_THROWS_AS(TruncatedMeasure::for_modulus(triv.C, -1.0), Error);
}

TEST_CASE("nu(U_a) = N(a)^-beta exactly") {
  std::vector<Setup> setups;
  setups.push_back(rational_setup(1, false, true));
  setups.push_back(rational_setup(5, true));
  setups.push_back(quadratic_trivial(-5));
  setups.push_back(quadratic_trivial(-1));
  setups.push_back(quadratic_trivial(2));
  for (const auto& S : setups) {
    const auto& K = S.C.field();
    for (long beta : {1L, 2L, 3L}) {
      const auto nu = TruncatedMeasure::for_modulus(S.C, static_cast<double>(beta), 400, 10);
      for (const auto& I : K.enumerate_ideals(400, S.C.modulus().m0))
        CHECK(nu.nu(I).rational() == inv_pow(I.lattice_norm(), beta));
    }
  }
}

TEST_CASE("nu is multiplicative across coprime ideals") {
  const auto S = quadratic_trivial(-5);
  const auto& K = S.C.field();
  const auto nu = TruncatedMeasure::for_modulus(S.C, 3.0, 200, 10);
  const auto ideals = K.enumerate_ideals(30);
  for (const auto& a : ideals)
    for (const auto& b : ideals)
      if (K.coprime(a, b))
        CHECK(nu.nu(K.ideal_mul(a, b)).rational() == nu.nu(a).rational() * nu.nu(b).rational());
}

TEST_CASE("non-integer beta evaluates by enclosure") {
  const auto triv = rational_setup(1, false, true);
  const auto& Q = triv.C.field();
  const auto nu = TruncatedMeasure::for_modulus(triv.C, 1.5, 100, 10);
  for (long n : {2L, 6L, 12L, 97L, 360L}) {
    const auto v = nu.nu(Q.rational_ideal(n));
    CHECK_FALSE(v.exact());
    CHECK(std::abs(v.interval().mid() - std::pow(static_cast<double>(n), -1.5)) < 1e-15);
    CHECK(v.width() < 1e-25);
  }
}

TEST_CASE("scaling law: examples") {
  const auto triv = rational_setup(1, false, true);
  const auto& Q = triv.C.field();
  const auto nu = TruncatedMeasure::for_modulus(triv.C, 2.0);
  auto r = scaling_check(nu, KElement{}, Q.rational_ideal(10));
  CHECK(r.pass);
  CHECK(r.lhs.rational() == r.rhs.rational());

  r = scaling_check(nu, KElement{AlgebraicInteger(3), AlgebraicInteger(1)}, Q.rational_ideal(2));
  CHECK(r.pass);
  CHECK(r.lhs.rational() == Rational(1, 36));
  CHECK(r.rhs.rational() == Rational(1, 36));
  CHECK(r.width == 0);

  const auto S = quadratic_trivial(-5);
  const auto& K = S.C.field();
  const auto nuk = TruncatedMeasure::for_modulus(S.C, 2.0);
  const AlgebraicInteger g{Int(1), Int(1)};  // 1 + sqrt(-5)
  const auto rk = scaling_check(nuk, KElement{g, AlgebraicInteger(1)}, K.unit_ideal());
  CHECK(rk.pass);
  CHECK(rk.lhs.rational() == Rational(1, 36));
  // the oracle factorisation (2, 1+w)(3, 1+w)
  const auto P2 = K.ideal_from_generators({AlgebraicInteger(2), g});
  const auto P3 = K.ideal_from_generators({AlgebraicInteger(3), g});
  CHECK(K.ideal_mul(P2, P3) == K.principal(g));
  CHECK(nuk.nu(P2).rational() * nuk.nu(P3).rational() == Rational(1, 36));

  // fractional k with k a integral
  r = scaling_check(nu, KElement{AlgebraicInteger(3), AlgebraicInteger(2)}, Q.rational_ideal(4));
  CHECK(r.pass);
  CHECK(r.lhs.rational() == Rational(1, 36));
  CHECK_THROWS_AS(scaling_check(nu, KElement{AlgebraicInteger(1), AlgebraicInteger(2)},
                                Q.rational_ideal(3)),
                  Error);
}

TEST_CASE("scaling law: random monoid elements on golden configurations") {
  std::vector<Setup> setups;
  setups.push_back(rational_setup(1, false, true));
  setups.push_back(rational_setup(5, true));
  setups.push_back(quadratic_trivial(-5));
  setups.push_back(quadratic_trivial(-1));
  std::mt19937_64 rng(20240601);
  for (const auto& S : setups) {
    const auto& K = S.C.field();
    const auto nu = TruncatedMeasure::for_modulus(S.C, 2.0);
    const auto ideals = K.enumerate_ideals(60, S.C.modulus().m0);
    std::uniform_int_distribution<long> coord(-6, 6);
    std::uniform_int_distribution<std::size_t> pick(0, ideals.size() - 1);
    int done = 0;
    while (done < 100) {
      AlgebraicInteger k{Int(coord(rng)), K.is_rational() ? Int(0) : Int(coord(rng))};
      if (k.is_zero() || !monoid_contains(S.C, S.G, k)) continue;
      if (K.abs_norm(k) > 200) continue;
      const auto& a = ideals[pick(rng)];
      const auto r = scaling_check(nu, KElement{k, AlgebraicInteger(1)}, a);
      CHECK(r.pass);
      CHECK(r.lhs.exact());
      CHECK(r.lhs.rational() == r.rhs.rational());
      ++done;
    }
  }
}

TEST_CASE("scaling law with beta = 1.5 passes on overlap") {
  const auto S = quadratic_trivial(-1);
  const auto& K = S.C.field();
  const auto nu = TruncatedMeasure::for_modulus(S.C, 1.5, 500, 12);
  for (const auto& a : K.enumerate_ideals(40)) {
    const auto r = scaling_check(nu, KElement{AlgebraicInteger{Int(2), Int(1)}, AlgebraicInteger(1)}, a);
    CHECK(r.pass);
    CHECK(r.width < 1e-20);
  }
}

TEST_CASE("kms values on spanning projections") {
  const auto m5 = rational_setup(5, true);
  const auto& Q = m5.C.field();
  for (double beta : {1.0, 2.0, 3.0, 2.5})
    CHECK(kms_value(m5.C, beta, AlgebraicInteger(0), Q.unit_ideal()).approx() == 1.0);
  CHECK(kms_value(m5.C, 2.0, AlgebraicInteger(0), Q.rational_ideal(4)).rational() == Rational(1, 16));
  CHECK(kms_value(m5.C, 1.0, AlgebraicInteger(3), Q.rational_ideal(4)).rational() == Rational(1, 4));
  for (long x = 0; x < 12; ++x)
    CHECK(kms_value(m5.C, 3.0, AlgebraicInteger(x), Q.rational_ideal(12)).rational() ==
          Rational(1, 1728));
  const auto fr = kms_value(m5.C, 2.5, AlgebraicInteger(1), Q.rational_ideal(4));
  CHECK(fr.interval().contains(std::pow(4.0, -2.5)));
  CHECK_THROWS_AS(kms_value(m5.C, 0.5, AlgebraicInteger(0), Q.rational_ideal(4)), Error);
  CHECK_THROWS_AS(kms_value(m5.C, 2.0, AlgebraicInteger(0), Q.rational_ideal(10)), Error);

  const auto S = quadratic_trivial(-5);
  const auto& K = S.C.field();
  for (const auto& a : K.enumerate_ideals(30)) {
    const auto expect = inv_pow(a.lattice_norm(), 2);
    for (const auto& x : K.residues(a)) CHECK(kms_value(S.C, 2.0, x, a).rational() == expect);
  }
}

TEST_CASE("disintegration identity") {
  std::vector<Setup> setups;
  setups.push_back(rational_setup(5, true));
  setups.push_back(quadratic_trivial(-5));
  setups.push_back(quadratic_trivial(-1));
  for (const auto& S : setups) {
    const auto& K = S.C.field();
    const auto shifted = TruncatedMeasure::for_modulus(S.C, 1.0, 200, 8);
    for (const auto& a : K.enumerate_ideals(40, S.C.modulus().m0)) {
      const auto total = disintegration_sum(shifted, a);
      CHECK(total.rational() == shifted.nu(a).rational());
      CHECK(total.rational() == inv_pow(a.lattice_norm(), 1));
      // mu(V_{R x a^x}) = N(a) mu(V_{a x a^x})
      CHECK(total.rational() ==
            Rational(a.lattice_norm()) * cylinder_mass(shifted, AlgebraicInteger(0), a).rational());
    }
  }
}

TEST_CASE("mixtures evaluate affinely") {
  const auto triv = rational_setup(1, false, true);
  const auto& Q = triv.C.field();
  const int cap = 4;
  std::vector<PrimeIdeal> F;
  for (const auto& P : Q.prime_ideals_up_to(3)) F.push_back(P);
  REQUIRE(F.size() == 2);
  const TruncatedMeasure a(Q, 1.0, F, cap);
  const TruncatedMeasure b(Q, 3.0, F, cap);
  MeasureMixture mix;
  mix.add(Rational(1, 3), a);
  mix.add(Rational(2, 3), b);
  for (long n : {1L, 2L, 3L, 4L, 6L, 8L, 9L, 12L, 16L, 18L, 48L, 144L}) {
    const auto I = Q.rational_ideal(n);
    // mass of U_n from the atoms of the joint law on {0..cap}^2
    long v2 = 0, v3 = 0;
    for (long m = n; m % 2 == 0; m /= 2) ++v2;
    for (long m = n; m % 3 == 0; m /= 3) ++v3;
    Rational oracle = 0;
    for (int i = static_cast<int>(v2); i <= cap; ++i)
      for (int j = static_cast<int>(v3); j <= cap; ++j)
        oracle += Rational(1, 3) * atom_mass(2, 1, i, cap) * atom_mass(3, 1, j, cap) +
                  Rational(2, 3) * atom_mass(2, 3, i, cap) * atom_mass(3, 3, j, cap);
    CHECK(mix.nu(I).rational() == oracle);
    CHECK(mix.nu(I).rational() ==
          Rational(1, 3) * a.nu(I).rational() + Rational(2, 3) * b.nu(I).rational());
  }
  MeasureMixture bad;
  bad.add(Rational(1, 2), a);
  CHECK_THROWS_AS(bad.nu(Q.unit_ideal()), Error);
}

TEST_CASE("class measures") {
  const auto m5 = rational_setup(5, true);
  const auto& Q = m5.C.field();
  const int two = class_with_min_norm(m5.T, 2);
  const auto cm = ClassMeasure::build(m5.T, two, 2.0, 2000);
  CHECK(cm.total_mass().rational() == 1);
  CHECK(cm.tail_fraction() > 0);
  CHECK(cm.tail_fraction() < 1e-2);
  for (const auto& [I, w] : cm.weights()) {
    CHECK(w.rational() > 0);
    CHECK(m5.T.class_of(I) == two);
  }
  // a = 7 * 2Z lies in the same class as 2Z; the witness scales the weights
  const auto a = Q.rational_ideal(2);
  const auto b = Q.rational_ideal(22);
  const auto k = same_class(m5.C, m5.G, b, a);
  REQUIRE(k.has_value());
  const auto r = class_measure_scaling(cm, Q, *k, a);
  CHECK(r.pass);
  CHECK(r.lhs.rational() == r.rhs.rational());

  const auto S = quadratic_trivial(-5);
  const auto& K = S.C.field();
  const int nontriv = class_with_min_norm(S.T, 2);
  const auto cq = ClassMeasure::build(S.T, nontriv, 3.0, 300);
  CHECK(cq.total_mass().rational() == 1);
  const auto& w = cq.weights();
  REQUIRE(w.size() > 3);
  for (std::size_t i = 1; i < 4; ++i) {
    const auto kk = same_class(S.C, S.G, w[i].first, w[0].first);
    REQUIRE(kk.has_value());
    const auto rq = class_measure_scaling(cq, K, *kk, w[0].first);
    CHECK(rq.pass);
  }
  CHECK_THROWS_AS(ClassMeasure::build(m5.T, 0, 1.0, 100), Error);
}

TEST_CASE("Borel-Cantelli sums") {
  const auto triv = rational_setup(1, false, true);
  const auto bc = borel_cantelli_sum(triv.T, 2.0, 10000);
  CHECK(bc.identity_ok);
  CHECK(bc.partial_sum.rational() == bc.direct_sum.rational());
  long double oracle = 0;
  for (long n = 1; n <= 10000; ++n) oracle += 1.0L / (static_cast<long double>(n) * n);
  CHECK(std::abs(bc.partial_sum.approx() - static_cast<double>(oracle)) < 1e-14);
  CHECK(std::abs(bc.partial_sum.approx() - 1.6449) < 2e-4);

  const auto m5 = rational_setup(5, true);
  const auto bc5 = borel_cantelli_sum(m5.T, 2.0, 3000);
  CHECK(bc5.identity_ok);
  CHECK(bc5.classes.size() == 4);
  for (const auto& c : bc5.classes) CHECK(c.lhs.rational() == c.rhs.rational());

  const auto S = quadratic_trivial(-5);
  const auto bcq = borel_cantelli_sum(S.T, 3.0, 500);
  CHECK(bcq.identity_ok);

  const auto lo = borel_cantelli_sum(triv.T, 1.5, 1000);
  const auto hi = borel_cantelli_sum(triv.T, 1.5, 10000);
  CHECK(lo.identity_ok);
  CHECK(hi.identity_ok);
  const double inc = hi.partial_sum.approx() - lo.partial_sum.approx();
  CHECK(inc > 0);
  CHECK(inc < 2 * std::pow(1000.0, -0.5));
  CHECK(inc < 0.1);

  try {
    (void)borel_cantelli_sum(triv.T, 1.0, 100);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Domain);
  }
}

TEST_CASE("divergence witness at beta = 1") {
  const auto triv = rational_setup(1, false, true);
  const auto w = divergence_witness(triv.T, Rational(5), 1000);
  REQUIRE(w.found);
  // harmonic oracle
  long double h = 0;
  long first = 0;
  for (long n = 1; n <= 1000 && first == 0; ++n) {
    h += 1.0L / n;
    if (h > 5) first = n;
  }
  CHECK(w.X == static_cast<std::uint64_t>(first));
  CHECK(w.X <= 200);
  CHECK(w.sum > 5);
  CHECK(std::abs(w.sum.get_d() - static_cast<double>(h)) < 1e-15);
  CHECK_FALSE(divergence_witness(triv.T, Rational(5), 50).found);
}

TEST_CASE("extension of nu across classes") {
  const auto m5 = rational_setup(5, false);
  const auto& Q = m5.C.field();
  REQUIRE(m5.T.order() == 2);
  const auto nu = TruncatedMeasure::for_modulus(m5.C, 2.0);
  CHECK(extension_measure_value(nu, m5.T, 0, Q.unit_ideal()).rational() == 1);

  const auto m5i = rational_setup(5, true);
  const auto nui = TruncatedMeasure::for_modulus(m5i.C, 2.0);
  const int two = class_with_min_norm(m5i.T, 2);
  CHECK(extension_measure_value(nui, m5i.T, two, Q.unit_ideal()).rational() == 1);
  CHECK(extension_measure_value(nui, m5i.T, m5i.T.identity(), Q.unit_ideal()).rational() == 1);

  Rational total = 0;
  for (int k = 0; k < m5i.T.order(); ++k)
    total += extension_measure_value(nui, m5i.T, k, Q.unit_ideal()).rational();
  CHECK(total == m5i.T.order());

  // restriction to {[R]} x U_a is nu itself
  for (long n : {1L, 2L, 3L, 4L, 6L, 7L, 12L})
    CHECK(extension_measure_value(nui, m5i.T, 0, Q.rational_ideal(n)).rational() ==
          nui.nu(Q.rational_ideal(n)).rational());

  for (int k = 0; k < m5i.T.order(); ++k)
    for (long a : {1L, 3L, 4L})
      for (long b : {2L, 3L, 7L, 11L}) {
        const auto r = extension_scaling_check(nui, m5i.T, k, Q.rational_ideal(a), Q.rational_ideal(b));
        CHECK(r.pass);
      }

  const auto alt = alternate_representatives(m5i.T);
  CHECK(alt[0] == Q.unit_ideal());
  for (int k = 1; k < m5i.T.order(); ++k) CHECK_FALSE(alt[static_cast<std::size_t>(k)] == m5i.T.info(k).representative);
  for (int k = 0; k < m5i.T.order(); ++k)
    for (long a : {1L, 2L, 9L})
      CHECK(extension_measure_value(nui, m5i.T, k, Q.rational_ideal(a), &alt).rational() ==
            extension_measure_value(nui, m5i.T, k, Q.rational_ideal(a)).rational());

  const auto S = quadratic_trivial(-5);
  const auto& K = S.C.field();
  const auto nuq = TruncatedMeasure::for_modulus(S.C, 3.0);
  const auto altq = alternate_representatives(S.T);
  for (int k = 0; k < S.T.order(); ++k)
    for (const auto& a : K.enumerate_ideals(20)) {
      CHECK(extension_measure_value(nuq, S.T, k, a, &altq).rational() ==
            extension_measure_value(nuq, S.T, k, a).rational());
      for (const auto& b : K.enumerate_ideals(10))
        CHECK(extension_scaling_check(nuq, S.T, k, a, b).pass);
    }
}

TEST_CASE("ground-state blocks") {
  const auto m5 = rational_setup(5, true);
  const auto g = ground_state_blocks(m5.T, unit_group_mg(m5.C, m5.G));
  std::vector<long> sizes;
  for (const auto& b : g.full) {
    sizes.push_back(b.size.get_si());
    CHECK(b.group == "ℤ ⋊ {1}");
  }
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<long>{1, 2, 3, 4});
  CHECK(g.full_total() == 10);
  CHECK(g.multiplicative_total() == 4);

  const auto triv = rational_setup(1, false, true);
  const auto gt = ground_state_blocks(triv.T, unit_group_mg(triv.C, triv.G));
  REQUIRE(gt.full.size() == 1);
  CHECK(gt.full[0].size == 1);
  CHECK(gt.full[0].group == "ℤ ⋊ {±1}");

  const auto S = quadratic_trivial(-5);
  const auto gq = ground_state_blocks(S.T, unit_group_mg(S.C, S.G));
  sizes.clear();
  for (const auto& b : gq.full) {
    sizes.push_back(b.size.get_si());
    CHECK(b.group == "ℤ² ⋊ {±1}");
    CHECK(b.size == S.T.info(b.cls).k() * S.T.info(b.cls).min_norm);
  }
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<long>{1, 2});

  const auto Si = quadratic_trivial(-1);
  const auto gi = ground_state_blocks(Si.T, unit_group_mg(Si.C, Si.G));
  REQUIRE(gi.full.size() == 1);
  CHECK(gi.full[0].group == "ℤ² ⋊ μ_4");

  const auto S2 = quadratic_trivial(2);
  const auto g2 = ground_state_blocks(S2.T, unit_group_mg(S2.C, S2.G));
  CHECK(g2.full[0].group == "ℤ² ⋊ ({±1} × ℤ)");
}
