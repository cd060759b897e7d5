#include <random>
#include <set>
#include <tuple>

#include "doctest.h"
#include "kmsphase/errors.hpp"
#include "kmsphase/number_field.hpp"
#include "oracles.hpp"

using namespace kms;

namespace {

Ideal hnf(long a, long b, long c) {
  Ideal I;
  I.a = a;
  I.b = b;
  I.c = c;
  return I;
}

const std::vector<long> kFields = {-1, -2, -3, -5, -6, -7, -23, -47, 2, 3, 5, 6, 7, 10, 13, 15};

}  // namespace

TEST_CASE("field construction") {
  const auto Q = NumberField::parse("Q");
  CHECK(Q.is_rational());
  CHECK(Q.real_embedding_count() == 1);
  const auto K = NumberField::parse("Q(sqrt,-5)");
  CHECK(K.discriminant() == -20);
  CHECK(K.real_embedding_count() == 0);
  CHECK(NumberField::parse("Q(sqrt,5)").discriminant() == 5);
  CHECK(NumberField::parse("Q(sqrt,2)").real_embedding_count() == 2);
  CHECK(K.spec() == "Q(sqrt,-5)");
  CHECK_THROWS_AS(NumberField::parse("Q(sqrt,4)"), Error);
  CHECK_THROWS_AS(NumberField::parse("Q(sqrt,1)"), Error);
  CHECK_THROWS_AS(NumberField::parse("QQ"), Error);
}

TEST_CASE("element norms") {
  CHECK(NumberField::rational().norm(AlgebraicInteger(7)) == 7);
  const auto K = NumberField::quadratic(-5);
  CHECK(K.norm({1, 1}) == oracle::norm(-5, 1, 1));
  CHECK(K.norm({1, 1}) == 6);
  const auto L = NumberField::quadratic(2);
  CHECK(L.norm({1, 1}) == oracle::norm(2, 1, 1));
  CHECK(L.norm({1, 1}) == -1);
  CHECK(L.abs_norm({1, 1}) == 1);
  for (long d : kFields) {
    const auto F = NumberField::quadratic(d);
    for (long x = -6; x <= 6; ++x)
      for (long y = -6; y <= 6; ++y) CHECK(F.norm({x, y}) == oracle::norm(d, x, y));
  }
}

TEST_CASE("exact signs at real embeddings") {
  const auto K = NumberField::quadratic(2);
  CHECK(K.sign_at({1, 1}, 0) == 1);
  CHECK(K.sign_at({1, 1}, 1) == -1);
  CHECK(K.sign_at({-1, 1}, 0) == 1);
  const auto F = NumberField::quadratic(5);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(-1000, 1000);
  for (int i = 0; i < 500; ++i) {
    const AlgebraicInteger u(dist(rng), dist(rng));
    if (u.is_zero()) continue;
    for (int w : {0, 1}) {
      const double v = F.embed(u, w);
      if (std::abs(v) > 1e-6) CHECK(F.sign_at(u, w) == (v > 0 ? 1 : -1));
    }
  }
}

TEST_CASE("ideal multiplication") {
  const auto Q = NumberField::rational();
  CHECK(Q.ideal_mul(Q.rational_ideal(6), Q.rational_ideal(10)) == Q.rational_ideal(60));
  const auto K = NumberField::quadratic(-5);
  const Ideal p2 = K.ideal_from_generators({AlgebraicInteger(2), AlgebraicInteger(1, 1)});
  CHECK(p2 == hnf(2, 1, 1));
  CHECK(K.ideal_mul(p2, p2) == K.rational_ideal(2));
  const Ideal b = K.ideal_from_generators({AlgebraicInteger(3), AlgebraicInteger(1, 1)});
  CHECK(K.ideal_mul(K.unit_ideal(), b) == b);
}

TEST_CASE("inverse and quotient") {
  const auto Q = NumberField::rational();
  const Ideal fifth = Q.ideal_inverse(Q.rational_ideal(5));
  CHECK(fifth.a == 1);
  CHECK(fifth.den == 5);
  CHECK(Q.ideal_mul(fifth, Q.rational_ideal(10)) == Q.rational_ideal(2));
  for (long d : kFields) {
    const auto K = NumberField::quadratic(d);
    for (const auto& I : K.enumerate_ideals(40)) {
      const Ideal inv = K.ideal_inverse(I);
      CHECK(K.ideal_mul(I, inv).is_unit());
      CHECK(K.ideal_quotient(K.ideal_mul(I, I), I) == I);
    }
  }
}

TEST_CASE("prime factorisation") {
  const auto K = NumberField::quadratic(-5);
  const auto f2 = K.factor_rational_prime(2);
  REQUIRE(f2.size() == 1);
  CHECK(f2[0].exponent == 2);
  CHECK(f2[0].prime.ramified);
  CHECK(f2[0].prime.norm() == 2);
  CHECK(K.ideal_pow(f2[0].prime.ideal, 2) == K.rational_ideal(2));
  const auto f11 = K.factor_rational_prime(11);
  REQUIRE(f11.size() == 1);
  CHECK(f11[0].prime.residue_degree == 2);
  CHECK(f11[0].prime.norm() == 121);
  CHECK(f11[0].prime.ideal == K.rational_ideal(11));
  const auto Q = NumberField::rational();
  CHECK(Q.factor_rational_prime(7)[0].prime.ideal == Q.rational_ideal(7));

  // soundness: the product of the factors with exponents is pR
  for (long d : kFields) {
    const auto F = NumberField::quadratic(d);
    for (auto p : primes_up_to(150)) {
      Ideal prod = F.unit_ideal();
      int sum_ef = 0;
      for (const auto& pp : F.factor_rational_prime(p)) {
        prod = F.ideal_mul(prod, F.ideal_pow(pp.prime.ideal, pp.exponent));
        sum_ef += pp.exponent * pp.prime.residue_degree;
        if (pp.prime.residue_degree == 1) CHECK(oracle::is_prime(static_cast<long>(pp.prime.norm())));
      }
      CHECK(sum_ef == 2);
      CHECK(prod == F.rational_ideal(Int(static_cast<unsigned long>(p))));
    }
  }
}

TEST_CASE("ideal factorisation round trip") {
  for (long d : {-5L, -23L, 10L}) {
    const auto K = NumberField::quadratic(d);
    for (const auto& I : K.enumerate_ideals(300)) {
      Ideal prod = K.unit_ideal();
      for (const auto& pp : K.factor_ideal(I)) prod = K.ideal_mul(prod, K.ideal_pow(pp.prime.ideal, pp.exponent));
      CHECK(prod == I);
    }
  }
}

TEST_CASE("ideal enumeration examples") {
  const auto Q = NumberField::rational();
  const auto r = Q.enumerate_ideals(5, Q.rational_ideal(5));
  REQUIRE(r.size() == 4);
  for (long n = 1; n <= 4; ++n) CHECK(r[n - 1] == Q.rational_ideal(n));

  const auto Gi = NumberField::quadratic(-1);
  const auto g = Gi.enumerate_ideals(5);
  REQUIRE(g.size() == 5);
  const long norms[] = {1, 2, 4, 5, 5};
  for (int i = 0; i < 5; ++i) CHECK(g[i].norm() == norms[i]);
  CHECK(g[1] == Gi.principal({1, 1}));
  CHECK(g[2] == Gi.principal({0, 2}));
  std::set<std::pair<long, long>> fives;
  for (int i = 3; i < 5; ++i) fives.insert({g[i].a.get_si(), g[i].b.get_si()});
  CHECK(fives.count({5, Gi.principal({2, 1}).b.get_si()}) == 1);
  CHECK(fives.count({5, Gi.principal({2, -1}).b.get_si()}) == 1);

  const auto K = NumberField::quadratic(-5);
  const auto k = K.enumerate_ideals(2);
  REQUIRE(k.size() == 2);
  CHECK(k[0].is_unit());
  CHECK(k[1] == hnf(2, 1, 1));
}

TEST_CASE("ideal enumeration agrees with a brute-force HNF scan") {
  for (long d : kFields) {
    const auto K = NumberField::quadratic(d);
    const auto mine = K.enumerate_ideals(200);
    const auto ref = oracle::ideals_by_hnf_scan(d, 200);
    CHECK(mine.size() == ref.size());
    std::set<std::tuple<long, long, long>> a, b;
    for (const auto& I : mine) a.insert({I.a.get_si(), I.b.get_si(), I.c.get_si()});
    for (const auto& t : ref) b.insert(t);
    CHECK(a == b);
    for (std::size_t i = 1; i < mine.size(); ++i) CHECK(ideal_less(mine[i - 1], mine[i]));
  }
}

TEST_CASE("coprime enumeration") {
  const auto K = NumberField::quadratic(-5);
  const Ideal m = K.rational_ideal(3);
  for (const auto& I : K.enumerate_ideals(100, m)) CHECK(K.coprime(I, m));
  std::size_t expect = 0;
  for (const auto& I : K.enumerate_ideals(100))
    if (K.coprime(I, m)) ++expect;
  CHECK(K.enumerate_ideals(100, m).size() == expect);
}

TEST_CASE("norm multiplicativity") {
  for (long d : {-5L, -3L, 2L, 5L, -23L}) {
    const auto K = NumberField::quadratic(d);
    const auto ideals = K.enumerate_ideals(1000);
    std::mt19937_64 rng(static_cast<unsigned long>(d + 100));
    std::uniform_int_distribution<std::size_t> pick(0, ideals.size() - 1);
    for (int i = 0; i < 300; ++i) {
      const auto& a = ideals[pick(rng)];
      const auto& b = ideals[pick(rng)];
      const Ideal ab = K.ideal_mul(a, b);
      CHECK(ab.norm() == a.norm() * b.norm());
      CHECK(K.is_valid_hnf(ab));
    }
  }
}

TEST_CASE("principality examples") {
  const auto Q = NumberField::rational();
  CHECK(*Q.is_principal(Q.rational_ideal(6)) == AlgebraicInteger(6));
  const auto K = NumberField::quadratic(-5);
  CHECK_FALSE(K.is_principal(hnf(2, 1, 1)).has_value());
  const auto Gi = NumberField::quadratic(-1);
  const Ideal I = Gi.principal({2, 1});
  const auto g = Gi.is_principal(I);
  REQUIRE(g.has_value());
  CHECK(Gi.abs_norm(*g) == 5);
  CHECK(Gi.principal(*g) == I);
}

TEST_CASE("principal generators are associates") {
  for (long d : {-1L, -3L, -5L, -23L, 2L, 3L, 5L, 7L, 10L, 13L}) {
    const auto K = NumberField::quadratic(d);
    std::mt19937_64 rng(static_cast<unsigned long>(d + 50));
    std::uniform_int_distribution<long> dist(-120, 120);
    int tested = 0;
    while (tested < 100) {
      const AlgebraicInteger g(dist(rng), dist(rng));
      if (g.is_zero() || K.abs_norm(g) > 10000) continue;
      ++tested;
      const auto h = K.is_principal(K.principal(g));
      REQUIRE(h.has_value());
      const auto u = K.div_exact(*h, g);
      REQUIRE(u.has_value());
      CHECK(K.is_unit(*u));
    }
  }
}

TEST_CASE("class numbers of imaginary fields match reduced forms") {
  for (long d : {-1L, -2L, -3L, -5L, -6L, -7L, -14L, -23L, -47L, -71L}) {
    const auto K = NumberField::quadratic(d);
    const long D = K.discriminant().get_si();
    // count classes by pairwise principality among ideals up to the Minkowski bound
    const auto ideals = K.enumerate_ideals(static_cast<std::uint64_t>(K.minkowski_bound()) + 1);
    std::vector<Ideal> reps;
    for (const auto& I : ideals) {
      bool seen = false;
      for (const auto& J : reps) {
        const Ideal q = K.ideal_mul(I, K.ideal_conj(J));
        if (K.is_principal(q)) {
          seen = true;
          break;
        }
      }
      if (!seen) reps.push_back(I);
    }
    CHECK(static_cast<int>(reps.size()) == oracle::class_number_imaginary(D));
  }
}

TEST_CASE("unit groups") {
  CHECK(NumberField::quadratic(-1).unit_group().torsion_order() == 4);
  CHECK_FALSE(NumberField::quadratic(-1).unit_group().fundamental.has_value());
  CHECK(NumberField::quadratic(-3).unit_group().torsion_order() == 6);
  CHECK(NumberField::quadratic(-5).unit_group().torsion_order() == 2);
  CHECK(NumberField::rational().unit_group().torsion_order() == 2);
  CHECK_FALSE(NumberField::rational().unit_group().fundamental.has_value());
  const auto K = NumberField::quadratic(2);
  CHECK(K.unit_group().torsion_order() == 2);
  CHECK(*K.unit_group().fundamental == AlgebraicInteger(1, 1));
  for (long d = 2; d < 120; ++d) {
    bool sf = true;
    for (long p = 2; p * p <= d; ++p)
      if (d % (p * p) == 0) sf = false;
    if (!sf) continue;
    const auto F = NumberField::quadratic(d);
    const auto eps = *F.unit_group().fundamental;
    const auto [x, y] = oracle::fundamental_unit(d);
    CHECK_MESSAGE(eps == AlgebraicInteger(x, y), "d = " << d);
    CHECK(F.abs_norm(eps) == 1);
    CHECK(F.embed(eps, 0) > 1.0);
  }
  for (const auto& u : NumberField::quadratic(-3).unit_group().torsion)
    CHECK(NumberField::quadratic(-3).norm(u) == 1);
}
