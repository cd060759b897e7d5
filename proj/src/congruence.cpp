#include "kmsphase/congruence.hpp"

#include <algorithm>
#include <deque>

#include "kmsphase/errors.hpp"

namespace kms {

int Modulus::infinite_count() const {
  return static_cast<int>(std::count(minf.begin(), minf.end(), 1));
}

Modulus make_modulus(const NumberField& K, std::vector<int> minf, const Ideal& m0) {
  if (static_cast<int>(minf.size()) != K.real_embedding_count())
    fail(ErrorCode::Config, "minf needs one flag per real embedding (" +
                                std::to_string(K.real_embedding_count()) + ")");
  for (int f : minf)
    if (f != 0 && f != 1) fail(ErrorCode::Config, "minf flags must be 0 or 1");
  if (!m0.integral() || !K.is_valid_hnf(m0)) fail(ErrorCode::Config, "m0 must be an integral ideal in HNF");
  Modulus m;
  m.minf = std::move(minf);
  m.m0 = m0;
  m.support = K.factor_ideal(m0);
  return m;
}

Congruence::Congruence(NumberField K, Modulus m) : K_(std::move(K)), m_(std::move(m)) {
  for (int w = 0; w < static_cast<int>(m_.minf.size()); ++w)
    if (m_.minf[w] == 1) embeddings_.push_back(w);
  phi_ = 1;
  for (const auto& pp : m_.support) {
    const Int q(static_cast<unsigned long>(pp.prime.norm()));
    Int qe;
    mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(pp.exponent - 1));
    phi_ *= qe * (q - 1);
  }
}

bool Congruence::coprime(const AlgebraicInteger& a) const {
  if (a.is_zero()) return false;
  for (const auto& pp : m_.support)
    if (K_.contains(pp.prime.ideal, a)) return false;
  return true;
}

bool Congruence::coprime(const Ideal& a) const {
  if (!a.integral()) fail(ErrorCode::Argument, "coprimality of a fractional ideal");
  for (const auto& pp : m_.support)
    if (K_.contains(pp.prime.ideal, a)) return false;
  return true;
}

ResidueClass Congruence::residue_of(const AlgebraicInteger& a) const {
  if (a.is_zero()) fail(ErrorCode::Domain, "residue of zero");
  if (!coprime(a)) fail(ErrorCode::NotCoprime, K_.format(a) + " is not coprime to m0");
  ResidueClass r;
  for (int w : embeddings_) r.signs.push_back(K_.sign_at(a, w));
  r.residue = K_.reduce(a, m_.m0);
  return r;
}

ResidueClass Congruence::residue_of_quotient(const AlgebraicInteger& a, const AlgebraicInteger& b) const {
  return mul(residue_of(a), inverse(residue_of(b)));
}

ResidueClass Congruence::identity() const {
  ResidueClass r;
  r.signs.assign(embeddings_.size(), 1);
  r.residue = K_.reduce(AlgebraicInteger(1), m_.m0);
  return r;
}

ResidueClass Congruence::mul(const ResidueClass& r, const ResidueClass& s) const {
  ResidueClass out;
  out.signs.resize(r.signs.size());
  for (std::size_t i = 0; i < r.signs.size(); ++i) out.signs[i] = r.signs[i] * s.signs[i];
  out.residue = K_.reduce(K_.mul(r.residue, s.residue), m_.m0);
  return out;
}

ResidueClass Congruence::pow(const ResidueClass& r, Int e) const {
  if (e < 0) return pow(inverse(r), -e);
  ResidueClass result = identity();
  ResidueClass base = r;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

ResidueClass Congruence::inverse(const ResidueClass& r) const {
  // r^{phi - 1} in (R/m0)*; signs are their own inverses
  ResidueClass out = r;
  ResidueClass res_only;
  res_only.signs.assign(r.signs.size(), 1);
  res_only.residue = r.residue;
  out.residue = pow(res_only, phi_ - 1).residue;
  return out;
}

Int Congruence::group_order() const {
  Int two_pow = 1;
  two_pow <<= static_cast<unsigned>(embeddings_.size());
  return two_pow * phi_;
}

std::vector<ResidueClass> Congruence::group_elements() const {
  std::vector<AlgebraicInteger> units;
  for (auto& u : K_.residues(m_.m0))
    if (m_.m0.is_unit() || coprime(u)) units.push_back(std::move(u));
  const std::size_t k = embeddings_.size();
  std::vector<ResidueClass> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<int> signs(k);
    for (std::size_t i = 0; i < k; ++i) signs[i] = (mask >> i) & 1U ? -1 : 1;
    for (const auto& u : units) out.push_back(ResidueClass{signs, u});
  }
  std::sort(out.begin(), out.end());
  return out;
}

GammaSubgroup::GammaSubgroup(const Congruence& C, std::vector<ResidueClass> generators)
    : generators_(std::move(generators)) {
  const ResidueClass id = C.identity();
  for (const auto& g : generators_) {
    if (g.signs.size() != id.signs.size())
      fail(ErrorCode::Config, "Gamma generator has the wrong number of signs");
    for (int s : g.signs)
      if (s != 1 && s != -1) fail(ErrorCode::Config, "signs must be +1 or -1");
    if (!(C.field().reduce(g.residue, C.modulus().m0) == g.residue))
      fail(ErrorCode::Config, "Gamma generator residue is not reduced modulo m0");
    if (!C.modulus().m0.is_unit() && !C.coprime(g.residue))
      fail(ErrorCode::Config, "Gamma generator residue is not a unit modulo m0");
  }
  // closure under products with generators; finite group so inverses come free
  elements_.insert(id);
  std::deque<ResidueClass> queue{id};
  while (!queue.empty()) {
    const ResidueClass cur = queue.front();
    queue.pop_front();
    for (const auto& g : generators_) {
      ResidueClass nxt = C.mul(cur, g);
      if (elements_.insert(nxt).second) queue.push_back(std::move(nxt));
    }
  }
}

GammaSubgroup GammaSubgroup::trivial(const Congruence& C) { return GammaSubgroup(C, {}); }

GammaSubgroup GammaSubgroup::full(const Congruence& C) {
  return GammaSubgroup(C, C.group_elements());
}

bool monoid_contains(const Congruence& C, const GammaSubgroup& G, const AlgebraicInteger& a) {
  if (!C.coprime(a)) return false;
  return G.contains(C.residue_of(a));
}

UnitGroupMG unit_group_mg(const Congruence& C, const GammaSubgroup& G) {
  const NumberField& K = C.field();
  const UnitGroup& U = K.unit_group();
  UnitGroupMG out;
  for (const auto& z : U.torsion)
    if (monoid_contains(C, G, z)) out.torsion_elements.push_back(z);
  if (!U.fundamental) return out;
  out.free_rank = 1;
  // [eps] has finite order in (R/m)*, so the search terminates by k = |(R/m)*|
  const Int limit = C.group_order();
  AlgebraicInteger power(1);
  for (Int k = 1; k <= limit; ++k) {
    power = K.mul(power, *U.fundamental);
    for (const auto& z : U.torsion) {
      const AlgebraicInteger cand = K.mul(z, power);
      if (monoid_contains(C, G, cand)) {
        out.free_generator = cand;
        out.free_exponent = static_cast<int>(k.get_si());
        return out;
      }
    }
  }
  fail(ErrorCode::Domain, "no power of the fundamental unit lies in the monoid");
}

}  // namespace kms
