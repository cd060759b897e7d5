#include "kmsphase/number_field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <regex>
#include <sstream>

#include "kmsphase/errors.hpp"

namespace kms {

namespace {

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// g = s*a + t*b.
void gcdext(const Int& a, const Int& b, Int& g, Int& s, Int& t) {
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

bool divisible(const Int& n, const Int& d) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

bool squarefree(long d) {
  long m = d < 0 ? -d : d;
  for (long p = 2; p * p <= m; ++p)
    if (m % (p * p) == 0) return false;
  return true;
}

}  // namespace

Rational Ideal::norm() const {
  Rational q(lattice_norm(), den * den);
  q.canonicalize();
  return q;
}

bool ideal_less(const Ideal& l, const Ideal& r) {
  const Rational nl = l.norm();
  const Rational nr = r.norm();
  if (nl != nr) return nl < nr;
  if (l.a != r.a) return l.a < r.a;
  if (l.b != r.b) return l.b < r.b;
  if (l.c != r.c) return l.c < r.c;
  return l.den < r.den;
}

NumberField NumberField::rational() {
  NumberField K;
  K.kind_ = FieldKind::Rational;
  K.d_ = 1;
  K.disc_ = 1;
  K.init_units();
  return K;
}

NumberField NumberField::quadratic(long d) {
  if (d == 0 || d == 1) fail(ErrorCode::Config, "quadratic field needs d != 0, 1");
  if (!squarefree(d)) fail(ErrorCode::Config, "d must be squarefree: " + std::to_string(d));
  NumberField K;
  K.kind_ = FieldKind::Quadratic;
  K.d_ = d;
  if (((d % 4) + 4) % 4 == 1) {
    K.t_ = 1;
    K.n_ = Int((1 - d) / 4);
  } else {
    K.t_ = 0;
    K.n_ = Int(-d);
  }
  K.disc_ = K.t_ * K.t_ - 4 * K.n_;
  K.init_units();
  return K;
}

NumberField NumberField::parse(const std::string& spec) {
  if (spec == "Q") return rational();
  static const std::regex re(R"(Q\(sqrt,\s*(-?\d+)\))");
  std::smatch m;
  if (!std::regex_match(spec, m, re)) fail(ErrorCode::Config, "bad field string: " + spec);
  long d = 0;
  try {
    d = std::stol(m[1].str());
  } catch (const std::exception&) {
    fail(ErrorCode::Config, "field parameter out of range: " + spec);
  }
  return quadratic(d);
}

std::string NumberField::spec() const {
  if (is_rational()) return "Q";
  return "Q(sqrt," + std::to_string(d_) + ")";
}

int NumberField::real_embedding_count() const {
  if (is_rational()) return 1;
  return d_ > 0 ? 2 : 0;
}

double NumberField::minkowski_bound() const {
  if (is_rational()) return 1.0;
  const double D = std::abs(disc_.get_d());
  if (d_ < 0) return 2.0 / std::numbers::pi * std::sqrt(D);
  return std::sqrt(D) / 2.0;
}

// ---------------------------------------------------------------- elements

AlgebraicInteger NumberField::add(const AlgebraicInteger& u, const AlgebraicInteger& v) const {
  return {u.x + v.x, u.y + v.y};
}

AlgebraicInteger NumberField::sub(const AlgebraicInteger& u, const AlgebraicInteger& v) const {
  return {u.x - v.x, u.y - v.y};
}

AlgebraicInteger NumberField::mul(const AlgebraicInteger& u, const AlgebraicInteger& v) const {
  if (is_rational()) return {u.x * v.x, 0};
  const Int bd = u.y * v.y;
  return {u.x * v.x - n_ * bd, u.x * v.y + u.y * v.x + t_ * bd};
}

AlgebraicInteger NumberField::neg(const AlgebraicInteger& u) const { return {-u.x, -u.y}; }

AlgebraicInteger NumberField::conj(const AlgebraicInteger& u) const {
  if (is_rational()) return u;
  return {u.x + t_ * u.y, -u.y};
}

AlgebraicInteger NumberField::pow(const AlgebraicInteger& u, unsigned e) const {
  AlgebraicInteger result(1);
  AlgebraicInteger base = u;
  while (e > 0) {
    if (e & 1U) result = mul(result, base);
    base = mul(base, base);
    e >>= 1U;
  }
  return result;
}

std::optional<AlgebraicInteger> NumberField::div_exact(const AlgebraicInteger& u,
                                                       const AlgebraicInteger& v) const {
  if (v.is_zero()) fail(ErrorCode::Domain, "division by zero");
  const Int N = norm(v);
  const AlgebraicInteger w = mul(u, conj(v));
  if (!divisible(w.x, N) || !divisible(w.y, N)) return std::nullopt;
  return AlgebraicInteger(w.x / N, w.y / N);
}

Int NumberField::norm(const AlgebraicInteger& u) const {
  if (is_rational()) return u.x;
  return u.x * u.x + t_ * u.x * u.y + n_ * u.y * u.y;
}

int NumberField::sign_at(const AlgebraicInteger& u, int w) const {
  if (w < 0 || w >= real_embedding_count()) fail(ErrorCode::Argument, "no such real embedding");
  if (is_rational()) return sgn(u.x);
  // value = (P + Q sqrt d) / (1 or 2)
  const int s = (w == 0) ? 1 : -1;
  const Int P = (t_ == 0) ? u.x : 2 * u.x + u.y;
  const Int Q = s * u.y;
  const int sp = sgn(P);
  const int sq = sgn(Q);
  if (sq == 0) return sp;
  if (sp == 0 || sp == sq) return sq;
  return (P * P > Q * Q * d_) ? sp : sq;
}

double NumberField::embed(const AlgebraicInteger& u, int w) const {
  if (is_rational()) return u.x.get_d();
  if (d_ < 0) fail(ErrorCode::Argument, "imaginary field has no real embedding");
  const double r = (w == 0 ? 1.0 : -1.0) * std::sqrt(static_cast<double>(d_));
  const double om = (t_ == 0) ? r : (1.0 + r) / 2.0;
  return u.x.get_d() + u.y.get_d() * om;
}

bool NumberField::is_unit(const AlgebraicInteger& u) const { return abs(norm(u)) == 1; }

std::string NumberField::format(const AlgebraicInteger& u) const {
  if (is_rational() || u.y == 0) return u.x.get_str();
  std::ostringstream os;
  const std::string om = (t_ == 0) ? "sqrt(" + std::to_string(d_) + ")" : "w";
  if (u.x != 0) os << u.x.get_str() << (u.y > 0 ? "+" : "-");
  else if (u.y < 0) os << "-";
  const Int ay = abs(u.y);
  if (ay != 1) os << ay.get_str() << "*";
  os << om;
  return os.str();
}

// ---------------------------------------------------------------- ideals

Ideal NumberField::lattice_hnf(const std::vector<AlgebraicInteger>& vectors) const {
  Ideal out;
  if (is_rational()) {
    Int a = 0;
    for (const auto& v : vectors) a = gcd(a, v.x);
    if (a == 0) fail(ErrorCode::Domain, "zero lattice");
    out.a = a;
    return out;
  }
  Int a = 0;
  AlgebraicInteger cur(0, 0);
  for (const auto& v : vectors) {
    if (v.y == 0) {
      a = gcd(a, v.x);
      continue;
    }
    if (cur.y == 0) {
      // first vector with a nonzero omega coordinate
      a = gcd(a, cur.x);
      cur = v;
      continue;
    }
    Int g, s, t;
    gcdext(cur.y, v.y, g, s, t);
    const AlgebraicInteger next(s * cur.x + t * v.x, g);
    const Int killed = (v.y / g) * cur.x - (cur.y / g) * v.x;
    a = gcd(a, killed);
    cur = next;
  }
  if (cur.y == 0 || a == 0) fail(ErrorCode::Domain, "lattice is not of full rank");
  if (cur.y < 0) cur = neg(cur);
  out.a = a;
  out.c = cur.y;
  out.b = mod_pos(cur.x, a);
  return out;
}

Ideal NumberField::ideal_from_generators(const std::vector<AlgebraicInteger>& gens) const {
  std::vector<AlgebraicInteger> vecs;
  const AlgebraicInteger omega(0, 1);
  for (const auto& g : gens) {
    vecs.push_back(g);
    if (!is_rational()) vecs.push_back(mul(g, omega));
  }
  Ideal out = lattice_hnf(vecs);
  if (!is_valid_hnf(out)) fail(ErrorCode::Domain, "generated lattice is not an ideal");
  return out;
}

Ideal NumberField::principal(const AlgebraicInteger& g) const {
  if (g.is_zero()) fail(ErrorCode::Domain, "zero ideal");
  return ideal_from_generators({g});
}

namespace {

std::vector<AlgebraicInteger> lattice_basis(const NumberField& K, const Ideal& p) {
  if (K.is_rational()) return {AlgebraicInteger(p.a)};
  return {AlgebraicInteger(p.a), AlgebraicInteger(p.b, p.c)};
}

Ideal scale_lattice(const NumberField& K, Ideal p, const Int& k) {
  p.a *= k;
  if (!K.is_rational()) {
    p.b *= k;
    p.c *= k;
  }
  return p;
}

}  // namespace

Ideal NumberField::normalize(Ideal p) const {
  if (p.den <= 0) fail(ErrorCode::Domain, "nonpositive ideal denominator");
  Int g = is_rational() ? p.a : gcd(gcd(p.a, p.b), p.c);
  g = gcd(g, p.den);
  if (g != 1) {
    p = divide_lattice(p, g);
    p.den /= g;
  }
  return p;
}

Ideal NumberField::divide_lattice(const Ideal& p, const Int& n) const {
  Ideal q = p;
  if (!divisible(p.a, n) || (!is_rational() && (!divisible(p.b, n) || !divisible(p.c, n))))
    fail(ErrorCode::Domain, "lattice is not divisible by " + n.get_str());
  q.a /= n;
  if (!is_rational()) {
    q.b /= n;
    q.c /= n;
  }
  return q;
}

bool NumberField::is_valid_hnf(const Ideal& p) const {
  if (p.a <= 0 || p.c <= 0 || p.den <= 0) return false;
  if (is_rational()) return p.b == 0 && p.c == 1;
  if (p.b < 0 || p.b >= p.a) return false;
  if (!divisible(p.a, p.c) || !divisible(p.b, p.c)) return false;
  // closed under multiplication by omega
  const AlgebraicInteger omega(0, 1);
  Ideal integral = p;
  integral.den = 1;
  return contains(integral, mul(AlgebraicInteger(p.a), omega)) &&
         contains(integral, mul(AlgebraicInteger(p.b, p.c), omega));
}

Ideal NumberField::ideal_mul(const Ideal& p, const Ideal& q) const {
  const auto bp = lattice_basis(*this, p);
  const auto bq = lattice_basis(*this, q);
  std::vector<AlgebraicInteger> prods;
  for (const auto& u : bp)
    for (const auto& v : bq) prods.push_back(mul(u, v));
  Ideal out = lattice_hnf(prods);
  out.den = p.den * q.den;
  return normalize(out);
}

Ideal NumberField::ideal_pow(const Ideal& p, unsigned e) const {
  Ideal result = unit_ideal();
  Ideal base = p;
  while (e > 0) {
    if (e & 1U) result = ideal_mul(result, base);
    if (e > 1) base = ideal_mul(base, base);
    e >>= 1U;
  }
  return result;
}

Ideal NumberField::ideal_add(const Ideal& p, const Ideal& q) const {
  Int L;
  mpz_lcm(L.get_mpz_t(), p.den.get_mpz_t(), q.den.get_mpz_t());
  std::vector<AlgebraicInteger> vecs;
  for (const auto& v : lattice_basis(*this, scale_lattice(*this, p, L / p.den))) vecs.push_back(v);
  for (const auto& v : lattice_basis(*this, scale_lattice(*this, q, L / q.den))) vecs.push_back(v);
  Ideal out = lattice_hnf(vecs);
  out.den = L;
  return normalize(out);
}

Ideal NumberField::ideal_conj(const Ideal& p) const {
  if (is_rational()) return p;
  Ideal out = lattice_hnf({AlgebraicInteger(p.a), conj(AlgebraicInteger(p.b, p.c))});
  out.den = p.den;
  return out;
}

Ideal NumberField::ideal_inverse(const Ideal& p) const {
  if (is_rational()) {
    Ideal out;
    out.a = p.den;
    out.den = p.a;
    return normalize(out);
  }
  // (L/den)^{-1} = den * conj(L) / N(L)
  Ideal out = scale_lattice(*this, ideal_conj(p), p.den);
  out.den = p.lattice_norm();
  return normalize(out);
}

Ideal NumberField::ideal_quotient(const Ideal& p, const Ideal& q) const {
  return ideal_mul(p, ideal_inverse(q));
}

bool NumberField::contains(const Ideal& p, const AlgebraicInteger& u) const {
  const AlgebraicInteger v(u.x * p.den, u.y * p.den);
  if (is_rational()) return v.y == 0 && divisible(v.x, p.a);
  if (!divisible(v.y, p.c)) return false;
  const Int k = v.y / p.c;
  return divisible(v.x - k * p.b, p.a);
}

bool NumberField::contains(const Ideal& p, const Ideal& q) const {
  for (const auto& v : lattice_basis(*this, q)) {
    // q.den divides out on the left: v/q.den in p
    const AlgebraicInteger w(v.x * p.den, v.y * p.den);
    Ideal scaled = p;
    scaled.den = 1;
    const Ideal target = scale_lattice(*this, scaled, q.den);
    if (!contains(target, w)) return false;
  }
  return true;
}

bool NumberField::coprime(const Ideal& p, const Ideal& q) const {
  return ideal_add(p, q).is_unit();
}

bool NumberField::coprime(const AlgebraicInteger& u, const Ideal& q) const {
  if (u.is_zero()) return q.is_unit();
  return coprime(principal(u), q);
}

AlgebraicInteger NumberField::reduce(const AlgebraicInteger& u, const Ideal& p) const {
  if (!p.integral()) fail(ErrorCode::Argument, "reduce needs an integral ideal");
  if (is_rational()) return {mod_pos(u.x, p.a), 0};
  const Int k = floor_div(u.y, p.c);
  const Int x = u.x - k * p.b;
  const Int y = u.y - k * p.c;
  return {mod_pos(x, p.a), y};
}

std::vector<AlgebraicInteger> NumberField::residues(const Ideal& p) const {
  if (!p.integral()) fail(ErrorCode::Argument, "residues need an integral ideal");
  const std::uint64_t a = to_u64(p.a);
  const std::uint64_t c = is_rational() ? 1 : to_u64(p.c);
  std::vector<AlgebraicInteger> out;
  out.reserve(a * c);
  for (std::uint64_t x = 0; x < a; ++x)
    for (std::uint64_t y = 0; y < c; ++y)
      out.emplace_back(Int(static_cast<unsigned long>(x)), Int(static_cast<unsigned long>(y)));
  return out;
}

// ---------------------------------------------------------------- primes

std::vector<PrimePower> NumberField::factor_rational_prime(std::uint64_t p) const {
  const Int P(static_cast<unsigned long>(p));
  if (is_rational()) {
    Ideal I;
    I.a = P;
    return {PrimePower{PrimeIdeal{I, p, 1, false}, 1}};
  }
  const int k = kronecker(disc_, p);
  if (k == -1) {
    Ideal I;
    I.a = P;
    I.c = P;
    return {PrimePower{PrimeIdeal{I, p, 2, false}, 1}};
  }
  // roots of x^2 - t x + n mod p
  std::vector<std::uint64_t> roots;
  const std::uint64_t tm = mpz_fdiv_ui(t_.get_mpz_t(), p);
  const std::uint64_t nm = mpz_fdiv_ui(n_.get_mpz_t(), p);
  if (p == 2) {
    for (std::uint64_t r = 0; r < 2; ++r)
      if ((r * r + tm * r + nm) % 2 == 0) roots.push_back(r);
  } else {
    const std::uint64_t Dm = mpz_fdiv_ui(disc_.get_mpz_t(), p);
    const std::uint64_t s = sqrt_mod_prime(Dm, p);
    const std::uint64_t inv2 = (p + 1) / 2;
    auto mulm = [p](std::uint64_t x, std::uint64_t y) {
      return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
    };
    roots.push_back(mulm((tm + s) % p, inv2));
    if (k == 1) roots.push_back(mulm((tm + p - s) % p, inv2));
  }
  std::vector<PrimePower> out;
  for (auto r : roots) {
    const Ideal I = ideal_from_generators(
        {AlgebraicInteger(P), AlgebraicInteger(-Int(static_cast<unsigned long>(r)), 1)});
    out.push_back(PrimePower{PrimeIdeal{I, p, 1, k == 0}, k == 0 ? 2 : 1});
  }
  std::sort(out.begin(), out.end(), [](const PrimePower& l, const PrimePower& r) {
    return ideal_less(l.prime.ideal, r.prime.ideal);
  });
  if (k == 0 && out.size() > 1) out.resize(1);
  return out;
}

int NumberField::valuation(const PrimeIdeal& P, const Ideal& p) const {
  if (!p.integral()) fail(ErrorCode::Argument, "valuation of a fractional ideal");
  int v = 0;
  Ideal cur = p;
  const Ideal inv = ideal_inverse(P.ideal);
  while (contains(P.ideal, cur)) {
    cur = ideal_mul(cur, inv);
    ++v;
  }
  return v;
}

std::vector<PrimePower> NumberField::factor_ideal(const Ideal& p) const {
  if (!p.integral()) fail(ErrorCode::Argument, "factor_ideal needs an integral ideal");
  std::vector<PrimePower> out;
  auto rational_primes = factor_u64(to_u64(p.lattice_norm()));
  rational_primes.erase(std::unique(rational_primes.begin(), rational_primes.end()),
                        rational_primes.end());
  for (auto q : rational_primes) {
    for (const auto& pp : factor_rational_prime(q)) {
      const int e = valuation(pp.prime, p);
      if (e > 0) out.push_back(PrimePower{pp.prime, e});
    }
  }
  return out;
}

std::vector<PrimeIdeal> NumberField::prime_ideals_up_to(std::uint64_t bound) const {
  std::vector<PrimeIdeal> out;
  for (auto p : primes_up_to(bound)) {
    for (const auto& pp : factor_rational_prime(p))
      if (pp.prime.norm() <= bound) out.push_back(pp.prime);
  }
  std::sort(out.begin(), out.end(), [](const PrimeIdeal& l, const PrimeIdeal& r) {
    return ideal_less(l.ideal, r.ideal);
  });
  return out;
}

std::vector<Ideal> NumberField::enumerate_ideals(std::uint64_t bound,
                                                 const std::optional<Ideal>& coprime_to) const {
  std::vector<Ideal> out;
  if (bound == 0) return out;
  if (is_rational()) {
    const Int m = coprime_to ? coprime_to->a : Int(1);
    for (std::uint64_t n = 1; n <= bound; ++n) {
      const Int N(static_cast<unsigned long>(n));
      if (gcd(N, m) != 1) continue;
      Ideal I;
      I.a = N;
      out.push_back(I);
    }
    return out;
  }
  std::vector<PrimeIdeal> primes;
  for (auto& P : prime_ideals_up_to(bound))
    if (!coprime_to || !contains(P.ideal, *coprime_to)) primes.push_back(std::move(P));

  std::function<void(std::size_t, const Ideal&, std::uint64_t)> walk =
      [&](std::size_t start, const Ideal& cur, std::uint64_t nrm) {
        out.push_back(cur);
        for (std::size_t i = start; i < primes.size(); ++i) {
          const std::uint64_t q = primes[i].norm();
          if (q > bound / nrm) break;
          walk(i, ideal_mul(cur, primes[i].ideal), nrm * q);
        }
      };
  walk(0, unit_ideal(), 1);
  std::sort(out.begin(), out.end(), ideal_less);
  return out;
}

std::optional<AlgebraicInteger> NumberField::is_principal(const Ideal& p) const {
  if (!p.integral()) fail(ErrorCode::Argument, "is_principal needs an integral ideal");
  if (is_rational()) return AlgebraicInteger(p.a);
  const Int N = p.lattice_norm();
  const double absD = std::abs(disc_.get_d());
  const double sqrtN = std::sqrt(N.get_d());
  double window = 0;
  std::vector<Int> targets{N};
  if (d_ < 0) {
    window = 2.0 * sqrtN / std::sqrt(absD);
  } else {
    const double eps = embed(*units_.fundamental, 0);
    window = (eps + 1.0) * sqrtN / std::sqrt(absD);
    targets.push_back(-N);
  }
  if (window > 5.0e7) fail(ErrorCode::Domain, "principal search window too large");
  const long Y = static_cast<long>(std::floor(window)) + 1;
  for (long k = 0; k <= 2 * Y; ++k) {
    const long y = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
    const Int Yv(y);
    for (const auto& target : targets) {
      // x^2 + t y x + (n y^2 - target) = 0
      const Int disc = t_ * t_ * Yv * Yv - 4 * (n_ * Yv * Yv - target);
      Int r;
      if (!is_square(disc, &r)) continue;
      for (int sgn_r : {1, -1}) {
        const Int num = -t_ * Yv + sgn_r * r;
        if (!mpz_even_p(num.get_mpz_t())) continue;
        const AlgebraicInteger alpha(num / 2, Yv);
        if (contains(p, alpha)) return alpha;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- units

AlgebraicInteger fundamental_unit(const NumberField& K) {
  if (K.is_rational() || K.d() < 0) fail(ErrorCode::Argument, "fundamental unit needs a real quadratic field");
  const Int d(K.d());
  const Int sd = isqrt(d);
  const Int& t = K.omega_trace();
  // omega = (P + sqrt d) / Q
  Int P = (t == 0) ? 0 : 1;
  Int Q = (t == 0) ? 1 : 2;
  Int p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (int iter = 0; iter < 1000000; ++iter) {
    const Int a = floor_div(P + sd, Q);
    const Int p = a * p1 + p2;
    const Int q = a * q1 + q2;
    const AlgebraicInteger cand(p - q * t, q);
    if (abs(K.norm(cand)) == 1) return cand;
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
    P = a * Q - P;
    Q = (d - P * P) / Q;
  }
  fail(ErrorCode::Domain, "continued fraction did not reach a unit");
}

void NumberField::init_units() {
  units_.torsion = {AlgebraicInteger(1), AlgebraicInteger(-1)};
  units_.fundamental.reset();
  if (is_rational()) return;
  if (d_ > 0) {
    units_.fundamental = fundamental_unit(*this);
    return;
  }
  // norm-one elements of an imaginary field lie in |y| <= 2/sqrt|D|
  std::vector<AlgebraicInteger> extra;
  const long Y = static_cast<long>(2.0 / std::sqrt(std::abs(disc_.get_d()))) + 1;
  for (long y = -Y; y <= Y; ++y) {
    if (y == 0) continue;
    for (long x = -2; x <= 2; ++x) {
      const AlgebraicInteger u{Int(x), Int(y)};
      if (norm(u) == 1) extra.push_back(u);
    }
  }
  std::sort(extra.begin(), extra.end());
  for (auto& u : extra) units_.torsion.push_back(u);
}

}  // namespace kms
