#include "kmsphase/arith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "kmsphase/errors.hpp"

namespace kms {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::NotCoprime: return "NotCoprime";
    case ErrorCode::ScanBoundTooSmall: return "ScanBoundTooSmall";
    case ErrorCode::OutOfTruncation: return "OutOfTruncation";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::Argument: return "ArgumentError";
  }
  return "UnknownError";
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (r < 0) r += abs(m);
  return r;
}

Int isqrt(const Int& n) {
  if (n < 0) fail(ErrorCode::Domain, "isqrt of a negative integer");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_square(const Int& n, Int* root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  if (root != nullptr) *root = isqrt(n);
  return true;
}

std::uint64_t to_u64(const Int& n) {
  if (n < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64)
    fail(ErrorCode::Argument, "integer does not fit in 64 bits: " + n.get_str());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

bool fits_i64(const Int& n) {
  return mpz_sizeinbase(n.get_mpz_t(), 2) <= 62;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  if (bound < 2) return out;
  std::vector<bool> composite(bound + 1, false);
  for (std::uint64_t i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  unsigned __int128 result = 1 % mod;
  unsigned __int128 b = base % mod;
  while (exp > 0) {
    if (exp & 1U) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1U;
  }
  return static_cast<std::uint64_t>(result);
}

int kronecker(const Int& D, std::uint64_t p) {
  if (p == 2) {
    if (mpz_even_p(D.get_mpz_t())) return 0;
    const unsigned long r = mpz_fdiv_ui(D.get_mpz_t(), 8);
    return (r == 1 || r == 7) ? 1 : -1;
  }
  const std::uint64_t r = mpz_fdiv_ui(D.get_mpz_t(), p);
  if (r == 0) return 0;
  return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (pow_mod(a, (p - 1) / 2, p) != 1)
    fail(ErrorCode::Domain, "not a quadratic residue");
  std::uint64_t q = p - 1;
  unsigned s = 0;
  while ((q & 1U) == 0) {
    q >>= 1U;
    ++s;
  }
  std::uint64_t z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;
  auto mul = [p](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
  };
  std::uint64_t m = s;
  std::uint64_t c = pow_mod(z, q, p);
  std::uint64_t t = pow_mod(a, q, p);
  std::uint64_t r = pow_mod(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0;
    std::uint64_t t2 = t;
    while (t2 != 1) {
      t2 = mul(t2, t2);
      ++i;
    }
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + 1 < m - i; ++j) b = mul(b, b);
    m = i;
    c = mul(b, b);
    t = mul(t, c);
    r = mul(r, b);
  }
  return r;
}

Rational sum_exact(const std::vector<Rational>& terms) {
  if (terms.empty()) return Rational(0);
  Int common = 1;
  for (const auto& t : terms) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), t.get_den_mpz_t());
  Int numerator = 0;
  for (const auto& t : terms) numerator += t.get_num() * (common / t.get_den());
  Rational out(numerator, common);
  out.canonicalize();
  return out;
}

Rational inverse_power_sum(const std::vector<std::uint64_t>& norms, unsigned s) {
  if (norms.empty()) return Rational(0);
  Int common = 1;
  for (auto n : norms) {
    const Int v(static_cast<unsigned long>(n));
    mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), v.get_mpz_t());
  }
  Int numerator = 0;
  Int term;
  for (auto n : norms) {
    term = common / Int(static_cast<unsigned long>(n));
    mpz_pow_ui(term.get_mpz_t(), term.get_mpz_t(), s);
    numerator += term;
  }
  Int den;
  mpz_pow_ui(den.get_mpz_t(), common.get_mpz_t(), s);
  Rational out(numerator, den);
  out.canonicalize();
  return out;
}

std::vector<std::uint64_t> factor_u64(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      out.push_back(d);
      n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace kms
