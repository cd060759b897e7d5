#pragma once

// Small integer helpers shared by the number-theoretic modules.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace kms {

using Int = mpz_class;
using Rational = mpq_class;

// Floor division and nonnegative remainder for a positive modulus.
Int floor_div(const Int& a, const Int& b);
Int mod_pos(const Int& a, const Int& m);

Int isqrt(const Int& n);
bool is_square(const Int& n, Int* root = nullptr);

std::uint64_t to_u64(const Int& n);
bool fits_i64(const Int& n);

// Sieve of Eratosthenes; returns all primes <= bound.
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);
bool is_prime_u64(std::uint64_t n);

// Kronecker symbol (D / p) for a rational prime p.
int kronecker(const Int& D, std::uint64_t p);

// Square root of a modulo an odd prime p (Tonelli-Shanks); precondition: a is
// a quadratic residue.
std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p);

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);

// Sum of rationals over a common denominator; one gcd at the end instead of
// one per addition.
Rational sum_exact(const std::vector<Rational>& terms);

// sum_{n in norms} n^{-s} for a positive integer s, exactly.
Rational inverse_power_sum(const std::vector<std::uint64_t>& norms, unsigned s);

std::vector<std::uint64_t> factor_u64(std::uint64_t n);

}  // namespace kms
