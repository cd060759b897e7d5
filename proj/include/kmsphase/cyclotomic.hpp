#pragma once

// Exact arithmetic in Z[zeta_n], as integer polynomials reduced modulo the
// n-th cyclotomic polynomial.

#include <vector>

#include "kmsphase/arith.hpp"

namespace kms {

using IntPoly = std::vector<Int>;  // coefficient of x^i at index i

IntPoly cyclotomic_polynomial(long n);

// sum_j buckets[j] * zeta_n^j, reduced to degree < phi(n).
IntPoly cyclotomic_reduce(const std::vector<Int>& buckets, long n);

// Is sum_j buckets[j] zeta_n^j equal to the rational integer `value`?
bool cyclotomic_equals(const std::vector<Int>& buckets, long n, const Int& value);

}  // namespace kms
