#include "kmsphase/cyclotomic.hpp"

#include <map>

#include "kmsphase/errors.hpp"

namespace kms {

namespace {

void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Exact division by a monic polynomial.
IntPoly divide_monic(IntPoly num, const IntPoly& den) {
  trim(num);
  const std::size_t dd = den.size() - 1;
  if (num.size() < den.size()) return {0};
  IntPoly q(num.size() - dd, 0);
  for (std::size_t i = num.size(); i-- > dd;) {
    const Int c = num[i];
    q[i - dd] = c;
    for (std::size_t j = 0; j <= dd; ++j) num[i - dd + j] -= c * den[j];
  }
  trim(num);
  if (!num.empty()) fail(ErrorCode::Domain, "inexact cyclotomic division");
  return q;
}

}  // namespace

IntPoly cyclotomic_polynomial(long n) {
  if (n < 1) fail(ErrorCode::Argument, "cyclotomic index must be positive");
  static thread_local std::map<long, IntPoly> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  // x^n - 1 divided by Phi_d for every proper divisor d
  IntPoly p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (long d = 1; d < n; ++d)
    if (n % d == 0) p = divide_monic(p, cyclotomic_polynomial(d));
  cache[n] = p;
  return p;
}

IntPoly cyclotomic_reduce(const std::vector<Int>& buckets, long n) {
  const IntPoly phi = cyclotomic_polynomial(n);
  const std::size_t deg = phi.size() - 1;
  IntPoly r(std::max(buckets.size(), deg), 0);
  for (std::size_t j = 0; j < buckets.size(); ++j) r[j] = buckets[j];
  for (std::size_t i = r.size(); i-- > deg;) {
    const Int c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) r[i - deg + j] -= c * phi[j];
  }
  r.resize(deg);
  return r;
}

bool cyclotomic_equals(const std::vector<Int>& buckets, long n, const Int& value) {
  IntPoly r = cyclotomic_reduce(buckets, n);
  if (r.empty()) return value == 0;
  r[0] -= value;
  for (const auto& c : r)
    if (c != 0) return false;
  return true;
}

}  // namespace kms
