#pragma once

// Brute-force reference computations. They avoid the library on purpose and
// only use machine integers, so they stay small and slow.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

using ll = long;

inline bool one_mod_four(ll d) { return ((d % 4) + 4) % 4 == 1; }

// Signed norm of x + y*omega, computed from the minimal polynomial of sqrt d
// directly rather than from omega's trace and norm.
inline ll norm(ll d, ll x, ll y) {
  if (one_mod_four(d)) return ((2 * x + y) * (2 * x + y) - d * y * y) / 4;
  return x * x - d * y * y;
}

// ZZ a + ZZ (b + c omega) contains (x, y)?
inline bool in_lattice(ll a, ll b, ll c, ll x, ll y) {
  if (y % c != 0) return false;
  const ll k = y / c;
  return (x - k * b) % a == 0;
}

// omega * (x + y omega) in coordinates.
inline std::pair<ll, ll> times_omega(ll d, ll x, ll y) {
  if (one_mod_four(d)) return {y * (d - 1) / 4, x + y};
  return {y * d, x};
}

inline bool is_ideal_hnf(ll d, ll a, ll b, ll c) {
  auto [x1, y1] = times_omega(d, a, 0);
  auto [x2, y2] = times_omega(d, b, c);
  return in_lattice(a, b, c, x1, y1) && in_lattice(a, b, c, x2, y2);
}

// All integral ideals of a quadratic field with norm <= X, as (a, b, c).
inline std::vector<std::tuple<ll, ll, ll>> ideals_by_hnf_scan(ll d, ll X) {
  std::vector<std::tuple<ll, ll, ll>> out;
  for (ll a = 1; a <= X; ++a)
    for (ll c = 1; c <= a && a * c <= X; ++c) {
      if (a % c != 0) continue;
      for (ll b = 0; b < a; b += c)
        if (is_ideal_hnf(d, a, b, c)) out.emplace_back(a, b, c);
    }
  return out;
}

// Smallest unit > 1 of the real quadratic order of integers, as (x, y) in
// the basis {1, omega}, by ascending search on the omega coordinate.
inline std::pair<ll, ll> fundamental_unit(ll d) {
  for (ll Y = 1;; ++Y) {
    if (one_mod_four(d)) {
      // X^2 - d Y^2 = +-4 with X = Y mod 2
      for (ll s : {-4, 4}) {
        const ll X2 = d * Y * Y + s;
        if (X2 <= 0) continue;
        const ll X = std::lround(std::sqrt(static_cast<double>(X2)));
        for (ll Xc = X - 1; Xc <= X + 1; ++Xc)
          if (Xc > 0 && Xc * Xc == X2 && ((Xc - Y) % 2 == 0)) return {(Xc - Y) / 2, Y};
      }
    } else {
      for (ll s : {-1, 1}) {
        const ll X2 = d * Y * Y + s;
        if (X2 <= 0) continue;
        const ll X = std::lround(std::sqrt(static_cast<double>(X2)));
        for (ll Xc = X - 1; Xc <= X + 1; ++Xc)
          if (Xc > 0 && Xc * Xc == X2) return {Xc, Y};
      }
    }
  }
}

// Class number of the imaginary quadratic field of discriminant D < 0 by
// counting reduced primitive forms.
inline int class_number_imaginary(ll D) {
  int h = 0;
  for (ll a = 1; 3 * a * a <= -D; ++a)
    for (ll b = -a + 1; b <= a; ++b) {
      const ll num = b * b - D;
      if (num % (4 * a) != 0) continue;
      const ll c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      ++h;
    }
  return h;
}

inline bool is_prime(ll n) {
  if (n < 2) return false;
  for (ll p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

}  // namespace oracle
