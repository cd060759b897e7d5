#include "kmsphase/class_structure.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "kmsphase/errors.hpp"

namespace kms {

namespace {

// Some element of the integral ideal b that is coprime to m0.
AlgebraicInteger coprime_element(const Congruence& C, const Ideal& b) {
  const NumberField& K = C.field();
  const AlgebraicInteger u(b.a);
  if (C.coprime(u) || K.is_rational()) {
    if (!C.coprime(u)) fail(ErrorCode::NotCoprime, "ideal is not coprime to m0");
    return u;
  }
  const AlgebraicInteger v(b.b, b.c);
  if (C.coprime(v)) return v;
  for (long s = 2; s < 200; ++s)
    for (long x = -s; x <= s; ++x)
      for (long y : {s - std::labs(x), -(s - std::labs(x))}) {
        const AlgebraicInteger w = K.add(K.mul(AlgebraicInteger(x), u), K.mul(AlgebraicInteger(y), v));
        if (C.coprime(w)) return w;
      }
  fail(ErrorCode::Domain, "no small element coprime to m0 found");
}

void require_coprime(const Congruence& C, const Ideal& a) {
  if (!a.integral()) fail(ErrorCode::Argument, "expected an integral ideal");
  if (!C.coprime(a)) fail(ErrorCode::NotCoprime, "ideal is not coprime to m0");
}

long checked_mul(long a, long b) {
  long r = 0;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::Domain, "overflow in Smith normal form");
  return r;
}

long checked_sub(long a, long b) {
  long r = 0;
  if (__builtin_sub_overflow(a, b, &r)) fail(ErrorCode::Domain, "overflow in Smith normal form");
  return r;
}

using Matrix = std::vector<std::vector<long>>;

// Reduces A in place to Smith form; V accumulates the column operations.
void smith_form(Matrix& A, Matrix& V) {
  const std::size_t n = A.size();
  V.assign(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) V[i][i] = 1;
  auto col_op = [&](std::size_t dst, std::size_t src, long q) {  // col dst -= q col src
    for (std::size_t r = 0; r < n; ++r) A[r][dst] = checked_sub(A[r][dst], checked_mul(q, A[r][src]));
    for (std::size_t r = 0; r < n; ++r) V[r][dst] = checked_sub(V[r][dst], checked_mul(q, V[r][src]));
  };
  auto row_op = [&](std::size_t dst, std::size_t src, long q) {
    for (std::size_t c = 0; c < n; ++c) A[dst][c] = checked_sub(A[dst][c], checked_mul(q, A[src][c]));
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (std::size_t r = 0; r < n; ++r) {
      std::swap(A[r][a], A[r][b]);
      std::swap(V[r][a], V[r][b]);
    }
  };
  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      std::size_t pr = n, pc = n;
      for (std::size_t r = t; r < n; ++r)
        for (std::size_t c = t; c < n; ++c)
          if (A[r][c] != 0 && (pr == n || std::labs(A[r][c]) < std::labs(A[pr][pc]))) {
            pr = r;
            pc = c;
          }
      if (pr == n) return;
      std::swap(A[t], A[pr]);
      swap_cols(t, pc);
      bool clean = true;
      for (std::size_t r = t + 1; r < n; ++r) {
        if (A[r][t] == 0) continue;
        row_op(r, t, A[r][t] / A[t][t]);
        if (A[r][t] != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < n; ++c) {
        if (A[t][c] == 0) continue;
        col_op(c, t, A[t][c] / A[t][t]);
        if (A[t][c] != 0) clean = false;
      }
      if (!clean) continue;
      // the pivot must divide the rest of the block
      std::size_t bad = n;
      for (std::size_t r = t + 1; r < n && bad == n; ++r)
        for (std::size_t c = t + 1; c < n; ++c)
          if (A[r][c] % A[t][t] != 0) {
            bad = r;
            break;
          }
      if (bad == n) break;
      row_op(t, bad, -1);
    }
    if (A[t][t] < 0)
      for (std::size_t c = 0; c < n; ++c) A[t][c] = -A[t][c];
  }
}

std::set<ResidueClass> closure(const Congruence& C, std::set<ResidueClass> start,
                               const std::vector<ResidueClass>& gens) {
  std::deque<ResidueClass> queue(start.begin(), start.end());
  while (!queue.empty()) {
    const ResidueClass cur = queue.front();
    queue.pop_front();
    for (const auto& g : gens) {
      ResidueClass nxt = C.mul(cur, g);
      if (start.insert(nxt).second) queue.push_back(std::move(nxt));
    }
  }
  return start;
}

}  // namespace

std::optional<KElement> same_class(const Congruence& C, const GammaSubgroup& G, const Ideal& a,
                                   const Ideal& b) {
  require_coprime(C, a);
  require_coprime(C, b);
  const NumberField& K = C.field();
  if (a == b) return KElement{};
  const AlgebraicInteger beta = coprime_element(C, b);
  const Ideal cof = K.ideal_quotient(K.principal(beta), b);
  const auto g = K.is_principal(K.ideal_mul(a, cof));
  if (!g) return std::nullopt;
  const ResidueClass r = C.residue_of_quotient(*g, beta);
  const UnitGroup& U = K.unit_group();

  // powers of eps up to the order of its residue
  std::vector<AlgebraicInteger> eps_pows{AlgebraicInteger(1)};
  std::vector<ResidueClass> eps_res{C.identity()};
  if (U.fundamental) {
    const ResidueClass e = C.residue_of(*U.fundamental);
    while (true) {
      ResidueClass nxt = C.mul(eps_res.back(), e);
      if (nxt == C.identity()) break;
      eps_res.push_back(std::move(nxt));
      eps_pows.push_back(K.mul(eps_pows.back(), *U.fundamental));
    }
  }
  for (std::size_t k = 0; k < eps_pows.size(); ++k)
    for (const auto& z : U.torsion) {
      const ResidueClass cand = C.mul(C.mul(r, C.residue_of(z)), eps_res[k]);
      if (G.contains(cand)) return KElement{K.mul(K.mul(*g, z), eps_pows[k]), beta};
    }
  return std::nullopt;
}

int field_class_number(const NumberField& K) {
  if (K.is_rational()) return 1;
  const auto bound = static_cast<std::uint64_t>(K.minkowski_bound());
  std::vector<Ideal> reps;
  for (const auto& I : K.enumerate_ideals(std::max<std::uint64_t>(bound, 1))) {
    bool seen = false;
    for (const auto& J : reps)
      if (K.is_principal(K.ideal_mul(I, K.ideal_conj(J)))) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(I);
  }
  return static_cast<int>(reps.size());
}

std::uint64_t ClassTable::default_scan_bound(const NumberField& K) {
  return K.is_rational() ? 10000 : 1000;
}

std::optional<std::pair<int, int>> ClassTable::locate(const Ideal& a) const {
  const NumberField& K = C_.field();
  for (std::size_t i = 0; i < field_classes_.size(); ++i) {
    const auto& fc = field_classes_[i];
    const auto g = K.is_principal(K.ideal_mul(a, fc.cofactor));
    if (!g) continue;
    const ResidueClass r = C_.residue_of_quotient(*g, fc.beta);
    return std::make_pair(static_cast<int>(i), coset_of_.at(r));
  }
  return std::nullopt;
}

ClassTable ClassTable::build(const Congruence& C, const GammaSubgroup& G, std::uint64_t scan_bound) {
  ClassTable T(C, G);
  T.scan_bound_ = scan_bound;
  const NumberField& K = C.field();
  const UnitGroup& U = K.unit_group();

  std::vector<ResidueClass> unit_res;
  for (const auto& z : U.torsion) unit_res.push_back(C.residue_of(z));
  if (U.fundamental) unit_res.push_back(C.residue_of(*U.fundamental));
  T.gamma_units_ = closure(C, G.elements(), unit_res);

  int cosets = 0;
  for (const auto& g : C.group_elements()) {
    if (T.coset_of_.count(g) != 0) continue;
    for (const auto& u : T.gamma_units_) T.coset_of_[C.mul(g, u)] = cosets;
    ++cosets;
  }
  T.h_field_ = kms::field_class_number(K);
  const std::size_t expected = static_cast<std::size_t>(T.h_field_) * static_cast<std::size_t>(cosets);

  Int max_min_norm = 0;
  for (const auto& I : K.enumerate_ideals(scan_bound, C.modulus().m0)) {
    const Int nrm = I.lattice_norm();
    if (T.classes_.size() == expected && nrm > max_min_norm) break;
    auto loc = T.locate(I);
    if (!loc) {
      if (static_cast<int>(T.field_classes_.size()) >= T.h_field_)
        fail(ErrorCode::Domain, "principality search disagrees with the class number");
      const AlgebraicInteger beta = coprime_element(C, I);
      T.field_classes_.push_back(FieldClass{I, beta, K.ideal_quotient(K.principal(beta), I)});
      loc = T.locate(I);
      if (!loc) fail(ErrorCode::Domain, "ideal not located after adding its class");
    }
    auto it = T.class_index_.find(*loc);
    if (it == T.class_index_.end()) {
      T.class_index_[*loc] = static_cast<int>(T.classes_.size());
      T.classes_.push_back(ClassInfo{I, nrm, {I}});
      max_min_norm = std::max(max_min_norm, nrm);
    } else {
      ClassInfo& info = T.classes_[static_cast<std::size_t>(it->second)];
      if (info.min_norm == nrm) info.norm_minimizing.push_back(I);
    }
  }
  if (T.classes_.size() < expected)
    fail(ErrorCode::ScanBoundTooSmall,
         "found " + std::to_string(T.classes_.size()) + " of " + std::to_string(expected) +
             " classes up to norm " + std::to_string(scan_bound) + "; raise scan_bound");

  const std::size_t h = T.classes_.size();
  T.table_.assign(h, std::vector<int>(h, 0));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i; j < h; ++j) {
      const int k = T.class_of(K.ideal_mul(T.classes_[i].representative, T.classes_[j].representative));
      T.table_[i][j] = k;
      T.table_[j][i] = k;
    }
  T.compute_structure();
  return T;
}

int ClassTable::class_of(const Ideal& a) const {
  require_coprime(C_, a);
  const auto loc = locate(a);
  if (!loc) fail(ErrorCode::ScanBoundTooSmall, "ideal class not seen in the scan");
  const auto it = class_index_.find(*loc);
  if (it == class_index_.end()) fail(ErrorCode::ScanBoundTooSmall, "ideal class not seen in the scan");
  return it->second;
}

int ClassTable::inverse(int i) const {
  for (int j = 0; j < order(); ++j)
    if (mul(i, j) == 0) return j;
  fail(ErrorCode::Domain, "class has no inverse");
}

int ClassTable::power(int i, long e) const {
  if (e < 0) return power(inverse(i), -e);
  int r = 0;
  for (long k = 0; k < e; ++k) r = mul(r, i);
  return r;
}

void ClassTable::compute_structure() {
  const std::size_t h = classes_.size();
  std::vector<std::optional<std::vector<long>>> co(h);
  co[0] = std::vector<long>{};
  std::vector<int> members{0};
  std::vector<std::vector<long>> relations;  // row i: relation introduced with generator i
  for (std::size_t g = 0; g < h; ++g) {
    if (co[g]) continue;
    const std::size_t r = relations.size();
    for (int m : members) co[static_cast<std::size_t>(m)]->push_back(0);
    long n = 1;
    int p = static_cast<int>(g);
    while (!co[static_cast<std::size_t>(p)]) {
      p = mul(p, static_cast<int>(g));
      ++n;
    }
    std::vector<long> rel(r + 1, 0);
    const auto& cp = *co[static_cast<std::size_t>(p)];
    for (std::size_t j = 0; j < r; ++j) rel[j] = -cp[j];
    rel[r] = n;
    relations.push_back(rel);
    const std::vector<int> old = members;
    int gk = 0;
    for (long k = 1; k < n; ++k) {
      gk = mul(gk, static_cast<int>(g));
      for (int m : old) {
        const int e = mul(m, gk);
        std::vector<long> c = *co[static_cast<std::size_t>(m)];
        c[r] = k;
        co[static_cast<std::size_t>(e)] = c;
        members.push_back(e);
      }
    }
  }
  const std::size_t r = relations.size();
  Matrix A(r, std::vector<long>(r, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < relations[i].size(); ++j) A[i][j] = relations[i][j];
  Matrix V;
  smith_form(A, V);
  std::vector<std::size_t> keep;
  divisors_.clear();
  for (std::size_t i = 0; i < r; ++i)
    if (A[i][i] != 1) {
      keep.push_back(i);
      divisors_.push_back(A[i][i]);
    }
  exponent_ = 1;
  for (long d : divisors_) exponent_ = std::lcm(exponent_, d);
  coords_.assign(h, {});
  for (std::size_t k = 0; k < h; ++k) {
    const auto& x = *co[k];
    for (std::size_t idx = 0; idx < keep.size(); ++idx) {
      const std::size_t j = keep[idx];
      long y = 0;
      for (std::size_t i = 0; i < r; ++i) y = (y + checked_mul(x[i], V[i][j])) % divisors_[idx];
      coords_[k].push_back((y + divisors_[idx]) % divisors_[idx]);
    }
  }
}

Character ClassTable::character(int index) const {
  long total = 1;
  for (long d : divisors_) total *= d;
  if (index < 0 || index >= total) fail(ErrorCode::Argument, "no character with index " + std::to_string(index));
  Character chi;
  chi.index = index;
  chi.values.resize(divisors_.size());
  long rest = index;
  for (std::size_t i = divisors_.size(); i-- > 0;) {
    chi.values[i] = {rest % divisors_[i], divisors_[i]};
    rest /= divisors_[i];
  }
  chi.order = 1;
  for (const auto& [num, den] : chi.values) chi.order = std::lcm(chi.order, den / std::gcd(num, den));
  return chi;
}

std::vector<Character> ClassTable::characters() const {
  std::vector<Character> out;
  for (int i = 0; i < order(); ++i) out.push_back(character(i));
  return out;
}

long ClassTable::character_exponent(const Character& chi, int k) const {
  const auto& y = coordinates(k);
  long v = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    v = (v + checked_mul(chi.values[i].first * y[i] % chi.values[i].second, exponent_ / chi.values[i].second)) % exponent_;
  return v;
}

}  // namespace kms
