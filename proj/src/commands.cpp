#include "kmsphase/commands.hpp"

#include <cmath>

#include "kmsphase/analytic.hpp"
#include "kmsphase/errors.hpp"
#include "kmsphase/measures.hpp"
#include "kmsphase/report.hpp"

namespace kms {

using nlohmann::json;

json scalar_to_json(const Scalar& v) {
  if (v.exact()) {
    // long rationals are summarized by their size
    const std::string q = v.rational().get_str();
    json j = {{"approx", v.approx()}, {"exact_digits", q.size()}};
    if (q.size() <= 256) j["exact"] = q;
    return j;
  }
  const Interval iv = v.interval();
  return {{"lower", iv.lower()}, {"upper", iv.upper()}, {"approx", iv.mid()}, {"width", iv.width()}};
}

namespace {

json prime_json(const PrimeIdeal& p) {
  return {{"ideal", ideal_to_json(p.ideal)}, {"norm", p.norm()}, {"residue_degree", p.residue_degree},
          {"ramified", p.ramified}};
}

json series_json(const SeriesValue& v) {
  json j = {{"re", v.re()}, {"im", v.im()}, {"X", v.X}, {"mode", v.mode}, {"tail_bound", v.tail_bound},
            {"tail_claimed", v.tail_claimed}, {"cyclotomic_order", v.value.order}};
  if (v.value.order == 1) j["value"] = scalar_to_json(v.value.buckets[0]);
  return j;
}

void check_s(double s) {
  if (!std::isfinite(s)) fail(ErrorCode::Argument, "s must be finite");
}

}  // namespace

json classes_command(const Analysis& A) {
  return {{"field", A.field().spec()}, {"class_table", class_table_record(A)}, {"unit_group", unit_record(A)}};
}

json zeta_command(const Analysis& A, const std::string& cls, double s, std::uint64_t X) {
  check_s(s);
  const int k = A.resolve_class(cls);
  if (X == 0) X = A.bound("zeta_bound");
  return {{"class", k}, {"s", s}, {"zeta", series_json(partial_zeta(A.table(), k, s, X))}};
}

json lfunc_command(const Analysis& A, int chi, double s, std::uint64_t X, const std::string& mode) {
  check_s(s);
  const auto& T = A.table();
  if (chi < 0 || chi >= T.order())
    fail(ErrorCode::Argument, "no character " + std::to_string(chi) + " (there are " + std::to_string(T.order()) + ")");
  LMode m;
  if (mode == "series")
    m = LMode::Series;
  else if (mode == "euler")
    m = LMode::Euler;
  else
    fail(ErrorCode::Argument, "mode must be series or euler");
  if (X == 0) X = A.bound(m == LMode::Euler ? "euler_bound" : "zeta_bound");
  const Character c = T.character(chi);
  return {{"character", chi}, {"character_order", c.order}, {"values", c.values}, {"s", s},
          {"L", series_json(hecke_L(T, c, s, X, m))}};
}

json primes_command(const Analysis& A, std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::Argument, "bound must be positive");
  const auto primes = classed_primes(A.table(), bound);
  json list = json::array();
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(A.table().order()), 0);
  for (const auto& cp : primes) {
    json p = prime_json(cp.prime);
    p["class"] = cp.cls;
    list.push_back(std::move(p));
    ++counts[static_cast<std::size_t>(cp.cls)];
  }
  return {{"bound", bound}, {"count", primes.size()}, {"per_class", counts}, {"primes", list}};
}

json pairs_command(const Analysis& A, const std::string& cls, double lambda, double epsilon, double beta,
                   std::uint64_t budget) {
  const auto& T = A.table();
  const int k = A.resolve_class(cls);
  if (budget == 0) budget = A.bound("pair_budget");
  const auto seq = asymptotic_pairs(T, k, lambda, epsilon, beta, budget);
  json pairs = json::array();
  bool ok = true;
  for (const auto& pr : seq.pairs) {
    const bool ineq = pair_inequality_holds(pr, lambda, epsilon, beta);
    const bool classes = T.class_of(pr.p.ideal) == T.identity() &&
                         T.class_of(pr.q.ideal) == T.mul(k, T.class_of(pr.p.ideal));
    ok = ok && ineq && classes;
    pairs.push_back({{"p", prime_json(pr.p)}, {"q", prime_json(pr.q)}, {"inequality", ineq}, {"class_condition", classes}});
  }
  json boxes = json::array();
  for (const auto& b : seq.boxes)
    boxes.push_back({{"index", b.index}, {"lower", b.lower}, {"upper", b.upper}, {"class", b.cls}, {"size", b.size}});
  return {{"class", k}, {"lambda", lambda}, {"epsilon", epsilon}, {"beta", beta}, {"delta", seq.delta},
          {"k0", seq.k0}, {"budget", budget}, {"count", seq.pairs.size()},
          {"partial_sum", scalar_to_json(seq.partial_sum)}, {"all_verified", ok}, {"boxes", boxes},
          {"pairs", pairs}};
}

std::vector<AlgebraicInteger> sample_monoid(const Analysis& A, std::mt19937_64& rng, std::size_t count,
                                            long norm_max) {
  const auto& K = A.field();
  std::uniform_int_distribution<long> coord(-30, 30);
  std::vector<AlgebraicInteger> out;
  for (long tries = 0; out.size() < count && tries < 200000; ++tries) {
    AlgebraicInteger k{Int(coord(rng)), K.is_rational() ? Int(0) : Int(coord(rng))};
    if (k.is_zero() || K.abs_norm(k) > norm_max) continue;
    if (!monoid_contains(A.congruence(), A.gamma(), k)) continue;
    out.push_back(k);
  }
  return out;
}

json measure_check_command(const Analysis& A, const MeasureCheckOptions& opt) {
  if (!(opt.beta >= 0) || !std::isfinite(opt.beta)) fail(ErrorCode::Domain, "beta must be finite and >= 0");
  if (opt.cap <= 0) fail(ErrorCode::Argument, "cap must be positive");
  if (opt.prime_bound < 2) fail(ErrorCode::Argument, "prime bound must be at least 2");
  const auto nu = TruncatedMeasure::for_modulus(A.congruence(), opt.beta, opt.prime_bound, opt.cap);
  const Exponent e(opt.beta);
  json checks = json::array();
  bool all = true;
  auto record = [&](json c) {
    all = all && c["pass"].get<bool>();
    checks.push_back(std::move(c));
  };

  {
    bool ok = true;
    double width = 0;
    for (std::size_t i = 0; i < nu.primes().size(); ++i) {
      const auto r = compare(sum(nu.distribution(i)), Scalar(Rational(1)));
      ok = ok && r.pass;
      width = std::max(width, r.width);
    }
    record({{"name", "distribution_closure"}, {"primes", nu.primes().size()}, {"max_width", width}, {"pass", ok}});
  }

  const auto ideals = A.field().enumerate_ideals(std::min<std::uint64_t>(200, opt.prime_bound), A.congruence().modulus().m0);
  {
    bool ok = true;
    std::size_t n = 0, skipped = 0;
    double width = 0;
    for (const auto& I : ideals) {
      try {
        const Scalar expect =
            nu.dirac_zero() ? Scalar(Rational(1)) : inverse_power(Rational(I.lattice_norm()), e);
        const auto r = compare(nu.nu(I), expect);
        ok = ok && r.pass;
        width = std::max(width, r.width);
        ++n;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::OutOfTruncation) throw;
        ++skipped;
      }
    }
    record({{"name", "nu_values"}, {"ideals", n}, {"out_of_truncation", skipped}, {"max_width", width},
            {"pass", ok && n > 0}});
  }

  {
    std::mt19937_64 rng(opt.seed);
    const auto small = A.field().enumerate_ideals(60, A.congruence().modulus().m0);
    const auto ks = sample_monoid(A, rng, opt.samples, static_cast<long>(std::min<std::uint64_t>(opt.prime_bound, 1000)));
    std::uniform_int_distribution<std::size_t> pick(0, small.size() - 1);
    std::size_t passed = 0, skipped = 0;
    double width = 0;
    for (const auto& k : ks) {
      try {
        const auto r = scaling_check(nu, KElement{k, AlgebraicInteger(1)}, small[pick(rng)]);
        if (r.pass) ++passed;
        width = std::max(width, r.width);
      } catch (const Error& err) {
        if (err.code() != ErrorCode::OutOfTruncation) throw;
        ++skipped;
      }
    }
    const std::size_t evaluated = ks.size() - skipped;
    record({{"name", "scaling_law"}, {"pairs", ks.size()}, {"evaluated", evaluated}, {"passed", passed},
            {"out_of_truncation", skipped}, {"max_width", width}, {"exact", nu.exact()}, {"seed", opt.seed},
            {"pass", ks.size() == opt.samples && evaluated > 0 && passed == evaluated}});
  }

  if (opt.beta >= 1) {
    const auto shifted = TruncatedMeasure::for_modulus(A.congruence(), opt.beta - 1, std::min<std::uint64_t>(30, opt.prime_bound), opt.cap);
    bool ok = true;
    bool kms_ok = true;
    std::size_t n = 0;
    for (const auto& I : A.field().enumerate_ideals(std::min<std::uint64_t>(30, opt.prime_bound), A.congruence().modulus().m0)) {
      ok = ok && compare(disintegration_sum(shifted, I), shifted.nu(I)).pass;
      const Rational N(I.lattice_norm());
      const Scalar expect = inverse_power(N, e);
      for (const auto& x : A.field().residues(I))
        kms_ok = kms_ok && compare(cylinder_mass(shifted, x, I), Scalar(Rational(1) / N) * shifted.nu(I)).pass &&
                 compare(kms_value(A.congruence(), opt.beta, x, I), expect).pass;
      ++n;
    }
    record({{"name", "disintegration"}, {"ideals", n}, {"pass", ok}});
    record({{"name", "kms_values"}, {"ideals", n}, {"pass", kms_ok}});
  }

  return {{"beta", opt.beta}, {"cap", opt.cap}, {"prime_bound", opt.prime_bound}, {"samples", opt.samples},
          {"exact_mode", nu.exact()}, {"checks", checks}, {"all_pass", all}};
}

}  // namespace kms
