#include "kmsphase/report.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "kmsphase/commands.hpp"
#include "kmsphase/cyclotomic.hpp"
#include "kmsphase/errors.hpp"
#include "kmsphase/measures.hpp"

namespace kms {

using nlohmann::json;

namespace {

std::string str(const Rational& q) { return q.get_str(); }

DiagnosticRecord make_diag(const std::string& name, const std::string& module,
                           std::map<std::string, std::uint64_t> bounds) {
  DiagnosticRecord d;
  d.name = name;
  d.module = module;
  d.bounds = std::move(bounds);
  d.detail = json::object();
  d.pass = true;
  return d;
}

// Exact sum_k zeta_e^{a(k) - b(k)} == value.
bool orthogonality(const ClassTable& T, const Character& x, const Character& y, const Int& value) {
  const long e = T.exponent();
  std::vector<Int> buckets(static_cast<std::size_t>(e), Int(0));
  for (int k = 0; k < T.order(); ++k) {
    const long j = mod_pos(Int(T.character_exponent(x, k) - T.character_exponent(y, k)), Int(e)).get_si();
    buckets[static_cast<std::size_t>(j)] += 1;
  }
  return cyclotomic_equals(buckets, e, value);
}

DiagnosticRecord diag_class_group(const Analysis& A) {
  const auto& T = A.table();
  auto d = make_diag("class_group_structure", "class_structure", {{"scan_bound", T.scan_bound()}});
  long prod = 1;
  for (long v : T.elementary_divisors()) prod *= v;
  const Int cosets = T.congruence().group_order() / Int(static_cast<unsigned long>(T.unit_image_order()));
  const Int expect = Int(T.field_class_number()) * cosets;
  bool group_ok = true;
  const int h = T.order();
  for (int i = 0; i < h && group_ok; ++i) {
    if (T.mul(T.identity(), i) != i || T.mul(i, T.inverse(i)) != T.identity()) group_ok = false;
    for (int j = 0; j < h && group_ok; ++j) {
      if (T.mul(i, j) != T.mul(j, i)) group_ok = false;
      if (h <= 48)
        for (int k = 0; k < h && group_ok; ++k)
          if (T.mul(T.mul(i, j), k) != T.mul(i, T.mul(j, k))) group_ok = false;
    }
  }
  bool orth = true;
  const auto chars = T.characters();
  if (h <= 64)
    for (const auto& x : chars)
      for (const auto& y : chars)
        orth = orth && orthogonality(T, x, y, x.index == y.index ? Int(h) : Int(0));
  d.detail = {{"h", h},
              {"product_of_elementary_divisors", prod},
              {"field_class_number_times_cosets", expect.get_str()},
              {"abelian_group_axioms", group_ok},
              {"character_orthogonality", orth}};
  d.pass = prod == h && expect == h && group_ok && orth;
  return d;
}

DiagnosticRecord diag_norm_minimizers(const Analysis& A, const IdealCensus& census) {
  const auto& T = A.table();
  auto d = make_diag("norm_minimizers", "class_structure", {{"zeta_bound", census.X}});
  std::vector<std::uint64_t> min_norm(static_cast<std::size_t>(T.order()), 0);
  std::vector<int> count(static_cast<std::size_t>(T.order()), 0);
  for (const auto& [n, k] : census.entries) {
    auto& m = min_norm[static_cast<std::size_t>(k)];
    if (m == 0) m = n;
    if (n == m) ++count[static_cast<std::size_t>(k)];
  }
  bool ok = true;
  json mism = json::array();
  for (int k = 0; k < T.order(); ++k) {
    const auto& info = T.info(k);
    const bool match = min_norm[static_cast<std::size_t>(k)] != 0 &&
                       Int(static_cast<unsigned long>(min_norm[static_cast<std::size_t>(k)])) == info.min_norm &&
                       count[static_cast<std::size_t>(k)] == info.k();
    if (!match) mism.push_back(k);
    ok = ok && match;
  }
  d.detail = {{"mismatched_classes", mism}};
  d.pass = ok;
  return d;
}

DiagnosticRecord diag_zeta(const Analysis& A, const IdealCensus& census) {
  const auto& T = A.table();
  auto d = make_diag("zeta_factorization", "analytic", {{"zeta_bound", census.X}});
  std::vector<Scalar> parts;
  for (int k = 0; k < T.order(); ++k) parts.push_back(partial_zeta(T, census, k, 2.0).value.buckets[0]);
  const Scalar total = sum(parts);
  const SeriesValue z = total_zeta(T, census, 2.0);
  const bool exact = total.exact() && z.value.buckets[0].exact() && total.rational() == z.value.buckets[0].rational();
  d.detail = {{"s", 2}, {"sum_of_partials", total.approx()}, {"exact_match", exact}, {"tail_bound", z.tail_bound}};
  bool ok = exact;
  const auto& K = A.field();
  if (K.is_rational()) {
    // zeta(2) prod_{p | m} (1 - p^-2)
    double expect = std::numbers::pi * std::numbers::pi / 6;
    for (const auto& pp : T.congruence().modulus().support) {
      const double p = static_cast<double>(pp.prime.norm());
      expect *= 1 - 1 / (p * p);
    }
    const double gap = std::abs(total.approx() - expect);
    d.detail["closed_form"] = expect;
    d.detail["closed_form_gap"] = gap;
    ok = ok && gap < 2e-4;
  }
  d.pass = ok;
  return d;
}

DiagnosticRecord diag_characters(const Analysis& A, const IdealCensus& census) {
  const auto& T = A.table();
  auto d = make_diag("character_decomposition", "analytic", {{"zeta_bound", census.X}});
  bool ok = true;
  json bad = json::array();
  for (const auto& chi : T.characters()) {
    const auto L = hecke_L(T, census, chi, 2.0);
    const bool eq = L.value.exactly_equals(character_decomposition(T, census, chi, 2.0));
    if (!eq) bad.push_back(chi.index);
    ok = ok && eq;
  }
  d.detail = {{"s", 2}, {"characters", T.order()}, {"failed", bad}};
  d.pass = ok;
  return d;
}

DiagnosticRecord diag_l_finiteness(const Analysis& A) {
  const auto& T = A.table();
  const std::uint64_t X = A.bound("euler_bound");
  auto d = make_diag("l_function_finiteness", "analytic", {{"euler_bound", X}, {"euler_bound_10x", 10 * X}});
  bool ok = true;
  json rows = json::array();
  for (const auto& chi : T.characters()) {
    const auto lo = hecke_L(T, chi, 1.0, X, LMode::Euler);
    const auto hi = hecke_L(T, chi, 1.0, 10 * X, LMode::Euler);
    const double dr = hi.re() - lo.re();
    const double di = hi.im() - lo.im();
    json row = {{"character", chi.index}, {"re", hi.re()}, {"im", hi.im()}};
    if (chi.index == 0) {
      // the trivial character sees the pole: the partial products keep growing
      const double growth = hi.re() / lo.re();
      row["growth"] = growth;
      row["pass"] = growth > 1.1;
    } else {
      const double change = std::hypot(dr, di);
      row["change"] = change;
      row["pass"] = change < 0.05;
    }
    ok = ok && row["pass"].get<bool>();
    rows.push_back(row);
  }
  d.detail = {{"s", 1}, {"characters", rows}};
  d.pass = ok;
  return d;
}

DiagnosticRecord diag_equidistribution(const Analysis& A) {
  const auto& T = A.table();
  const std::uint64_t x = A.bound("equidistribution_x");
  auto d = make_diag("equidistribution", "analytic", {{"equidistribution_x", x}});
  const auto counts = prime_count_per_class(T, x);
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  double worst = 0;
  for (auto c : counts)
    if (total > 0) worst = std::max(worst, std::abs(static_cast<double>(c) * T.order() / static_cast<double>(total) - 1));
  d.detail = {{"counts", counts}, {"total", total}, {"max_deviation", worst}, {"threshold", 0.15}};
  d.pass = total > 0 && worst < 0.15;
  return d;
}

DiagnosticRecord diag_normestimate(const Analysis& A) {
  const auto& T = A.table();
  const std::uint64_t small = A.bound("normestimate_small");
  const std::uint64_t large = A.bound("normestimate_large");
  auto d = make_diag("normestimate_decay", "analytic", {{"normestimate_small", small}, {"normestimate_large", large}});
  const auto primes = first_classed_primes(T, large);
  const std::vector<ClassedPrime> head(primes.begin(), primes.begin() + static_cast<long>(std::min<std::size_t>(small, primes.size())));
  bool ok = primes.size() == large;
  json rows = json::array();
  for (const auto& chi : T.characters()) {
    json row = {{"character", chi.index}};
    if (chi.index == 0) {
      Rational expect = 1;
      for (const auto& cp : head) expect *= Rational(1) - Rational(1, static_cast<unsigned long>(cp.prime.norm()));
      const Scalar r = normestimate_ratio(T, chi, 1.0, primes, head.size());
      const bool eq = r.exact() && r.rational() == expect;
      row["exact_product_identity"] = eq;
      row["pass"] = eq;
    } else {
      const Scalar r_small = normestimate_ratio(T, chi, 1.0, head, 0);
      const Scalar r_large = normestimate_ratio(T, chi, 1.0, primes, 0);
      const auto seq = normestimate_sequence(T, chi, 1.0, primes);
      bool monotone = true;
      for (std::size_t i = 1; i < seq.size(); ++i) monotone = monotone && seq[i].lower() <= seq[i - 1].upper();
      const bool decay = r_large.interval().upper() < 0.2 * r_small.interval().lower();
      row["ratio_small"] = r_small.approx();
      row["ratio_large"] = r_large.approx();
      row["quotient"] = r_large.approx() / r_small.approx();
      row["monotone"] = monotone;
      row["decay_below_0.2"] = decay;
      row["pass"] = monotone && decay;
    }
    ok = ok && row["pass"].get<bool>();
    rows.push_back(row);
  }
  d.detail = {{"beta", 1}, {"prime_order", "first n primes by (norm, hnf)"}, {"characters", rows}};
  d.pass = ok;
  return d;
}

std::vector<Ideal> small_ideals(const Analysis& A, std::uint64_t X) {
  return A.field().enumerate_ideals(X, A.congruence().modulus().m0);
}

DiagnosticRecord diag_nu_values(const Analysis& A) {
  const auto pb = A.bound("measure_prime_bound");
  const auto cap = A.bound("valuation_cap");
  auto d = make_diag("nu_values", "measures", {{"measure_prime_bound", pb}, {"valuation_cap", cap}, {"ideal_norm_max", 200}});
  const auto nu = TruncatedMeasure::for_modulus(A.congruence(), 2.0, pb, static_cast<int>(cap));
  bool ok = true;
  std::size_t n = 0;
  for (const auto& I : small_ideals(A, std::min<std::uint64_t>(200, pb))) {
    const Rational N(I.lattice_norm());
    ok = ok && nu.nu(I).rational() == Rational(1) / (N * N);
    ++n;
  }
  bool closure = true;
  for (std::size_t i = 0; i < nu.primes().size(); ++i) closure = closure && sum(nu.distribution(i)).rational() == 1;
  d.detail = {{"beta", 2}, {"ideals", n}, {"distribution_closure", closure}};
  d.pass = ok && closure;
  return d;
}

DiagnosticRecord diag_scaling(const Analysis& A) {
  const auto pb = A.bound("measure_prime_bound");
  const auto cap = A.bound("valuation_cap");
  const auto samples = A.bound("samples");
  auto d = make_diag("scaling_law", "measures",
                     {{"measure_prime_bound", pb}, {"valuation_cap", cap}, {"samples", samples}, {"seed", A.bound("seed")}});
  std::mt19937_64 rng(A.bound("seed"));
  const auto nu = TruncatedMeasure::for_modulus(A.congruence(), 2.0, pb, static_cast<int>(cap));
  const auto nuf = TruncatedMeasure::for_modulus(A.congruence(), 1.5, pb, static_cast<int>(cap));
  const auto ideals = small_ideals(A, 60);
  const auto ks = sample_monoid(A, rng, samples, static_cast<long>(std::min<std::uint64_t>(pb, 1000)));
  std::uniform_int_distribution<std::size_t> pick(0, ideals.size() - 1);
  std::size_t exact_pass = 0, interval_pass = 0, interval_runs = 0;
  double width = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& a = ideals[pick(rng)];
    const KElement k{ks[i], AlgebraicInteger(1)};
    const auto r = scaling_check(nu, k, a);
    if (r.pass && r.lhs.exact() && r.rhs.exact()) ++exact_pass;
    if (i < 10) {
      const auto rf = scaling_check(nuf, k, a);
      ++interval_runs;
      if (rf.pass) ++interval_pass;
      width = std::max(width, rf.width);
    }
  }
  d.detail = {{"beta", 2},
              {"pairs", ks.size()},
              {"exact_pass", exact_pass},
              {"interval_beta", 1.5},
              {"interval_pairs", interval_runs},
              {"interval_pass", interval_pass},
              {"max_interval_width", width}};
  d.pass = ks.size() == samples && exact_pass == ks.size() && interval_pass == interval_runs;
  return d;
}

DiagnosticRecord diag_disintegration(const Analysis& A) {
  auto d = make_diag("disintegration", "measures", {{"ideal_norm_max", 30}});
  const auto shifted = TruncatedMeasure::for_modulus(A.congruence(), 1.0, 30, 8);
  bool ok = true;
  std::size_t n = 0;
  for (const auto& I : small_ideals(A, 30)) {
    const Scalar total = disintegration_sum(shifted, I);
    ok = ok && total.rational() == shifted.nu(I).rational() &&
         total.rational() == Rational(1) / Rational(I.lattice_norm());
    ++n;
  }
  d.detail = {{"beta", 2}, {"ideals", n}};
  d.pass = ok;
  return d;
}

DiagnosticRecord diag_kms_values(const Analysis& A) {
  auto d = make_diag("kms_values", "measures", {{"ideal_norm_max", 20}});
  bool independent = true;
  bool boundary = true;
  for (const auto& I : small_ideals(A, 20)) {
    const Rational N(I.lattice_norm());
    for (const auto& x : A.field().residues(I)) {
      independent = independent && kms_value(A.congruence(), 2.0, x, I).rational() == Rational(1) / (N * N);
      boundary = boundary && kms_value(A.congruence(), 1.0, x, I).rational() == Rational(1) / N;
    }
  }
  d.detail = {{"beta", 2}, {"independent_of_coset", independent}, {"boundary_quotient_values", boundary}};
  d.pass = independent && boundary;
  return d;
}

DiagnosticRecord diag_class_measures(const Analysis& A) {
  const auto& T = A.table();
  const auto X = A.bound("class_measure_x");
  auto d = make_diag("class_measure_scaling", "measures", {{"class_measure_x", X}});
  bool ok = true;
  json rows = json::array();
  for (int k = 0; k < T.order(); ++k) {
    const auto cm = ClassMeasure::build(T, k, 2.0, X);
    const bool mass = cm.total_mass().rational() == 1;
    std::size_t checked = 0, passed = 0;
    const auto& w = cm.weights();
    for (std::size_t i = 1; i < w.size() && i < 4; ++i) {
      const auto kk = same_class(T.congruence(), T.gamma(), w[i].first, w[0].first);
      ++checked;
      if (kk && class_measure_scaling(cm, A.field(), *kk, w[0].first).pass) ++passed;
    }
    const bool row_ok = mass && !w.empty() && passed == checked && cm.tail_fraction() < 0.5;
    rows.push_back({{"class", k}, {"support", w.size()}, {"witnesses", checked}, {"tail_fraction", cm.tail_fraction()}, {"pass", row_ok}});
    ok = ok && row_ok;
  }
  d.detail = {{"beta", 2}, {"classes", rows}};
  d.pass = ok;
  return d;
}

DiagnosticRecord diag_extension(const Analysis& A) {
  const auto& T = A.table();
  const auto pb = A.bound("measure_prime_bound");
  const auto cap = A.bound("valuation_cap");
  auto d = make_diag("extension", "measures", {{"measure_prime_bound", pb}, {"valuation_cap", cap}});
  const auto nu = TruncatedMeasure::for_modulus(A.congruence(), 2.0, pb, static_cast<int>(cap));
  const auto& R = A.field().unit_ideal();
  const bool extends = extension_measure_value(nu, T, T.identity(), R).rational() == 1;
  Rational total = 0;
  for (int k = 0; k < T.order(); ++k) total += extension_measure_value(nu, T, k, R).rational();
  const auto alt = alternate_representatives(T);
  bool alt_ok = true, scaling_ok = true;
  const auto as = small_ideals(A, 12);
  const auto bs = small_ideals(A, 8);
  for (int k = 0; k < T.order(); ++k)
    for (const auto& a : as) {
      alt_ok = alt_ok && extension_measure_value(nu, T, k, a, &alt).rational() ==
                             extension_measure_value(nu, T, k, a).rational();
      for (const auto& b : bs) scaling_ok = scaling_ok && extension_scaling_check(nu, T, k, a, b).pass;
    }
  d.detail = {{"beta", 2}, {"extends_nu", extends}, {"total_mass", str(total)}, {"h", T.order()},
              {"alternate_representatives_agree", alt_ok}, {"scaling", scaling_ok}};
  d.pass = extends && total == T.order() && alt_ok && scaling_ok;
  return d;
}

DiagnosticRecord diag_borel_cantelli(const Analysis& A) {
  const auto& T = A.table();
  const auto X = A.bound("borel_cantelli_x");
  const auto xmax = A.bound("divergence_max");
  auto d = make_diag("borel_cantelli", "measures", {{"borel_cantelli_x", X}, {"borel_cantelli_10x", 10 * X}, {"divergence_max", xmax}});
  const auto bc2 = borel_cantelli_sum(T, 2.0, X);
  const auto lo = borel_cantelli_sum(T, 1.5, X);
  const auto hi = borel_cantelli_sum(T, 1.5, 10 * X);
  const double inc = hi.partial_sum.approx() - lo.partial_sum.approx();
  // tail of sum c t^{-3/2} dt beyond X, c the ideal density
  const double density = std::max(static_cast<double>(small_ideals(A, X).size()) / static_cast<double>(X),
                                  static_cast<double>(small_ideals(A, 10 * X).size()) / static_cast<double>(10 * X));
  const double allowance = 2 * density * std::pow(static_cast<double>(X), -0.5);
  const auto w = divergence_witness(T, Rational(5), xmax);
  bool harmonic = false;
  if (w.found) {
    std::vector<std::uint64_t> norms;
    for (const auto& I : small_ideals(A, w.X)) norms.push_back(to_u64(I.lattice_norm()));
    harmonic = inverse_power_sum(norms, 1) == w.sum;
  }
  d.detail = {{"identity_beta_2", bc2.identity_ok},
              {"partial_sum_beta_2", bc2.partial_sum.approx()},
              {"identity_beta_1.5", lo.identity_ok && hi.identity_ok},
              {"increment_beta_1.5", inc},
              {"increment_allowance", allowance},
              {"divergence_found", w.found},
              {"divergence_X", w.X},
              {"divergence_sum", w.sum.get_d()},
              {"harmonic_oracle_match", harmonic}};
  d.pass = bc2.identity_ok && lo.identity_ok && hi.identity_ok && inc >= 0 && inc < allowance && w.found && harmonic;
  return d;
}

DiagnosticRecord diag_ground(const Analysis& A) {
  const auto& T = A.table();
  auto d = make_diag("ground_blocks", "measures", {{"scan_bound", T.scan_bound()}});
  const auto g = ground_state_blocks(T, A.units());
  Int full = 0, mult = 0;
  for (const auto& c : T.classes()) {
    full += Int(c.k()) * c.min_norm;
    mult += Int(c.k());
  }
  d.detail = {{"full_total", g.full_total().get_str()}, {"expected_full_total", full.get_str()},
              {"multiplicative_total", g.multiplicative_total().get_str()}, {"expected_multiplicative_total", mult.get_str()}};
  d.pass = g.full_total() == full && g.multiplicative_total() == mult && g.full.size() == static_cast<std::size_t>(T.order());
  return d;
}

std::string gamma_name(GammaKind k) {
  switch (k) {
    case GammaKind::Trivial: return "trivial";
    case GammaKind::Full: return "full";
    case GammaKind::Generators: return "generators";
  }
  return "trivial";
}

RegimeRecord regime(std::string lo, bool lo_closed, std::string hi, bool hi_closed, std::string kind,
                    std::string description, std::vector<std::string> ingredients = {}) {
  RegimeRecord r;
  r.lower = std::move(lo);
  r.lower_closed = lo_closed;
  r.upper = std::move(hi);
  r.upper_closed = hi_closed;
  r.kind = std::move(kind);
  r.description = std::move(description);
  r.status = "quoted";
  r.ingredients = std::move(ingredients);
  return r;
}

std::vector<std::string> boundaries_of(const std::vector<RegimeRecord>& regimes) {
  std::vector<std::string> out;
  auto add = [&](const std::string& s) {
    if (s != "-inf" && std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (const auto& r : regimes) {
    add(r.lower);
    add(r.upper);
  }
  return out;
}

std::vector<BlockRecord> to_blocks(const std::vector<GroundBlock>& blocks) {
  std::vector<BlockRecord> out;
  for (const auto& b : blocks) out.push_back({b.cls, b.size.get_str(), b.group});
  return out;
}

}  // namespace

std::vector<DiagnosticRecord> run_diagnostics(const Analysis& A) {
  const IdealCensus census = ideal_census(A.table(), A.bound("zeta_bound"));
  std::vector<DiagnosticRecord> out;
  out.push_back(diag_class_group(A));
  out.push_back(diag_norm_minimizers(A, census));
  out.push_back(diag_zeta(A, census));
  out.push_back(diag_characters(A, census));
  out.push_back(diag_l_finiteness(A));
  out.push_back(diag_equidistribution(A));
  out.push_back(diag_normestimate(A));
  out.push_back(diag_nu_values(A));
  out.push_back(diag_scaling(A));
  out.push_back(diag_disintegration(A));
  out.push_back(diag_kms_values(A));
  out.push_back(diag_class_measures(A));
  out.push_back(diag_extension(A));
  out.push_back(diag_borel_cantelli(A));
  out.push_back(diag_ground(A));
  return out;
}

ClassTableRecord class_table_record(const Analysis& A) {
  const auto& T = A.table();
  ClassTableRecord ct;
  ct.h = T.order();
  ct.field_class_number = T.field_class_number();
  ct.gamma_order = A.gamma().order();
  ct.unit_image_order = T.unit_image_order();
  ct.elementary_divisors = T.elementary_divisors();
  ct.exponent = T.exponent();
  for (int k = 0; k < T.order(); ++k) {
    const auto& info = T.info(k);
    ClassRecord c;
    c.index = k;
    c.representative = ideal_to_json(info.representative);
    c.min_norm = info.min_norm.get_str();
    c.k = info.k();
    for (const auto& I : info.norm_minimizing) c.norm_minimizing.push_back(ideal_to_json(I));
    c.coordinates = T.coordinates(k);
    ct.classes.push_back(std::move(c));
  }
  ct.multiplication = T.multiplication_table();
  ct.provenance = {"class_structure", {{"scan_bound", T.scan_bound()}}};
  return ct;
}

UnitRecord unit_record(const Analysis& A) {
  const auto& U = A.units();
  UnitRecord u;
  u.torsion_order = static_cast<int>(U.torsion_elements.size());
  u.free_rank = U.free_rank;
  u.free_generator = U.free_generator ? element_to_json(*U.free_generator) : json();
  u.free_exponent = U.free_exponent;
  u.description = unit_group_description(U);
  u.provenance = {"congruence", {}};
  return u;
}

InputEcho analyze_input(const Analysis& A) {
  const auto& cfg = A.config();
  InputEcho in;
  in.field = A.field().spec();
  in.minf = cfg.minf;
  in.m0 = cfg.m0;
  in.gamma = gamma_name(cfg.gamma_kind);
  in.gamma_generators = json::array();
  for (const auto& g : A.gamma().generators()) in.gamma_generators.push_back(residue_to_json(g));
  in.bounds = cfg.bounds.values;
  in.defaulted_bounds = cfg.bounds.defaulted;
  in.precision = cfg.precision;
  return in;
}

PhaseReport analyze(const Analysis& A) {
  const auto& T = A.table();
  const auto& K = A.field();
  PhaseReport r;
  r.scope = "number fields of degree at most 2";

  r.input = analyze_input(A);

  r.field.spec = K.spec();
  r.field.discriminant = K.discriminant().get_str();
  r.field.degree = K.degree();
  r.field.real_embeddings = K.real_embedding_count();
  r.field.class_number = T.field_class_number();
  r.field.torsion_order = K.unit_group().torsion_order();
  if (K.unit_group().fundamental) r.field.fundamental_unit = K.format(*K.unit_group().fundamental);

  r.class_table = class_table_record(A);
  r.unit_group = unit_record(A);
  const auto& U = A.units();

  const auto g = ground_state_blocks(T, U);
  const std::string units = unit_group_description(U);
  const std::string add = K.degree() == 1 ? "ℤ" : "ℤ²";
  const std::string h = std::to_string(T.order());

  // full system
  {
    auto& s = r.full_system;
    s.algebra = "C*_λ(R ⋊ R_{m,Γ})";
    s.regimes.push_back(regime("-inf", false, "1", false, "none", "no KMS_β states"));
    s.regimes.push_back(regime("1", true, "2", true, "unique",
                               "unique KMS_β state, with φ_β(E_{(x+a)×(a∩R_{m,Γ})}) = N(a)^{-β}; "
                               "its GNS factor is of type III_1",
                               {"kms_values", "disintegration", "l_function_finiteness", "equidistribution",
                                "normestimate_decay"}));
    auto simplex = regime("2", false, "inf", false, "simplex",
                          "KMS_β states form a simplex affinely isomorphic to the tracial states on "
                          "⊕_κ C*(a_{κ,1} ⋊ R*_{m,Γ})",
                          {"borel_cantelli", "class_measure_scaling", "extension", "scaling_law", "nu_values"});
    for (const auto& b : g.full) simplex.blocks.push_back({b.cls, "1", add + " ⋊ " + units});
    s.regimes.push_back(simplex);
    auto kinf = regime("inf", true, "inf", true, "kms_infinity",
                       "KMS_∞ states: weak* limits of the β > 2 states, traces on ⊕_κ C*(a_{κ,1} ⋊ R*_{m,Γ})",
                       {"class_structure"});
    kinf.blocks = simplex.blocks;
    s.regimes.push_back(kinf);
    auto ground = regime("inf", true, "inf", true, "ground",
                         "ground states: state space of ⊕_κ M_{k_κ·N(a_{κ,1})}(C*(a_{κ,1} ⋊ R*_{m,Γ}))",
                         {"ground_blocks", "norm_minimizers"});
    ground.blocks = to_blocks(g.full);
    s.regimes.push_back(ground);
    s.boundaries = boundaries_of(s.regimes);
    s.ground_total = g.full_total().get_str();
    for (const auto& b : g.full) s.ground_exceeds_kms_infinity = s.ground_exceeds_kms_infinity || b.size > 1;
  }

  r.boundary_quotient.description =
      "unique σ̄-KMS_1 state on the boundary quotient, with values N(a)^{-1} on the spanning projections";
  r.boundary_quotient.status = "quoted";
  r.boundary_quotient.ingredients = {"kms_values"};
  for (const auto& I : K.enumerate_ideals(10, T.congruence().modulus().m0))
    r.boundary_quotient.samples.push_back(
        {ideal_to_json(I), str(kms_value(T.congruence(), 1.0, AlgebraicInteger(0), I).rational())});

  // multiplicative monoid
  {
    auto& s = r.multiplicative;
    s.algebra = "C*_λ(R_{m,Γ})";
    s.regimes.push_back(regime("-inf", false, "0", false, "none", "no KMS_β states"));
    s.regimes.push_back(regime("0", true, "0", true, "invariant",
                               "KMS_0 states ≅ σ-invariant states on C*(K_{m,Γ}), i.e. τ(u_k) = 0 unless N(k) = 1; "
                               "K_{m,Γ} has torsion " + std::to_string(U.torsion_elements.size()) +
                                   " and free abelian part of countably infinite rank",
                               {"class_structure"}));
    s.regimes.push_back(regime("0", false, "1", true, "characters",
                               "KMS_β states ≅ states on C*(R*_{m,Γ}), R*_{m,Γ} ≅ " + units +
                                   "; extremal states give factors of type III_1",
                               {"l_function_finiteness", "equidistribution", "normestimate_decay"}));
    auto simplex = regime("1", false, "inf", false, "simplex",
                          "KMS_β states ≅ states on ⊕_κ C*(R*_{m,Γ}), " + h + " summands",
                          {"borel_cantelli", "class_measure_scaling"});
    for (const auto& b : g.multiplicative) simplex.blocks.push_back({b.cls, "1", units});
    s.regimes.push_back(simplex);
    auto ground = regime("inf", true, "inf", true, "ground", "ground states: state space of ⊕_κ M_{k_κ}(C*(R*_{m,Γ}))",
                         {"ground_blocks", "norm_minimizers"});
    ground.blocks = to_blocks(g.multiplicative);
    s.regimes.push_back(ground);
    s.boundaries = boundaries_of(s.regimes);
    s.ground_total = g.multiplicative_total().get_str();
    for (const auto& b : g.multiplicative) s.ground_exceeds_kms_infinity = s.ground_exceeds_kms_infinity || b.size > 1;
  }

  // principal ideals generated by the monoid
  {
    auto& s = r.principal_multiplicative;
    s.algebra = "C*_λ(R_{m,Γ}/R*_{m,Γ})";
    s.regimes.push_back(regime("-inf", false, "0", false, "none", "no KMS_β states"));
    s.regimes.push_back(regime("0", true, "0", true, "invariant",
                               "KMS_0 states ≅ σ-invariant states on C*(K_{m,Γ}/R*_{m,Γ}), i.e. τ(u_k) = 0 unless N(k) = 1",
                               {"class_structure"}));
    s.regimes.push_back(regime("0", false, "1", true, "unique", "unique KMS_β state; its GNS factor is of type III_1",
                               {"l_function_finiteness", "equidistribution", "normestimate_decay"}));
    s.regimes.push_back(regime("1", false, "inf", false, "simplex",
                               "KMS_β states ≅ states on ℂ^" + h + " (h_{m,Γ} = " + h + ")",
                               {"borel_cantelli", "class_measure_scaling"}));
    auto ground = regime("inf", true, "inf", true, "ground", "ground states: state space of ⊕_κ M_{k_κ}(ℂ)",
                         {"ground_blocks", "norm_minimizers"});
    ground.blocks = to_blocks(g.principal);
    s.regimes.push_back(ground);
    s.boundaries = boundaries_of(s.regimes);
    Int tot = 0;
    for (const auto& b : g.principal) {
      tot += b.size;
      s.ground_exceeds_kms_infinity = s.ground_exceeds_kms_infinity || b.size > 1;
    }
    s.ground_total = tot.get_str();
  }

  r.diagnostics = run_diagnostics(A);
  r.all_pass = true;
  for (const auto& d : r.diagnostics) r.all_pass = r.all_pass && d.pass;
  return r;
}

json report_to_json(const PhaseReport& r) { return json(r); }

PhaseReport report_from_json(const json& j) {
  if (!j.is_object() || j.value("schema", "") != kReportSchema)
    fail(ErrorCode::Config, "not a phase report document");
  if (j.value("schema_version", "") != kReportSchemaVersion)
    fail(ErrorCode::Config, "unsupported report schema version " + j.value("schema_version", "?"));
  try {
    return j.get<PhaseReport>();
  } catch (const json::exception& e) {
    fail(ErrorCode::Config, std::string("malformed phase report: ") + e.what());
  }
}

namespace {

std::string interval_label(const RegimeRecord& r) {
  if (r.lower == r.upper) return "β = " + (r.lower == "inf" ? std::string("∞") : r.lower);
  auto end = [](const std::string& s) {
    if (s == "inf") return std::string("∞");
    if (s == "-inf") return std::string("-∞");
    return s;
  };
  return std::string(r.lower_closed ? "[" : "(") + end(r.lower) + ", " + end(r.upper) + (r.upper_closed ? "]" : ")");
}

std::string ideal_text(const json& j) {
  std::ostringstream os;
  const auto& h = j["hnf"];
  os << "<" << h[0].dump() << "," << h[1].dump() << "," << h[2].dump() << ">";
  if (j["den"].dump() != "1") os << "/" << j["den"].dump();
  return os.str();
}

// Pads to a display width, counting UTF-8 code points.
std::string pad(const std::string& s, std::size_t width) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n >= width ? s : s + std::string(width - n, ' ');
}

void system_text(std::ostringstream& os, const std::string& title, const SystemRecord& s) {
  os << "\n" << title << "  " << s.algebra << "\n";
  os << "  boundaries:";
  for (const auto& b : s.boundaries) os << " " << (b == "inf" ? "∞" : b);
  os << "\n";
  for (const auto& r : s.regimes) {
    std::string label = interval_label(r);
    if (r.kind == "kms_infinity") label += " (KMS_∞)";
    if (r.kind == "ground") label = "ground";
    os << "  " << pad(label, 20) << " | " << r.description << "\n";
    if (r.kind == "ground" || r.kind == "simplex") {
      for (const auto& b : r.blocks) {
        os << "  " << std::string(20, ' ') << " |   class " << b.cls;
        if (r.kind == "ground") os << ": size " << b.size;
        os << "  " << b.group << "\n";
      }
    }
  }
  os << "  ground total " << s.ground_total
     << (s.ground_exceeds_kms_infinity ? "; some blocks exceed size 1, so ground states outnumber KMS_∞ states" : "")
     << "\n";
}

}  // namespace

std::string emit(const PhaseReport& r, Format format) {
  if (format == Format::Json) return report_to_json(r).dump(2) + "\n";
  std::ostringstream os;
  os << "kmsphase phase report (schema " << r.schema_version << ", " << r.scope << ")\n";
  os << "field " << r.input.field << "   minf [";
  for (std::size_t i = 0; i < r.input.minf.size(); ++i) os << (i ? "," : "") << r.input.minf[i];
  os << "]   m0 " << ideal_text(r.input.m0) << "   Γ " << r.input.gamma << " (order " << r.class_table.gamma_order
     << ")\n";
  os << "h_{m,Γ} = " << r.class_table.h << "   h_K = " << r.class_table.field_class_number << "   divisors [";
  for (std::size_t i = 0; i < r.class_table.elementary_divisors.size(); ++i)
    os << (i ? "," : "") << r.class_table.elementary_divisors[i];
  os << "]   R*_{m,Γ} ≅ " << r.unit_group.description << "\n";
  os << "\nclasses (scan bound " << r.class_table.provenance.bounds.at("scan_bound") << ")\n";
  for (const auto& c : r.class_table.classes)
    os << "  " << c.index << "  rep " << ideal_text(c.representative) << "  min_norm " << c.min_norm << "  k " << c.k
       << "\n";
  system_text(os, "full system", r.full_system);
  os << "\nboundary quotient\n  " << pad("β = 1", 20) << " | " << r.boundary_quotient.description << "\n";
  system_text(os, "multiplicative monoid", r.multiplicative);
  system_text(os, "principal ideals of the monoid", r.principal_multiplicative);
  os << "\nclassifications above are quoted from the theorems; the diagnostics check their numeric ingredients\n";
  os << "\ndiagnostics\n";
  for (const auto& d : r.diagnostics) os << "  " << (d.pass ? "PASS" : "FAIL") << "  " << d.name << " (" << d.module << ")\n";
  os << (r.all_pass ? "all diagnostics pass\n" : "some diagnostics fail\n");
  return os.str();
}

}  // namespace kms
