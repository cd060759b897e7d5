#include "kmsphase/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kmsphase/errors.hpp"

namespace kms {

namespace {

mpfr_prec_t join_prec(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

mpfr_ptr mut(mpfr_srcptr p) { return const_cast<mpfr_ptr>(p); }

// Hull of the four endpoint combinations of `op`, each computed with
// directed rounding.
template <class Op>
Interval combine(const Interval& a, const Interval& b, Op op) {
  const mpfr_prec_t prec = join_prec(a, b);
  Interval out(prec);
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_srcptr as[2] = {a.lo_ptr(), a.hi_ptr()};
  mpfr_srcptr bs[2] = {b.lo_ptr(), b.hi_ptr()};
  bool first = true;
  for (auto* x : as) {
    for (auto* y : bs) {
      op(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, out.lo_ptr())) mpfr_set(mut(out.lo_ptr()), t, MPFR_RNDD);
      op(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, out.hi_ptr())) mpfr_set(mut(out.hi_ptr()), t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return out;
}

}  // namespace

Interval::Interval(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& other) {
  mpfr_init2(lo_, other.precision());
  mpfr_init2(hi_, other.precision());
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept {
  mpfr_init2(lo_, other.precision());
  mpfr_init2(hi_, other.precision());
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.precision());
    mpfr_set_prec(hi_, other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::point(double v, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_d(out.lo_, v, MPFR_RNDD);
  mpfr_set_d(out.hi_, v, MPFR_RNDU);
  return out;
}

Interval Interval::hull(double lo, double hi, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_d(out.lo_, std::min(lo, hi), MPFR_RNDD);
  mpfr_set_d(out.hi_, std::max(lo, hi), MPFR_RNDU);
  return out;
}

Interval Interval::from_rational(const Rational& q, mpfr_prec_t prec) {
  Interval out(prec);
  mpfr_set_q(out.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_, q.get_mpq_t(), MPFR_RNDU);
  return out;
}

namespace {

// Encloses f(2*pi*num/den) for f in {cos, sin}. Quarter turns are exact.
Interval trig_2pi(long num, long den, mpfr_prec_t prec, bool cosine) {
  if (den <= 0) fail(ErrorCode::Argument, "root of unity order must be positive");
  long r = num % den;
  if (r < 0) r += den;
  if ((4 * r) % den == 0) {
    const long quarter = (4 * r) / den;  // 0..3
    static constexpr int kCos[4] = {1, 0, -1, 0};
    static constexpr int kSin[4] = {0, 1, 0, -1};
    return Interval::point(cosine ? kCos[quarter] : kSin[quarter], prec);
  }
  const mpfr_prec_t work = prec + 32;
  mpfr_t x;
  mpfr_t y;
  mpfr_inits2(work, x, y, static_cast<mpfr_ptr>(nullptr));
  mpfr_const_pi(x, MPFR_RNDN);
  mpfr_mul_si(x, x, 2 * r, MPFR_RNDN);
  mpfr_div_si(x, x, den, MPFR_RNDN);
  if (cosine) {
    mpfr_cos(y, x, MPFR_RNDN);
  } else {
    mpfr_sin(y, x, MPFR_RNDN);
  }
  // The argument carries a few ulps of error and |f'| <= 1, so a radius of
  // 2^-(prec) covers both the argument and the evaluation error.
  Interval out(prec);
  mpfr_t eps;
  mpfr_init2(eps, work);
  mpfr_set_ui_2exp(eps, 1, -static_cast<long>(prec), MPFR_RNDU);
  mpfr_sub(mut(out.lo_ptr()), y, eps, MPFR_RNDD);
  mpfr_add(mut(out.hi_ptr()), y, eps, MPFR_RNDU);
  if (mpfr_cmp_si(out.lo_ptr(), -1) < 0) mpfr_set_si(mut(out.lo_ptr()), -1, MPFR_RNDD);
  if (mpfr_cmp_si(out.hi_ptr(), 1) > 0) mpfr_set_si(mut(out.hi_ptr()), 1, MPFR_RNDU);
  mpfr_clears(x, y, eps, static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace

Interval Interval::cos_2pi(long num, long den, mpfr_prec_t prec) {
  return trig_2pi(num, den, prec, true);
}

Interval Interval::sin_2pi(long num, long den, mpfr_prec_t prec) {
  return trig_2pi(num, den, prec, false);
}

double Interval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const {
  mpfr_t m;
  mpfr_init2(m, precision() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  const double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, precision());
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  const double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

bool Interval::contains(double v) const {
  return mpfr_cmp_d(lo_, v) <= 0 && mpfr_cmp_d(hi_, v) >= 0;
}

bool Interval::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}

bool Interval::overlaps(const Interval& o) const {
  return mpfr_lessequal_p(lo_, o.hi_) && mpfr_lessequal_p(o.lo_, hi_);
}

bool Interval::positive() const { return mpfr_sgn(lo_) > 0; }

Interval Interval::operator-() const {
  Interval out(precision());
  mpfr_neg(out.lo_, hi_, MPFR_RNDD);
  mpfr_neg(out.hi_, lo_, MPFR_RNDU);
  return out;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval out(join_prec(a, b));
  mpfr_add(out.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(out.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return out;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval out(join_prec(a, b));
  mpfr_sub(out.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(out.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return out;
}

Interval operator*(const Interval& a, const Interval& b) {
  return combine(a, b, [](mpfr_ptr r, mpfr_srcptr x, mpfr_srcptr y, mpfr_rnd_t rnd) {
    mpfr_mul(r, x, y, rnd);
  });
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) fail(ErrorCode::Domain, "interval division by an interval containing 0");
  return combine(a, b, [](mpfr_ptr r, mpfr_srcptr x, mpfr_srcptr y, mpfr_rnd_t rnd) {
    mpfr_div(r, x, y, rnd);
  });
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(lo_) < 0) fail(ErrorCode::Domain, "sqrt of an interval with negative part");
  Interval out(precision());
  mpfr_sqrt(out.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(out.hi_, hi_, MPFR_RNDU);
  return out;
}

Interval Interval::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  Interval out(precision());
  mpfr_set_zero(out.lo_, 1);
  if (mpfr_cmpabs(lo_, hi_) > 0) {
    mpfr_neg(out.hi_, lo_, MPFR_RNDU);
  } else {
    mpfr_set(out.hi_, hi_, MPFR_RNDU);
  }
  return out;
}

Interval Interval::square() const {
  const Interval m = abs();
  Interval out(precision());
  mpfr_sqr(out.lo_, m.lo_, MPFR_RNDD);
  mpfr_sqr(out.hi_, m.hi_, MPFR_RNDU);
  return out;
}

Interval Interval::pow(double exponent) const {
  if (!positive()) fail(ErrorCode::Domain, "pow of a non-positive interval");
  Interval out(precision());
  mpfr_t e;
  mpfr_init2(e, 64);
  mpfr_set_d(e, exponent, MPFR_RNDN);
  if (exponent >= 0) {
    mpfr_pow(out.lo_, lo_, e, MPFR_RNDD);
    mpfr_pow(out.hi_, hi_, e, MPFR_RNDU);
  } else {
    mpfr_pow(out.lo_, hi_, e, MPFR_RNDD);
    mpfr_pow(out.hi_, lo_, e, MPFR_RNDU);
  }
  mpfr_clear(e);
  return out;
}

Exponent::Exponent(double value) : value_(value) {
  if (!std::isfinite(value)) fail(ErrorCode::Domain, "exponent must be finite");
  if (std::floor(value) == value && std::fabs(value) < 1e9) integer_ = static_cast<long>(value);
}

Interval Scalar::interval(mpfr_prec_t prec) const {
  if (exact()) return Interval::from_rational(rational(), prec);
  return std::get<Interval>(v_);
}

double Scalar::approx() const {
  if (exact()) return rational().get_d();
  return std::get<Interval>(v_).mid();
}

double Scalar::width() const {
  if (exact()) return 0.0;
  return std::get<Interval>(v_).width();
}

bool Scalar::agrees_with(const Scalar& o) const {
  if (exact() && o.exact()) return rational() == o.rational();
  const mpfr_prec_t prec = std::max(exact() ? kDefaultPrecision : std::get<Interval>(v_).precision(),
                                    o.exact() ? kDefaultPrecision : std::get<Interval>(o.v_).precision());
  return interval(prec).overlaps(o.interval(prec));
}

namespace {

mpfr_prec_t prec_of(const Scalar& a, const Scalar& b) {
  mpfr_prec_t p = kDefaultPrecision;
  if (!a.exact()) p = std::max(p, a.interval().precision());
  if (!b.exact()) p = std::max(p, b.interval().precision());
  return p;
}

}  // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return Rational(a.rational() + b.rational());
  const auto p = prec_of(a, b);
  return a.interval(p) + b.interval(p);
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return Rational(a.rational() - b.rational());
  const auto p = prec_of(a, b);
  return a.interval(p) - b.interval(p);
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) return Rational(a.rational() * b.rational());
  const auto p = prec_of(a, b);
  return a.interval(p) * b.interval(p);
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.exact() && b.exact()) {
    if (b.rational() == 0) fail(ErrorCode::Domain, "division by zero");
    return Rational(a.rational() / b.rational());
  }
  const auto p = prec_of(a, b);
  return a.interval(p) / b.interval(p);
}

std::string Scalar::str() const {
  std::ostringstream os;
  if (exact()) {
    os << rational().get_str();
  } else {
    os.precision(17);
    const Interval iv = interval();
    os << "[" << iv.lower() << ", " << iv.upper() << "]";
  }
  return os.str();
}

Rational rational_pow(const Rational& base, long exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0) {
    if (exponent < 0) fail(ErrorCode::Domain, "0 raised to a negative power");
    return Rational(0);
  }
  const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  Int num;
  Int den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), e);
  Rational out = exponent > 0 ? Rational(num, den) : Rational(den, num);
  out.canonicalize();
  return out;
}

Scalar inverse_power(const Rational& base, const Exponent& s, mpfr_prec_t prec) {
  if (s.is_integer()) return rational_pow(base, -s.integer());
  if (base <= 0) fail(ErrorCode::Domain, "non-integer power of a non-positive base");
  return Interval::from_rational(base, prec).pow(-s.value());
}

Scalar sum(const std::vector<Scalar>& terms, mpfr_prec_t prec) {
  std::vector<Rational> exact_terms;
  Interval acc(prec);
  bool any_interval = false;
  for (const auto& t : terms) {
    if (t.exact()) {
      exact_terms.push_back(t.rational());
    } else {
      acc += t.interval(prec);
      any_interval = true;
    }
  }
  Rational q = sum_exact(exact_terms);
  if (!any_interval) return q;
  return acc + Interval::from_rational(q, prec);
}

}  // namespace kms
