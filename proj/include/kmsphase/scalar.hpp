#pragma once

// Outward-rounded MPFR intervals, and the exact-or-interval Scalar that the
// measure and series code computes with.

#include <mpfr.h>

#include <optional>
#include <string>
#include <variant>

#include "kmsphase/arith.hpp"

namespace kms {

inline constexpr mpfr_prec_t kDefaultPrecision = 100;

class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = kDefaultPrecision);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval point(double v, mpfr_prec_t prec = kDefaultPrecision);
  static Interval from_rational(const Rational& q, mpfr_prec_t prec = kDefaultPrecision);
  static Interval hull(double lo, double hi, mpfr_prec_t prec = kDefaultPrecision);
  // cos(2*pi*num/den) and sin(2*pi*num/den), enclosed.
  static Interval cos_2pi(long num, long den, mpfr_prec_t prec = kDefaultPrecision);
  static Interval sin_2pi(long num, long den, mpfr_prec_t prec = kDefaultPrecision);

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
  double lower() const;
  double upper() const;
  double mid() const;
  double width() const;
  bool contains(double v) const;
  bool contains_zero() const;
  bool overlaps(const Interval& o) const;
  bool positive() const;

  Interval operator-() const;
  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator*=(const Interval& o) { return *this = *this * o; }

  Interval sqrt() const;
  Interval abs() const;
  Interval square() const;
  // base^exponent for a strictly positive base.
  Interval pow(double exponent) const;

  mpfr_srcptr lo_ptr() const { return lo_; }
  mpfr_srcptr hi_ptr() const { return hi_; }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

// The exponent of a Dirichlet series term or of a measure scaling law; integer
// exponents keep arithmetic exact.
class Exponent {
 public:
  explicit Exponent(double value);

  double value() const { return value_; }
  bool is_integer() const { return integer_.has_value(); }
  long integer() const { return *integer_; }

 private:
  double value_;
  std::optional<long> integer_;
};

class Scalar {
 public:
  Scalar() : v_(Rational(0)) {}
  Scalar(Rational q) : v_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  Scalar(Interval iv) : v_(std::move(iv)) {}  // NOLINT(google-explicit-constructor)

  bool exact() const { return std::holds_alternative<Rational>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  Interval interval(mpfr_prec_t prec = kDefaultPrecision) const;
  double approx() const;
  double width() const;

  // Exact equality for two exact values, overlap otherwise.
  bool agrees_with(const Scalar& o) const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);

  std::string str() const;

 private:
  std::variant<Rational, Interval> v_;
};

Rational rational_pow(const Rational& base, long exponent);

// base^(-s): exact when s is an integer, an enclosure otherwise.
Scalar inverse_power(const Rational& base, const Exponent& s,
                     mpfr_prec_t prec = kDefaultPrecision);

Scalar sum(const std::vector<Scalar>& terms, mpfr_prec_t prec = kDefaultPrecision);

}  // namespace kms
