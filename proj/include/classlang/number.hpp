#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace classlang {

// Numbers are exact rationals unless an inexact (floating point) value takes
// part in the computation. Exact values are kept in lowest terms with a
// positive denominator, so structural and numeric identity coincide for them.
class Number {
 public:
  Number() : Number(0) {}
  Number(long value);  // NOLINT(google-explicit-constructor)

  static Number exact(mpz_class numerator, mpz_class denominator = 1);
  static Number inexact(double value);

  // Integer ("-12"), fraction ("1/3") or decimal ("1.5", ".25") syntax.
  // Decimals read as exact rationals.
  static std::optional<Number> parse(std::string_view text);

  bool is_exact() const { return exact_; }
  bool is_integer() const;
  bool is_zero() const;
  int sign() const;

  // Only meaningful for exact values.
  const mpz_class& numerator() const { return num_; }
  const mpz_class& denominator() const { return den_; }

  double to_double() const;
  Number to_inexact() const;

  // "7", "-1/3", "1.4142135623730951"
  std::string to_string() const;

  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  // Throws "/: division by zero" for an exact or inexact zero divisor.
  friend Number operator/(const Number& a, const Number& b);
  Number operator-() const;

  // Numeric comparison across exactness: exact 5 equals inexact 5.0.
  friend bool operator==(const Number& a, const Number& b);
  friend std::partial_ordering operator<=>(const Number& a, const Number& b);

  // Same exactness and same value.
  bool identical(const Number& other) const;

  std::size_t hash() const;

 private:
  bool exact_ = true;
  mpz_class num_;
  mpz_class den_ = 1;
  double flt_ = 0.0;
};

// Partial operations raise runtime errors naming the operator.
Number sqrt(const Number& a);
Number sqr(const Number& a);
Number abs(const Number& a);
Number quotient(const Number& a, const Number& b);
Number remainder(const Number& a, const Number& b);

// Exact integer square root test: returns r with r*r == n when n is a perfect square.
std::optional<mpz_class> exact_isqrt(const mpz_class& n);

}  // namespace classlang
