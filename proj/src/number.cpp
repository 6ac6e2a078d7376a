#include "classlang/number.hpp"

#include <charconv>
#include <cmath>
#include <functional>

#include "classlang/error.hpp"

namespace classlang {

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorKind::runtime, message);
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

mpq_class as_rational(const Number& n) {
  return mpq_class(n.numerator(), n.denominator());
}

}  // namespace

Number::Number(long value) : num_(value) {}

Number Number::exact(mpz_class numerator, mpz_class denominator) {
  if (denominator == 0) fail("/: division by zero");
  if (denominator < 0) {
    numerator = -numerator;
    denominator = -denominator;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
  Number n;
  if (g != 1 && g != 0) {
    mpz_divexact(numerator.get_mpz_t(), numerator.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(denominator.get_mpz_t(), denominator.get_mpz_t(), g.get_mpz_t());
  }
  if (numerator == 0) denominator = 1;
  n.num_ = std::move(numerator);
  n.den_ = std::move(denominator);
  return n;
}

Number Number::inexact(double value) {
  Number n;
  n.exact_ = false;
  n.flt_ = value;
  return n;
}

std::optional<Number> Number::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) return std::nullopt;

  mpz_class num;
  mpz_class den = 1;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto p = body.substr(0, slash);
    auto q = body.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) return std::nullopt;
    num = mpz_class(std::string(p));
    den = mpz_class(std::string(q));
    if (den == 0) return std::nullopt;
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
    std::string digits = std::string(whole) + std::string(frac);
    num = mpz_class(digits.empty() ? std::string("0") : digits);
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
  } else {
    if (!all_digits(body)) return std::nullopt;
    num = mpz_class(std::string(body));
  }
  if (negative) num = -num;
  return exact(std::move(num), std::move(den));
}

bool Number::is_integer() const {
  if (exact_) return den_ == 1;
  return std::isfinite(flt_) && std::floor(flt_) == flt_;
}

bool Number::is_zero() const { return exact_ ? num_ == 0 : flt_ == 0.0; }

int Number::sign() const {
  if (exact_) return sgn(num_);
  return flt_ > 0 ? 1 : (flt_ < 0 ? -1 : 0);
}

double Number::to_double() const {
  if (!exact_) return flt_;
  if (den_ == 1) return num_.get_d();
  return mpq_class(num_, den_).get_d();
}

Number Number::to_inexact() const { return exact_ ? inexact(to_double()) : *this; }

std::string Number::to_string() const {
  if (exact_) {
    if (den_ == 1) return num_.get_str();
    return num_.get_str() + "/" + den_.get_str();
  }
  if (std::isnan(flt_)) return "+nan.0";
  if (std::isinf(flt_)) return flt_ > 0 ? "+inf.0" : "-inf.0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, flt_);
  std::string out(buf, end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

Number operator+(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    if (a.den_ == 1 && b.den_ == 1) return Number::exact(a.num_ + b.num_);
    return Number::exact(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  return Number::inexact(a.to_double() + b.to_double());
}

Number operator-(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    if (a.den_ == 1 && b.den_ == 1) return Number::exact(a.num_ - b.num_);
    return Number::exact(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  return Number::inexact(a.to_double() - b.to_double());
}

Number operator*(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) return Number::exact(a.num_ * b.num_, a.den_ * b.den_);
  return Number::inexact(a.to_double() * b.to_double());
}

Number operator/(const Number& a, const Number& b) {
  if (b.is_zero()) fail("/: division by zero");
  if (a.exact_ && b.exact_) return Number::exact(a.num_ * b.den_, a.den_ * b.num_);
  return Number::inexact(a.to_double() / b.to_double());
}

Number Number::operator-() const {
  if (exact_) {
    Number n = *this;
    n.num_ = -n.num_;
    return n;
  }
  return inexact(-flt_);
}

std::partial_ordering operator<=>(const Number& a, const Number& b) {
  if (a.exact_ && b.exact_) {
    int c = cmp(as_rational(a), as_rational(b));
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  double x = a.to_double();
  double y = b.to_double();
  // Finite floats convert to rationals exactly, which keeps 1/3 != 0.333... honest.
  if (std::isfinite(x) && std::isfinite(y)) {
    mpq_class qa = a.exact_ ? as_rational(a) : mpq_class(a.flt_);
    mpq_class qb = b.exact_ ? as_rational(b) : mpq_class(b.flt_);
    int c = cmp(qa, qb);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  return x <=> y;
}

bool operator==(const Number& a, const Number& b) {
  return (a <=> b) == std::partial_ordering::equivalent;
}

bool Number::identical(const Number& other) const {
  if (exact_ != other.exact_) return false;
  if (exact_) return num_ == other.num_ && den_ == other.den_;
  return flt_ == other.flt_ || (std::isnan(flt_) && std::isnan(other.flt_));
}

std::size_t Number::hash() const {
  if (!exact_) return std::hash<double>{}(flt_) ^ 0x9e3779b97f4a7c15ULL;
  return std::hash<std::string>{}(num_.get_str(16)) * 31 +
         std::hash<std::string>{}(den_.get_str(16));
}

std::optional<mpz_class> exact_isqrt(const mpz_class& n) {
  if (n < 0) return std::nullopt;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  if (root * root != n) return std::nullopt;
  return root;
}

Number sqrt(const Number& a) {
  if (a.sign() < 0) fail("sqrt: expected a non-negative number, given " + a.to_string());
  if (a.is_exact()) {
    auto num = exact_isqrt(a.numerator());
    auto den = exact_isqrt(a.denominator());
    if (num && den) return Number::exact(*num, *den);
  }
  return Number::inexact(std::sqrt(a.to_double()));
}

Number sqr(const Number& a) { return a * a; }

Number abs(const Number& a) { return a.sign() < 0 ? -a : a; }

Number quotient(const Number& a, const Number& b) {
  if (!a.is_integer() || !b.is_integer()) fail("quotient: expected integers");
  if (b.is_zero()) fail("quotient: division by zero");
  if (a.is_exact() && b.is_exact()) {
    mpz_class q;
    mpz_tdiv_q(q.get_mpz_t(), a.numerator().get_mpz_t(), b.numerator().get_mpz_t());
    return Number::exact(q);
  }
  return Number::inexact(std::trunc(a.to_double() / b.to_double()));
}

Number remainder(const Number& a, const Number& b) {
  if (!a.is_integer() || !b.is_integer()) fail("remainder: expected integers");
  if (b.is_zero()) fail("remainder: division by zero");
  if (a.is_exact() && b.is_exact()) {
    mpz_class r;
    mpz_tdiv_r(r.get_mpz_t(), a.numerator().get_mpz_t(), b.numerator().get_mpz_t());
    return Number::exact(r);
  }
  return Number::inexact(std::fmod(a.to_double(), b.to_double()));
}

}  // namespace classlang
