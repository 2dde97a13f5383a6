#include "fkdet/coeff.hpp"

#include <charconv>
#include <cmath>

#include "fkdet/errors.hpp"

namespace fkdet {

const char* to_string(Domain d) {
  switch (d) {
    case Domain::Integer:
      return "integer";
    case Domain::Rational:
      return "rational";
    case Domain::Complex:
      return "complex";
  }
  return "?";
}

double log_abs(const BigInt& v) {
  if (v == 0) throw InvalidArgument("log of zero");
  const BigInt a = boost::multiprecision::abs(v);
  const std::size_t bits = boost::multiprecision::msb(a);
  if (bits < 900) return std::log(a.convert_to<double>());
  const std::size_t shift = bits - 60;
  return std::log(BigInt(a >> shift).convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

double log_abs(const Rational& v) {
  return log_abs(boost::multiprecision::numerator(v)) - log_abs(boost::multiprecision::denominator(v));
}

Coeff Coeff::integer(const BigInt& v) {
  Coeff c;
  c.exact_ = Rational(v);
  return c;
}

Coeff Coeff::rational(const Rational& v) {
  Coeff c;
  c.domain_ = Domain::Rational;
  c.exact_ = v;
  return c;
}

Coeff Coeff::complex(std::complex<double> v) {
  Coeff c;
  c.domain_ = Domain::Complex;
  c.value_ = v;
  return c;
}

bool Coeff::is_zero() const {
  return is_exact() ? exact_ == 0 : (value_.real() == 0.0 && value_.imag() == 0.0);
}

const Rational& Coeff::exact() const {
  if (!is_exact()) throw InvalidArgument("exact value requested from a complex coefficient");
  return exact_;
}

std::complex<double> Coeff::to_complex() const {
  if (is_exact()) return {exact_.convert_to<double>(), 0.0};
  return value_;
}

double Coeff::abs() const {
  if (is_exact()) return boost::multiprecision::abs(exact_).convert_to<double>();
  return std::abs(value_);
}

Coeff Coeff::promoted(Domain d) const {
  if (d <= domain_) return *this;
  if (d == Domain::Complex) return complex(to_complex());
  Coeff c = *this;
  c.domain_ = d;
  return c;
}

Coeff Coeff::conj() const {
  if (is_exact()) return *this;
  return complex(std::conj(value_));
}

Coeff Coeff::operator-() const {
  Coeff c = *this;
  if (is_exact()) {
    c.exact_ = -exact_;
  } else {
    c.value_ = -value_;
  }
  return c;
}

Coeff& Coeff::operator+=(const Coeff& o) {
  const Domain d = join(domain_, o.domain_);
  if (d == Domain::Complex) {
    value_ = to_complex() + o.to_complex();
    exact_ = 0;
  } else {
    exact_ += o.exact_;
  }
  domain_ = d;
  return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) { return *this += -o; }

Coeff& Coeff::operator*=(const Coeff& o) {
  const Domain d = join(domain_, o.domain_);
  if (d == Domain::Complex) {
    value_ = to_complex() * o.to_complex();
    exact_ = 0;
  } else {
    exact_ *= o.exact_;
  }
  domain_ = d;
  return *this;
}

Coeff Coeff::times_phase(std::complex<double> phase) const {
  if (phase == std::complex<double>(1.0, 0.0)) return *this;
  return complex(to_complex() * phase);
}

bool Coeff::operator==(const Coeff& o) const {
  if (domain_ != o.domain_) return false;
  return is_exact() ? exact_ == o.exact_ : value_ == o.value_;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string Coeff::to_string() const {
  if (is_exact()) {
    const BigInt num = boost::multiprecision::numerator(exact_);
    const BigInt den = boost::multiprecision::denominator(exact_);
    std::string s = num.str();
    if (den != 1) s += "/" + den.str();
    return s;
  }
  const double re = value_.real();
  const double im = value_.imag();
  std::string s = "(" + shortest(re);
  s += std::signbit(im) ? "-" : "+";
  s += shortest(std::abs(im)) + "i)";
  return s;
}

}  // namespace fkdet
