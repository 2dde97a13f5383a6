#pragma once

#include <complex>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace fkdet {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Coefficient domains, ordered by promotion: Integer -> Rational -> Complex.
enum class Domain : std::uint8_t { Integer = 0, Rational = 1, Complex = 2 };

inline Domain join(Domain a, Domain b) { return a < b ? b : a; }
const char* to_string(Domain d);

/// Natural log of |v| for v != 0, without overflow for large v.
double log_abs(const BigInt& v);
double log_abs(const Rational& v);

/// A group-ring coefficient. Exact domains keep an arbitrary-precision
/// rational; the complex domain keeps a complex double.
class Coeff {
 public:
  Coeff() = default;
  Coeff(int v) : exact_(v) {}  // NOLINT(google-explicit-constructor)
  static Coeff integer(const BigInt& v);
  static Coeff rational(const Rational& v);
  static Coeff complex(std::complex<double> v);

  Domain domain() const noexcept { return domain_; }
  bool is_exact() const noexcept { return domain_ != Domain::Complex; }
  bool is_zero() const;

  /// Exact value; throws for complex coefficients.
  const Rational& exact() const;
  std::complex<double> to_complex() const;
  double abs() const;

  Coeff promoted(Domain d) const;
  Coeff conj() const;

  Coeff operator-() const;
  Coeff& operator+=(const Coeff& o);
  Coeff& operator-=(const Coeff& o);
  Coeff& operator*=(const Coeff& o);
  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
  /// Multiplies by a unit phase; the result is complex unless the phase is exactly 1.
  Coeff times_phase(std::complex<double> phase) const;

  /// Equality of value and domain.
  bool operator==(const Coeff& o) const;

  /// Text usable by the expression parser: "3", "-3/2", "(1.5-2i)".
  std::string to_string() const;

 private:
  Domain domain_ = Domain::Integer;
  Rational exact_ = 0;
  std::complex<double> value_{};
};

}  // namespace fkdet
