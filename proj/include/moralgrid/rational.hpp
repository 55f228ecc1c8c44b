#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace moralgrid {

// Exact rational on 128-bit integers. Covers the lexicographic weight
// recursion for every realistic chain length and resolution beta; on
// overflow arithmetic throws and the caller falls back to long double.
class Rational {
public:
  using Int = __int128;

  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(Int n, Int d);

  // Parses a plain decimal string such as "0.01", "1", "-3.5e-2" is not
  // supported; exponents are out of scope for config values.
  static Rational from_decimal(const std::string& text);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;

  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const { return *this < o || *this == o; }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return o <= *this; }

  bool is_integer() const { return den_ == 1; }
  Int numerator() const { return num_; }
  Int denominator() const { return den_; }

  double to_double() const;
  std::string to_string() const;

  class Overflow : public std::overflow_error {
  public:
    Overflow() : std::overflow_error("rational arithmetic overflow") {}
  };

private:
  void normalize();
  static Int checked_mul(Int a, Int b);
  static Int checked_add(Int a, Int b);

  Int num_;
  Int den_;  // > 0 always
};

}  // namespace moralgrid
