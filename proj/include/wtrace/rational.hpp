#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace wtrace {

// Exact rational over int64 with 128-bit intermediates; throws on overflow.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(implicit)
  Rational(std::int64_t n, std::int64_t d);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return double(num_) / double(den_); }
  std::string str() const;
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  // "p", "p/q" or a terminating decimal such as "1.5".
  static Rational parse(const std::string& text);

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  Rational pow(int e) const;
  Rational inverse() const;

 private:
  static Rational reduce(__int128 n, __int128 d);
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);
inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

}  // namespace wtrace

namespace Eigen {
template <>
struct NumTraits<wtrace::Rational> : GenericNumTraits<wtrace::Rational> {
  using Real = wtrace::Rational;
  using NonInteger = wtrace::Rational;
  using Literal = wtrace::Rational;
  using Nested = wtrace::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 8
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
