#include "wtrace/rational.hpp"

#include <limits>
#include <numeric>
#include <sstream>

namespace wtrace {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) { *this = reduce(n, d); }

Rational Rational::reduce(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const i128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  if (!fits(n) || !fits(d)) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = std::int64_t(n);
  r.den_ = std::int64_t(d);
  return r;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos)
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  const std::string frac = text.substr(dot + 1);
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const bool neg = !text.empty() && text[0] == '-';
  const std::string whole = text.substr(0, dot);
  const std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : std::stoll(whole);
  const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
  const Rational mag = Rational(w < 0 ? -w : w) + Rational(f, scale);
  return neg ? -mag : mag;
}

Rational Rational::operator-() const { return reduce(-i128(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
  return *this = reduce(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
}

Rational& Rational::operator-=(const Rational& o) {
  return *this = reduce(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
}

Rational& Rational::operator*=(const Rational& o) {
  return *this = reduce(i128(num_) * o.num_, i128(den_) * o.den_);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  return *this = reduce(i128(num_) * o.den_, i128(den_) * o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const i128 l = i128(a.num_) * b.den_;
  const i128 r = i128(b.num_) * a.den_;
  return l <=> r;
}

Rational Rational::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= *this;
  return r;
}

Rational Rational::inverse() const { return Rational(1) / *this; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace wtrace
