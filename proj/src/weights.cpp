#include "wtrace/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wtrace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_0^x t^e dt for x >= 0
double from_zero(double x, double e) {
  if (x == 0.0) return 0.0;
  if (e <= -1.0) return kInf;
  return std::pow(x, e + 1.0) / (e + 1.0);
}

// int_a^b t^e dt for 0 < a <= b
double positive_part(double a, double b, double e) {
  if (e == -1.0) return std::log(b / a);
  return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
}

// int_a^b log|t| dt, with x log x - x antiderivative on each side of 0
double log_integral(double a, double b) {
  auto g = [](double x) { return x == 0.0 ? 0.0 : x * std::log(x) - x; };
  if (a >= 0.0) return g(b) - g(a);
  if (b <= 0.0) return g(-a) - g(-b);
  return g(-a) + g(b);
}

}  // namespace

const char* to_string(ApClass c) {
  switch (c) {
    case ApClass::ap_member: return "Ap_member";
    case ApClass::ainf_only: return "Ainf_only";
    case ApClass::not_ainf: return "not_Ainf";
  }
  return "?";
}

PowerWeight::PowerWeight(double gamma) : gamma_(gamma) {
  if (!(gamma > -1.0)) throw std::invalid_argument("power weight is not locally integrable for gamma <= -1");
}

double PowerWeight::operator()(double t) const { return std::pow(std::abs(t), gamma_); }

double PowerWeight::integral(double a, double b) const { return power_integral(a, b, gamma_); }

double power_integral(double a, double b, double e) {
  if (b < a) return -power_integral(b, a, e);
  if (a == b) return 0.0;
  if (a >= 0.0) return a == 0.0 ? from_zero(b, e) : positive_part(a, b, e);
  if (b <= 0.0) return b == 0.0 ? from_zero(-a, e) : positive_part(-b, -a, e);
  return from_zero(-a, e) + from_zero(b, e);
}

ApClass ap_classify(double gamma, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("A_p class needs p > 1");
  if (gamma <= -1.0) return ApClass::not_ainf;
  if (std::isinf(p) || gamma < p - 1.0) return ApClass::ap_member;
  return ApClass::ainf_only;
}

std::optional<double> ap_constant_estimate(double gamma, double p, const std::vector<Interval>& family) {
  if (!(p > 1.0)) throw std::invalid_argument("A_p constant needs p > 1");
  double best = 0.0;
  for (const auto& iv : family) {
    const double len = iv.hi - iv.lo;
    if (!(len > 0.0)) throw std::invalid_argument("intervals must have positive length");
    const double avg_w = power_integral(iv.lo, iv.hi, gamma) / len;
    double value;
    if (std::isinf(p)) {
      const double avg_log = gamma * log_integral(iv.lo, iv.hi) / len;
      value = avg_w * std::exp(-avg_log);
    } else {
      const double dual = power_integral(iv.lo, iv.hi, -gamma / (p - 1.0)) / len;
      value = avg_w * std::pow(dual, p - 1.0);
    }
    if (!std::isfinite(value)) return std::nullopt;
    best = std::max(best, value);
  }
  return best;
}

}  // namespace wtrace
