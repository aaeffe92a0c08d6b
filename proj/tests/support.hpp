#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "wtrace/grid.hpp"
#include "wtrace/rational.hpp"

namespace testing {

// Small hand-rolled generators; every property test draws from a fixed seed.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  wtrace::Complex complex() {
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(rng);
    return {re, n(rng)};
  }
  wtrace::Rational rational(int max_num = 40, int max_den = 12) {
    const int d = integer(1, max_den);
    return wtrace::Rational(integer(-max_num, max_num), d);
  }
  wtrace::CVec vector(wtrace::Index n) {
    wtrace::CVec x(n);
    for (wtrace::Index i = 0; i < n; ++i) x(i) = complex();
    return x;
  }
};

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// int_{-L}^{L} |t|^gamma dt
inline double weight_mass(double half_width, double gamma) {
  return 2.0 * std::pow(half_width, 1.0 + gamma) / (1.0 + gamma);
}

}  // namespace testing
