#include "wtrace/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace wtrace {

DyadicSystem::DyadicSystem(int max_block, double sharpness) : max_block_(max_block), sharpness_(sharpness) {
  if (max_block < 1) throw std::invalid_argument("dyadic system needs K >= 1");
  if (!(sharpness > 0.0)) throw std::invalid_argument("generator sharpness must be positive");
}

double DyadicSystem::h(double x) const { return x > 0.0 ? std::exp(-sharpness_ / x) : 0.0; }

double DyadicSystem::generator(double xi) const {
  const double a = std::abs(xi);
  if (a <= 1.0) return 1.0;
  if (a >= 1.5) return 0.0;
  const double x = (1.5 - a) / 0.5;
  const double hx = h(x), hy = h(1.0 - x);
  return hx / (hx + hy);
}

double DyadicSystem::symbol(int k, double xi) const {
  if (k < 0 || k > max_block_) throw std::out_of_range("dyadic block index out of range");
  if (k == 0) return generator(xi);
  return generator(std::ldexp(xi, -k)) - generator(std::ldexp(xi, -k + 1));
}

DyadicSystem build_system(double sharpness, int max_block) { return DyadicSystem(max_block, sharpness); }

GridFunction apply_block(const DyadicSystem& sys, int k, const GridFunction& f) {
  if (k < 0 || k > sys.max_block()) throw std::out_of_range("dyadic block index out of range");
  return f.multiplied([&](double xi) { return sys.symbol(k, xi); }).pruned();
}

double partition_check(const DyadicSystem& sys, std::span<const double> xi) {
  double dev = 0.0;
  const double limit = sys.band_limit();
  for (double x : xi) {
    if (std::abs(x) > limit) continue;
    double s = 0.0;
    for (int k = 0; k <= sys.max_block(); ++k) s += sys.symbol(k, x);
    dev = std::max(dev, std::abs(s - 1.0));
  }
  return dev;
}

}  // namespace wtrace
