#pragma once

#include <span>

#include "wtrace/grid.hpp"

namespace wtrace {

// Littlewood-Paley system from the exp(-a/x) bump:
// phi(xi) = psi((3/2 - |xi|) / (1/2)), psi(x) = h(x) / (h(x) + h(1-x)).
class DyadicSystem {
 public:
  explicit DyadicSystem(int max_block = 8, double sharpness = 1.0);

  int max_block() const { return max_block_; }
  double sharpness() const { return sharpness_; }

  double generator(double xi) const;
  // phi_0 = phi, phi_k(xi) = phi(2^{-k} xi) - phi(2^{-k+1} xi).
  double symbol(int k, double xi) const;
  double band_limit() const { return std::ldexp(1.0, max_block_); }

 private:
  double h(double x) const;
  int max_block_;
  double sharpness_;
};

DyadicSystem build_system(double sharpness, int max_block);

GridFunction apply_block(const DyadicSystem& sys, int k, const GridFunction& f);

// sup |sum_k phi_k(xi) - 1| over samples with |xi| <= 2^K; others are ignored.
double partition_check(const DyadicSystem& sys, std::span<const double> xi);

}  // namespace wtrace
