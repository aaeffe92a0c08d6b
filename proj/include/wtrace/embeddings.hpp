#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "wtrace/rational.hpp"
#include "wtrace/spaces.hpp"

namespace wtrace {

// F^s_{p,q}(R, w_gamma) indices.
struct SmoothnessIndex {
  double s;
  double p;
  double q;
  double gamma;
};

// 1 < p0 <= p1 < inf, s0 > s1, gammas > -1, gamma0/p0 >= gamma1/p1,
// s0 - (1+gamma0)/p0 = s1 - (1+gamma1)/p1 (to 1e-12).
void check_sobolev_hypotheses(const SmoothnessIndex& src, const SmoothnessIndex& dst);

// ||f||_{F^{s1}_{p1,q1}(w_gamma1)} / ||f||_{F^{s0}_{p0,q0}(w_gamma0)}.
double sobolev_embed_ratio(const GridFunction& f, const SmoothnessIndex& src, const SmoothnessIndex& dst,
                           const DyadicSystem& sys, int nodes_per_cell = kDefaultNodesPerCell);

struct SobolevCase {
  std::string id;
  SmoothnessIndex src, dst;
};
std::vector<SobolevCase> sobolev_parameter_sets();

// Exponents are stored as reciprocals so q = inf is the exact value 0.
struct MixedDerivativeParams {
  Rational theta;
  double s = 0.0;
  double alpha = 1.0;
  Rational inv_p0, inv_p1, inv_p;
  Rational inv_q0, inv_q1, inv_q;
  Rational gamma0, gamma1, gamma;
  InnerSpace x0 = InnerSpace::scalar();
  InnerSpace x1 = InnerSpace::scalar();
  InnerSpace xt = InnerSpace::scalar();
  double constant = 1.0;        // C in ||x||_theta <= C ||x||_0^{1-theta} ||x||_1^theta
  bool exact_constant = true;   // false puts the check in baseline mode

  // Fills inv_p, inv_q, gamma from the relations.
  static MixedDerivativeParams make(Rational theta, double s, double alpha, Rational p0, Rational p1,
                                    Rational inv_q0, Rational inv_q1, Rational gamma0, Rational gamma1);
  // (1-theta)/p0 + theta/p1 = 1/p, same for q, (1-theta) gamma0 + theta gamma1 = gamma, all exact.
  // Hoelder also needs gamma/p = (1-theta) gamma0/p0 + theta gamma1/p1, which with the weight
  // relation forces p0 = p1 or gamma0 = gamma1.
  void validate() const;
};

double exponent_from_inverse(const Rational& inv);  // 0 -> inf

struct MixedDerivativeResult {
  double lhs;
  double rhs_product;
  bool pass;
};

MixedDerivativeResult mixed_derivative_check(const GridFunction& f, const MixedDerivativeParams& params,
                                             SpaceKind kind, const DyadicSystem& sys,
                                             int nodes_per_cell = kDefaultNodesPerCell);

// sup over x in C^2 of (|x| + |A^theta x|) / (|x|^{1-theta} (|x| + |A x|)^theta) for a
// two-dimensional diagonal A, the constant of C^2, D(A^theta), D(A) graph norms.
double graph_chain_constant(const PositiveOperator& a, double theta);

struct CounterexampleSpec {
  double s = 0.0;
  double t = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double p = 2.0;
  double r = 2.0;
  double u = 1.0;
  double q = 2.0;
  std::vector<double> a;  // a_1, a_2, ...

  double base() const;  // R = 2^{alpha/beta}
  // exponent e with 2^{e j} the common weight: s + (alpha/beta) t + alpha
  double weight_exponent() const;
  void validate() const;
};

// a_j = 2^{-e j}, j = 1..n, normalized so the common weighted sequence is all ones.
CounterexampleSpec all_ones(CounterexampleSpec spec, int n);

// All norms up to the shared constant C_{p,r}. The common sequence is c_j = 2^{e j} a_j;
// the *_r_form values rebuild it from 2^{sigma j} R^{tau j} and agree up to rounding.
struct CounterexampleNorms {
  double target;            // ||c||_{l^u}
  double source0;           // ||c||_{l^q}
  double source1;           // ||c||_{l^q}
  double target_r_form;     // from 2^{(s+(1-theta)alpha) j} R^{(t+theta beta) j}
  double source0_r_form;    // from 2^{(s+alpha) j} R^{t j}
  double source1_r_form;    // from 2^{s j} R^{(t+beta) j}
  double target_power_sum;  // sum |c_j|^u
  double source_power_sum;  // sum |c_j|^q, or max for q = inf
  double ratio() const { return target / source0; }
};

// theta only enters through the R-form of the target, which collapses to the common weight.
CounterexampleNorms counterexample_norms(const CounterexampleSpec& spec, double theta = 0.5);

enum class ElementaryPair { h_sandwich, w_sandwich, bf_sandwich, q_monotone };
const char* to_string(ElementaryPair e);

struct ElementaryParams {
  double s = 1.0;
  double p = 2.0;
  double q = 2.0;   // the F index in the B-F sandwich
  double q0 = 1.0;  // q-monotone pair
  double q1 = 2.0;
  double gamma = 0.0;
  SpaceKind kind = SpaceKind::F;  // q-monotone only
};

// Sandwiches give two ratios (small into middle, middle into large), q-monotone one.
std::vector<double> elementary_embed_check(const GridFunction& f, ElementaryPair pair, const ElementaryParams& prm,
                                           const DyadicSystem& sys, int nodes_per_cell = kDefaultNodesPerCell);

// Seeded band-limited family, seeds base+i, bands cycling through {2, 4, 8, 16, 32}.
std::vector<GridFunction> seeded_family(std::uint64_t seed, int count, const GridSpec& grid, Index dim = 1,
                                        double max_band = 32.0);

}  // namespace wtrace
