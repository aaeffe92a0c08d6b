#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wtrace/operators.hpp"
#include "wtrace/rational.hpp"
#include "wtrace/spaces.hpp"

namespace wtrace {

struct StefanParams {
  Rational p, q;
  double mu = 1.0;  // recorded only
  bool in_admissible_range = false;  // 2p/(p+1) < q < 2p
  bool nondegenerate = false;        // 1 - 1/(2q) != 1/p and 1/2 - 1/(2q) != 1/p

  static StefanParams make(Rational p, Rational q, double mu = 1.0);
};

// One factor of an intersection: outer(s; p, q) over time with values in inner(s; p, q) over space.
// Kinds: 'L' Lebesgue, 'H' Bessel, 'F' Triebel-Lizorkin, 'B' Besov. A zero q means "no q index".
struct SpaceComponent {
  char outer = 'L';
  Rational outer_s, outer_p, outer_q;
  char inner = 'L';
  Rational inner_s, inner_p, inner_q;
  std::string domain = "R^{d-1}";

  std::string str() const;
};

struct SpaceDescriptor {
  std::string name;  // e.g. B_{2,8}^{13/4} for trace spaces, the symbol for solution/data spaces
  std::optional<Rational> exponent;  // smoothness of a trace space
  std::vector<SpaceComponent> components;
};

struct StefanSpaces {
  SpaceDescriptor e0, eu, f1, f2, eh, xu, xh;
  std::optional<SpaceDescriptor> xdth;
  bool in_admissible_range = false;
};

// Throws "excluded by hypothesis" in the degenerate cases.
StefanSpaces classify_spaces(const StefanParams& params);

struct CompatibilityCondition {
  std::string id;         // jump, static, dynamic
  std::string statement;
  std::string trigger;    // the inequality that switches it on
  Rational trigger_lhs, trigger_rhs;  // trigger_lhs > trigger_rhs holds
};

std::vector<CompatibilityCondition> compatibility_conditions(const StefanParams& params);

// Sequence model of the boundary spaces: inner index n stands for frequency 2^n, H^{t,q}
// and L^q become weighted l^2, B^t_{q,q} weighted l^q.
struct DtModelCheck {
  double eh_norm;
  double f2_norm;     // norm of d/dt h
  double mid_norm;    // F^{1+eps}_{p,q}(H^{2-2/q-4 eps, q}) of h
  double ratio;       // f2 / eh
  double eps;
};

double dt_model_eps(double q);

// nullopt for h = 0.
std::optional<DtModelCheck> dt_boundedness_check(const GridFunction& h, double p, double q,
                                                 const DyadicSystem& sys, int first_index = 1,
                                                 int nodes_per_cell = kDefaultNodesPerCell);

// Traces at 0 of R0 = 2 ext_{1,A0} - ext_{1,2A0} and R1 = (ext_{1,A1} - ext_{1,2A1}) A1^{-1}
// and of their time derivatives, from the closed forms (1+tA)^{-1}.
struct BiorthogonalTraces {
  CVec r0, dr0, r1, dr1;
};
BiorthogonalTraces biorthogonal_traces(const PositiveOperator& a0, const PositiveOperator& a1, const CVec& h0,
                                       const CVec& h1);

}  // namespace wtrace
