#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wtrace/extension.hpp"
#include "wtrace/operators.hpp"
#include "wtrace/rational.hpp"
#include "wtrace/spaces.hpp"

namespace wtrace {

// Parameters of tr_0 on F^{s+alpha}_{p,q}(X) cap F^s_{p,q}(D_A(alpha, r)).
struct TraceProblem {
  double s = 0.0;
  double alpha = 1.0;
  double p = 2.0;
  double q = kInf;
  double r = kInf;
  double gamma = 0.0;

  double threshold() const { return (1.0 + gamma) / p; }
  double theta() const { return s + alpha - threshold(); }
  // s < (1+gamma)/p < s + alpha, p in (1, inf), gamma > -1, q, r >= 1.
  void validate() const;
};

// Grid, dyadic system and quadrature shared by the harness.
struct TraceContext {
  GridSpec grid{1.0, 1024};
  DyadicSystem sys{8};
  int nodes_per_cell = kDefaultNodesPerCell;
  InterpQuadSpec target_quad{};  // m is replaced by floor(theta)+1
};

// ---- Hardy-Young ----

// f = values[i] on [breaks[i], breaks[i+1]), zero beyond breaks.back(); breaks[0] = 0.
struct StepFunction {
  std::vector<double> breaks;
  std::vector<double> values;

  double operator()(double t) const;
  // int_0^t f
  double primitive(double t) const;
};

StepFunction random_step_function(std::uint64_t seed, int pieces = 12);

struct HardyYoung {
  double lhs;
  double rhs;
  bool pass;
};

// lhs = int_0^inf s^{-beta p - 1} (int_0^s f)^p ds, rhs = beta^{-p} int_0^inf s^{p - beta p - 1} f^p ds.
HardyYoung hardy_young_check(const StepFunction& f, double beta, double p);

// ---- orbits and the right inverse ----

struct OrbitFunction {
  GridFunction u;
  std::optional<CVec> exact_trace;  // value of the unprojected closure at t = 0
  std::string label;
};

CVec trace_at_zero(const GridFunction& u);
CVec trace_at_zero(const OrbitFunction& u);

// Smooth cutoff: 1 on |t| <= L/2, 0 for |t| >= 0.9 L.
double window(double t, double half_width);

// Samples window * fn on the grid and keeps the modes with |xi| < band.
GridFunction project_band_limited(const std::function<CVec(double)>& fn, Index dim, const GridSpec& grid,
                                  double band);

// Plain E_+^m (twist 0) or E_+^{m+k,k}; `order` is the Vandermonde order m+k.
struct ExtensionChoice {
  int m = 1;
  int twist = 0;
  int order() const { return m + twist; }
};

// Smallest integer m >= max(s+alpha+1, alpha+1).
int admissible_order(const TraceProblem& pb);
// Twist k >= 1 minimal with s + k > (1+gamma)/p - 1 when s <= (1+gamma)/p - 1, else 0.
ExtensionChoice select_extension(const TraceProblem& pb, std::optional<int> m = std::nullopt);
// Smallest j with j > (1+gamma)/p - s and j >= twist + 1.
int minimal_resolvent_power(const TraceProblem& pb, const ExtensionChoice& e);

// u(t) = E_+[(1 + tA)^{-j} x], windowed and band-limited.
OrbitFunction ext_resolvent(const PositiveOperator& a, int j, const ExtensionChoice& e, const CVec& x,
                            const GridSpec& grid, double band);
OrbitFunction ext_resolvent(const TraceProblem& pb, const PositiveOperator& a, int j, int m, const CVec& x,
                            const TraceContext& ctx = {});

// u(t) = E_+[T(t) x], windowed and band-limited.
OrbitFunction semigroup_orbit(const PositiveOperator& a, const ExtensionChoice& e, const CVec& x,
                              const GridSpec& grid, double band);

// ---- continuity harness ----

// D_A(theta, target_exponent) norm of x with m = floor(theta)+1.
double target_norm(const PositiveOperator& a, double theta, double exponent, const CVec& x,
                   const TraceContext& ctx = {});

// Intersection norms A^{s+alpha}_{p,q}(C^d) + A^s_{p,q}(D_A(alpha, r)) of one function for
// every (q, r) in qs x rs, A in {B, F}. One block profile serves the whole table.
Mat intersection_norms(const GridFunction& u, SpaceKind kind, const TraceProblem& pb, const PositiveOperator& a,
                       std::span<const double> qs, std::span<const double> rs, const TraceContext& ctx = {});
// Same for several kinds at once, one table per kind.
std::vector<Mat> intersection_norms(const GridFunction& u, std::span<const SpaceKind> kinds, const TraceProblem& pb,
                                    const PositiveOperator& a, std::span<const double> qs,
                                    std::span<const double> rs, const TraceContext& ctx = {});

// F case: D_A(theta, p) norm of tr_0 u over the intersection norm with pb.q, pb.r.
// B case: target D_A(theta, q).
double trace_continuity_ratio(const TraceProblem& pb, const PositiveOperator& a, const OrbitFunction& u,
                              SpaceKind kind = SpaceKind::F, const TraceContext& ctx = {});

// Orbits of the resolvent construction and band-limited data, seeds base+i.
std::vector<OrbitFunction> trace_family(const TraceProblem& pb, const PositiveOperator& a, int count,
                                        std::uint64_t seed, const TraceContext& ctx = {});

struct RatioWindow {
  double min = kInf;
  double max = 0.0;
  int members = 0;
  void add(double v);
};

using WindowTable = std::vector<std::vector<RatioWindow>>;

// Per (q, r) ratio windows over a family, one table per kind: rows follow qs, columns rs.
std::vector<WindowTable> trace_family_windows(const TraceProblem& pb, const PositiveOperator& a,
                                              const std::vector<OrbitFunction>& family,
                                              std::span<const SpaceKind> kinds, std::span<const double> qs,
                                              std::span<const double> rs, const TraceContext& ctx = {});

struct RightInverseCheck {
  double interp_value;        // D_A(theta, p) norm of x
  double intersection_value;  // F^{s+alpha}_{p,1}(X) + F^s_{p,1}(D_A(alpha, 1)) norm of ext x
  double ratio;               // intersection / interp
  double trace_error;         // max |tr_0 ext x - x|, exact closure
  ExtensionChoice extension;
};

RightInverseCheck right_inverse_norm_check(const TraceProblem& pb, const PositiveOperator& a, const CVec& x, int j,
                                           int m, const TraceContext& ctx = {});

struct OrbitCheck {
  double orbit_norm;    // F^{s+alpha}_{p,1}(X) + F^{s+theta alpha}_{p,1}(D_A((1-theta)alpha, 1)) of E_+ T(.)x
  double interp_value;  // D_A(s+alpha-(1+gamma)/p, p) norm of x
  double ratio;
};

// nullopt for x = 0. The norm over R_+ is bounded above by the norm of the concrete extension.
std::optional<OrbitCheck> semigroup_orbit_check(const PositiveOperator& a, const TraceProblem& pb,
                                                double theta_inner, const CVec& x, const TraceContext& ctx = {});

// theta' = (s + alpha - (1+gamma)/p) beta / alpha, exact.
Rational reparametrized_theta(Rational s, Rational alpha, Rational p, Rational gamma, Rational beta);
// A^{beta/alpha}; D_A(beta, r) = D_{A^{beta/alpha}}(alpha, r).
PositiveOperator reparametrized_operator(const PositiveOperator& a, double alpha, double beta);

}  // namespace wtrace
