#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wtrace/dyadic.hpp"
#include "wtrace/grid.hpp"
#include "wtrace/operators.hpp"

namespace wtrace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ScalarInner {
  Index dim = 1;
};
struct GraphNormInner {
  PositiveOperator op;
  double alpha;
};
struct InterpNormInner {
  PositiveOperator op;
  double alpha;
  double r;
  InterpQuadSpec quad;
};
// || (base^{t n} |a_n|)_n ||_{l^z}, n counted from first_index. The shared
// constant ||zeta||_{L^r} of the continuous model is dropped.
struct SequenceBesovInner {
  double t;
  double r;
  double z;
  double base;
  int first_index = 0;
};

// Inner space X for X-valued functions.
class InnerSpace {
 public:
  using Variant = std::variant<ScalarInner, GraphNormInner, InterpNormInner, SequenceBesovInner>;

  static InnerSpace scalar(Index dim = 1);
  static InnerSpace graph_norm(const PositiveOperator& op, double alpha);
  // m defaults to floor(alpha)+1; quadrature density is coarser than for standalone
  // interpolation norms since these are evaluated at every quadrature node.
  static InnerSpace interp_norm(const PositiveOperator& op, double alpha, double r,
                                std::optional<int> m = std::nullopt,
                                std::optional<InterpQuadSpec> quad = std::nullopt);
  static InnerSpace sequence_besov(double t, double r, double z, double base, int first_index = 0);

  const Variant& variant() const { return v_; }
  std::optional<Index> dim() const;
  std::string describe() const;

  // One norm per row of values.
  Vec pointwise_norms(const CMat& values) const;
  double norm(const CVec& x) const;

 private:
  explicit InnerSpace(Variant v);
  Variant v_;
  std::shared_ptr<const InterpNormEngine> engine_;
};

InterpQuadSpec inner_interp_quad(double alpha, const PositiveOperator& op);

enum class SpaceKind { Lp, B, F, H, W };
const char* to_string(SpaceKind k);

struct SpaceSpec {
  SpaceKind kind = SpaceKind::Lp;
  double s = 0.0;
  double p = 2.0;
  std::optional<double> q;
  double gamma = 0.0;
  InnerSpace inner = InnerSpace::scalar();

  void validate() const;
};

SpaceSpec lebesgue(double p, double gamma, InnerSpace inner = InnerSpace::scalar());
SpaceSpec besov(double s, double p, double q, double gamma, InnerSpace inner = InnerSpace::scalar());
SpaceSpec triebel(double s, double p, double q, double gamma, InnerSpace inner = InnerSpace::scalar());
SpaceSpec bessel(double s, double p, double gamma, InnerSpace inner = InnerSpace::scalar());
SpaceSpec sobolev(int m, double p, double gamma, InnerSpace inner = InnerSpace::scalar());

// Values of S_k f at the quadrature nodes, kept for reuse across inner spaces and (s, q).
class BlockProfile {
 public:
  BlockProfile(const GridFunction& f, const DyadicSystem& sys, std::shared_ptr<const WeightedQuadrature> quad);

  const WeightedQuadrature& quadrature() const { return *quad_; }
  int blocks() const { return int(values_.size()); }
  bool active(int k) const { return values_[k].size() > 0; }
  // nodes x (K+1); inactive blocks give zero columns.
  Mat norms(const InnerSpace& inner) const;

 private:
  std::shared_ptr<const WeightedQuadrature> quad_;
  std::vector<CMat> values_;
};

// B or F norm from a table of pointwise block norms.
double assemble_norm(SpaceKind kind, const Mat& block_norms, const WeightedQuadrature& quad, double s, double p,
                     double q);

double space_norm(const GridFunction& f, const SpaceSpec& spec, const DyadicSystem& sys,
                  int nodes_per_cell = kDefaultNodesPerCell);

// Difference seminorm [f]^{(m)}_{F^s_{p,q}} with the Euclidean norm on C^d.
double difference_seminorm(const GridFunction& f, double s, double p, double q, double gamma, int m,
                           int nodes_per_cell = kDefaultNodesPerCell);

double norm_equivalence_ratio(const GridFunction& f, const SpaceSpec& spec, int m, const DyadicSystem& sys,
                              int nodes_per_cell = kDefaultNodesPerCell);

}  // namespace wtrace
