#include "wtrace/spaces.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wtrace {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Row-wise l^q norm of a nonnegative table.
Vec row_lq(const Mat& t, double q) {
  if (std::isinf(q)) return t.rowwise().maxCoeff();
  if (q == 1.0) return t.rowwise().sum();
  if (q == 2.0) return t.rowwise().norm();
  return t.array().pow(q).rowwise().sum().pow(1.0 / q);
}

double vec_lq(const Vec& v, double q) { return row_lq(v.transpose(), q)(0); }

void check_q(double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("summability exponent q must be >= 1");
}

}  // namespace

InnerSpace::InnerSpace(Variant v) : v_(std::move(v)) {}

InnerSpace InnerSpace::scalar(Index dim) {
  if (dim < 1) throw std::invalid_argument("inner dimension must be positive");
  return InnerSpace(ScalarInner{dim});
}

InnerSpace InnerSpace::graph_norm(const PositiveOperator& op, double alpha) {
  return InnerSpace(GraphNormInner{op, alpha});
}

InterpQuadSpec inner_interp_quad(double alpha, const PositiveOperator& op) {
  InterpQuadSpec q;
  q.sigma_min = 1e-4 * op.min_eigenvalue();
  q.sigma_max = 1e4 * op.max_eigenvalue();
  q.nodes_per_decade = 8;
  q.m = default_interp_order(alpha);
  return q;
}

InnerSpace InnerSpace::interp_norm(const PositiveOperator& op, double alpha, double r, std::optional<int> m,
                                   std::optional<InterpQuadSpec> quad) {
  InterpQuadSpec qs = quad.value_or(inner_interp_quad(alpha, op));
  if (m) qs.m = *m;
  InnerSpace out(InterpNormInner{op, alpha, r, qs});
  out.engine_ = std::make_shared<const InterpNormEngine>(op, alpha, r, qs, InterpRoute::resolvent);
  return out;
}

InnerSpace InnerSpace::sequence_besov(double t, double r, double z, double base, int first_index) {
  check_q(z);
  if (!(base > 0.0)) throw std::invalid_argument("sequence base must be positive");
  return InnerSpace(SequenceBesovInner{t, r, z, base, first_index});
}

std::optional<Index> InnerSpace::dim() const {
  return std::visit(overloaded{[](const ScalarInner& s) -> std::optional<Index> { return s.dim; },
                               [](const GraphNormInner& g) -> std::optional<Index> { return g.op.dim(); },
                               [](const InterpNormInner& i) -> std::optional<Index> { return i.op.dim(); },
                               [](const SequenceBesovInner&) -> std::optional<Index> { return std::nullopt; }},
                    v_);
}

std::string InnerSpace::describe() const {
  std::ostringstream os;
  std::visit(overloaded{[&](const ScalarInner& s) { os << "C^" << s.dim; },
                        [&](const GraphNormInner& g) { os << "D(A^" << g.alpha << ")"; },
                        [&](const InterpNormInner& i) { os << "D_A(" << i.alpha << "," << i.r << ")"; },
                        [&](const SequenceBesovInner& b) { os << "B^" << b.t << "_{" << b.r << "," << b.z << "}"; }},
             v_);
  return os.str();
}

Vec InnerSpace::pointwise_norms(const CMat& values) const {
  if (auto d = dim(); d && *d != values.cols())
    throw std::invalid_argument("inner value dimension does not match inner space");
  return std::visit(
      overloaded{[&](const ScalarInner&) -> Vec { return values.rowwise().norm(); },
                 [&](const GraphNormInner& g) -> Vec {
                   const Eigen::RowVectorXd w = g.op.eigenvalues().array().pow(2.0 * g.alpha).transpose();
                   const Mat a2 = values.cwiseAbs2();
                   return a2.rowwise().sum().cwiseSqrt() + (a2.array().rowwise() * w.array()).rowwise().sum().sqrt().matrix();
                 },
                 [&](const InterpNormInner&) -> Vec { return engine_->norms(values.cwiseAbs2()); },
                 [&](const SequenceBesovInner& b) -> Vec {
                   Eigen::RowVectorXd w(values.cols());
                   for (Index n = 0; n < values.cols(); ++n) w(n) = std::pow(b.base, b.t * double(n + b.first_index));
                   const Mat a = values.cwiseAbs().array().rowwise() * w.array();
                   return row_lq(a, b.z);
                 }},
      v_);
}

double InnerSpace::norm(const CVec& x) const { return pointwise_norms(x.transpose())(0); }

const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::Lp: return "Lp";
    case SpaceKind::B: return "B";
    case SpaceKind::F: return "F";
    case SpaceKind::H: return "H";
    case SpaceKind::W: return "W";
  }
  return "?";
}

void SpaceSpec::validate() const {
  if (!(gamma > -1.0)) throw std::invalid_argument("weight exponent must exceed -1");
  if (!(p >= 1.0)) throw std::invalid_argument("integrability exponent must be >= 1");
  if (kind == SpaceKind::B || kind == SpaceKind::F) {
    if (!q) throw std::invalid_argument("q missing for B/F space");
    check_q(*q);
  }
  if (kind == SpaceKind::W && (s < 0.0 || s != std::floor(s)))
    throw std::invalid_argument("W space needs a nonnegative integer smoothness");
}

SpaceSpec lebesgue(double p, double gamma, InnerSpace inner) {
  return {SpaceKind::Lp, 0.0, p, std::nullopt, gamma, std::move(inner)};
}
SpaceSpec besov(double s, double p, double q, double gamma, InnerSpace inner) {
  return {SpaceKind::B, s, p, q, gamma, std::move(inner)};
}
SpaceSpec triebel(double s, double p, double q, double gamma, InnerSpace inner) {
  return {SpaceKind::F, s, p, q, gamma, std::move(inner)};
}
SpaceSpec bessel(double s, double p, double gamma, InnerSpace inner) {
  return {SpaceKind::H, s, p, std::nullopt, gamma, std::move(inner)};
}
SpaceSpec sobolev(int m, double p, double gamma, InnerSpace inner) {
  return {SpaceKind::W, double(m), p, std::nullopt, gamma, std::move(inner)};
}

BlockProfile::BlockProfile(const GridFunction& f, const DyadicSystem& sys,
                           std::shared_ptr<const WeightedQuadrature> quad)
    : quad_(std::move(quad)) {
  if (!(f.grid() == quad_->grid())) throw std::invalid_argument("function lives on a different grid");
  if (f.max_frequency() > sys.band_limit())
    throw std::invalid_argument("function is not band-limited below 2^K");
  values_.resize(sys.max_block() + 1);
  for (int k = 0; k <= sys.max_block(); ++k) {
    const GridFunction b = apply_block(sys, k, f);
    if (b.size() > 0) values_[k] = quad_->evaluate(b);
  }
}

Mat BlockProfile::norms(const InnerSpace& inner) const {
  Mat t = Mat::Zero(quad_->size(), blocks());
  for (int k = 0; k < blocks(); ++k)
    if (active(k)) t.col(k) = inner.pointwise_norms(values_[k]);
  return t;
}

double assemble_norm(SpaceKind kind, const Mat& block_norms, const WeightedQuadrature& quad, double s, double p,
                     double q) {
  check_q(q);
  Mat scaled = block_norms;
  for (Index k = 0; k < scaled.cols(); ++k) scaled.col(k) *= std::exp2(s * double(k));
  if (kind == SpaceKind::F) return quad.lp_norm(row_lq(scaled, q), p);
  if (kind != SpaceKind::B) throw std::invalid_argument("assemble_norm handles B and F only");
  Vec per_block(scaled.cols());
  for (Index k = 0; k < scaled.cols(); ++k) per_block(k) = quad.lp_norm(scaled.col(k), p);
  return vec_lq(per_block, q);
}

double space_norm(const GridFunction& f, const SpaceSpec& spec, const DyadicSystem& sys, int nodes_per_cell) {
  spec.validate();
  auto quad = std::make_shared<const WeightedQuadrature>(f.grid(), spec.gamma, nodes_per_cell);
  auto lp = [&](const GridFunction& g) { return quad->lp_norm(spec.inner.pointwise_norms(quad->evaluate(g)), spec.p); };
  switch (spec.kind) {
    case SpaceKind::Lp: return lp(f);
    case SpaceKind::H:
      return lp(f.multiplied([s = spec.s](double xi) { return std::pow(1.0 + xi * xi, 0.5 * s); }));
    case SpaceKind::W: {
      double total = 0.0;
      for (int j = 0; j <= int(spec.s); ++j) total += lp(f.derivative(j));
      return total;
    }
    case SpaceKind::B:
    case SpaceKind::F: {
      const BlockProfile prof(f, sys, quad);
      return assemble_norm(spec.kind, prof.norms(spec.inner), *quad, spec.s, spec.p, *spec.q);
    }
  }
  throw std::logic_error("unhandled space kind");
}

double norm_equivalence_ratio(const GridFunction& f, const SpaceSpec& spec, int m, const DyadicSystem& sys,
                              int nodes_per_cell) {
  if (spec.kind != SpaceKind::F) throw std::invalid_argument("norm equivalence is stated for F spaces");
  spec.validate();
  if (!(spec.s > 0.0) || !(double(m) > spec.s)) throw std::invalid_argument("need s > 0 and m > s");
  if (!(spec.gamma < spec.p - 1.0)) throw std::invalid_argument("weight outside A_p");
  const double num = space_norm(f, lebesgue(spec.p, spec.gamma, spec.inner), sys, nodes_per_cell) +
                     difference_seminorm(f, spec.s, spec.p, *spec.q, spec.gamma, m, nodes_per_cell);
  return num / space_norm(f, spec, sys, nodes_per_cell);
}

}  // namespace wtrace
