#include "wtrace/trace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace wtrace {

namespace {

void check_positive_ratio_inputs(double num, double den) {
  if (!(den > 0.0)) throw std::domain_error("zero denominator");
  if (!std::isfinite(num)) throw std::domain_error("target norm is not finite");
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace

void TraceProblem::validate() const {
  if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("p must lie in (1, inf)");
  if (!(q >= 1.0) || !(r >= 1.0)) throw std::invalid_argument("q and r must be >= 1");
  if (!(gamma > -1.0)) throw std::invalid_argument("weight exponent must exceed -1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(s < threshold() && threshold() < s + alpha))
    throw std::invalid_argument("need s < (1+gamma)/p < s + alpha");
}

// ---- Hardy-Young ----

double StepFunction::operator()(double t) const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (t >= breaks[i] && t < breaks[i + 1]) return values[i];
  return 0.0;
}

double StepFunction::primitive(double t) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (t <= breaks[i]) break;
    acc += values[i] * (std::min(t, breaks[i + 1]) - breaks[i]);
  }
  return acc;
}

StepFunction random_step_function(std::uint64_t seed, int pieces) {
  if (pieces < 1) throw std::invalid_argument("need at least one piece");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> width(0.05, 1.0), value(0.0, 1.0);
  StepFunction f;
  f.breaks.push_back(0.0);
  for (int i = 0; i < pieces; ++i) {
    f.breaks.push_back(f.breaks.back() + width(rng));
    const double v = value(rng);
    f.values.push_back(v < 0.15 ? 0.0 : v);  // some gaps
  }
  return f;
}

HardyYoung hardy_young_check(const StepFunction& f, double beta, double p) {
  if (!(beta > 0.0) || !(p >= 1.0)) throw std::invalid_argument("need beta > 0 and p >= 1");
  if (f.breaks.size() != f.values.size() + 1 || f.breaks.empty() || f.breaks[0] != 0.0)
    throw std::invalid_argument("malformed step function");
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] < 0.0) throw std::invalid_argument("step function has negative values");
    if (!(f.breaks[i + 1] > f.breaks[i])) throw std::invalid_argument("breaks must increase");
  }
  const double bp = beta * p;
  const double c = p - bp;  // exponent of s in s^{p-bp-1}
  const auto power_piece = [&](double a, double b) {
    if (c == 0.0) return std::log(b / a);
    if (a == 0.0) return c > 0.0 ? std::pow(b, c) / c : kInf;
    return (std::pow(b, c) - std::pow(a, c)) / c;
  };

  double rhs = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (f.values[i] > 0.0) rhs += std::pow(f.values[i], p) * power_piece(f.breaks[i], f.breaks[i + 1]);
  rhs /= std::pow(beta, p);

  static const GaussRule gl = gauss_legendre(24);
  double lhs = 0.0;
  double prim = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double a = f.breaks[i], b = f.breaks[i + 1], v = f.values[i];
    if (i == 0) {
      if (v > 0.0) lhs += std::pow(v, p) * power_piece(0.0, b);
    } else if (prim > 0.0 || v > 0.0) {
      // geometric subpieces keep b/a <= 2 so the Gauss rule stays accurate
      double lo = a;
      while (lo < b) {
        const double hi = std::min(b, 2.0 * lo);
        for (Index k = 0; k < gl.nodes.size(); ++k) {
          const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes(k);
          lhs += 0.5 * (hi - lo) * gl.weights(k) * std::pow(t, -bp - 1.0) * std::pow(prim + v * (t - a), p);
        }
        lo = hi;
      }
    }
    prim += v * (b - a);
  }
  if (prim > 0.0) lhs += std::pow(prim, p) * std::pow(f.breaks.back(), -bp) / bp;
  return {lhs, rhs, lhs <= rhs * (1.0 + 1e-9)};
}

// ---- orbits ----

CVec trace_at_zero(const GridFunction& u) { return u.value_at_zero(); }

CVec trace_at_zero(const OrbitFunction& u) { return u.exact_trace ? *u.exact_trace : u.u.value_at_zero(); }

double window(double t, double half_width) {
  return smooth_step((0.9 * half_width - std::abs(t)) / (0.4 * half_width));
}

GridFunction project_band_limited(const std::function<CVec(double)>& fn, Index dim, const GridSpec& grid,
                                  double band) {
  const int n = grid.n_samples();
  CMat samples(n, dim);
  for (int i = 0; i < n; ++i) {
    const double t = grid.point(i);
    const double w = window(t, grid.half_width());
    if (w == 0.0) {
      samples.row(i).setZero();
      continue;
    }
    const CVec v = fn(t);
    if (v.size() != dim) throw std::invalid_argument("orbit value has wrong dimension");
    samples.row(i) = w * v.transpose();
  }
  thread_local Eigen::FFT<double> fft;
  std::vector<int> modes;
  for (int m = -grid.max_mode(); m <= grid.max_mode(); ++m)
    if (std::abs(grid.frequency(m)) < band) modes.push_back(m);
  CMat c(Index(modes.size()), dim);
  std::vector<Complex> in(n), out;
  for (Index j = 0; j < dim; ++j) {
    for (int i = 0; i < n; ++i) in[i] = samples(i, j);
    fft.fwd(out, in);
    // t_i = -L + i h puts a factor (-1)^m on mode m
    for (std::size_t r = 0; r < modes.size(); ++r) {
      const int m = modes[r];
      const Complex v = out[(m + n) % n] / double(n);
      c(Index(r), j) = (m % 2 == 0) ? v : -v;
    }
  }
  return GridFunction(grid, std::move(modes), std::move(c));
}

int admissible_order(const TraceProblem& pb) {
  return int(std::ceil(std::max(pb.s + pb.alpha + 1.0, pb.alpha + 1.0) - 1e-12));
}

ExtensionChoice select_extension(const TraceProblem& pb, std::optional<int> m) {
  ExtensionChoice e;
  e.m = m.value_or(admissible_order(pb));
  if (e.m < admissible_order(pb)) throw std::invalid_argument("extension order below max(s+alpha+1, alpha+1)");
  const double edge = pb.threshold() - 1.0;
  if (pb.s <= edge) {
    e.twist = 1;
    while (!(pb.s + e.twist > edge)) ++e.twist;
  }
  return e;
}

int minimal_resolvent_power(const TraceProblem& pb, const ExtensionChoice& e) {
  int j = std::max(1, e.twist + 1);
  while (!(double(j) > pb.threshold() - pb.s)) ++j;
  return j;
}

OrbitFunction ext_resolvent(const PositiveOperator& a, int j, const ExtensionChoice& e, const CVec& x,
                            const GridSpec& grid, double band) {
  if (j < 1) throw std::invalid_argument("resolvent power must be >= 1");
  if (j < e.twist + 1) throw std::invalid_argument("resolvent power too small for the twisted extension");
  detail::check_dim(a, x.size());
  const HalfLineExtension ext(e.order(), e.twist);
  const Vec lambda = a.eigenvalues();
  const auto half = [&](double t) -> CVec {
    return (x.array() * (1.0 + t * lambda.array()).pow(-double(j)).cast<Complex>()).matrix();
  };
  OrbitFunction out{project_band_limited([&](double t) { return ext(half, t); }, x.size(), grid, band),
                    ext(half, 0.0), "ext_resolvent"};
  return out;
}

OrbitFunction ext_resolvent(const TraceProblem& pb, const PositiveOperator& a, int j, int m, const CVec& x,
                            const TraceContext& ctx) {
  pb.validate();
  const ExtensionChoice e = select_extension(pb, m);
  if (j < minimal_resolvent_power(pb, e)) throw std::invalid_argument("resolvent power too small");
  return ext_resolvent(a, j, e, x, ctx.grid, ctx.sys.band_limit());
}

OrbitFunction semigroup_orbit(const PositiveOperator& a, const ExtensionChoice& e, const CVec& x,
                              const GridSpec& grid, double band) {
  detail::check_dim(a, x.size());
  const HalfLineExtension ext(e.order(), e.twist);
  const auto half = [&](double t) -> CVec { return semigroup_apply(a, t, x); };
  return {project_band_limited([&](double t) { return ext(half, t); }, x.size(), grid, band), ext(half, 0.0),
          "semigroup_orbit"};
}

// ---- continuity harness ----

double target_norm(const PositiveOperator& a, double theta, double exponent, const CVec& x,
                   const TraceContext& ctx) {
  InterpQuadSpec q = ctx.target_quad;
  q.m = default_interp_order(theta);
  return InterpNormEngine(a, theta, exponent, q)(x);
}

std::vector<Mat> intersection_norms(const GridFunction& u, std::span<const SpaceKind> kinds, const TraceProblem& pb,
                                    const PositiveOperator& a, std::span<const double> qs,
                                    std::span<const double> rs, const TraceContext& ctx) {
  auto quad = std::make_shared<const WeightedQuadrature>(u.grid(), pb.gamma, ctx.nodes_per_cell);
  const BlockProfile prof(u, ctx.sys, quad);
  const Mat plain = prof.norms(InnerSpace::scalar(u.dim()));
  std::vector<Mat> out(kinds.size(), Mat(Index(qs.size()), Index(rs.size())));
  for (std::size_t c = 0; c < rs.size(); ++c) {
    const Mat inner = prof.norms(InnerSpace::interp_norm(a, pb.alpha, rs[c]));
    for (std::size_t k = 0; k < kinds.size(); ++k)
      for (std::size_t r = 0; r < qs.size(); ++r)
        out[k](Index(r), Index(c)) = assemble_norm(kinds[k], plain, *quad, pb.s + pb.alpha, pb.p, qs[r]) +
                                     assemble_norm(kinds[k], inner, *quad, pb.s, pb.p, qs[r]);
  }
  return out;
}

Mat intersection_norms(const GridFunction& u, SpaceKind kind, const TraceProblem& pb, const PositiveOperator& a,
                       std::span<const double> qs, std::span<const double> rs, const TraceContext& ctx) {
  const SpaceKind k[] = {kind};
  return intersection_norms(u, k, pb, a, qs, rs, ctx)[0];
}

double trace_continuity_ratio(const TraceProblem& pb, const PositiveOperator& a, const OrbitFunction& u,
                              SpaceKind kind, const TraceContext& ctx) {
  if (kind != SpaceKind::F && kind != SpaceKind::B) throw std::invalid_argument("trace harness takes B or F");
  const double q[] = {pb.q}, r[] = {pb.r};
  const double den = intersection_norms(u.u, kind, pb, a, q, r, ctx)(0, 0);
  const double num = target_norm(a, pb.theta(), kind == SpaceKind::F ? pb.p : pb.q, trace_at_zero(u), ctx);
  check_positive_ratio_inputs(num, den);
  return num / den;
}

std::vector<OrbitFunction> trace_family(const TraceProblem& pb, const PositiveOperator& a, int count,
                                        std::uint64_t seed, const TraceContext& ctx) {
  pb.validate();
  static const double bands[] = {2.0, 4.0, 8.0, 16.0, 32.0};
  const ExtensionChoice e = select_extension(pb);
  const int j0 = minimal_resolvent_power(pb, e);
  std::vector<OrbitFunction> out;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed + std::uint64_t(i);
    if (i % 2 == 0) {
      std::mt19937_64 rng(s);
      std::normal_distribution<double> normal(0.0, 1.0);
      CVec x(a.dim());
      for (Index k = 0; k < x.size(); ++k) {
        const double re = normal(rng);
        x(k) = Complex(re, normal(rng));
      }
      OrbitFunction o = ext_resolvent(a, j0 + (i / 2) % 2, e, x, ctx.grid, ctx.sys.band_limit());
      o.label = "ext_resolvent/" + std::to_string(i);
      out.push_back(std::move(o));
    } else {
      const double b = bands[(i / 2) % 5];
      out.push_back({random_band_limited(s, -b, b, ctx.grid, a.dim()), std::nullopt,
                     "band_limited/" + std::to_string(i)});
    }
  }
  return out;
}

void RatioWindow::add(double v) {
  min = std::min(min, v);
  max = std::max(max, v);
  ++members;
}

std::vector<WindowTable> trace_family_windows(const TraceProblem& pb, const PositiveOperator& a,
                                              const std::vector<OrbitFunction>& family,
                                              std::span<const SpaceKind> kinds, std::span<const double> qs,
                                              std::span<const double> rs, const TraceContext& ctx) {
  std::vector<WindowTable> w(kinds.size(), WindowTable(qs.size(), std::vector<RatioWindow>(rs.size())));
  for (const auto& u : family) {
    const std::vector<Mat> den = intersection_norms(u.u, kinds, pb, a, qs, rs, ctx);
    const CVec x = trace_at_zero(u);
    const double f_target = target_norm(a, pb.theta(), pb.p, x, ctx);
    for (std::size_t k = 0; k < kinds.size(); ++k)
      for (std::size_t i = 0; i < qs.size(); ++i) {
        // the F target ignores (q, r); the B target follows q
        const double num = kinds[k] == SpaceKind::F ? f_target : target_norm(a, pb.theta(), qs[i], x, ctx);
        for (std::size_t j = 0; j < rs.size(); ++j) {
          check_positive_ratio_inputs(num, den[k](Index(i), Index(j)));
          w[k][i][j].add(num / den[k](Index(i), Index(j)));
        }
      }
  }
  return w;
}

RightInverseCheck right_inverse_norm_check(const TraceProblem& pb, const PositiveOperator& a, const CVec& x, int j,
                                           int m, const TraceContext& ctx) {
  TraceProblem small = pb;
  small.q = 1.0;
  small.r = 1.0;
  small.validate();
  if (!(pb.gamma < pb.p - 1.0)) throw std::invalid_argument("right inverse needs gamma < p - 1");
  const OrbitFunction u = ext_resolvent(small, a, j, m, x, ctx);
  RightInverseCheck out;
  out.extension = select_extension(small, m);
  out.trace_error = (trace_at_zero(u) - x).cwiseAbs().maxCoeff();
  out.interp_value = target_norm(a, small.theta(), small.p, x, ctx);
  const double one[] = {1.0};
  out.intersection_value = intersection_norms(u.u, SpaceKind::F, small, a, one, one, ctx)(0, 0);
  if (!(out.interp_value > 0.0)) throw std::domain_error("zero denominator");
  out.ratio = out.intersection_value / out.interp_value;
  return out;
}

std::optional<OrbitCheck> semigroup_orbit_check(const PositiveOperator& a, const TraceProblem& pb,
                                                double theta_inner, const CVec& x, const TraceContext& ctx) {
  pb.validate();
  if (!(a.min_eigenvalue() > 0.0)) throw std::invalid_argument("semigroup is not exponentially stable");
  if (!(theta_inner >= 0.0 && theta_inner < 1.0)) throw std::invalid_argument("theta must lie in [0, 1)");
  if (x.cwiseAbs().maxCoeff() == 0.0) return std::nullopt;
  const OrbitFunction u = semigroup_orbit(a, select_extension(pb), x, ctx.grid, ctx.sys.band_limit());

  auto quad = std::make_shared<const WeightedQuadrature>(ctx.grid, pb.gamma, ctx.nodes_per_cell);
  const BlockProfile prof(u.u, ctx.sys, quad);
  const double outer = assemble_norm(SpaceKind::F, prof.norms(InnerSpace::scalar(x.size())), *quad,
                                     pb.s + pb.alpha, pb.p, 1.0);
  const InnerSpace inner = InnerSpace::interp_norm(a, (1.0 - theta_inner) * pb.alpha, 1.0);
  const double mixed =
      assemble_norm(SpaceKind::F, prof.norms(inner), *quad, pb.s + theta_inner * pb.alpha, pb.p, 1.0);
  OrbitCheck c;
  c.orbit_norm = outer + mixed;
  c.interp_value = target_norm(a, pb.theta(), pb.p, x, ctx);
  c.ratio = c.orbit_norm / c.interp_value;
  return c;
}

Rational reparametrized_theta(Rational s, Rational alpha, Rational p, Rational gamma, Rational beta) {
  return (s + alpha - (Rational(1) + gamma) / p) * beta / alpha;
}

PositiveOperator reparametrized_operator(const PositiveOperator& a, double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("alpha and beta must be positive");
  return a.power(beta / alpha);
}

}  // namespace wtrace
