#include "wtrace/embeddings.hpp"

#include <cmath>
#include <stdexcept>

namespace wtrace {

namespace {

SpaceSpec make_spec(SpaceKind kind, double s, double p, double q, double gamma, const InnerSpace& inner) {
  return {kind, s, p, q, gamma, inner};
}

double lq(const std::vector<double>& c, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (double v : c) acc += std::pow(std::abs(v), q);
  return std::pow(acc, 1.0 / q);
}

double power_sum(const std::vector<double>& c, double q) {
  if (std::isinf(q)) return lq(c, q);
  double acc = 0.0;
  for (double v : c) acc += std::pow(std::abs(v), q);
  return acc;
}

}  // namespace

void check_sobolev_hypotheses(const SmoothnessIndex& src, const SmoothnessIndex& dst) {
  if (!(src.p > 1.0 && src.p <= dst.p && std::isfinite(dst.p))) throw std::invalid_argument("need 1 < p0 <= p1 < inf");
  if (!(src.q >= 1.0 && dst.q >= 1.0)) throw std::invalid_argument("q must be >= 1");
  if (!(src.gamma > -1.0 && dst.gamma > -1.0)) throw std::invalid_argument("weight exponents must exceed -1");
  if (!(src.s > dst.s)) throw std::invalid_argument("need s0 > s1");
  if (src.gamma / src.p < dst.gamma / dst.p) throw std::invalid_argument("need gamma0/p0 >= gamma1/p1");
  const double d0 = src.s - (1.0 + src.gamma) / src.p;
  const double d1 = dst.s - (1.0 + dst.gamma) / dst.p;
  if (std::abs(d0 - d1) > 1e-12) throw std::invalid_argument("differential dimensions do not match");
}

double sobolev_embed_ratio(const GridFunction& f, const SmoothnessIndex& src, const SmoothnessIndex& dst,
                           const DyadicSystem& sys, int nodes_per_cell) {
  check_sobolev_hypotheses(src, dst);
  const InnerSpace x = InnerSpace::scalar(f.dim());
  const double den = space_norm(f, triebel(src.s, src.p, src.q, src.gamma, x), sys, nodes_per_cell);
  if (!(den > 0.0)) throw std::domain_error("zero denominator");
  return space_norm(f, triebel(dst.s, dst.p, dst.q, dst.gamma, x), sys, nodes_per_cell) / den;
}

std::vector<SobolevCase> sobolev_parameter_sets() {
  return {
      {"p2-g1-qinf-to-p2-g0-q1", {1.0, 2.0, kInf, 1.0}, {0.5, 2.0, 1.0, 0.0}},
      {"p2-to-p3-unweighted", {1.0, 2.0, 2.0, 0.0}, {5.0 / 6.0, 3.0, 2.0, 0.0}},
      {"p3-g1.5-qinf-to-p3-g0-q1", {1.0, 3.0, kInf, 1.5}, {0.5, 3.0, 1.0, 0.0}},
  };
}

double exponent_from_inverse(const Rational& inv) {
  if (inv.is_zero()) return kInf;
  if (inv < Rational(0)) throw std::invalid_argument("negative reciprocal exponent");
  return 1.0 / inv.to_double();
}

MixedDerivativeParams MixedDerivativeParams::make(Rational theta, double s, double alpha, Rational p0, Rational p1,
                                                  Rational inv_q0, Rational inv_q1, Rational gamma0,
                                                  Rational gamma1) {
  MixedDerivativeParams m;
  m.theta = theta;
  m.s = s;
  m.alpha = alpha;
  m.inv_p0 = p0.inverse();
  m.inv_p1 = p1.inverse();
  const Rational one(1);
  m.inv_p = (one - theta) * m.inv_p0 + theta * m.inv_p1;
  m.inv_q0 = inv_q0;
  m.inv_q1 = inv_q1;
  m.inv_q = (one - theta) * inv_q0 + theta * inv_q1;
  m.gamma0 = gamma0;
  m.gamma1 = gamma1;
  m.gamma = (one - theta) * gamma0 + theta * gamma1;
  return m;
}

void MixedDerivativeParams::validate() const {
  const Rational zero(0), one(1);
  if (!(zero < theta && theta < one)) throw std::invalid_argument("theta must lie in (0, 1)");
  for (const Rational& ip : {inv_p0, inv_p1, inv_p})
    if (!(zero < ip && ip < one)) throw std::invalid_argument("p exponents must lie in (1, inf)");
  for (const Rational& iq : {inv_q0, inv_q1, inv_q})
    if (iq < zero || one < iq) throw std::invalid_argument("q exponents must lie in [1, inf]");
  if ((one - theta) * inv_p0 + theta * inv_p1 != inv_p) throw std::invalid_argument("p relation violated");
  if ((one - theta) * inv_q0 + theta * inv_q1 != inv_q) throw std::invalid_argument("q relation violated");
  if ((one - theta) * gamma0 + theta * gamma1 != gamma) throw std::invalid_argument("weight relation violated");
  if (gamma0 <= -one || gamma1 <= -one) throw std::invalid_argument("weight exponents must exceed -1");
  if ((one - theta) * gamma0 * inv_p0 + theta * gamma1 * inv_p1 != gamma * inv_p)
    throw std::invalid_argument("weight relation needs p0 = p1 or gamma0 = gamma1");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(constant > 0.0)) throw std::invalid_argument("interpolation constant must be positive");
}

MixedDerivativeResult mixed_derivative_check(const GridFunction& f, const MixedDerivativeParams& prm,
                                             SpaceKind kind, const DyadicSystem& sys, int nodes_per_cell) {
  prm.validate();
  if (kind != SpaceKind::F && kind != SpaceKind::B) throw std::invalid_argument("mixed derivative check takes B or F");
  const double th = prm.theta.to_double();
  const auto p = [](const Rational& inv) { return 1.0 / inv.to_double(); };
  const double lhs = space_norm(f,
                                make_spec(kind, prm.s + (1.0 - th) * prm.alpha, p(prm.inv_p),
                                          exponent_from_inverse(prm.inv_q), prm.gamma.to_double(), prm.xt),
                                sys, nodes_per_cell);
  const double n0 = space_norm(f,
                               make_spec(kind, prm.s + prm.alpha, p(prm.inv_p0), exponent_from_inverse(prm.inv_q0),
                                         prm.gamma0.to_double(), prm.x0),
                               sys, nodes_per_cell);
  const double n1 = space_norm(
      f, make_spec(kind, prm.s, p(prm.inv_p1), exponent_from_inverse(prm.inv_q1), prm.gamma1.to_double(), prm.x1),
      sys, nodes_per_cell);
  const double rhs = prm.constant * std::pow(n0, 1.0 - th) * std::pow(n1, th);
  return {lhs, rhs, prm.exact_constant ? lhs <= rhs * (1.0 + 1e-9) : true};
}

double graph_chain_constant(const PositiveOperator& a, double theta) {
  if (a.dim() != 2) throw std::invalid_argument("graph chain constant needs a two-dimensional operator");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("theta must lie in (0, 1)");
  const double l1 = a.eigenvalues()(0), l2 = a.eigenvalues()(1);
  // |x| = 1 at angle phi; only |x_1|, |x_2| matter
  const auto g = [&](double phi) {
    const double c2 = std::cos(phi) * std::cos(phi), s2 = std::sin(phi) * std::sin(phi);
    const double nt = 1.0 + std::sqrt(std::pow(l1, 2.0 * theta) * c2 + std::pow(l2, 2.0 * theta) * s2);
    const double n1 = 1.0 + std::sqrt(l1 * l1 * c2 + l2 * l2 * s2);
    return nt / std::pow(n1, theta);
  };
  constexpr int scan = 2048;
  const double h = 0.5 * kPi / scan;
  int best = 0;
  for (int i = 1; i <= scan; ++i)
    if (g(i * h) > g(best * h)) best = i;
  double lo = std::max(0.0, (best - 1) * h), hi = std::min(0.5 * kPi, (best + 1) * h);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  for (int it = 0; it < 80; ++it) {
    if (g(x1) < g(x2)) {
      lo = x1;
      x1 = x2;
      x2 = lo + ratio * (hi - lo);
    } else {
      hi = x2;
      x2 = x1;
      x1 = hi - ratio * (hi - lo);
    }
  }
  return std::max({g(0.0), g(0.5 * kPi), g(0.5 * (lo + hi)), g(best * h)});
}

double CounterexampleSpec::base() const { return std::exp2(alpha / beta); }

double CounterexampleSpec::weight_exponent() const { return s + alpha / beta * t + alpha; }

void CounterexampleSpec::validate() const {
  if (!(alpha > 0.0 && beta > 0.0)) throw std::invalid_argument("alpha and beta must be positive");
  if (!(p > 1.0 && std::isfinite(p) && r > 1.0 && std::isfinite(r))) throw std::invalid_argument("p, r must lie in (1, inf)");
  if (!(u >= 1.0 && u < q)) throw std::invalid_argument("need 1 <= u < q");
}

CounterexampleSpec all_ones(CounterexampleSpec spec, int n) {
  if (n < 1) throw std::invalid_argument("need at least one coefficient");
  const double e = spec.weight_exponent();
  spec.a.resize(n);
  for (int j = 1; j <= n; ++j) spec.a[j - 1] = std::exp2(-e * j);
  return spec;
}

CounterexampleNorms counterexample_norms(const CounterexampleSpec& spec, double theta) {
  spec.validate();
  const double e = spec.weight_exponent(), rr = spec.base();
  std::vector<double> c, tr, s0r, s1r;
  for (std::size_t i = 0; i < spec.a.size(); ++i) {
    const double j = double(i + 1), a = spec.a[i];
    c.push_back(std::exp2(e * j) * a);
    tr.push_back(std::exp2((spec.s + (1.0 - theta) * spec.alpha) * j) * std::pow(rr, (spec.t + theta * spec.beta) * j) * a);
    s0r.push_back(std::exp2((spec.s + spec.alpha) * j) * std::pow(rr, spec.t * j) * a);
    s1r.push_back(std::exp2(spec.s * j) * std::pow(rr, (spec.t + spec.beta) * j) * a);
  }
  CounterexampleNorms out;
  out.target = lq(c, spec.u);
  out.source0 = lq(c, spec.q);
  out.source1 = out.source0;
  out.target_r_form = lq(tr, spec.u);
  out.source0_r_form = lq(s0r, spec.q);
  out.source1_r_form = lq(s1r, spec.q);
  out.target_power_sum = power_sum(c, spec.u);
  out.source_power_sum = power_sum(c, spec.q);
  return out;
}

const char* to_string(ElementaryPair e) {
  switch (e) {
    case ElementaryPair::h_sandwich: return "H-sandwich";
    case ElementaryPair::w_sandwich: return "W-sandwich";
    case ElementaryPair::bf_sandwich: return "BF-sandwich";
    case ElementaryPair::q_monotone: return "q-monotone";
  }
  return "?";
}

std::vector<double> elementary_embed_check(const GridFunction& f, ElementaryPair pair, const ElementaryParams& prm,
                                           const DyadicSystem& sys, int nodes_per_cell) {
  const InnerSpace x = InnerSpace::scalar(f.dim());
  const auto norm = [&](const SpaceSpec& sp) { return space_norm(f, sp, sys, nodes_per_cell); };
  const auto need_ap = [&] {
    if (!(prm.gamma < prm.p - 1.0))
      throw std::invalid_argument("embedding into F_{p,inf} needs gamma < p - 1");
  };
  switch (pair) {
    case ElementaryPair::h_sandwich: {
      need_ap();
      const double mid = norm(bessel(prm.s, prm.p, prm.gamma, x));
      return {mid / norm(triebel(prm.s, prm.p, 1.0, prm.gamma, x)),
              norm(triebel(prm.s, prm.p, kInf, prm.gamma, x)) / mid};
    }
    case ElementaryPair::w_sandwich: {
      need_ap();
      if (prm.s < 0.0 || prm.s != std::floor(prm.s)) throw std::invalid_argument("W sandwich needs integer s >= 0");
      const double mid = norm(sobolev(int(prm.s), prm.p, prm.gamma, x));
      return {mid / norm(triebel(prm.s, prm.p, 1.0, prm.gamma, x)),
              norm(triebel(prm.s, prm.p, kInf, prm.gamma, x)) / mid};
    }
    case ElementaryPair::bf_sandwich: {
      const double mid = norm(triebel(prm.s, prm.p, prm.q, prm.gamma, x));
      return {mid / norm(besov(prm.s, prm.p, std::min(prm.p, prm.q), prm.gamma, x)),
              norm(besov(prm.s, prm.p, std::max(prm.p, prm.q), prm.gamma, x)) / mid};
    }
    case ElementaryPair::q_monotone: {
      if (!(prm.q0 <= prm.q1)) throw std::invalid_argument("need q0 <= q1");
      if (prm.kind != SpaceKind::F && prm.kind != SpaceKind::B) throw std::invalid_argument("q-monotone takes B or F");
      return {norm(make_spec(prm.kind, prm.s, prm.p, prm.q1, prm.gamma, x)) /
              norm(make_spec(prm.kind, prm.s, prm.p, prm.q0, prm.gamma, x))};
    }
  }
  throw std::logic_error("unhandled pair");
}

std::vector<GridFunction> seeded_family(std::uint64_t seed, int count, const GridSpec& grid, Index dim,
                                        double max_band) {
  static const double bands[] = {2.0, 4.0, 8.0, 16.0, 32.0};
  int cycle = 0;
  while (cycle < 5 && bands[cycle] <= max_band) ++cycle;
  if (cycle == 0) throw std::invalid_argument("band cap below the smallest band");
  std::vector<GridFunction> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double b = bands[i % cycle];
    out.push_back(random_band_limited(seed + std::uint64_t(i), -b, b, grid, dim));
  }
  return out;
}

}  // namespace wtrace
