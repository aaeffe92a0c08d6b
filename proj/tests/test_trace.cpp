#include <doctest.h>

#include <cmath>
#include <map>

#include "support.hpp"
#include "wtrace/trace.hpp"

using namespace wtrace;

namespace {

// Gauss-Legendre in u = log s on each piece, subdivided, with power-law tails beyond the pieces.
struct HardyOracle {
  double lhs = 0.0, rhs = 0.0;
};

HardyOracle hardy_oracle(const StepFunction& f, double beta, double p) {
  const GaussRule r = gauss_legendre(20);
  const double bp = beta * p, c = p - bp;
  const double tiny = 1e-10 * f.breaks[1];
  std::vector<double> cuts{tiny};
  for (std::size_t i = 1; i < f.breaks.size(); ++i) cuts.push_back(f.breaks[i]);
  HardyOracle o;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::log(cuts[i]), b = std::log(cuts[i + 1]);
    const int panels = i == 0 ? 400 : 40;
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k)
      for (Index n = 0; n < r.nodes.size(); ++n) {
        const double s = std::exp(a + k * h + 0.5 * h * (1.0 + r.nodes(n)));
        const double w = 0.5 * h * r.weights(n);
        // s^{-bp} F(s)^p and s^{p-bp} f(s)^p against du = ds / s
        o.lhs += w * std::pow(s, -bp) * std::pow(f.primitive(s), p);
        o.rhs += w * std::pow(s, c) * std::pow(f(s), p);
      }
  }
  const double v0 = f.values[0];
  o.lhs += std::pow(v0, p) * std::pow(tiny, c) / c;
  o.rhs += std::pow(v0, p) * std::pow(tiny, c) / c;
  o.lhs += std::pow(f.primitive(f.breaks.back()), p) * std::pow(f.breaks.back(), -bp) / bp;
  o.rhs /= std::pow(beta, p);
  return o;
}

GridFunction mode(double xi, const GridSpec& g, Complex c = 1.0) {
  return fourier_synthesize(std::map<double, Complex>{{xi, c}}, g);
}

TraceContext small_context() {
  TraceContext ctx;
  ctx.grid = GridSpec(1.0, 256);
  ctx.sys = DyadicSystem(6);
  return ctx;
}

}  // namespace

TEST_CASE("Hardy-Young on an indicator") {
  // f = 1 on [0, 1), beta = 1/2, p = 2: lhs = 1 + 1, rhs = 4 * 1
  const StepFunction f{{0.0, 1.0}, {1.0}};
  const HardyYoung h = hardy_young_check(f, 0.5, 2.0);
  CHECK(testing::rel(h.lhs, 2.0) < 1e-12);
  CHECK(testing::rel(h.rhs, 4.0) < 1e-12);
  CHECK(h.pass);
}

TEST_CASE("Hardy-Young of zero") {
  const StepFunction f{{0.0, 0.5, 2.0}, {0.0, 0.0}};
  const HardyYoung h = hardy_young_check(f, 0.3, 3.0);
  CHECK(h.lhs == 0.0);
  CHECK(h.rhs == 0.0);
  CHECK(h.pass);
}

TEST_CASE("Hardy-Young against brute-force quadrature") {
  testing::Gen g(77);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    StepFunction f = random_step_function(seed, 6);
    f.values[0] = g.uniform(0.1, 1.0);  // keeps the small-s tail in closed form
    const double beta = g.uniform(0.2, 0.9), p = g.uniform(1.2, 4.0);
    const HardyYoung h = hardy_young_check(f, beta, p);
    const HardyOracle o = hardy_oracle(f, beta, p);
    CHECK(testing::rel(h.lhs, o.lhs) < 1e-8);
    CHECK(testing::rel(h.rhs, o.rhs) < 1e-8);
    CHECK(h.pass);
    CHECK(h.lhs <= h.rhs);
  }
}

TEST_CASE("Hardy-Young input checks") {
  CHECK_THROWS(hardy_young_check(StepFunction{{0.0, 1.0}, {-1.0}}, 0.5, 2.0));
  CHECK_THROWS(hardy_young_check(StepFunction{{0.0, 1.0}, {1.0}}, 0.0, 2.0));
  CHECK_THROWS(hardy_young_check(StepFunction{{0.0, 1.0, 1.0}, {1.0, 1.0}}, 0.5, 2.0));
  CHECK_THROWS(hardy_young_check(StepFunction{{0.5, 1.0}, {1.0}}, 0.5, 2.0));
}

TEST_CASE("trace at zero and the window") {
  const GridSpec g(1.0, 128);
  const GridFunction u = mode(3.0, g, Complex(2.0, -1.0)) + mode(-5.5, g, 0.5);
  CHECK(std::abs(trace_at_zero(u)(0) - Complex(2.5, -1.0)) < 1e-14);
  CHECK(window(0.5, 1.0) == 1.0);
  CHECK(window(-0.3, 1.0) == 1.0);
  CHECK(window(0.9, 1.0) == 0.0);
  CHECK(window(0.7, 1.0) > 0.0);
  CHECK(window(0.7, 1.0) < 1.0);
}

TEST_CASE("problem validation") {
  TraceProblem pb;
  CHECK_NOTHROW(pb.validate());
  CHECK(pb.threshold() == 0.5);
  CHECK(pb.theta() == 0.5);
  for (auto bad : {TraceProblem{0.0, 1.0, 1.0}, TraceProblem{0.0, 1.0, kInf}, TraceProblem{0.5, 1.0, 2.0},
                   TraceProblem{-1.0, 1.0, 2.0}, TraceProblem{0.0, 1.0, 2.0, 0.5},
                   TraceProblem{0.0, 1.0, 2.0, kInf, kInf, -1.0}, TraceProblem{0.0, 0.0, 2.0}})
    CHECK_THROWS(bad.validate());
}

TEST_CASE("extension branch selection") {
  // s = -1, alpha = 2, p = 2, gamma = 0: s <= (1+gamma)/p - 1 = -1/2, twist 1
  const TraceProblem twisted{-1.0, 2.0, 2.0};
  CHECK(admissible_order(twisted) == 3);
  const ExtensionChoice e = select_extension(twisted);
  CHECK(e.m == 3);
  CHECK(e.twist == 1);
  CHECK(e.order() == 4);
  CHECK(minimal_resolvent_power(twisted, e) == 2);
  CHECK_THROWS(select_extension(twisted, 2));

  const TraceProblem plain{-0.2, 1.0, 2.0, kInf, kInf, 0.5};
  const ExtensionChoice f = select_extension(plain);
  CHECK(f.twist == 0);
  CHECK(f.m == 2);
  // j > 0.75 + 0.2
  CHECK(minimal_resolvent_power(plain, f) == 1);

  // twist grows until s + k clears the edge
  const TraceProblem deep{-2.6, 3.2, 2.0};
  CHECK(select_extension(deep).twist == 3);
}

TEST_CASE("resolvent orbit keeps the exact trace") {
  Vec l(2);
  l << 1.0, 4.0;
  const auto a = PositiveOperator::diagonal(l);
  CVec x(2);
  x << 1.0, Complex(0.0, -2.0);
  const TraceContext ctx = small_context();
  const TraceProblem pb{0.0, 1.0, 2.0};
  const OrbitFunction u = ext_resolvent(pb, a, 2, 2, x, ctx);
  REQUIRE(u.exact_trace);
  CHECK((*u.exact_trace - x).norm() == 0.0);
  CHECK((trace_at_zero(u) - x).norm() == 0.0);
  CHECK(u.u.dim() == 2);
  // inside the window the projection is close to (1 + tA)^{-2} x
  const CVec v = u.u.value_at(0.25);
  CHECK(std::abs(v(1) - x(1) / 4.0) < 1e-3);
  CHECK_THROWS(ext_resolvent(pb, a, 0, 2, x, ctx));
  CHECK_THROWS(ext_resolvent(TraceProblem{-1.0, 2.0, 2.0}, a, 1, 3, x, ctx));
}

TEST_CASE("continuity ratio is invariant under scaling") {
  const TraceContext ctx = small_context();
  const auto a = PositiveOperator::diagonal((Vec(3) << 1.0, 2.0, 8.0).finished());
  const TraceProblem pb{0.3, 0.9, 3.0, 2.0, 1.0, 1.0};
  testing::Gen g(3);
  const CVec x = g.vector(3);
  const OrbitFunction u =
      ext_resolvent(pb, a, minimal_resolvent_power(pb, select_extension(pb)), admissible_order(pb), x, ctx);
  const Complex c(0.0, 5.0);
  const OrbitFunction v{u.u.scaled(c), c * *u.exact_trace, u.label};
  for (SpaceKind k : {SpaceKind::F, SpaceKind::B}) {
    const double r = trace_continuity_ratio(pb, a, u, k, ctx);
    CHECK(r > 0.0);
    CHECK(testing::rel(trace_continuity_ratio(pb, a, v, k, ctx), r) < 1e-12);
  }
  CHECK_THROWS(trace_continuity_ratio(pb, a, u, SpaceKind::H, ctx));
}

TEST_CASE("semigroup orbit check") {
  const TraceContext ctx = small_context();
  const auto a = PositiveOperator::scalar(2.0);
  const TraceProblem pb;
  CHECK_FALSE(semigroup_orbit_check(a, pb, 0.0, CVec::Zero(1), ctx).has_value());
  const auto c = semigroup_orbit_check(a, pb, 0.5, CVec::Ones(1), ctx);
  REQUIRE(c);
  CHECK(c->ratio > 0.0);
  CHECK(testing::rel(c->ratio, c->orbit_norm / c->interp_value) < 1e-15);
  CHECK_THROWS(semigroup_orbit_check(a, pb, 1.0, CVec::Ones(1), ctx));
}

TEST_CASE("reparametrized theta") {
  CHECK(reparametrized_theta(Rational(1, 2), Rational(1), Rational(2), Rational(0), Rational(1, 2)) == Rational(1, 2));
  testing::Gen g(9);
  for (int i = 0; i < 200; ++i) {
    const Rational s = g.rational(6, 4), p = Rational(g.integer(2, 9), g.integer(1, 3)), gamma = g.rational(6, 5);
    const Rational alpha(g.integer(1, 6), g.integer(1, 4)), beta(g.integer(1, 6), g.integer(1, 4));
    const Rational theta = s + alpha - (Rational(1) + gamma) / p;
    CHECK(reparametrized_theta(s, alpha, p, gamma, beta) == theta * beta / alpha);
  }
  const auto a = PositiveOperator::diagonal((Vec(2) << 4.0, 16.0).finished());
  CHECK(testing::rel(reparametrized_operator(a, 2.0, 1.0).eigenvalues()(1), 4.0) < 1e-15);
  CHECK_THROWS(reparametrized_operator(a, 0.0, 1.0));
}
