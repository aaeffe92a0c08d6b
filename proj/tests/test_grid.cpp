#include <doctest.h>

#include <cmath>
#include <map>

#include "support.hpp"
#include "wtrace/grid.hpp"

using namespace wtrace;

namespace {

Complex direct_sum(const GridFunction& f, double t, Index col = 0) {
  Complex acc = 0.0;
  for (Index r = 0; r < f.size(); ++r)
    acc += f.coeffs()(r, col) * std::exp(Complex(0.0, 2.0 * kPi * f.frequency(r) * t));
  return acc;
}

}  // namespace

TEST_CASE("lattice") {
  const GridSpec g(2.0, 64);
  CHECK(g.spacing() == doctest::Approx(1.0 / 16.0));
  CHECK(g.frequency(3) == doctest::Approx(0.75));
  CHECK(g.mode_of(0.75) == 3);
  CHECK(g.mode_of(-0.25) == -1);
  CHECK_THROWS(g.mode_of(0.3));
  CHECK_THROWS(g.mode_of(g.nyquist()));
  CHECK_THROWS(GridSpec(1.0, 0));
}

TEST_CASE("samples agree with direct summation") {
  const GridSpec g(1.0, 128);
  const GridFunction f = random_band_limited(5, -9.0, 9.0, g, 2);
  for (int i = 0; i < g.n_samples(); i += 7)
    for (Index c = 0; c < 2; ++c) CHECK(std::abs(f.samples()(i, c) - direct_sum(f, g.point(i), c)) < 1e-12);
  CHECK(std::abs(f.value_at(0.123)(1) - direct_sum(f, 0.123, 1)) < 1e-12);
  CHECK((f.value_at_zero() - f.value_at(0.0)).norm() < 1e-12);
}

TEST_CASE("single mode values and derivatives") {
  const GridSpec g(1.0, 64);
  const GridFunction f = fourier_synthesize(std::map<double, Complex>{{1.5, Complex(2.0, 0.0)}}, g);
  const double t = 0.3, w = 2.0 * kPi * 1.5;
  CHECK(std::abs(f.value_at(t)(0) - 2.0 * std::exp(Complex(0.0, w * t))) < 1e-13);
  const GridFunction d2 = f.derivative(2);
  CHECK(std::abs(d2.value_at(t)(0) + w * w * 2.0 * std::exp(Complex(0.0, w * t))) < 1e-10);
  CHECK_THROWS(fourier_synthesize(std::map<double, Complex>{{0.3, 1.0}}, g));
}

TEST_CASE("addition merges modes") {
  const GridSpec g(1.0, 64);
  const auto a = fourier_synthesize(std::map<double, Complex>{{1.0, 1.0}, {2.0, 1.0}}, g);
  const auto b = fourier_synthesize(std::map<double, Complex>{{2.0, -1.0}, {3.0, 2.0}}, g);
  const GridFunction s = a + b;
  CHECK(s.size() == 3);
  CHECK(s.pruned().size() == 2);
  CHECK(std::abs(s.value_at(0.2)(0) - a.value_at(0.2)(0) - b.value_at(0.2)(0)) < 1e-13);
  CHECK(GridFunction::zero(g, 1).is_zero());
}

TEST_CASE("Gauss-Jacobi integrates weighted monomials") {
  // int_{-1}^{1} (1+x)^b (1+x)^k dx = 2^{b+k+1} / (b+k+1)
  for (double b : {-0.5, 0.0, 0.7, 2.0}) {
    const GaussRule r = gauss_jacobi(10, 0.0, b);
    for (int k = 0; k < 19; ++k) {
      const double exact = std::pow(2.0, b + k + 1.0) / (b + k + 1.0);
      const double got = (r.weights.array() * (1.0 + r.nodes.array()).pow(k)).sum();
      CHECK(testing::rel(got, exact) < 1e-12);
    }
  }
}

TEST_CASE("weighted quadrature on the weight") {
  // the singular cells are exact; away from 0 |t|^gamma is smooth but not polynomial
  // unless gamma is an integer, so fractional gamma needs more nodes per cell
  for (double gamma : {-0.6, 0.0, 0.5, 1.2, 3.0}) {
    const GridSpec g(1.5, 64);
    const int nodes = gamma == std::floor(gamma) ? 6 : 10;
    const WeightedQuadrature q(g, gamma, nodes);
    CHECK(q.size() == q.regular_size() + 2 * nodes);
    CHECK(testing::rel(q.integrate(Vec::Ones(q.size())), testing::weight_mass(1.5, gamma)) < 1e-12);
    // |t|^gamma t^2
    const Vec t2 = q.nodes().array().square();
    const double exact = 2.0 * std::pow(1.5, 3.0 + gamma) / (3.0 + gamma);
    CHECK(testing::rel(q.integrate(t2), exact) < 1e-12);
  }
}

TEST_CASE("single mode weighted L^p norm") {
  const GridSpec g(1.0, 256);
  const auto f = fourier_synthesize(std::map<double, Complex>{{4.0, Complex(0.0, 3.0)}}, g);
  for (double p : {1.5, 2.0, 3.0})
    for (double gamma : {0.0, 0.5, -0.3}) {
      const double exact = 3.0 * std::pow(testing::weight_mass(1.0, gamma), 1.0 / p);
      CHECK(testing::rel(weighted_lp_norm(f, p, gamma), exact) < 1e-12);
    }
}

TEST_CASE("quadrature evaluation matches direct summation off the grid") {
  const GridSpec g(1.0, 64);
  const GridFunction f = random_band_limited(9, -12.0, 12.0, g);
  const WeightedQuadrature q(g, 0.4);
  const CMat v = q.evaluate(f);
  for (Index i = 0; i < q.size(); i += 13) CHECK(std::abs(v(i, 0) - direct_sum(f, q.nodes()(i))) < 1e-11);
}

TEST_CASE("Parseval at gamma = 0") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GridSpec g(1.0 + 0.25 * (seed % 3), 128);
    const GridFunction f = random_band_limited(seed, -10.0, 10.0, g, 1 + seed % 2);
    const double n = weighted_lp_norm(f, 2.0, 0.0);
    CHECK(testing::rel(n * n, 2.0 * g.half_width() * f.coeffs().squaredNorm()) < 1e-8);
  }
}

TEST_CASE("doubling N leaves the weighted norm unchanged") {
  testing::Gen gen(12);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const GridSpec g(1.0, 128), fine(1.0, 256);
    const GridFunction f = random_band_limited(seed, -8.0, 8.0, g);
    std::map<double, Complex> c;
    for (Index r = 0; r < f.size(); ++r) c[f.frequency(r)] = f.coeffs()(r, 0);
    const GridFunction h = fourier_synthesize(c, fine);
    const double gamma = gen.uniform(-0.9, 3.0), p = gen.uniform(1.2, 4.0);
    CHECK(testing::rel(weighted_lp_norm(f, p, gamma), weighted_lp_norm(h, p, gamma)) < 1e-8);
  }
}
