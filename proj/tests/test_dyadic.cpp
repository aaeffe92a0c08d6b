#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "support.hpp"
#include "wtrace/dyadic.hpp"

using namespace wtrace;

namespace {

GridFunction mode(double xi, const GridSpec& g) { return fourier_synthesize(std::map<double, Complex>{{xi, 1.0}}, g); }

}  // namespace

TEST_CASE("generator values") {
  const DyadicSystem sys(8);
  CHECK(sys.generator(0.5) == 1.0);
  CHECK(sys.generator(1.0) == 1.0);
  CHECK(sys.generator(2.0) == 0.0);
  CHECK(sys.generator(1.5) == 0.0);
  // psi(1/2) = h(1/2) / (h(1/2) + h(1/2))
  CHECK(sys.generator(1.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sys.generator(-1.25) == sys.generator(1.25));
}

TEST_CASE("generator is monotone with values in [0, 1]") {
  for (double sharp : {0.5, 1.0, 2.0}) {
    const DyadicSystem sys(4, sharp);
    double prev = 1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double v = sys.generator(i * 1e-3);
      CHECK(v >= 0.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("symbol identities") {
  const DyadicSystem sys(8);
  testing::Gen g(3);
  for (int i = 0; i < 400; ++i) {
    const double xi = g.uniform(-300.0, 300.0);
    CHECK(sys.symbol(0, xi) == sys.generator(xi));
    CHECK(sys.symbol(1, xi) == sys.generator(xi / 2.0) - sys.generator(xi));
    for (int k = 2; k <= 8; ++k) CHECK(sys.symbol(k, xi) == sys.symbol(1, std::ldexp(xi, -k + 1)));
    // telescoping
    double sum = 0.0;
    for (int k = 0; k <= 8; ++k) sum += sys.symbol(k, xi);
    CHECK(std::abs(sum - sys.generator(std::ldexp(xi, -8))) < 1e-14);
  }
}

TEST_CASE("partition check") {
  const DyadicSystem sys(8);
  std::vector<double> xi;
  for (int i = 0; i <= 10000; ++i) xi.push_back(-256.0 + 512.0 * i / 10000.0);
  CHECK(partition_check(sys, xi) <= 1e-12);
  std::vector<double> ends;
  for (int k = 0; k <= 8; ++k) {
    ends.push_back(std::ldexp(1.0, k));
    ends.push_back(-std::ldexp(1.0, k));
  }
  CHECK(partition_check(sys, ends) <= 1e-12);
  CHECK(partition_check(sys, std::vector<double>{}) == 0.0);
  // beyond the band the sum falls off, and those samples are ignored
  CHECK(partition_check(sys, std::vector<double>{300.0, 1000.0}) == 0.0);
}

TEST_CASE("blocks on single modes") {
  const GridSpec g(1.0, 64);
  const DyadicSystem sys(4);
  const GridFunction f2 = mode(2.0, g);
  CHECK((apply_block(sys, 1, f2).coeffs() - f2.coeffs()).norm() == 0.0);
  CHECK(apply_block(sys, 3, f2).is_zero());
  const GridFunction f0 = mode(0.0, g);
  CHECK((apply_block(sys, 0, f0).coeffs() - f0.coeffs()).norm() == 0.0);
  CHECK_THROWS(apply_block(sys, 5, f0));
  CHECK_THROWS(apply_block(sys, -1, f0));
}

TEST_CASE("disjointness and reconstruction on random functions") {
  const GridSpec g(1.0, 512);
  const DyadicSystem sys(7);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const GridFunction f = random_band_limited(seed, -100.0, 100.0, g, 2);
    GridFunction sum = GridFunction::zero(g, 2);
    std::vector<GridFunction> blocks;
    for (int k = 0; k <= 7; ++k) {
      blocks.push_back(apply_block(sys, k, f));
      sum = sum + blocks.back();
    }
    const GridFunction diff = (sum + f.scaled(-1.0)).pruned();
    const double scale = f.coeffs().cwiseAbs().maxCoeff();
    if (diff.size() > 0) CHECK(diff.coeffs().cwiseAbs().maxCoeff() <= 4e-16 * scale);
    for (int j = 0; j <= 7; ++j)
      for (int k = j + 2; k <= 7; ++k) CHECK(apply_block(sys, j, blocks[k]).is_zero());
  }
}

TEST_CASE("build_system") {
  const DyadicSystem s = build_system(2.0, 5);
  CHECK(s.max_block() == 5);
  CHECK(s.sharpness() == 2.0);
  CHECK(s.band_limit() == 32.0);
}
