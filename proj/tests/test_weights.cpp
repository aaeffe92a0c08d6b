#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "wtrace/weights.hpp"

using namespace wtrace;

TEST_CASE("power weight") {
  const PowerWeight w(0.5);
  CHECK(w(-4.0) == doctest::Approx(2.0));
  CHECK(w.integral(-1.0, 1.0) == doctest::Approx(4.0 / 3.0));
  CHECK(w.integral(1.0, 4.0) == doctest::Approx((std::pow(4.0, 1.5) - 1.0) / 1.5));
  CHECK_THROWS(PowerWeight(-1.0));
}

TEST_CASE("A_p classes") {
  CHECK(ap_classify(0.0, 2.0) == ApClass::ap_member);
  CHECK(ap_classify(0.99, 2.0) == ApClass::ap_member);
  CHECK(ap_classify(1.0, 2.0) == ApClass::ainf_only);
  CHECK(ap_classify(5.0, 3.0) == ApClass::ainf_only);
  CHECK(ap_classify(-1.0, 2.0) == ApClass::not_ainf);
  CHECK_THROWS(ap_classify(0.0, 1.0));
}

TEST_CASE("power integrals") {
  CHECK(power_integral(0.0, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK(power_integral(-1.0, 1.0, -0.5) == doctest::Approx(4.0));
  CHECK(std::isinf(power_integral(0.0, 1.0, -1.0)));
  CHECK(std::isinf(power_integral(-1.0, 1.0, -2.0)));
  CHECK(power_integral(1.0, 3.0, -1.0) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("A_p constant is scale invariant for power weights") {
  // intervals [0, r] all give the same characteristic
  std::vector<Interval> small{{0.0, 1e-3}}, large{{0.0, 1e3}};
  for (double gamma : {-0.5, 0.3, 0.9}) {
    const auto a = ap_constant_estimate(gamma, 2.0, small), b = ap_constant_estimate(gamma, 2.0, large);
    REQUIRE(a);
    REQUIRE(b);
    CHECK(testing::rel(*a, *b) < 1e-10);
    // closed form on [0, 1]: 1 / ((1+gamma)(1-gamma))
    CHECK(testing::rel(*a, 1.0 / ((1.0 + gamma) * (1.0 - gamma))) < 1e-10);
  }
}

TEST_CASE("A_p constant diverges outside the class") {
  std::vector<Interval> fam{{-1.0, 1.0}, {0.5, 2.0}};
  CHECK_FALSE(ap_constant_estimate(1.5, 2.0, fam).has_value());
  CHECK(ap_constant_estimate(0.5, 2.0, fam).has_value());
}
