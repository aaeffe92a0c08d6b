#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "support.hpp"
#include "wtrace/stefan.hpp"

using namespace wtrace;

namespace {

std::set<std::string> condition_ids(const StefanParams& prm) {
  std::set<std::string> out;
  for (const auto& c : compatibility_conditions(prm)) out.insert(c.id);
  return out;
}

}  // namespace

TEST_CASE("classifier examples") {
  const StefanSpaces a = classify_spaces(StefanParams::make(Rational(2), Rational(2)));
  CHECK(a.xh.name == "B_{2,2}^{5/2}");
  CHECK(a.xu.name == "B_{2,2}^{1}(Rdot^d)");
  CHECK_FALSE(a.xdth.has_value());
  CHECK(a.eh.components[0].str() == "F_{2,2}^{5/4}(R+; L^2(R^{d-1}))");
  CHECK(a.e0.name == "L^2(R+; L^2(Rdot^d))");
  CHECK(condition_ids(StefanParams::make(Rational(2), Rational(2))) == std::set<std::string>{"jump", "static"});

  const auto p82 = StefanParams::make(Rational(8), Rational(2));
  const StefanSpaces b = classify_spaces(p82);
  CHECK(b.xh.name == "B_{2,8}^{13/4}");
  REQUIRE(b.xdth.has_value());
  CHECK(b.xdth->name == "B_{2,8}^{1/2}");
  CHECK(condition_ids(p82) == std::set<std::string>{"jump", "static", "dynamic"});

  const auto low = StefanParams::make(Rational(4, 3), Rational(3, 2));
  CHECK(classify_spaces(low).xh.name == "B_{3/2,4/3}^{5/3}");
  CHECK(condition_ids(low).empty());
  CHECK(classify_spaces(low).e0.name == "L^{4/3}(R+; L^{3/2}(Rdot^d))");
}

TEST_CASE("degenerate pairs are rejected") {
  // 1/2 - 1/(2q) = 1/p and 1 - 1/(2q) = 1/p
  for (auto [p, q] : {std::pair{Rational(4), Rational(2)}, std::pair{Rational(4, 3), Rational(2)},
                      std::pair{Rational(3), Rational(3)}, std::pair{Rational(3, 2), Rational(3, 2)}}) {
    const auto prm = StefanParams::make(p, q);
    CHECK_FALSE(prm.nondegenerate);
    CHECK_THROWS_WITH(classify_spaces(prm), doctest::Contains("excluded by hypothesis"));
    CHECK_THROWS(compatibility_conditions(prm));
  }
  CHECK_THROWS(StefanParams::make(Rational(1), Rational(2)));
}

TEST_CASE("range flag") {
  CHECK(StefanParams::make(Rational(2), Rational(2)).in_admissible_range);
  CHECK_FALSE(StefanParams::make(Rational(2), Rational(5)).in_admissible_range);
  CHECK_FALSE(StefanParams::make(Rational(2), Rational(4, 3)).in_admissible_range);
  CHECK(StefanParams::make(Rational(2), Rational(3)).in_admissible_range);
  CHECK(classify_spaces(StefanParams::make(Rational(2), Rational(5))).in_admissible_range == false);
}

TEST_CASE("p = q substitution") {
  // p = q: 4 - 3/p when p > 3/2, else 6 - 6/p
  for (const Rational p : {Rational(6, 5), Rational(5, 4), Rational(4, 3), Rational(7, 5), Rational(8, 5), Rational(2),
                           Rational(5, 2), Rational(4), Rational(5), Rational(10)}) {
    const Rational expect = Rational(3, 2) < p ? Rational(4) - Rational(3) / p : Rational(6) - Rational(6) / p;
    CHECK(*classify_spaces(StefanParams::make(p, p)).xh.exponent == expect);
  }
}

TEST_CASE("conditions follow the two switches") {
  testing::Gen g(4);
  int seen_none = 0, seen_two = 0, seen_three = 0;
  for (int i = 0; i < 400; ++i) {
    const Rational p(g.integer(11, 80), g.integer(1, 10)), q(g.integer(11, 80), g.integer(1, 10));
    if (!(Rational(1) < p) || !(Rational(1) < q)) continue;
    const auto prm = StefanParams::make(p, q);
    if (!prm.nondegenerate) continue;
    const auto ids = condition_ids(prm);
    const Rational inv_p = p.inverse(), inv_2q = (Rational(2) * q).inverse();
    const bool first = Rational(1) - inv_2q > inv_p, second = Rational(1, 2) - inv_2q > inv_p;
    CHECK(ids.count("jump") == (first ? 1u : 0u));
    CHECK(ids.count("static") == (first ? 1u : 0u));
    CHECK(ids.count("dynamic") == (second ? 1u : 0u));
    const StefanSpaces s = classify_spaces(prm);
    CHECK(s.xdth.has_value() == second);
    if (second) CHECK(Rational(0) < *s.xdth->exponent);
    seen_none += ids.empty();
    seen_two += ids.size() == 2;
    seen_three += ids.size() == 3;
  }
  CHECK(seen_none > 0);
  CHECK(seen_two > 0);
  CHECK(seen_three > 0);
}

TEST_CASE("time-derivative model on single modes") {
  // h = e_i e^{2 pi i xi t} with xi = 2^k: every norm factors into W^{1/p} 2^{sk} 2^{tn}, n = i + 1
  const GridSpec grid(1.0, 512);
  const DyadicSystem sys(7);
  for (double p : {2.0, 3.0})
    for (double q : {2.0, 3.0})
      for (int k : {0, 2, 5})
        for (int i : {0, 3}) {
          CVec e = CVec::Zero(4);
          e(i) = Complex(0.0, 1.5);
          const double xi = std::ldexp(1.0, k), n = i + 1.0;
          const GridFunction h = fourier_synthesize(std::map<double, CVec>{{xi, e}}, grid);
          const auto c = dt_boundedness_check(h, p, q, sys);
          REQUIRE(c);
          const double w = 1.5 * std::pow(2.0, 1.0 / p);
          const auto tw = [](double s, double x) { return std::pow(2.0, s * x); };
          const double eh = w * (tw(1.5 - 0.5 / q, k) + tw(1.0 - 0.5 / q, k) * tw(2.0, n) + tw(4.0 - 1.0 / q, n));
          const double f2 = w * 2.0 * kPi * xi * (tw(0.5 - 0.5 / q, k) + tw(1.0 - 1.0 / q, n));
          const double eps = dt_model_eps(q);
          const double mid = w * tw(1.0 + eps, k) * tw(2.0 - 2.0 / q - 4.0 * eps, n);
          CHECK(testing::rel(c->eh_norm, eh) < 1e-12);
          CHECK(testing::rel(c->f2_norm, f2) < 1e-12);
          CHECK(testing::rel(c->mid_norm, mid) < 1e-12);
          CHECK(c->ratio == c->f2_norm / c->eh_norm);
        }
  CHECK(dt_model_eps(2.0) == 0.05);
  CHECK(dt_model_eps(3.0) == 1.0 / 24.0);
  CHECK_FALSE(dt_boundedness_check(GridFunction::zero(grid, 2), 2.0, 2.0, sys).has_value());
  CHECK_THROWS(dt_boundedness_check(GridFunction::zero(grid, 2), 2.0, 1.0, sys));
}

TEST_CASE("biorthogonal traces") {
  testing::Gen g(6);
  Vec l0(3), l1(3);
  l0 << 0.5, 2.0, 7.0;
  l1 << 1.0, 3.0, 11.0;
  const auto a0 = PositiveOperator::diagonal(l0), a1 = PositiveOperator::diagonal(l1);
  const CVec h0 = g.vector(3), h1 = g.vector(3);
  const auto t = biorthogonal_traces(a0, a1, h0, h1);
  CHECK((t.r0 - h0).norm() < 1e-14);
  CHECK(t.dr0.norm() < 1e-13);
  CHECK(t.r1.norm() < 1e-14);
  CHECK((t.dr1 - h1).norm() < 1e-13);
  const auto s = biorthogonal_traces(PositiveOperator::scalar(3.0), PositiveOperator::scalar(3.0), CVec::Ones(1),
                                     CVec::Ones(1));
  CHECK(std::abs(s.r0(0) - 1.0) < 1e-15);
  CHECK(std::abs(s.dr1(0) - 1.0) < 1e-15);
  CHECK_THROWS(biorthogonal_traces(a0, a1, CVec::Ones(2), h1));
}
