#include "wtrace/stefan.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace wtrace {

namespace {

const Rational kOne(1), kTwo(2), kZero(0);

std::string besov_name(const Rational& q, const Rational& p, const Rational& s) {
  return "B_{" + q.str() + "," + p.str() + "}^{" + s.str() + "}";
}

SpaceComponent comp(char outer, Rational os, Rational op, Rational oq, char inner, Rational is, Rational ip,
                    Rational iq, std::string domain = "R^{d-1}") {
  return {outer, os, op, oq, inner, is, ip, iq, std::move(domain)};
}

std::string join_components(const std::vector<SpaceComponent>& cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) out += (i ? " cap " : "") + cs[i].str();
  return out;
}

void check_nondegenerate(const StefanParams& prm) {
  const Rational half(1, 2);
  const Rational inv_p = prm.p.inverse(), inv_2q = (kTwo * prm.q).inverse();
  if (kOne - inv_2q == inv_p) throw std::domain_error("excluded by hypothesis: 1 - 1/(2q) = 1/p");
  if (half - inv_2q == inv_p) throw std::domain_error("excluded by hypothesis: 1/2 - 1/(2q) = 1/p");
}

}  // namespace

StefanParams StefanParams::make(Rational p, Rational q, double mu) {
  if (!(kOne < p) || !(kOne < q)) throw std::invalid_argument("p and q must exceed 1");
  StefanParams s;
  s.p = p;
  s.q = q;
  s.mu = mu;
  s.in_admissible_range = kTwo * p / (p + kOne) < q && q < kTwo * p;
  const Rational inv_p = p.inverse(), inv_2q = (kTwo * q).inverse();
  s.nondegenerate = kOne - inv_2q != inv_p && Rational(1, 2) - inv_2q != inv_p;
  return s;
}

std::string SpaceComponent::str() const {
  std::ostringstream os;
  const auto idx = [](const Rational& p, const Rational& q) {
    return q.is_zero() ? p.str() : p.str() + "," + q.str();
  };
  const auto space = [&](char k, const Rational& s, const Rational& p, const Rational& q) {
    std::ostringstream o;
    if (k == 'L') o << (p.is_integer() ? "L^" + p.str() : "L^{" + p.str() + "}");
    else if (k == 'H') o << "H^{" << s.str() << "," << p.str() << "}";
    else o << k << "_{" << idx(p, q) << "}^{" << s.str() << "}";
    return o.str();
  };
  os << space(outer, outer_s, outer_p, outer_q) << "(R+; " << space(inner, inner_s, inner_p, inner_q) << "("
     << domain << "))";
  return os.str();
}

StefanSpaces classify_spaces(const StefanParams& prm) {
  check_nondegenerate(prm);
  const Rational p = prm.p, q = prm.q, half(1, 2);
  const Rational inv_p = p.inverse(), inv_q = q.inverse(), inv_2q = (kTwo * q).inverse();
  StefanSpaces s;
  s.in_admissible_range = prm.in_admissible_range;

  s.e0.components = {comp('L', kZero, p, kZero, 'L', kZero, q, kZero, "Rdot^d")};
  s.eu.components = {comp('H', kOne, p, kZero, 'L', kZero, q, kZero, "Rdot^d"),
                     comp('L', kZero, p, kZero, 'H', kTwo, q, kZero, "Rdot^d")};
  s.f1.components = {comp('F', kOne - inv_2q, p, q, 'L', kZero, q, kZero),
                     comp('L', kZero, p, kZero, 'B', kTwo - inv_q, q, q)};
  s.f2.components = {comp('F', half - inv_2q, p, q, 'L', kZero, q, kZero),
                     comp('L', kZero, p, kZero, 'B', kOne - inv_q, q, q)};
  s.eh.components = {comp('F', Rational(3, 2) - inv_2q, p, q, 'L', kZero, q, kZero),
                     comp('F', kOne - inv_2q, p, q, 'H', kTwo, q, kZero),
                     comp('L', kZero, p, kZero, 'B', Rational(4) - inv_q, q, q)};
  for (auto* d : {&s.e0, &s.eu, &s.f1, &s.f2, &s.eh}) d->name = join_components(d->components);

  const Rational xu = kTwo - kTwo * inv_p;
  s.xu = {besov_name(q, p, xu) + "(Rdot^d)", xu, {}};

  const Rational xh = (kOne - inv_2q < inv_p) ? Rational(6) - kTwo * inv_q - Rational(4) * inv_p
                                              : Rational(4) - inv_q - kTwo * inv_p;
  s.xh = {besov_name(q, p, xh), xh, {}};
  if (half - inv_2q > inv_p) {
    const Rational xd = kTwo - kTwo * inv_q - Rational(4) * inv_p;
    s.xdth = SpaceDescriptor{besov_name(q, p, xd), xd, {}};
  }
  return s;
}

std::vector<CompatibilityCondition> compatibility_conditions(const StefanParams& prm) {
  check_nondegenerate(prm);
  const Rational inv_p = prm.p.inverse(), inv_2q = (kTwo * prm.q).inverse(), half(1, 2);
  std::vector<CompatibilityCondition> out;
  if (kOne - inv_2q > inv_p) {
    out.push_back({"jump", "[[u0]] = 0", "1 - 1/(2q) > 1/p", kOne - inv_2q, inv_p});
    out.push_back({"static", "g1|_{t=0} = u0 - Delta' h0", "1 - 1/(2q) > 1/p", kOne - inv_2q, inv_p});
  }
  if (half - inv_2q > inv_p) {
    const StefanSpaces s = classify_spaces(prm);
    out.push_back({"dynamic", "g2|_{t=0} + [[d_nu u0]] in " + s.xdth->name, "1/2 - 1/(2q) > 1/p",
                   half - inv_2q, inv_p});
  }
  return out;
}

double dt_model_eps(double q) { return std::min(1.0 / (8.0 * q), 0.05); }

std::optional<DtModelCheck> dt_boundedness_check(const GridFunction& h, double p, double q,
                                                 const DyadicSystem& sys, int first_index, int nodes_per_cell) {
  if (!(p > 1.0 && q > 1.0) || std::isinf(p) || std::isinf(q)) throw std::invalid_argument("p, q must lie in (1, inf)");
  const double eps = dt_model_eps(q);
  if (!(2.0 - 2.0 / q - 4.0 * eps > 1.0 - 1.0 / q)) throw std::invalid_argument("model constraint violated");
  if (h.is_zero()) return std::nullopt;
  const auto seq = [&](double t, double z) { return InnerSpace::sequence_besov(t, q, z, 2.0, first_index); };
  const auto n = [&](const GridFunction& f, const SpaceSpec& sp) { return space_norm(f, sp, sys, nodes_per_cell); };

  DtModelCheck c;
  c.eps = eps;
  c.eh_norm = n(h, triebel(1.5 - 0.5 / q, p, q, 0.0, seq(0.0, 2.0))) +
              n(h, triebel(1.0 - 0.5 / q, p, q, 0.0, seq(2.0, 2.0))) +
              n(h, lebesgue(p, 0.0, seq(4.0 - 1.0 / q, q)));
  const GridFunction dh = h.derivative(1);
  c.f2_norm = n(dh, triebel(0.5 - 0.5 / q, p, q, 0.0, seq(0.0, 2.0))) + n(dh, lebesgue(p, 0.0, seq(1.0 - 1.0 / q, q)));
  c.mid_norm = n(h, triebel(1.0 + eps, p, q, 0.0, seq(2.0 - 2.0 / q - 4.0 * eps, 2.0)));
  c.ratio = c.f2_norm / c.eh_norm;
  return c;
}

BiorthogonalTraces biorthogonal_traces(const PositiveOperator& a0, const PositiveOperator& a1, const CVec& h0,
                                       const CVec& h1) {
  detail::check_dim(a0, h0.size());
  detail::check_dim(a1, h1.size());
  // (1+tA)^{-1} x has value x and derivative -A x at t = 0
  const auto value = [](const PositiveOperator&, const CVec& x) -> CVec { return x; };
  const auto slope = [](const PositiveOperator& a, const CVec& x) -> CVec { return -frac_power_apply(a, 1.0, x); };
  const PositiveOperator two0 = a0.scaled(2.0), two1 = a1.scaled(2.0);
  const CVec y1 = frac_power_apply(a1, -1.0, h1);
  BiorthogonalTraces t;
  t.r0 = 2.0 * value(a0, h0) - value(two0, h0);
  t.dr0 = 2.0 * slope(a0, h0) - slope(two0, h0);
  t.r1 = value(a1, y1) - value(two1, y1);
  t.dr1 = slope(a1, y1) - slope(two1, y1);
  return t;
}

}  // namespace wtrace
