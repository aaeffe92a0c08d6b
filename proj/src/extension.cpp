#include "wtrace/extension.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace wtrace {

std::vector<Rational> ExtensionCoefficients::twisted(int k) const {
  if (k < 0 || k > m) throw std::invalid_argument("twist must satisfy 0 <= k <= m");
  std::vector<Rational> out;
  for (std::size_t j = 0; j < lambda.size(); ++j) out.push_back(Rational(-std::int64_t(j + 1)).pow(k) * lambda[j]);
  return out;
}

Rational ExtensionCoefficients::moment(int l) const {
  Rational s(0);
  for (std::size_t j = 0; j < lambda.size(); ++j) s += Rational(-std::int64_t(j + 1)).pow(l) * lambda[j];
  return s;
}

ExtensionCoefficients vandermonde_coeffs(int m) {
  if (m < 0) throw std::invalid_argument("extension order must be >= 0");
  using RMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
  using RVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
  RMat v(m + 1, m + 1);
  for (int l = 0; l <= m; ++l)
    for (int j = 0; j <= m; ++j) v(l, j) = Rational(-std::int64_t(j + 1)).pow(l);
  const RVec x = gauss_solve<Rational>(v, RVec::Constant(m + 1, Rational(1)));
  ExtensionCoefficients c;
  c.m = m;
  for (int j = 0; j <= m; ++j) c.lambda.push_back(x(j));
  return c;
}

HalfLineFunction HalfLineFunction::from_grid_function(const GridFunction& f) {
  auto derivs = std::make_shared<std::vector<GridFunction>>();
  for (int k = 0; k <= 8; ++k) derivs->push_back(f.derivative(k));
  HalfLineFunction h;
  h.eval = [derivs](double t, int order) {
    if (order < 0 || order >= int(derivs->size())) throw std::out_of_range("derivative order not available");
    return (*derivs)[order].value_at(t);
  };
  h.reach = f.grid().half_width();
  h.dim = f.dim();
  return h;
}

HalfLineFunction HalfLineFunction::polynomial(std::vector<double> coeffs) {
  HalfLineFunction h;
  h.eval = [c = std::move(coeffs)](double t, int order) {
    double acc = 0.0;
    for (std::size_t i = order; i < c.size(); ++i) {
      double fall = 1.0;
      for (int r = 0; r < order; ++r) fall *= double(i - r);
      acc += c[i] * fall * std::pow(t, double(i - order));
    }
    return CVec::Constant(1, Complex(acc));
  };
  return h;
}

HalfLineExtension::HalfLineExtension(int m, int twist) : m_(m), k_(twist) {
  const auto c = vandermonde_coeffs(m);
  for (const auto& r : c.twisted(twist)) w_.push_back(r.to_double());
}

CVec HalfLineExtension::apply(const HalfLineFunction& f, double t, int derivative_order) const {
  const double reach = f.reach * (1.0 + 1e-12);
  if (t > reach || -(m_ + 1.0) * t > reach) throw std::out_of_range("point outside the reflectable range");
  return (*this)([&](double x) { return f.eval(x, derivative_order); }, t);
}

double HalfLineExtension::lp_bound(double p, double gamma) const {
  double c = 0.0;
  for (std::size_t j = 0; j < w_.size(); ++j) c += std::abs(w_[j]) * std::pow(double(j + 1), -(1.0 + gamma) / p);
  return c;
}

ExtendedSamples extend(const HalfLineFunction& f, int m, int twist, const GridSpec& grid) {
  const HalfLineExtension ext(m, twist);
  const double reach = std::min(f.reach, grid.half_width());
  std::vector<double> ts;
  for (int i = 0; i < grid.n_samples(); ++i) {
    const double t = grid.point(i);
    if (t <= reach && -(m + 1.0) * t <= reach) ts.push_back(t);
  }
  ExtendedSamples out;
  out.t = Eigen::Map<const Vec>(ts.data(), Index(ts.size()));
  out.values.resize(out.t.size(), f.dim);
  for (Index i = 0; i < out.t.size(); ++i) out.values.row(i) = ext.apply(f, out.t(i)).transpose();
  return out;
}

Vec fd_weights(int order, const Vec& x) {
  // Fornberg's recursion at x0 = 0
  const Index n = x.size();
  if (order < 0 || n <= order) throw std::invalid_argument("stencil too small for derivative order");
  Mat c = Mat::Zero(n, order + 1);
  double c1 = 1.0, c4 = x(0);
  c(0, 0) = 1.0;
  for (Index i = 1; i < n; ++i) {
    const int mn = int(std::min<Index>(i, order));
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x(i);
    for (Index j = 0; j < i; ++j) {
      const double c3 = x(i) - x(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(order);
}

double intertwine_check(const HalfLineFunction& f, int m, int k, const GridSpec& grid) {
  if (k < 0 || k > m) throw std::invalid_argument("twist must satisfy 0 <= k <= m");
  const HalfLineExtension plain(m, 0);
  const HalfLineExtension twisted(m, k);
  constexpr int half = 8;
  static const double steps[] = {0.0, 2e-3, 6e-3, 2e-2, 4e-2};
  const double h = steps[std::min(k, 4)];
  Vec offsets(2 * half + 1);
  for (int i = 0; i < 2 * half + 1; ++i) offsets(i) = double(i - half);
  const Vec w = fd_weights(k, offsets) / std::pow(h, k);

  const double reach = std::min(f.reach, grid.half_width());
  const double margin = half * h * (1.0 + 1e-9);
  double dev = 0.0;
  for (int i = 0; i < grid.n_samples(); ++i) {
    const double t = grid.point(i);
    if (std::abs(t) <= margin) continue;
    if (t + margin > reach || -(m + 1.0) * (t - margin) > reach) continue;
    CVec lhs = CVec::Zero(f.dim);
    for (int s = 0; s < 2 * half + 1; ++s) lhs += w(s) * plain.apply(f, t + offsets(s) * h);
    const CVec rhs = twisted.apply(f, t, k);
    dev = std::max(dev, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return dev;
}

}  // namespace wtrace
