#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "wtrace/grid.hpp"
#include "wtrace/rational.hpp"

namespace wtrace {

// Solves a x = b by Gaussian elimination, pivoting on the largest |entry|
// (any nonzero entry for exact scalars).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> gauss_solve(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a,
                                                     Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b) {
  using std::abs;
  const Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("gauss_solve needs a square system");
  for (Index c = 0; c < n; ++c) {
    Index piv = c;
    for (Index r = c + 1; r < n; ++r)
      if (abs(a(r, c)) > abs(a(piv, c))) piv = r;
    if (a(piv, c) == Scalar(0)) throw std::domain_error("singular system");
    a.row(c).swap(a.row(piv));
    std::swap(b(c), b(piv));
    for (Index r = c + 1; r < n; ++r) {
      if (a(r, c) == Scalar(0)) continue;
      const Scalar f = a(r, c) / a(c, c);
      for (Index k = c; k < n; ++k) a(r, k) -= f * a(c, k);
      b(r) -= f * b(c);
    }
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x(n);
  for (Index r = n - 1; r >= 0; --r) {
    Scalar acc = b(r);
    for (Index k = r + 1; k < n; ++k) acc -= a(r, k) * x(k);
    x(r) = acc / a(r, r);
  }
  return x;
}

struct ExtensionCoefficients {
  int m = 0;
  std::vector<Rational> lambda;  // lambda_1 .. lambda_{m+1}

  // (-j)^k lambda_j, the weights of the k-twisted operator.
  std::vector<Rational> twisted(int k) const;
  // sum_j (-j)^l lambda_j, equal to 1 for l <= m.
  Rational moment(int l) const;
};

ExtensionCoefficients vandermonde_coeffs(int m);

// Half-line function with derivatives: eval(t, order), t in (0, reach].
struct HalfLineFunction {
  std::function<CVec(double, int)> eval;
  double reach = std::numeric_limits<double>::infinity();
  Index dim = 1;

  static HalfLineFunction from_grid_function(const GridFunction& f);
  static HalfLineFunction polynomial(std::vector<double> coeffs);  // sum c_i t^i, scalar
};

// E_+^{m} (twist 0) or E_+^{m,k}: f(t) for t > 0, sum_j (-j)^k lambda_j f(-j t) for t < 0.
class HalfLineExtension {
 public:
  explicit HalfLineExtension(int m, int twist = 0);

  int order() const { return m_; }
  int twist() const { return k_; }
  const std::vector<double>& weights() const { return w_; }
  // Points t < 0 reach out to -(m+1) t.
  double reflection_factor() const { return m_ + 1.0; }

  template <typename F>
  auto operator()(const F& f, double t) const -> decltype(f(t)) {
    if (t >= 0.0) return f(t);
    auto acc = decltype(f(t))(w_[0] * f(-t));
    for (std::size_t j = 1; j < w_.size(); ++j) acc += w_[j] * f(-double(j + 1) * t);
    return acc;
  }

  CVec apply(const HalfLineFunction& f, double t, int derivative_order = 0) const;

  // sum_j |w_j| j^{-(1+gamma)/p}, the bound of the operator on L^p(R_+, |t|^gamma).
  double lp_bound(double p, double gamma) const;

 private:
  int m_, k_;
  std::vector<double> w_;
};

struct ExtendedSamples {
  Vec t;
  CMat values;
};

// Grid points inside [-reach/(m+1), reach] with the extension applied.
ExtendedSamples extend(const HalfLineFunction& f, int m, int twist, const GridSpec& grid);

// sup |d^k/dt^k (E^m f) - E^{m,k}(f^(k))| over grid points of the reflectable range,
// left side by central finite differences kept away from t = 0.
double intertwine_check(const HalfLineFunction& f, int m, int k, const GridSpec& grid);

// Finite-difference weights for derivative `order` at 0 on the given offsets.
Vec fd_weights(int order, const Vec& offsets);

}  // namespace wtrace
