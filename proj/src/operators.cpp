#include "wtrace/operators.hpp"

#include <cmath>
#include <limits>

namespace wtrace {

namespace {

// g <- g^{p/2} elementwise, with the common exponents kept cheap.
template <typename Derived>
void half_power_inplace(Eigen::ArrayBase<Derived>& g, double p) {
  if (p == 2.0) return;
  if (p == 1.0) {
    g = g.sqrt();
    return;
  }
  g = g.pow(0.5 * p);
}

double checked_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(what);
  return v;
}

}  // namespace

PositiveOperator::PositiveOperator(OperatorKind kind, Vec lambda) : kind_(kind), lambda_(std::move(lambda)) {
  if (lambda_.size() == 0) throw std::invalid_argument("operator needs at least one eigenvalue");
  for (Index j = 0; j < lambda_.size(); ++j) checked_positive(lambda_(j), "operator is not strictly positive");
}

PositiveOperator PositiveOperator::scalar(double a) { return {OperatorKind::scalar, Vec::Constant(1, a)}; }

PositiveOperator PositiveOperator::diagonal(const Vec& eigenvalues) { return {OperatorKind::diagonal, eigenvalues}; }

PositiveOperator PositiveOperator::bessel_symbol(double beta, const Vec& eta) {
  return fourier_symbol(
      [beta](double e) { return std::pow(1.0 + std::pow(2.0 * kPi * e, 2), 0.5 * beta); }, eta);
}

PositiveOperator PositiveOperator::fourier_symbol(const std::function<double(double)>& symbol, const Vec& eta) {
  Vec lambda(eta.size());
  for (Index j = 0; j < eta.size(); ++j) lambda(j) = symbol(eta(j));
  return {OperatorKind::fourier_symbol, lambda};
}

double PositiveOperator::resolvent_constant() const { return std::max(1.0, 1.0 / min_eigenvalue()); }

PositiveOperator PositiveOperator::power(double beta) const {
  return {kind_, lambda_.array().pow(beta).matrix()};
}

PositiveOperator PositiveOperator::scaled(double c) const {
  checked_positive(c, "operator scale must be positive");
  return {kind_, lambda_ * c};
}

int default_interp_order(double alpha) { return int(std::floor(alpha)) + 1; }

InterpNormEngine::InterpNormEngine(const PositiveOperator& a, double alpha, double p, const InterpQuadSpec& quad,
                                   InterpRoute route)
    : lambda_(a.eigenvalues()), alpha_(alpha), p_(p), m_(quad.m), route_(route),
      lo_(quad.sigma_min), hi_(quad.sigma_max) {
  if (!(alpha > 0.0)) throw std::invalid_argument("interpolation parameter must be positive");
  if (!(double(m_) > alpha)) throw std::invalid_argument("interpolation order m must exceed alpha");
  if (!(p >= 1.0)) throw std::invalid_argument("interpolation exponent must be >= 1");
  if (!(lo_ > 0.0) || !(hi_ > lo_) || quad.nodes_per_decade < 1)
    throw std::invalid_argument("bad interpolation quadrature spec");

  const int n = int(std::lround(std::log10(hi_ / lo_) * quad.nodes_per_decade)) + 1;
  const double du = std::log(hi_ / lo_) / (n - 1);
  const bool sup = std::isinf(p);
  // resolvent: s^{alpha p} |(A/(s+A))^m y|^p;  semigroup: t^{(m-alpha)p} |A^m T(t) y|^p
  const double expo = route == InterpRoute::resolvent ? alpha : m_ - alpha;
  weights_.resize(n);
  sup_prefactor_.resize(n);
  factors_.resize(n, lambda_.size());
  // near each end the integrand is e^{c u} in u = log s; these end weights make the
  // trapezoid exact for that shape (c = 0 gives du/2)
  const auto end_weight = [du](double c) { return c * du < 1e-8 ? 0.5 * du : du / -std::expm1(-c * du) - 1.0 / c; };
  const double c_lo = (route == InterpRoute::resolvent ? alpha : m_ - alpha) * p;
  const double c_hi = route == InterpRoute::resolvent ? (m_ - alpha) * p : 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = lo_ * std::exp(i * du);
    const double w = i == 0 ? end_weight(c_lo) : i == n - 1 ? end_weight(c_hi) : du;
    weights_(i) = sup ? 0.0 : w * std::pow(s, expo * p);
    sup_prefactor_(i) = std::pow(s, expo);
    for (Index j = 0; j < lambda_.size(); ++j) {
      const double l = lambda_(j);
      factors_(i, j) = route == InterpRoute::resolvent ? std::pow(l / (s + l), 2.0 * m_)
                                                       : std::pow(l, 2.0 * m_) * std::exp(-2.0 * s * l);
    }
  }
  lambda_pow_ = lambda_.array().pow(2.0 * m_);
  if (!sup) {
    if (route == InterpRoute::resolvent) {
      small_tail_ = std::pow(lo_, alpha * p) / (alpha * p);
      large_tail_ = std::pow(hi_, (alpha - m_) * p) / ((m_ - alpha) * p);
    } else {
      small_tail_ = 0.0;
      large_tail_ = std::pow(lo_, (m_ - alpha) * p) / ((m_ - alpha) * p);  // applies to |A^m x|
    }
  }
}

Vec InterpNormEngine::norms(const Mat& abs2) const {
  if (abs2.cols() != lambda_.size()) throw std::invalid_argument("inner value dimension does not match operator");
  Mat g = abs2 * factors_.transpose();
  if (std::isinf(p_)) {
    g = g.array().sqrt();
    return (g.array().rowwise() * sup_prefactor_.transpose().array()).rowwise().maxCoeff();
  }
  auto ga = g.array();
  half_power_inplace(ga, p_);
  Vec total = g * weights_;
  Eigen::ArrayXd x2 = abs2.rowwise().sum().array();
  Eigen::ArrayXd am2 = (abs2 * lambda_pow_).array();
  half_power_inplace(x2, p_);
  half_power_inplace(am2, p_);
  total.array() += small_tail_ * x2 + large_tail_ * am2;
  if (p_ == 1.0) return total;
  if (p_ == 2.0) return total.array().sqrt();
  return total.array().pow(1.0 / p_);
}

double InterpNormEngine::operator()(const CVec& x) const {
  return norms(x.cwiseAbs2().transpose())(0);
}

double InterpNormEngine::tail_fraction(const CVec& x) const {
  if (std::isinf(p_)) return 0.0;
  const Vec a2 = x.cwiseAbs2();
  const double total = std::pow((*this)(x), p_);
  if (total == 0.0) return 0.0;
  const double tails = small_tail_ * std::pow(a2.sum(), 0.5 * p_) +
                       large_tail_ * std::pow(a2.dot(lambda_pow_), 0.5 * p_);
  return tails / total;
}

double interp_norm_resolvent(const PositiveOperator& a, double alpha, double p, const InterpQuadSpec& quad,
                             const CVec& x) {
  return InterpNormEngine(a, alpha, p, quad, InterpRoute::resolvent)(x);
}

double interp_norm_semigroup(const PositiveOperator& a, double alpha, double p, const InterpQuadSpec& quad,
                             const CVec& x) {
  return InterpNormEngine(a, alpha, p, quad, InterpRoute::semigroup)(x);
}

std::optional<double> interp_norm_closed_form(const PositiveOperator& a, double alpha, double p, int m,
                                              const CVec& x, InterpRoute route) {
  detail::check_dim(a, x.size());
  if (!(double(m) > alpha) || !(alpha > 0.0)) throw std::invalid_argument("interpolation order m must exceed alpha");
  const bool sup = std::isinf(p);
  if (a.dim() > 1 && p != 2.0) return std::nullopt;
  // per-eigenvalue constant c with value = lambda^alpha * c
  double c;
  if (route == InterpRoute::resolvent) {
    if (sup) {
      const double u = alpha / (m - alpha);
      c = std::pow(u, alpha) * std::pow(1.0 + u, -double(m));
    } else {
      c = std::pow(std::beta(alpha * p, (m - alpha) * p), 1.0 / p);
    }
  } else {
    const double e = m - alpha;
    if (sup) {
      c = std::pow(e, e) * std::exp(-e);
    } else {
      const double cc = e * p;
      c = std::pow(std::tgamma(cc) / std::pow(p, cc), 1.0 / p);
    }
  }
  const Vec scaled = a.eigenvalues().array().pow(alpha) * x.array().abs() * c;
  return scaled.norm();
}

double reiteration_ratio(const PositiveOperator& a, double alpha, double theta, double q, const CVec& x,
                         InterpQuadSpec quad) {
  if (x.squaredNorm() == 0.0) return 1.0;
  const double beta = theta * alpha;
  quad.m = default_interp_order(beta);
  const double first = interp_norm_resolvent(a, beta, q, quad, x);
  quad.m += 1;
  const double second = interp_norm_resolvent(a, beta, q, quad, x);
  return first / second;
}

}  // namespace wtrace
