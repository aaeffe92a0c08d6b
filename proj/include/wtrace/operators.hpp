#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include "wtrace/grid.hpp"

namespace wtrace {

enum class OperatorKind { scalar, diagonal, fourier_symbol };

// Positive operator with a diagonal realization: scalar a, eigenvalues on a
// finite sequence space, or a Fourier symbol sampled on inner spatial modes.
class PositiveOperator {
 public:
  static PositiveOperator scalar(double a);
  static PositiveOperator diagonal(const Vec& eigenvalues);
  // (1 + |2 pi eta|^2)^{beta/2} on the given inner frequencies eta.
  static PositiveOperator bessel_symbol(double beta, const Vec& inner_frequencies);
  static PositiveOperator fourier_symbol(const std::function<double(double)>& symbol,
                                         const Vec& inner_frequencies);

  OperatorKind kind() const { return kind_; }
  const Vec& eigenvalues() const { return lambda_; }
  Index dim() const { return lambda_.size(); }
  double min_eigenvalue() const { return lambda_.minCoeff(); }
  double max_eigenvalue() const { return lambda_.maxCoeff(); }
  // C in ||(s+A)^{-1}|| <= C/(1+s), s >= 0: max_j (1+s)/(s+lambda_j) = max(1, 1/lambda_min).
  double resolvent_constant() const;

  PositiveOperator power(double beta) const;
  PositiveOperator scaled(double c) const;

 private:
  PositiveOperator(OperatorKind kind, Vec lambda);
  OperatorKind kind_;
  Vec lambda_;
};

namespace detail {
inline void check_dim(const PositiveOperator& a, Index n) {
  if (a.dim() != n) throw std::invalid_argument("inner value dimension does not match operator");
}
}  // namespace detail

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> resolvent_apply(
    const PositiveOperator& a, double sigma, const Eigen::MatrixBase<Derived>& x) {
  detail::check_dim(a, x.size());
  if (sigma < 0.0) throw std::invalid_argument("resolvent parameter must be nonnegative");
  return (x.array() / (sigma + a.eigenvalues().array()).template cast<typename Derived::Scalar>()).matrix();
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> frac_power_apply(
    const PositiveOperator& a, double beta, const Eigen::MatrixBase<Derived>& x) {
  detail::check_dim(a, x.size());
  return (x.array() * a.eigenvalues().array().pow(beta).template cast<typename Derived::Scalar>()).matrix();
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> semigroup_apply(
    const PositiveOperator& a, double t, const Eigen::MatrixBase<Derived>& x) {
  detail::check_dim(a, x.size());
  if (t < 0.0) throw std::invalid_argument("semigroup time must be nonnegative");
  return (x.array() * (-t * a.eigenvalues().array()).exp().template cast<typename Derived::Scalar>()).matrix();
}

struct InterpQuadSpec {
  double sigma_min = 1e-8;
  double sigma_max = 1e8;
  int nodes_per_decade = 40;
  int m = 1;
};

// m = floor(alpha) + 1
int default_interp_order(double alpha);

enum class InterpRoute { resolvent, semigroup };

// Log-grid trapezoid for D_A(alpha, p) norms, with the small- and large-scale
// tails added in closed form. Evaluates many vectors at once through one GEMM.
class InterpNormEngine {
 public:
  InterpNormEngine(const PositiveOperator& a, double alpha, double p, const InterpQuadSpec& quad,
                   InterpRoute route = InterpRoute::resolvent);

  double operator()(const CVec& x) const;
  // Rows of abs2 are |x_j|^2 for one vector each.
  Vec norms(const Mat& abs2) const;
  // Share of the p-th power carried by the closed-form tails.
  double tail_fraction(const CVec& x) const;

  double alpha() const { return alpha_; }
  double p() const { return p_; }
  int m() const { return m_; }

 private:
  Vec lambda_;
  double alpha_, p_;
  int m_;
  InterpRoute route_;
  double lo_, hi_;
  Vec weights_;  // trapezoid weight times the power prefactor
  Mat factors_;  // nodes x dim, squared spectral factors
  Vec sup_prefactor_;
  Vec lambda_pow_;  // lambda^{2m}
  double small_tail_ = 0.0, large_tail_ = 0.0;
};

double interp_norm_resolvent(const PositiveOperator& a, double alpha, double p, const InterpQuadSpec& quad,
                             const CVec& x);
double interp_norm_semigroup(const PositiveOperator& a, double alpha, double p, const InterpQuadSpec& quad,
                             const CVec& x);

// Beta/Gamma closed forms: any p for Scalar, p = 2 for diagonal realizations.
std::optional<double> interp_norm_closed_form(const PositiveOperator& a, double alpha, double p, int m,
                                              const CVec& x, InterpRoute route);

// D_A(theta*alpha, q) norm with m1 = floor(theta*alpha)+1 over the same with m1+1.
double reiteration_ratio(const PositiveOperator& a, double alpha, double theta, double q, const CVec& x,
                         InterpQuadSpec quad = {});

}  // namespace wtrace
