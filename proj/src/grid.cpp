#include "wtrace/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

namespace wtrace {

namespace {

Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec::GridSpec(double half_width, int n_samples) : half_width_(half_width), n_samples_(n_samples) {
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid half-width must be positive");
  if (n_samples < 8 || !is_power_of_two(n_samples))
    throw std::invalid_argument("grid sample count must be a power of two >= 8");
}

int GridSpec::mode_of(double xi) const {
  const double x = xi * 2.0 * half_width_;
  const double n = std::round(x);
  if (std::abs(n - x) > 1e-9 * std::max(1.0, std::abs(x)))
    throw std::invalid_argument("frequency is not on the grid lattice");
  if (std::abs(n) > max_mode()) throw std::invalid_argument("frequency at or above Nyquist");
  return static_cast<int>(n);
}

GridFunction::GridFunction(const GridSpec& grid, std::vector<int> modes, CMat coeffs)
    : grid_(grid), modes_(std::move(modes)), coeffs_(std::move(coeffs)) {
  if (Index(modes_.size()) != coeffs_.rows())
    throw std::invalid_argument("mode list and coefficient rows disagree");
  if (coeffs_.cols() < 1) throw std::invalid_argument("inner dimension must be positive");
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (std::abs(modes_[i]) > grid_.max_mode())
      throw std::invalid_argument("frequency at or above Nyquist");
    if (i > 0 && modes_[i] <= modes_[i - 1])
      throw std::invalid_argument("modes must be strictly increasing");
  }
  samples_ = evaluate_shifted(grid_, modes_, coeffs_, 0.0);
}

GridFunction GridFunction::zero(const GridSpec& grid, Index dim) {
  return GridFunction(grid, {}, CMat::Zero(0, dim));
}

double GridFunction::max_frequency() const {
  double m = 0.0;
  for (Index r = 0; r < size(); ++r)
    if (coeffs_.row(r).squaredNorm() > 0.0) m = std::max(m, std::abs(frequency(r)));
  return m;
}

bool GridFunction::is_zero() const { return coeffs_.squaredNorm() == 0.0; }

CVec GridFunction::value_at(double t) const {
  CVec v = CVec::Zero(dim());
  for (Index r = 0; r < size(); ++r) {
    const double ph = 2.0 * kPi * frequency(r) * t;
    v += coeffs_.row(r).transpose() * Complex(std::cos(ph), std::sin(ph));
  }
  return v;
}

GridFunction GridFunction::derivative(int order) const {
  if (order < 0) throw std::invalid_argument("negative derivative order");
  return multiplied([order](double xi) { return std::pow(Complex(0.0, 2.0 * kPi * xi), order); });
}

GridFunction GridFunction::pruned() const {
  std::vector<int> keep;
  for (Index r = 0; r < size(); ++r)
    if (coeffs_.row(r).squaredNorm() > 0.0) keep.push_back(int(r));
  std::vector<int> modes;
  CMat c(Index(keep.size()), dim());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    modes.push_back(modes_[keep[i]]);
    c.row(Index(i)) = coeffs_.row(keep[i]);
  }
  return GridFunction(grid_, std::move(modes), std::move(c));
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  if (!(grid_ == other.grid_) || dim() != other.dim())
    throw std::invalid_argument("adding functions on different grids or inner dimensions");
  std::map<int, Eigen::RowVectorXcd> acc;
  for (Index r = 0; r < size(); ++r) acc[modes_[r]] = coeffs_.row(r);
  for (Index r = 0; r < other.size(); ++r) {
    auto [it, fresh] = acc.try_emplace(other.modes_[r], other.coeffs_.row(r));
    if (!fresh) it->second += other.coeffs_.row(r);
  }
  std::vector<int> modes;
  CMat c(Index(acc.size()), dim());
  Index i = 0;
  for (auto& [n, row] : acc) {
    modes.push_back(n);
    c.row(i++) = row;
  }
  return GridFunction(grid_, std::move(modes), std::move(c));
}

CMat evaluate_shifted(const GridSpec& grid, const std::vector<int>& modes, const CMat& coeffs,
                      double offset_cells) {
  const int n = grid.n_samples();
  CMat out(n, coeffs.cols());
  std::vector<Complex> buf(n), res(n);
  std::vector<Complex> phase(modes.size());
  for (std::size_t r = 0; r < modes.size(); ++r) {
    const int m = modes[r];
    const double ang = 2.0 * kPi * m * offset_cells / n;
    phase[r] = Complex(std::cos(ang), std::sin(ang)) * ((m % 2 == 0) ? 1.0 : -1.0);
  }
  for (Index col = 0; col < coeffs.cols(); ++col) {
    std::fill(buf.begin(), buf.end(), Complex(0.0));
    for (std::size_t r = 0; r < modes.size(); ++r)
      buf[((modes[r] % n) + n) % n] += coeffs(Index(r), col) * phase[r];
    fft_engine().inv(res.data(), buf.data(), n);
    for (int i = 0; i < n; ++i) out(i, col) = res[i];
  }
  return out;
}

GridFunction fourier_synthesize(const std::map<double, CVec>& coeffs, const GridSpec& grid) {
  if (coeffs.empty()) return GridFunction::zero(grid, 1);
  const Index dim = coeffs.begin()->second.size();
  std::map<int, CVec> by_mode;
  for (const auto& [xi, c] : coeffs) {
    if (c.size() != dim) throw std::invalid_argument("inconsistent inner dimension");
    auto [it, fresh] = by_mode.try_emplace(grid.mode_of(xi), c);
    if (!fresh) it->second += c;
  }
  std::vector<int> modes;
  CMat c(Index(by_mode.size()), dim);
  Index i = 0;
  for (const auto& [n, v] : by_mode) {
    modes.push_back(n);
    c.row(i++) = v.transpose();
  }
  return GridFunction(grid, std::move(modes), std::move(c));
}

GridFunction fourier_synthesize(const std::map<double, Complex>& coeffs, const GridSpec& grid) {
  std::map<double, CVec> lifted;
  for (const auto& [xi, c] : coeffs) lifted.emplace(xi, CVec::Constant(1, c));
  return fourier_synthesize(lifted, grid);
}

GridFunction random_band_limited(std::uint64_t seed, double band_lo, double band_hi,
                                 const GridSpec& grid, Index dim) {
  const double scale = 2.0 * grid.half_width();
  const int lo = int(std::ceil(band_lo * scale - 1e-9));
  const int hi = int(std::floor(band_hi * scale + 1e-9));
  if (band_lo > band_hi || lo > hi) throw std::invalid_argument("empty band");
  if (std::abs(lo) > grid.max_mode() || std::abs(hi) > grid.max_mode())
    throw std::invalid_argument("band reaches Nyquist");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  std::vector<int> modes;
  CMat c(hi - lo + 1, dim);
  for (int n = lo; n <= hi; ++n) {
    modes.push_back(n);
    for (Index j = 0; j < dim; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      c(n - lo, j) = Complex(re, im);
    }
  }
  return GridFunction(grid, std::move(modes), std::move(c));
}

GaussRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss rule needs at least one node");
  if (a <= -1.0 || b <= -1.0) throw std::invalid_argument("jacobi exponents must exceed -1");
  Vec diag(n), sub(std::max(n - 1, 1));
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    diag(k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k >= 1) {
      const double num = 4.0 * k * (k + a) * (k + b) * (k + a + b);
      const double den = s * s * (s + 1.0) * (s - 1.0);
      sub(k - 1) = std::sqrt(num / den);
    }
  }
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
  GaussRule rule;
  if (n == 1) {
    rule.nodes = Vec::Constant(1, diag(0));
    rule.weights = Vec::Constant(1, mu0);
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es;
  es.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
  rule.nodes = es.eigenvalues();
  rule.weights = mu0 * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

WeightedQuadrature::WeightedQuadrature(const GridSpec& grid, double gamma, int nodes_per_cell)
    : grid_(grid), gamma_(gamma), q_(nodes_per_cell) {
  if (!(gamma > -1.0)) throw std::invalid_argument("weight exponent must exceed -1");
  if (q_ < 1) throw std::invalid_argument("need at least one node per cell");
  const int n = grid.n_samples();
  const double h = grid.spacing();
  const GaussRule leg = gauss_legendre(q_);
  const GaussRule jac = gauss_jacobi(q_, 0.0, gamma);
  offsets_ = (leg.nodes.array() + 1.0) / 2.0;

  const Index reg = regular_size();
  nodes_.resize(reg + 2 * q_);
  weights_.resize(reg + 2 * q_);
  const int left = n / 2 - 1;  // cell [-h, 0]
  const int right = n / 2;     // cell [0, h]
  for (int q = 0; q < q_; ++q) {
    for (int i = 0; i < n; ++i) {
      const double t = grid.point(i) + offsets_(q) * h;
      nodes_(Index(q) * n + i) = t;
      weights_(Index(q) * n + i) =
          (i == left || i == right) ? 0.0 : 0.5 * h * leg.weights(q) * std::pow(std::abs(t), gamma);
    }
  }
  // int_0^h t^g f dt = (h/2)^{g+1} int_{-1}^{1} (1+x)^g f(h(1+x)/2) dx
  const double scale = std::pow(0.5 * h, gamma + 1.0);
  for (int q = 0; q < q_; ++q) {
    const double t = 0.5 * h * (1.0 + jac.nodes(q));
    nodes_(reg + q) = -t;
    weights_(reg + q) = scale * jac.weights(q);
    nodes_(reg + q_ + q) = t;
    weights_(reg + q_ + q) = scale * jac.weights(q);
  }
}

CMat WeightedQuadrature::evaluate(const std::vector<int>& modes, const CMat& coeffs) const {
  const int n = grid_.n_samples();
  const Index reg = regular_size();
  CMat out(size(), coeffs.cols());
  for (int q = 0; q < q_; ++q)
    out.middleRows(Index(q) * n, n) = evaluate_shifted(grid_, modes, coeffs, offsets_(q));
  for (Index k = reg; k < size(); ++k) {
    out.row(k).setZero();
    for (std::size_t r = 0; r < modes.size(); ++r) {
      const double ph = 2.0 * kPi * grid_.frequency(modes[r]) * nodes_(k);
      out.row(k) += coeffs.row(Index(r)) * Complex(std::cos(ph), std::sin(ph));
    }
  }
  return out;
}

CMat WeightedQuadrature::evaluate(const GridFunction& f) const {
  if (!(f.grid() == grid_)) throw std::invalid_argument("function lives on a different grid");
  return evaluate(f.modes(), f.coeffs());
}

double WeightedQuadrature::lp_norm(const Vec& g, double p) const {
  if (g.size() != size()) throw std::invalid_argument("pointwise vector has wrong length");
  if (std::isinf(p)) {
    double m = 0.0;
    for (Index i = 0; i < g.size(); ++i)
      if (weights_(i) > 0.0) m = std::max(m, g(i));
    return m;
  }
  if (p == 1.0) return weights_.dot(g);
  if (p == 2.0) return std::sqrt(weights_.dot(g.cwiseAbs2()));
  return std::pow(weights_.dot(g.array().pow(p).matrix()), 1.0 / p);
}

double weighted_lp_norm(const GridFunction& f, double p, double gamma, int nodes_per_cell) {
  if (!(gamma > -1.0)) throw std::invalid_argument("weight exponent must exceed -1");
  if (!(p > 1.0)) throw std::invalid_argument("integrability exponent must exceed 1");
  // near-zeros of f put branch points of |f|^p close to the axis, so refine until two rules agree
  auto at = [&](int q) {
    const WeightedQuadrature quad(f.grid(), gamma, q);
    return quad.lp_norm(quad.evaluate(f).rowwise().norm(), p);
  };
  double prev = at(nodes_per_cell);
  for (int q = 2 * nodes_per_cell; q <= kMaxNodesPerCell; q *= 2) {
    const double cur = at(q);
    if (std::abs(cur - prev) <= kNormRefineTol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace wtrace
