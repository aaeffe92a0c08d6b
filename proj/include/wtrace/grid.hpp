#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Core>

namespace wtrace {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kDefaultNodesPerCell = 8;
inline constexpr int kMaxNodesPerCell = 128;
inline constexpr double kNormRefineTol = 1e-12;

// Periodic sampling grid on [-L, L). Frequencies live on the lattice n/(2L).
class GridSpec {
 public:
  GridSpec() = default;
  GridSpec(double half_width, int n_samples);

  double half_width() const { return half_width_; }
  int n_samples() const { return n_samples_; }
  double nyquist() const { return n_samples_ / (4.0 * half_width_); }
  double spacing() const { return 2.0 * half_width_ / n_samples_; }
  double point(int i) const { return -half_width_ + i * spacing(); }
  double frequency(int mode) const { return mode / (2.0 * half_width_); }
  int max_mode() const { return n_samples_ / 2 - 1; }
  // Lattice index of xi; throws if xi is off-lattice or not below Nyquist.
  int mode_of(double xi) const;

  bool operator==(const GridSpec&) const = default;

 private:
  double half_width_ = 1.0;
  int n_samples_ = 1024;
};

// Band-limited C^d-valued function: sum_n c_n exp(2 pi i xi_n t).
class GridFunction {
 public:
  GridFunction(const GridSpec& grid, std::vector<int> modes, CMat coeffs);

  static GridFunction zero(const GridSpec& grid, Index dim);

  const GridSpec& grid() const { return grid_; }
  const std::vector<int>& modes() const { return modes_; }
  const CMat& coeffs() const { return coeffs_; }
  Index dim() const { return coeffs_.cols(); }
  Index size() const { return coeffs_.rows(); }
  double frequency(Index row) const { return grid_.frequency(modes_[row]); }
  double max_frequency() const;
  bool is_zero() const;

  const CMat& samples() const { return samples_; }
  CVec value_at(double t) const;
  CVec value_at_zero() const { return coeffs_.colwise().sum().transpose(); }

  // Coefficientwise multiplier m(xi).
  template <typename Multiplier>
  GridFunction multiplied(Multiplier&& m) const {
    CMat c = coeffs_;
    for (Index r = 0; r < c.rows(); ++r) c.row(r) *= Complex(m(frequency(r)));
    return GridFunction(grid_, modes_, std::move(c));
  }
  GridFunction scaled(Complex c) const { return GridFunction(grid_, modes_, coeffs_ * c); }
  GridFunction derivative(int order) const;
  // Drops modes whose coefficient row is exactly zero.
  GridFunction pruned() const;
  GridFunction operator+(const GridFunction& other) const;

 private:
  GridSpec grid_;
  std::vector<int> modes_;
  CMat coeffs_;
  CMat samples_;
};

// Values at t_i + offset*h for all i, via one inverse FFT per column.
CMat evaluate_shifted(const GridSpec& grid, const std::vector<int>& modes, const CMat& coeffs,
                      double offset_cells);
inline CMat evaluate_shifted(const GridFunction& f, double offset_cells) {
  return evaluate_shifted(f.grid(), f.modes(), f.coeffs(), offset_cells);
}

GridFunction fourier_synthesize(const std::map<double, CVec>& coeffs, const GridSpec& grid);
GridFunction fourier_synthesize(const std::map<double, Complex>& coeffs, const GridSpec& grid);

GridFunction random_band_limited(std::uint64_t seed, double band_lo, double band_hi,
                                 const GridSpec& grid, Index dim = 1);

struct GaussRule {
  Vec nodes;    // on [-1, 1]
  Vec weights;  // for the weight (1-x)^a (1+x)^b
};
GaussRule gauss_jacobi(int n, double a, double b);
inline GaussRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

// Product rule for int_{-L}^{L} |t|^gamma g(t) dt. Gauss-Legendre on every cell,
// Gauss-Jacobi on the two cells touching 0 so |t|^gamma is integrated exactly there.
// Node layout: q*N + i for offset q in cell i, then 2Q singular nodes.
class WeightedQuadrature {
 public:
  WeightedQuadrature(const GridSpec& grid, double gamma, int nodes_per_cell = kDefaultNodesPerCell);

  const GridSpec& grid() const { return grid_; }
  double gamma() const { return gamma_; }
  int nodes_per_cell() const { return q_; }
  Index size() const { return nodes_.size(); }
  Index regular_size() const { return Index(q_) * grid_.n_samples(); }
  const Vec& nodes() const { return nodes_; }
  const Vec& weights() const { return weights_; }
  // Offsets within a cell, in units of the spacing.
  const Vec& offsets() const { return offsets_; }

  CMat evaluate(const GridFunction& f) const;
  CMat evaluate(const std::vector<int>& modes, const CMat& coeffs) const;

  double integrate(const Vec& values) const { return weights_.dot(values); }
  // (sum_i w_i g_i^p)^{1/p}; p = inf gives the max over nodes with positive weight.
  double lp_norm(const Vec& pointwise, double p) const;

 private:
  GridSpec grid_;
  double gamma_;
  int q_;
  Vec offsets_;
  Vec nodes_;
  Vec weights_;
};

// Starts at nodes_per_cell and doubles until successive rules agree.
double weighted_lp_norm(const GridFunction& f, double p, double gamma,
                        int nodes_per_cell = kDefaultNodesPerCell);

}  // namespace wtrace
