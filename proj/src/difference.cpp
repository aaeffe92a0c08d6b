// Difference seminorm of F^s_{p,q}. The h-integral is split by |h|:
//   [0, t0]       Taylor series of Delta_h^m in h (Stirling coefficients)
//   [t0, 8 delta] Gauss nodes, values by shifted FFT evaluation
//   [8 delta, 2L] composite Simpson on the grid lattice, values by index shifts
// where t0 = L/N is the smallest scale level and delta the grid spacing.
#include <cmath>
#include <stdexcept>

#include "wtrace/spaces.hpp"

namespace wtrace {

namespace {

constexpr int kLevels = 120;
constexpr int kLatticeStart = 8;
constexpr int kSeriesShells = 20;
constexpr int kGaussNodes = 4;

// b_j = m! S(j, m) / j!, the Taylor coefficients of (e^z - 1)^m.
std::vector<double> series_coefficients(int m, int jmax) {
  std::vector<std::vector<double>> st(jmax + 1, std::vector<double>(m + 1, 0.0));
  st[0][0] = 1.0;
  for (int n = 1; n <= jmax; ++n)
    for (int k = 1; k <= std::min(n, m); ++k) st[n][k] = k * st[n - 1][k] + st[n - 1][k - 1];
  std::vector<double> b(jmax + 1, 0.0);
  double mfact = std::tgamma(m + 1.0);
  for (int j = m; j <= jmax; ++j) b[j] = mfact * st[j][m] / std::tgamma(j + 1.0);
  return b;
}

struct Accumulator {
  const Vec* levels;
  double s, two_l;
  bool want_levels;
  Vec phi;    // q = 1 single-integral form
  Vec ccum;   // int_{|h| <= current} ||Delta_h f||
  Mat at_level;
  int next = 0;

  double kernel(double h) const { return (std::pow(h, -s - 1.0) - std::pow(two_l, -s - 1.0)) / (s + 1.0); }

  void add(double h, double w, const Vec& hsum) {
    phi.noalias() += (w * kernel(h)) * hsum;
    if (want_levels) ccum.noalias() += w * hsum;
  }
  // Records every level at or below the boundary just reached.
  void boundary(double b) {
    if (!want_levels) return;
    while (next < levels->size() && (*levels)(next) <= b * (1.0 + 1e-13)) at_level.col(next++) = ccum;
  }
};

}  // namespace

double difference_seminorm(const GridFunction& f, double s, double p, double q, double gamma, int m,
                           int nodes_per_cell) {
  if (!(s > 0.0)) throw std::invalid_argument("difference seminorm needs s > 0");
  if (m < 1 || !(double(m) > s)) throw std::invalid_argument("difference order m must exceed s");
  if (!(q >= 1.0) || !(p >= 1.0)) throw std::invalid_argument("exponents must be >= 1");

  const GridSpec& g = f.grid();
  const int n = g.n_samples();
  const double L = g.half_width();
  const double delta = g.spacing();
  const WeightedQuadrature quad(g, gamma, nodes_per_cell);
  const Index P = quad.size();
  const Index R = quad.regular_size();
  const int Q = quad.nodes_per_cell();
  const Index d = f.dim();

  // coefficient of f(x + k h) in Delta_h^m f(x)
  std::vector<double> coef(m + 1);
  for (int k = 0; k <= m; ++k) coef[k] = std::tgamma(m + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(m - k + 1.0)) *
                                          (((m - k) % 2 == 0) ? 1.0 : -1.0);

  const double t0 = L / n;
  const double two_l = 2.0 * L;
  Vec levels(kLevels);
  const double rho = std::pow(two_l / t0, 1.0 / (kLevels - 1));
  for (int i = 0; i < kLevels; ++i) levels(i) = t0 * std::pow(rho, i);
  levels(kLevels - 1) = two_l;

  const bool general_q = q != 1.0;
  Accumulator acc{&levels, s, two_l, general_q, Vec::Zero(P), Vec::Zero(P),
                  general_q ? Mat::Zero(P, kLevels) : Mat(), 0};

  const CMat v0 = quad.evaluate(f);
  const Vec fm_norm = quad.evaluate(f.derivative(m)).rowwise().norm();

  // (a) below the series shells: leading Taylor term, ||Delta_h f|| ~ |h|^m ||f^(m)||
  const double htiny = t0 * std::ldexp(1.0, -kSeriesShells);
  acc.phi += (2.0 / (s + 1.0)) *
             (std::pow(htiny, m - s) / (m - s) - std::pow(two_l, -s - 1.0) * std::pow(htiny, m + 1.0) / (m + 1.0)) *
             fm_norm;
  if (general_q) acc.ccum += (2.0 * std::pow(htiny, m + 1.0) / (m + 1.0)) * fm_norm;

  const GaussRule gl = gauss_legendre(kGaussNodes);
  auto gauss_interval = [&](double a, double b, const auto& hsum_at) {
    for (int i = 0; i < kGaussNodes; ++i) {
      const double h = a + 0.5 * (b - a) * (gl.nodes(i) + 1.0);
      acc.add(h, 0.5 * (b - a) * gl.weights(i), hsum_at(h));
    }
    acc.boundary(b);
  };

  // (b) series region
  {
    const double z = 2.0 * kPi * f.max_frequency() * t0 * m;
    int jmax = m;
    double term = 1.0;
    for (int j = 1; j <= 80; ++j) {
      term *= z / j;
      jmax = m + j;
      if (term < 1e-18) break;
    }
    const std::vector<double> b = series_coefficients(m, jmax);
    std::vector<CMat> deriv;
    for (int j = m; j <= jmax; ++j) deriv.push_back(quad.evaluate(f.derivative(j)));
    auto hsum_at = [&](double h) {
      Vec out = Vec::Zero(P);
      for (double sign : {1.0, -1.0}) {
        CMat delta_f = CMat::Zero(P, d);
        double hp = std::pow(sign * h, m);
        for (int j = m; j <= jmax; ++j) {
          delta_f += (b[j] * hp) * deriv[j - m];
          hp *= sign * h;
        }
        out += delta_f.rowwise().norm();
      }
      return out;
    };
    for (int k = kSeriesShells - 1; k >= 0; --k)
      gauss_interval(t0 * std::ldexp(1.0, -k - 1), t0 * std::ldexp(1.0, -k), hsum_at);
  }

  // (c) off-lattice region between t0 and the lattice start
  const double h0 = kLatticeStart * delta;
  {
    auto shifted = [&](double shift) {
      CMat out(P, d);
      for (int qq = 0; qq < Q; ++qq)
        out.middleRows(Index(qq) * n, n) = evaluate_shifted(f, quad.offsets()(qq) + shift / delta);
      for (Index k = R; k < P; ++k) out.row(k) = f.value_at(quad.nodes()(k) + shift).transpose();
      return out;
    };
    auto hsum_at = [&](double h) {
      Vec out = Vec::Zero(P);
      for (double sign : {1.0, -1.0}) {
        CMat delta_f = coef[0] * v0;
        for (int k = 1; k <= m; ++k) delta_f += coef[k] * shifted(sign * k * h);
        out += delta_f.rowwise().norm();
      }
      return out;
    };
    std::vector<double> cuts{t0};
    for (int i = 0; i < kLevels; ++i)
      if (levels(i) > t0 && levels(i) < h0) cuts.push_back(levels(i));
    cuts.push_back(h0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) gauss_interval(cuts[i], cuts[i + 1], hsum_at);
  }

  // (d) lattice region: h = j delta, j = 8..N
  {
    // f(x_r + j delta) for singular nodes r, as periodic lattice arrays
    const Index ns = P - R;
    std::vector<CMat> sing(ns);
    std::vector<int> sing_cell(ns);
    for (Index r = 0; r < ns; ++r) {
      const double pos = (quad.nodes()(R + r) + L) / delta;
      sing_cell[r] = int(std::floor(pos));
      sing[r] = evaluate_shifted(f, pos - sing_cell[r]);
    }
    auto wrap = [n](long long i) { return int(((i % n) + n) % n); };
    Vec hplus(R);
    std::vector<int> idx(m + 1);
    auto hsum_at = [&](int j) {
      Vec out(P);
      for (int qq = 0; qq < Q; ++qq) {
        const Index base = Index(qq) * n;
        for (int k = 0; k <= m; ++k) idx[k] = wrap((long long)k * j);
        for (int i = 0; i < n; ++i) {
          double sq = 0.0;
          for (Index c = 0; c < d; ++c) {
            const Complex* col = v0.col(c).data() + base;
            Complex t = 0.0;
            for (int k = 0; k <= m; ++k) t += coef[k] * col[idx[k]];
            sq += std::norm(t);
          }
          hplus(base + i) = std::sqrt(sq);
          for (int k = 0; k <= m; ++k)
            if (++idx[k] == n) idx[k] = 0;
        }
        // Delta_{-h} f(x) = (-1)^m Delta_h f(x - m h)
        const int back = wrap(-(long long)m * j);
        for (int i = 0; i < n; ++i) out(base + i) = hplus(base + i) + hplus(base + (i + back < n ? i + back : i + back - n));
      }
      for (Index r = 0; r < ns; ++r) {
        double total = 0.0;
        for (int sign : {1, -1}) {
          double sq = 0.0;
          for (Index c = 0; c < d; ++c) {
            Complex t = 0.0;
            for (int k = 0; k <= m; ++k) t += coef[k] * sing[r](wrap(sing_cell[r] + (long long)sign * k * j), c);
            sq += std::norm(t);
          }
          total += std::sqrt(sq);
        }
        out(R + r) = total;
      }
      return out;
    };
    Vec ha = hsum_at(kLatticeStart);
    for (int ja = kLatticeStart; ja + 2 <= n; ja += 2) {
      const Vec hb = hsum_at(ja + 1);
      const Vec hc = hsum_at(ja + 2);
      const double a = ja * delta;
      if (general_q) {
        while (acc.next < kLevels && levels(acc.next) <= (ja + 2) * delta * (1.0 + 1e-13)) {
          const double tau = std::min(2.0, (levels(acc.next) - a) / delta);
          const double i0 = (tau * tau * tau / 3.0 - 1.5 * tau * tau + 2.0 * tau) / 2.0;
          const double i1 = -(tau * tau * tau / 3.0 - tau * tau);
          const double i2 = (tau * tau * tau / 3.0 - 0.5 * tau * tau) / 2.0;
          acc.at_level.col(acc.next++) = acc.ccum + delta * (i0 * ha + i1 * hb + i2 * hc);
        }
      }
      acc.add(a, delta / 3.0, ha);
      acc.add(a + delta, 4.0 * delta / 3.0, hb);
      acc.add(a + 2.0 * delta, delta / 3.0, hc);
      ha = hc;
    }
  }

  if (!general_q) return quad.lp_norm(acc.phi, p);

  if (acc.next != kLevels) throw std::logic_error("scale levels not all reached");
  Vec pointwise(P);
  if (std::isinf(q)) {
    pointwise.setZero();
    for (int i = 0; i < kLevels; ++i)
      pointwise = pointwise.cwiseMax(acc.at_level.col(i) * std::pow(levels(i), -s - 1.0));
    return quad.lp_norm(pointwise, p);
  }
  // Simpson in u = log t (3/8 rule on the last three intervals), plus the small-t tail.
  const double du = std::log(rho);
  Vec w = Vec::Zero(kLevels);
  const int simpson_end = (kLevels - 1) % 2 == 0 ? kLevels - 1 : kLevels - 4;
  for (int i = 0; i < simpson_end; i += 2) {
    w(i) += du / 3.0;
    w(i + 1) += 4.0 * du / 3.0;
    w(i + 2) += du / 3.0;
  }
  if (simpson_end != kLevels - 1) {
    const double c = 3.0 * du / 8.0;
    w(simpson_end) += c;
    w(simpson_end + 1) += 3.0 * c;
    w(simpson_end + 2) += 3.0 * c;
    w(simpson_end + 3) += c;
  }
  Vec integral = Vec::Zero(P);
  for (int i = 0; i < kLevels; ++i)
    integral += w(i) * (acc.at_level.col(i) * std::pow(levels(i), -s - 1.0)).array().pow(q).matrix();
  integral += (std::pow(2.0 / (m + 1.0), q) * std::pow(t0, (m - s) * q) / ((m - s) * q)) *
              fm_norm.array().pow(q).matrix();
  pointwise = integral.array().pow(1.0 / q);
  return quad.lp_norm(pointwise, p);
}

}  // namespace wtrace
