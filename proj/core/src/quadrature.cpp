#include "wgscat/quadrature.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wgscat::quadrature {
namespace {

Rule compute_gl(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton from the Chebyshev-like initial guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one final polish step
        p0 = 1.0;
        p1 = x;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        x -= p1 / pp;
        break;
      }
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

// integral_0^A u^r ln u du = A^{r+1} (ln A / (r+1) - 1/(r+1)^2)
long double mono_log_moment(long double A, int r) {
  if (A <= 0.0L) return 0.0L;
  long double p = std::pow(A, (long double)(r + 1));
  return p * (std::log(A) / (r + 1) - 1.0L / ((long double)(r + 1) * (r + 1)));
}

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

const Eigen::Matrix<double, kPanelOrder, kPanelOrder>& log_weight_matrix() {
  static Eigen::Matrix<double, kPanelOrder, kPanelOrder> M = [] {
    constexpr int n = kPanelOrder;
    const Rule& gl = gauss_legendre(n);

    // Legendre monomial coefficients, long double: mono[k][r] is the
    // coefficient of t^r in P_k(t).
    long double mono[n][n] = {};
    mono[0][0] = 1.0L;
    mono[1][1] = 1.0L;
    for (int k = 2; k < n; ++k) {
      for (int r = 0; r <= k; ++r) {
        long double v = 0.0L;
        if (r >= 1) v += (2.0L * k - 1.0L) * mono[k - 1][r - 1];
        v -= (k - 1.0L) * mono[k - 2][r];
        mono[k][r] = v / k;
      }
    }

    Eigen::Matrix<double, n, n> V;  // V(k, j) = P_k(x_j)
    for (int j = 0; j < n; ++j) {
      long double p0 = 1.0L, p1 = gl.x[j];
      V(0, j) = 1.0;
      V(1, j) = gl.x[j];
      for (int k = 2; k < n; ++k) {
        long double p2 = ((2.0L * k - 1.0L) * gl.x[j] * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
        V(k, j) = double(p2);
      }
    }
    Eigen::PartialPivLU<Eigen::Matrix<double, n, n>> lu(V);

    Eigen::Matrix<double, n, n> W;
    for (int i = 0; i < n; ++i) {
      long double tau = gl.x[i];
      Eigen::Matrix<double, n, 1> m;
      for (int k = 0; k < n; ++k) {
        // Taylor shift by synthetic division: b[r] such that
        // P_k(tau + u) = sum_r b[r] u^r
        long double b[n] = {};
        for (int r = 0; r <= k; ++r) b[r] = mono[k][r];
        for (int r = 0; r <= k; ++r)
          for (int j = k - 1; j >= r; --j) b[j] += tau * b[j + 1];
        // split the integral at tau into [-1,tau] and [tau,1]
        long double A = 1.0L - tau, B = 1.0L + tau;
        long double acc = 0.0L;
        for (int r = 0; r <= k; ++r) {
          long double sgn = (r % 2 == 0) ? 1.0L : -1.0L;
          acc += b[r] * (mono_log_moment(A, r) + sgn * mono_log_moment(B, r));
        }
        m(k) = double(acc);
      }
      W.row(i) = lu.solve(m).transpose();
    }
    return W;
  }();
  return M;
}

Eigen::MatrixXd interp_from_gl16(const std::vector<double>& t) {
  constexpr int n = kPanelOrder;
  const Rule& gl = gauss_legendre(n);
  // barycentric weights
  std::array<double, n> bw;
  for (int j = 0; j < n; ++j) {
    double p = 1.0;
    for (int l = 0; l < n; ++l)
      if (l != j) p *= (gl.x[j] - gl.x[l]);
    bw[j] = 1.0 / p;
  }
  Eigen::MatrixXd M(t.size(), n);
  for (size_t i = 0; i < t.size(); ++i) {
    int hit = -1;
    for (int j = 0; j < n; ++j)
      if (t[i] == gl.x[j]) hit = j;
    if (hit >= 0) {
      M.row(i).setZero();
      M(i, hit) = 1.0;
      continue;
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
      double c = bw[j] / (t[i] - gl.x[j]);
      M(i, j) = c;
      denom += c;
    }
    M.row(i) /= denom;
  }
  return M;
}

}  // namespace wgscat::quadrature
