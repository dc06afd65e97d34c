#include "wgscat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "wgscat/quadrature.hpp"
#include "wgscat/special.hpp"

namespace wgscat::kernels {
namespace {

const Complex kI(0.0, 1.0);
constexpr double kFarFactor = 2.5;
constexpr double kInv2Pi = 1.0 / (2.0 * M_PI);

double dist_point_segment(const Vec2& x, const Vec2& a, const Vec2& b) {
  Vec2 ab = b - a;
  double t = (x - a).dot(ab) / ab.squaredNorm();
  t = std::clamp(t, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

// smooth remainder of the single-layer kernel after removing its log part:
//   (i/4) H0(kr) = -(1/2pi) J0(kr) ln r + R(r)
Complex log_remainder(double k, double r) {
  if (r == 0.0)
    return Complex(-kInv2Pi * (std::log(k / 2.0) + 0.5772156649015328606),
                   0.25);
  Complex h0 = special::hankel0(k * r);
  return 0.25 * kI * h0 + kInv2Pi * h0.real() * std::log(r);
}

Complex eval_point(double k, const Vec2& x, const Vec2& nx, const Vec2& y,
                   const Vec2& ny, const KernelCoeffs& c) {
  Vec2 diff = x - y;
  double r = diff.norm();
  if (r == 0.0) throw std::domain_error("kernel evaluated at zero distance");
  double z = k * r;
  Complex h0 = special::hankel0(z);
  Complex acc = 0.0;
  if (c.S != 0.0) acc += c.S * (0.25 * kI * h0);
  if (c.D != 0.0 || c.Sp != 0.0 || c.Dp != 0.0) {
    Complex h1 = special::hankel1(z);
    Vec2 e = diff / r;
    double A = e.dot(nx), B = e.dot(ny);
    if (c.D != 0.0) acc += c.D * (0.25 * kI * k * h1 * B);
    if (c.Sp != 0.0) acc -= c.Sp * (0.25 * kI * k * h1 * A);
    if (c.Dp != 0.0) {
      double C = nx.dot(ny);
      Complex dpp = 0.25 * kI * k * k * (h0 - h1 / z) * A * B +
                    0.25 * kI * k * h1 * (C - A * B) / r;
      acc += c.Dp * dpp;
    }
  }
  return acc;
}

// recursive bisection on the sub-interval [t0, t1] of the panel parameter
void near_recurse(double k, const Panel& p, const Vec2& x, const Vec2& nx,
                  const KernelCoeffs& c, double t0, double t1, int depth,
                  Complex* out) {
  Vec2 a = p.a + (t0 + 1.0) / 2.0 * (p.b - p.a);
  Vec2 b = p.a + (t1 + 1.0) / 2.0 * (p.b - p.a);
  double sublen = p.len * (t1 - t0) / 2.0;
  double dist = dist_point_segment(x, a, b);
  if (dist <= kFarFactor * sublen && depth < 60) {
    double tm = 0.5 * (t0 + t1);
    near_recurse(k, p, x, nx, c, t0, tm, depth + 1, out);
    near_recurse(k, p, x, nx, c, tm, t1, depth + 1, out);
    return;
  }
  const auto& gl = quadrature::gauss_legendre(16);
  double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
  std::vector<double> tq(16);
  for (int q = 0; q < 16; ++q) tq[q] = mid + half * gl.x[q];
  Eigen::MatrixXd L = quadrature::interp_from_gl16(tq);
  for (int q = 0; q < 16; ++q) {
    Vec2 y = p.a + (tq[q] + 1.0) / 2.0 * (p.b - p.a);
    double w = gl.w[q] * half * p.len / 2.0;
    Complex kv = w * eval_point(k, x, nx, y, p.normal, c);
    for (int j = 0; j < 16; ++j) out[j] += kv * L(q, j);
  }
}

}  // namespace

Complex kernel_eval(double k, const Vec2& x, const Vec2& nx, const Vec2& y,
                    const Vec2& ny, const KernelCoeffs& c) {
  return eval_point(k, x, nx, y, ny, c);
}

void panel_influence(double k, const Panel& p, const Vec2& x, const Vec2& nx,
                     const KernelCoeffs& c, int self_node, Complex* out) {
  if (self_node >= 0) {
    if (c.S == 0.0) return;
    // log-split product rule; D, Sp, Dp vanish identically on a flat panel
    const auto& gl = quadrature::gauss_legendre(16);
    const auto& V = quadrature::log_weight_matrix();
    double J = p.len / 2.0;
    double lnJ = std::log(J);
    for (int j = 0; j < 16; ++j) {
      double r = J * std::abs(gl.x[j] - gl.x[self_node]);
      double j0 = (r == 0.0) ? 1.0 : special::hankel0(k * r).real();
      Complex smooth = log_remainder(k, r) - kInv2Pi * j0 * lnJ;
      out[j] += c.S * J * (gl.w[j] * smooth - kInv2Pi * V(self_node, j) * j0);
    }
    return;
  }
  double dist = dist_point_segment(x, p.a, p.b);
  if (dist > kFarFactor * p.len) {
    for (int j = 0; j < 16; ++j)
      out[j] += p.w[j] * eval_point(k, x, nx, Vec2(p.x.col(j)), p.normal, c);
    return;
  }
  near_recurse(k, p, x, nx, c, -1.0, 1.0, 0, out);
}

}  // namespace wgscat::kernels
