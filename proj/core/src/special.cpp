#include "wgscat/special.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace wgscat::special {
namespace {

// ---------------------------------------------------------------------------
// Double-double arithmetic. The ascending series for J0/Y0 suffer ~e^{2z}
// cancellation, so partial sums are carried in ~32 digits up to the
// asymptotic crossover.
// ---------------------------------------------------------------------------
struct DD {
  double hi = 0.0, lo = 0.0;
};

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD dd_add(const DD& a, const DD& b) {
  DD s = two_sum(a.hi, b.hi);
  DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD dd_mul(const DD& a, const DD& b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DD dd_mul_d(const DD& a, double b) {
  DD p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline DD dd_div_d(const DD& a, double b) {
  double q1 = a.hi / b;
  DD p = two_prod(q1, b);
  double r = ((a.hi - p.hi) - p.lo) + a.lo;
  double q2 = r / b;
  return quick_two_sum(q1, q2);
}

inline DD dd_neg(const DD& a) { return {-a.hi, -a.lo}; }

constexpr DD kEulerGamma = {0.5772156649015328606, -4.942915152430645e-18};

// ---------------------------------------------------------------------------
// Ascending series, double-double accumulation. Usable for z up to ~35.
// ---------------------------------------------------------------------------
struct Bessel01 {
  DD j0, y0, j1, y1;
};

Bessel01 series_dd(double z) {
  DD x = dd_div_d(two_prod(z, z), 4.0);  // z^2/4
  // c = ln(z/2) + gamma, dominant error is the double-precision log
  DD c = dd_add({std::log(z / 2.0), 0.0}, kEulerGamma);

  // J0 = sum t_m, t_m = (-x)^m/(m!)^2 ; ysum0 = sum (-t_m) H_m
  // J1 = sum s_m, s_m = (z/2)(-x)^m/(m!(m+1)!) ; ysum1 = sum s_m (H_m+H_{m+1})
  DD t = {1.0, 0.0};
  DD s = {z / 2.0, 0.0};
  DD h = {0.0, 0.0};   // H_m
  DD hp = {1.0, 0.0};  // H_{m+1}
  DD j0 = t, j1 = s;
  DD ysum0 = {0.0, 0.0};
  DD ysum1 = dd_mul(s, hp);  // m = 0 term: s_0 (H_0 + H_1)
  double max_t = 1.0;
  for (int m = 1; m < 400; ++m) {
    t = dd_div_d(dd_mul(t, dd_neg(x)), double(m) * m);
    s = dd_div_d(dd_mul(s, dd_neg(x)), double(m) * (m + 1));
    h = dd_add(h, dd_div_d({1.0, 0.0}, m));
    hp = dd_add(hp, dd_div_d({1.0, 0.0}, m + 1));
    j0 = dd_add(j0, t);
    j1 = dd_add(j1, s);
    ysum0 = dd_add(ysum0, dd_neg(dd_mul(t, h)));
    ysum1 = dd_add(ysum1, dd_mul(s, dd_add(h, hp)));
    max_t = std::max(max_t, std::abs(t.hi));
    if (std::abs(t.hi) < 1e-40 * max_t && m > z / 2) break;
  }
  constexpr double two_over_pi = 2.0 / M_PI;
  Bessel01 r;
  r.j0 = j0;
  r.j1 = j1;
  DD y0 = dd_add(dd_mul(c, j0), ysum0);
  r.y0 = dd_mul_d(y0, two_over_pi);
  DD y1 = dd_add(dd_mul(c, j1), dd_mul_d(ysum1, -0.5));
  y1 = dd_add(y1, {-1.0 / z, 0.0});
  r.y1 = dd_mul_d(y1, two_over_pi);
  return r;
}

// ---------------------------------------------------------------------------
// Large-argument Hankel asymptotics (z >= 30): truncation error below 1e-19.
// ---------------------------------------------------------------------------
std::complex<double> hankel_asym(int nu, double z) {
  std::complex<double> sum = 1.0;
  std::complex<double> term = 1.0;
  const std::complex<double> iz(0.0, 1.0 / z);
  double prev = 1.0;
  double mu = 4.0 * nu * nu;
  for (int k = 1; k < 40; ++k) {
    double a = (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k);
    term *= a * iz;
    double mag = std::abs(term);
    if (mag > prev) break;  // past optimal truncation
    sum += term;
    prev = mag;
    if (mag < 1e-19) break;
  }
  // phase = z - (2 nu + 1) pi/4, carried in double-double so that the large-z
  // argument reduction does not limit relative accuracy
  constexpr DD kQuarterPi = {0.7853981633974483, 3.061616997868383e-17};
  constexpr DD kThreeQuarterPi = {2.356194490192345, 9.184850993605148e-17};
  const DD& c = (nu == 0) ? kQuarterPi : kThreeQuarterPi;
  DD p = two_sum(z, -c.hi);
  p.lo -= c.lo;
  std::complex<double> e(std::cos(p.hi), std::sin(p.hi));
  e *= std::complex<double>(1.0, p.lo);
  return std::sqrt(2.0 / (M_PI * z)) * e * sum;
}

// ---------------------------------------------------------------------------
// Piecewise-Chebyshev tables on [1, 30], built once from the dd series.
// ---------------------------------------------------------------------------
constexpr int kNumIntervals = 29;  // [1,2], [2,3], ..., [29,30]
constexpr int kDeg = 21;           // nodes per interval

struct ChebTable {
  // [interval][function: J0,Y0,J1,Y1][coefficient]
  std::array<std::array<std::array<double, kDeg>, 4>, kNumIntervals> c{};
};

const ChebTable& cheb_table() {
  static ChebTable table;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int iv = 0; iv < kNumIntervals; ++iv) {
      double a = 1.0 + iv, b = 2.0 + iv;
      std::array<std::array<double, kDeg>, 4> f{};
      std::array<double, kDeg> nodes{};
      for (int j = 0; j < kDeg; ++j) {
        double t = std::cos(M_PI * (j + 0.5) / kDeg);
        nodes[j] = t;
        double z = 0.5 * (a + b) + 0.5 * (b - a) * t;
        Bessel01 v = series_dd(z);
        f[0][j] = v.j0.hi + v.j0.lo;
        f[1][j] = v.y0.hi + v.y0.lo;
        f[2][j] = v.j1.hi + v.j1.lo;
        f[3][j] = v.y1.hi + v.y1.lo;
      }
      for (int fn = 0; fn < 4; ++fn) {
        for (int k = 0; k < kDeg; ++k) {
          double acc = 0.0;
          for (int j = 0; j < kDeg; ++j)
            acc += f[fn][j] * std::cos(k * M_PI * (j + 0.5) / kDeg);
          table.c[iv][fn][k] = acc * 2.0 / kDeg;
        }
        table.c[iv][fn][0] *= 0.5;
      }
      (void)nodes;
    }
  });
  return table;
}

inline double clenshaw(const std::array<double, kDeg>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int k = kDeg - 1; k >= 1; --k) {
    double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

struct Bessel01d {
  double j0, y0, j1, y1;
};

Bessel01d eval_cheb(double z) {
  int iv = std::min(kNumIntervals - 1, int(z - 1.0));
  double a = 1.0 + iv, b = 2.0 + iv;
  double t = (2.0 * z - a - b) / (b - a);
  const auto& tab = cheb_table().c[iv];
  return {clenshaw(tab[0], t), clenshaw(tab[1], t), clenshaw(tab[2], t),
          clenshaw(tab[3], t)};
}

inline void check_arg(double z) {
  if (!(z > 0.0)) throw std::domain_error("hankel: argument must be positive");
}

}  // namespace

std::complex<double> hankel0(double z) {
  check_arg(z);
  if (z >= 30.0) return hankel_asym(0, z);
  if (z >= 1.0) {
    Bessel01d v = eval_cheb(z);
    return {v.j0, v.y0};
  }
  Bessel01 v = series_dd(z);
  return {v.j0.hi + v.j0.lo, v.y0.hi + v.y0.lo};
}

std::complex<double> hankel1(double z) {
  check_arg(z);
  if (z >= 30.0) return hankel_asym(1, z);
  if (z >= 1.0) {
    Bessel01d v = eval_cheb(z);
    return {v.j1, v.y1};
  }
  Bessel01 v = series_dd(z);
  return {v.j1.hi + v.j1.lo, v.y1.hi + v.y1.lo};
}

double bessel_j0(double z) { return hankel0(z).real(); }
double bessel_y0(double z) { return hankel0(z).imag(); }
double bessel_j1(double z) { return hankel1(z).real(); }
double bessel_y1(double z) { return hankel1(z).imag(); }

}  // namespace wgscat::special
