#pragma once

#include <complex>

namespace wgscat::special {

/// Hankel function of the first kind, order 0: H0(z) = J0(z) + i Y0(z).
/// Valid for z > 0; relative accuracy ~1e-14 over z in [1e-8, 1e4].
std::complex<double> hankel0(double z);

/// Hankel function of the first kind, order 1.
std::complex<double> hankel1(double z);

double bessel_j0(double z);
double bessel_y0(double z);
double bessel_j1(double z);
double bessel_y1(double z);

}  // namespace wgscat::special
