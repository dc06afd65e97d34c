#pragma once

#include <complex>

#include "wgscat/geometry.hpp"

namespace wgscat::kernels {

using Complex = std::complex<double>;
using geometry::Panel;
using geometry::Vec2;

/// Weights of the four Helmholtz layer kernels in a combined row:
///   c.S  * G(x,y)            single layer
///   c.D  * dG/dn_y           double layer
///   c.Sp * dG/dn_x           normal derivative of the single layer
///   c.Dp * d2G/dn_x dn_y     normal derivative of the double layer
struct KernelCoeffs {
  Complex S{0.0}, D{0.0}, Sp{0.0}, Dp{0.0};
};

/// Pointwise combined kernel value.
Complex kernel_eval(double k, const Vec2& x, const Vec2& nx, const Vec2& y,
                    const Vec2& ny, const KernelCoeffs& c);

/// Accumulates into out[0..15] the quadrature coefficients of the panel's
/// nodal density values for the integral of the combined kernel against the
/// density over the panel:
///   row(x) += sum_j out[j] * density(node j).
///
/// self_node >= 0 marks x as node self_node of this panel; the single-layer
/// part then uses the log-split product rule, and the remaining kernels
/// vanish identically on a flat panel. Otherwise far targets (distance
/// > 2.5 panel lengths) use the plain 16-point rule and near targets use
/// recursive bisection with polynomial density interpolation.
void panel_influence(double k, const Panel& p, const Vec2& x, const Vec2& nx,
                     const KernelCoeffs& c, int self_node, Complex* out);

}  // namespace wgscat::kernels
