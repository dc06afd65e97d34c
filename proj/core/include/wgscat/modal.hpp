#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace wgscat::modal {

using Complex = std::complex<double>;

enum class BcKind { Dirichlet, Neumann };

/// One straight channel cross-section. Owns the modal basis of the port.
struct PortSpec {
  double width = 0.0;  // d
  BcKind bc = BcKind::Dirichlet;
  double k = 0.0;  // wavenumber
  // Local frame: origin at the port midpoint, tangent along the cross-section
  // (transverse coordinate y grows along it), axis pointing into the channel
  // (i.e. the outward normal of the component the port belongs to).
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();
  Eigen::Vector2d tangent = Eigen::Vector2d::UnitX();
  Eigen::Vector2d axis = Eigen::Vector2d::UnitY();

  void validate() const;  // throws std::invalid_argument on violation
};

struct Mode {
  int index = 0;  // 1-based
  Complex beta;
  bool propagating = false;
};

/// Propagation constant of mode m. Branch: Im(beta) >= 0, Re(beta) >= 0.
/// Throws if the mode sits at cutoff (|beta| < 1e-12 k).
Complex beta(const PortSpec& spec, int m);

/// Orthonormal transverse basis function b_m evaluated at y in [-d/2, d/2].
double basis_eval(const PortSpec& spec, int m, double y);

/// Number of propagating modes M_p.
int count_propagating(const PortSpec& spec);

/// Number of retained modes for a channel of half-length L at tolerance eps:
/// all propagating modes plus evanescent modes with e^{-|Im beta| L} > eps.
/// Throws if the count would exceed `cap`.
int select_mode_count(const PortSpec& spec, double L, double eps, int cap = 512);

/// Transverse quadrature rule on [-d/2, d/2]: composite 16-point
/// Gauss-Legendre with max(4, ceil(M/4)) panels, resolving mode M.
struct PortRule {
  std::vector<double> y;
  std::vector<double> w;
};
PortRule make_port_rule(const PortSpec& spec, int mode_count);

struct TraceProjection {
  Complex pu;      // P_m u
  Complex pdu;     // P'_m u  (axis-derivative projection)
  Complex cplus;   // outgoing coefficient
  Complex cminus;  // incoming coefficient
};

/// Projects sampled trace data (u, du/dx along the port axis) onto mode m
/// using the supplied transverse quadrature rule.
TraceProjection project_trace(const PortSpec& spec, const std::vector<double>& y,
                              const std::vector<double>& w,
                              const std::vector<Complex>& u,
                              const std::vector<Complex>& dxu, int m);

/// Sign flip of b_m under y -> -y: Dirichlet (-1)^{m+1}, Neumann (-1)^{m-1}.
double mode_parity(BcKind bc, int m);

}  // namespace wgscat::modal
