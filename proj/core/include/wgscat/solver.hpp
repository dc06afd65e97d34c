#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "wgscat/geometry.hpp"
#include "wgscat/modal.hpp"

namespace wgscat::solver {

using Complex = std::complex<double>;
using geometry::Vec2;

/// Discretized boundary integral system for one component with the mixed
/// boundary condition: sound-soft or sound-hard walls, impedance data
/// (d/dn + i eta) u = f on the ports.
///
/// Unknowns are nodal density values, one per node of every real panel.
/// The stored matrix is diagonally conditioned with sqrt arclength weights;
/// solve() works in the raw density variables.
struct BieSystem {
  geometry::ComponentGeometry comp;
  geometry::Discretization disc;
  Complex eta = 0.0;
  int n = 0;
  std::vector<int> offset;  // per panel: first unknown index of its 16 nodes
  Eigen::VectorXd sqrtw;
  Eigen::MatrixXcd A;  // conditioned system matrix
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu;
  // per port: nodes in traversal order (transverse coordinate increasing)
  std::vector<std::vector<int>> port_nodes;
  std::vector<std::vector<double>> port_y;   // transverse coordinate per node
  std::vector<std::vector<double>> port_w;   // arclength weight per node
  // per port: trace operator, u at the port nodes from the raw densities
  std::vector<Eigen::MatrixXcd> port_trace;
};

/// True when eta lies in the range where unique solvability of the mixed
/// system is guaranteed: Re(eta) < 0 and |eta| < (sqrt(2)-1)/2. Values
/// outside still work in practice; assemble_system only warns about them.
bool eta_admissible(Complex eta);

BieSystem assemble_system(const geometry::ComponentGeometry& comp,
                          const geometry::Discretization& disc, Complex eta);

/// Nodal right-hand side from modal impedance coefficients per port
/// (walls get zero data). f_coeffs[p][m-1] multiplies basis mode m.
Eigen::VectorXcd modal_rhs(const BieSystem& sys,
                           const std::vector<Eigen::VectorXcd>& f_coeffs);

/// Solves for the raw densities given nodal boundary data.
Eigen::VectorXcd solve(const BieSystem& sys, const Eigen::VectorXcd& rhs);

/// Relative infinity-norm residual of the raw-variable system.
double residual(const BieSystem& sys, const Eigen::VectorXcd& density,
                const Eigen::VectorXcd& rhs);

/// Solution value at an interior point.
Complex eval_field(const BieSystem& sys, const Eigen::VectorXcd& density,
                   const Vec2& x);

/// Modal coefficients of the outgoing impedance trace (d/dn - i eta) u on
/// `port`, computed as f - 2 i eta u without on-surface differentiation.
/// f_nodal is the nodal boundary data the densities were solved against.
Eigen::VectorXcd outgoing_impedance(const BieSystem& sys,
                                    const Eigen::VectorXcd& density,
                                    const Eigen::VectorXcd& f_nodal, int port,
                                    int mode_count);

/// Modal coefficients of u itself on `port`.
Eigen::VectorXcd trace_coefficients(const BieSystem& sys,
                                    const Eigen::VectorXcd& density, int port,
                                    int mode_count);

}  // namespace wgscat::solver
