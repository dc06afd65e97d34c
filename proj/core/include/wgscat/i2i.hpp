#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "wgscat/modal.hpp"
#include "wgscat/solver.hpp"

namespace wgscat::i2i {

using Complex = std::complex<double>;

/// Truncated impedance-to-impedance map of a component.
///
/// For boundary data f = (d/dn + i eta) u on the ports, the map returns the
/// complementary trace g = (d/dn - i eta) u, both expanded in each port's
/// modal basis and truncated to mode_counts[p] modes: g = T f with the
/// coefficients stacked port by port.
struct I2IMap {
  Complex eta = 0.0;
  std::vector<int> mode_counts;
  std::vector<modal::PortSpec> ports;
  Eigen::MatrixXcd T;

  int total_modes() const;
  int port_offset(int port) const;

  std::string to_json() const;
  static I2IMap from_json(const std::string& text);
};

/// Computes the map by solving the component BIE once per retained mode.
I2IMap compute_i2i(const solver::BieSystem& sys,
                   const std::vector<int>& mode_counts);

/// Closed-form map of a straight channel of length `len` whose two ports
/// share the cross-section `spec`. Port 1 sits at the near end; port 2's
/// transverse axis is reversed, as for a counterclockwise boundary
/// traversal.
I2IMap channel_i2i_analytic(const modal::PortSpec& spec, double len,
                            Complex eta, int mode_count);

/// Diagonal reflection coefficient (beta+eta)/(beta-eta) of a semi-infinite
/// channel, the len -> infinity limit of the two-port map's diagonal.
Complex semi_infinite_reflection(const modal::PortSpec& spec, Complex eta,
                                 int mode);

}  // namespace wgscat::i2i
