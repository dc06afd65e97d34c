#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <string>
#include <vector>

#include "wgscat/i2i.hpp"

namespace wgscat::glue {

using Complex = std::complex<double>;

struct PortRef {
  int component = -1;
  int port = -1;
};

/// Two coincident ports of different components glued together. The owner
/// side fixes the reference frame of the shared interface coefficients.
struct Interface {
  PortRef owner, other;
  int modes = 0;
};

/// A circuit device: one impedance map per component plus the gluing graph.
struct Device {
  std::vector<i2i::I2IMap> maps;
  std::vector<Interface> interfaces;
  std::vector<PortRef> external_ports;  // ordering fixes the reduced map
};

/// Consistency checks: matching widths, boundary kinds, wavenumbers and eta,
/// coincident geometry with reversed frames, matching mode counts, every
/// component port either glued or external.
void validate(const Device& dev);

/// Sparse system over the interface coefficients h+/h- (outgoing/incoming
/// impedance data in the owner frame, stacked interface by interface), with
/// the external-port impedance inputs moved to the right-hand side.
struct GlueSystem {
  explicit GlueSystem(const Device& dev);

  const Device* dev;
  std::vector<int> iface_off;  // h+ block offset; h- follows at +modes
  int n_iface = 0;
  std::vector<int> ext_off;  // stacked retained modes per external port
  int n_ext = 0;

  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  Eigen::MatrixXcd R;   // external inputs -> interface right-hand side
  Eigen::MatrixXcd G0;  // direct external-to-external coupling
  Eigen::MatrixXcd Gx;  // interface solution -> external outputs
};

/// Eliminates the interface coefficients, producing the impedance map of the
/// whole device over its external ports.
i2i::I2IMap schur_reduce(const GlueSystem& sys);

struct ScatteringResult {
  std::vector<int> propagating;  // per port of the reduced map
  Eigen::MatrixXcd S;  // outgoing amplitudes per incident propagating mode
  // incident amplitudes -> impedance data over all retained modes; the
  // evanescent rows carry the decaying near field at the external ports
  Eigen::MatrixXcd F;
  std::string to_json() const;
};

/// Scattering matrix of a reduced impedance map, restricted to the
/// propagating modes of its ports.
ScatteringResult scattering_matrix(const i2i::I2IMap& reduced);

/// Full response to incident amplitudes c_minus (stacked propagating modes):
/// outgoing amplitudes, port impedance data, interface coefficients, and the
/// per-component impedance inputs needed for interior field reconstruction.
struct IncidentSolution {
  Eigen::VectorXcd cplus;
  Eigen::VectorXcd f_ext;  // impedance data over all retained modes
  std::vector<Eigen::VectorXcd> hplus, hminus;  // per interface
  std::vector<Eigen::VectorXcd> f;              // per component
};
IncidentSolution solve_incident(const GlueSystem& sys, const i2i::I2IMap& reduced,
                                const Eigen::VectorXcd& c_minus);

/// Eliminates one interface between two maps, producing the map of the
/// merged component over the remaining ports (a's ports without port_a,
/// then b's without port_b).
i2i::I2IMap merge_pair(const i2i::I2IMap& a, const i2i::I2IMap& b, int port_a,
                       int port_b);

}  // namespace wgscat::glue
