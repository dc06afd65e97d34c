#pragma once

#include <string>
#include <vector>

#include "wgscat/geometry.hpp"
#include "wgscat/lattice.hpp"
#include "wgscat/modal.hpp"

namespace wgscat::circuit {

/// Device description independent of any discretization: polygonal
/// components, the gluing graph, and the clean straight-channel length
/// available at each port (which drives mode retention).
struct Circuit {
  modal::BcKind bc = modal::BcKind::Dirichlet;
  double k = 0.0;

  struct Component {
    std::vector<geometry::LoopInput> loops;
  };
  std::vector<Component> components;

  struct Interface {
    int ca = -1, pa = -1;  // owner component and port
    int cb = -1, pb = -1;
    double L = 0.0;  // clean channel half-length on either side
  };
  std::vector<Interface> interfaces;

  struct External {
    int comp = -1, port = -1;
    double L = 0.0;
  };
  std::vector<External> externals;
};

std::string to_json(const Circuit& c);
Circuit from_json(const std::string& text);

Circuit from_lattice(const lattice::CircuitGraph& g);

/// Two mirrored L-bend components joined by a straight channel of length
/// `sep`: each component is a vertical arm of height `arm` turning into a
/// horizontal half-channel. Externals are ordered left component first.
/// `mono` is the union as a single component; mono_port_of_ext maps each
/// external of the two-component circuit to its port index there.
struct BendPair {
  Circuit two;
  std::vector<geometry::LoopInput> mono;
  std::vector<int> mono_port_of_ext;
};
BendPair make_bend_pair(double width, double arm, double sep, modal::BcKind bc,
                        double k);

}  // namespace wgscat::circuit
