#pragma once

#include <cstdint>
#include <vector>

#include "wgscat/geometry.hpp"
#include "wgscat/modal.hpp"

namespace wgscat::lattice {

struct LatticeOptions {
  int rows = 2, cols = 2;
  double spacing = 15.0;
  double jitter = 0.0;         // node perturbation half-width
  double edge_keep_prob = 1.0;
  int n_external_ports = 0;
  std::uint64_t seed = 0;
  double width = 0.0;          // channel width d
  modal::BcKind bc = modal::BcKind::Dirichlet;
  double k = 0.0;
};

/// A generated circuit: one polygonal component per retained lattice node
/// (the union of its half-channels), interfaces at edge midpoints, and
/// straight external stubs on the outer boundary.
struct CircuitGraph {
  double width = 0.0, k = 0.0, spacing = 0.0;
  modal::BcKind bc = modal::BcKind::Dirichlet;

  std::vector<geometry::LoopInput> components;
  std::vector<Eigen::Vector2d> nodes;  // positions, one per component

  struct Iface {
    int ca, pa;  // component and port index, owner side
    int cb, pb;
    double L;  // clean straight-channel length available on either side
  };
  std::vector<Iface> interfaces;

  struct Ext {
    int comp, port;
    double L;
  };
  std::vector<Ext> externals;
};

/// Deterministic perturbed-lattice circuit: rows x cols nodes at the given
/// spacing, uniform jitter, each grid edge kept with probability
/// edge_keep_prob, pruned to the largest connected piece, with
/// n_external_ports outward stubs of length spacing/2 on boundary nodes.
/// Identical seeds give bit-identical graphs.
CircuitGraph lattice_generator(const LatticeOptions& opt);

/// Union of all node polygons as a single multi-loop geometry whose only
/// ports are the external stubs. Reference geometry for validating the
/// glued solve against one monolithic solve.
struct MonolithicGeometry {
  std::vector<geometry::LoopInput> loops;
  std::vector<int> port_of_ext;  // built port index per graph external
};
MonolithicGeometry monolithic_union(const CircuitGraph& graph);

}  // namespace wgscat::lattice
