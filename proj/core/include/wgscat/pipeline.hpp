#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "wgscat/circuit.hpp"
#include "wgscat/glue.hpp"
#include "wgscat/i2i.hpp"
#include "wgscat/solver.hpp"

namespace wgscat::pipeline {

using Complex = std::complex<double>;

struct Options {
  Complex eta{-0.2, 0.0};
  double eps = 1e-14;  // mode retention tolerance
  double h = 0.25;     // target panel length
  int grading_levels = 30;
  int mode_cap = 512;
  bool keep_systems = false;  // retain factorized systems for field evaluation
};

/// Artifacts of one full device solve: retained mode counts, per-component
/// impedance maps, the glued interface system, the reduced map over the
/// external ports, the scattering matrix, and per-stage wall times.
struct Result {
  std::vector<int> iface_modes;
  std::vector<int> ext_modes;
  std::vector<geometry::ComponentGeometry> comps;
  std::vector<solver::BieSystem> systems;  // empty unless keep_systems
  std::unique_ptr<glue::Device> device;
  std::unique_ptr<glue::GlueSystem> glue_sys;
  i2i::I2IMap reduced;
  glue::ScatteringResult scattering;

  int n_pts = 0;        // total discretization nodes
  double t_build = 0;   // panelize + assemble + dense factorizations
  double t_maps = 0;    // impedance map solves
  double t_glue = 0;    // sparse interface system + reduction
  double t_total = 0;
};

Result run(const circuit::Circuit& c, const Options& opt);

/// Densities of every component for one incident propagating excitation,
/// driven by the interface data of solve_incident. Requires keep_systems.
struct FieldSolution {
  glue::IncidentSolution incident;
  std::vector<Eigen::VectorXcd> density;  // per component
  std::vector<Eigen::VectorXcd> rhs;      // matching nodal boundary data
};
FieldSolution solve_fields(const Result& res, const Eigen::VectorXcd& c_minus);

/// Field value at a point, or nothing when the point lies in no component.
std::optional<Complex> eval_point(const Result& res, const FieldSolution& sol,
                                  const Eigen::Vector2d& p);

}  // namespace wgscat::pipeline
