#include "wgscat/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace wgscat::pipeline {
namespace {

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

}  // namespace

Result run(const circuit::Circuit& c, const Options& opt) {
  double t_start = now();
  Result res;

  size_t nc = c.components.size();
  for (size_t i = 0; i < nc; ++i)
    res.comps.push_back(geometry::build_component(c.components[i].loops, c.bc, c.k));

  // retained mode count per interface and external port, from the clean
  // straight-channel length available there
  for (const auto& f : c.interfaces) {
    const auto& spec = res.comps[f.ca].ports[f.pa].spec;
    res.iface_modes.push_back(
        modal::select_mode_count(spec, f.L, opt.eps, opt.mode_cap));
  }
  for (const auto& e : c.externals) {
    const auto& spec = res.comps[e.comp].ports[e.port].spec;
    res.ext_modes.push_back(
        modal::select_mode_count(spec, e.L, opt.eps, opt.mode_cap));
  }

  // scatter to per-component per-port counts
  std::vector<std::vector<int>> mode_counts(nc);
  for (size_t i = 0; i < nc; ++i)
    mode_counts[i].assign(res.comps[i].ports.size(), 0);
  for (size_t i = 0; i < c.interfaces.size(); ++i) {
    const auto& f = c.interfaces[i];
    mode_counts[f.ca][f.pa] = res.iface_modes[i];
    mode_counts[f.cb][f.pb] = res.iface_modes[i];
  }
  for (size_t e = 0; e < c.externals.size(); ++e)
    mode_counts[c.externals[e].comp][c.externals[e].port] = res.ext_modes[e];
  for (size_t i = 0; i < nc; ++i)
    for (size_t p = 0; p < mode_counts[i].size(); ++p)
      if (mode_counts[i][p] == 0)
        throw std::invalid_argument("component port neither glued nor external");

  res.device = std::make_unique<glue::Device>();
  for (size_t i = 0; i < nc; ++i) {
    geometry::PanelizeOptions popt;
    popt.h = opt.h;
    popt.grading_levels = opt.grading_levels;
    for (int M : mode_counts[i])
      popt.port_panels.push_back(std::max(4, (M + 3) / 4));

    double t0 = now();
    auto disc = geometry::panelize(res.comps[i], popt);
    if (c.bc == modal::BcKind::Dirichlet)
      geometry::build_image_panels(res.comps[i], disc);
    auto sys = solver::assemble_system(res.comps[i], disc, opt.eta);
    double t1 = now();
    res.device->maps.push_back(i2i::compute_i2i(sys, mode_counts[i]));
    double t2 = now();

    res.t_build += t1 - t0;
    res.t_maps += t2 - t1;
    res.n_pts += sys.n;
    if (opt.keep_systems) res.systems.push_back(std::move(sys));
  }

  for (size_t i = 0; i < c.interfaces.size(); ++i) {
    const auto& f = c.interfaces[i];
    res.device->interfaces.push_back(
        {{f.ca, f.pa}, {f.cb, f.pb}, res.iface_modes[i]});
  }
  for (const auto& e : c.externals)
    res.device->external_ports.push_back({e.comp, e.port});

  double t0 = now();
  res.glue_sys = std::make_unique<glue::GlueSystem>(*res.device);
  res.reduced = glue::schur_reduce(*res.glue_sys);
  res.t_glue = now() - t0;

  res.scattering = glue::scattering_matrix(res.reduced);
  res.t_total = now() - t_start;
  return res;
}

FieldSolution solve_fields(const Result& res, const Eigen::VectorXcd& c_minus) {
  if (res.systems.empty())
    throw std::logic_error("field evaluation needs keep_systems");
  FieldSolution sol;
  sol.incident = glue::solve_incident(*res.glue_sys, res.reduced, c_minus);
  for (size_t i = 0; i < res.systems.size(); ++i) {
    const auto& map = res.device->maps[i];
    std::vector<Eigen::VectorXcd> f(map.ports.size());
    for (size_t p = 0; p < map.ports.size(); ++p)
      f[p] = sol.incident.f[i].segment(map.port_offset(int(p)),
                                       map.mode_counts[p]);
    Eigen::VectorXcd rhs = solver::modal_rhs(res.systems[i], f);
    sol.density.push_back(solver::solve(res.systems[i], rhs));
    sol.rhs.push_back(std::move(rhs));
  }
  return sol;
}

std::optional<Complex> eval_point(const Result& res, const FieldSolution& sol,
                                  const Eigen::Vector2d& p) {
  for (size_t i = 0; i < res.comps.size(); ++i)
    if (geometry::inside(res.comps[i], p))
      return solver::eval_field(res.systems[i], sol.density[i], p);
  return std::nullopt;
}

}  // namespace wgscat::pipeline
