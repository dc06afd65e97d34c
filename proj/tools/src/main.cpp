#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wgscat/circuit.hpp"
#include "wgscat/glue.hpp"
#include "wgscat/pipeline.hpp"
#include "wgscat/special.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace wgscat;
using Complex = std::complex<double>;
using geometry::Vec2;

namespace {

const Complex kI(0.0, 1.0);

struct RunConfig {
  json raw;
  std::optional<circuit::Circuit> circ;
  std::optional<lattice::LatticeOptions> lat;
  pipeline::Options popt;
  std::string out = ".";
};

modal::BcKind parse_bc(const std::string& s) {
  if (s == "dirichlet") return modal::BcKind::Dirichlet;
  if (s == "neumann") return modal::BcKind::Neumann;
  throw std::invalid_argument("unknown boundary kind: " + s);
}

RunConfig load_config(const std::string& path, std::optional<long> seed,
                      std::optional<Complex> eta, std::optional<double> tol,
                      const std::string& out) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  RunConfig cfg;
  cfg.raw = json::parse(in);
  cfg.out = out;

  if (cfg.raw.contains("geometry")) {
    cfg.circ = circuit::from_json(cfg.raw.at("geometry").dump());
  } else if (cfg.raw.contains("lattice")) {
    const json& jl = cfg.raw.at("lattice");
    lattice::LatticeOptions lo;
    lo.rows = jl.value("rows", 2);
    lo.cols = jl.value("cols", 2);
    lo.spacing = jl.value("spacing", 15.0);
    lo.jitter = jl.value("jitter", 0.0);
    lo.edge_keep_prob = jl.value("edge_keep_prob", 1.0);
    lo.n_external_ports = jl.value("n_external_ports", 0);
    lo.seed = jl.value("seed", 0ull);
    lo.width = jl.value("width", M_PI + 1.0);
    lo.bc = parse_bc(cfg.raw.value("bc", "dirichlet"));
    lo.k = cfg.raw.value("k", 1.0);
    if (seed) lo.seed = std::uint64_t(*seed);
    cfg.lat = lo;
  }

  if (cfg.raw.contains("eta"))
    cfg.popt.eta = Complex(cfg.raw.at("eta")[0].get<double>(),
                           cfg.raw.at("eta")[1].get<double>());
  if (eta) cfg.popt.eta = *eta;
  cfg.popt.eps = cfg.raw.value("tol", 1e-14);
  if (tol) cfg.popt.eps = *tol;
  if (!(cfg.popt.eps > 1e-15 && cfg.popt.eps < 1e-2))
    throw std::invalid_argument("tolerance must lie in (1e-15, 1e-2)");
  cfg.popt.h = cfg.raw.value("h", 0.25);
  cfg.popt.grading_levels = cfg.raw.value("grading_levels", 30);
  return cfg;
}

circuit::Circuit make_circuit(const RunConfig& cfg) {
  if (cfg.circ) return *cfg.circ;
  if (cfg.lat) return circuit::from_lattice(lattice::lattice_generator(*cfg.lat));
  throw std::invalid_argument("config needs a \"geometry\" or \"lattice\" entry");
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Grid {
  double xmin, xmax, ymin, ymax;
  int nx, ny;
};

Grid parse_grid(const json& jg) {
  Grid g{jg.at("xmin").get<double>(), jg.at("xmax").get<double>(),
         jg.at("ymin").get<double>(), jg.at("ymax").get<double>(),
         jg.at("nx").get<int>(), jg.at("ny").get<int>()};
  if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("grid is empty");
  return g;
}

Grid bounding_grid(const circuit::Circuit& c, int n) {
  Grid g{1e300, -1e300, 1e300, -1e300, n, n};
  for (const auto& comp : c.components)
    for (const auto& loop : comp.loops)
      for (const auto& v : loop.vertices) {
        g.xmin = std::min(g.xmin, v.x());
        g.xmax = std::max(g.xmax, v.x());
        g.ymin = std::min(g.ymin, v.y());
        g.ymax = std::max(g.ymax, v.y());
      }
  return g;
}

double grid_x(const Grid& g, int i) {
  return g.nx == 1 ? g.xmin : g.xmin + (g.xmax - g.xmin) * i / (g.nx - 1);
}
double grid_y(const Grid& g, int j) {
  return g.ny == 1 ? g.ymin : g.ymin + (g.ymax - g.ymin) * j / (g.ny - 1);
}

Complex green(double k, const Vec2& x, const Vec2& x0) {
  return 0.25 * kI * special::hankel0(k * (x - x0).norm());
}

Complex green_dn(double k, const Vec2& x, const Vec2& n, const Vec2& x0) {
  Vec2 diff = x - x0;
  double r = diff.norm();
  return -0.25 * kI * k * special::hankel1(k * r) * diff.dot(n) / r;
}

// flux conservation residual ||S* B S - B|| / ||B||, B = diag(beta) over the
// propagating modes of the reduced map
double flux_residual(const pipeline::Result& res) {
  std::vector<Complex> betas;
  for (size_t p = 0; p < res.reduced.ports.size(); ++p)
    for (int m = 1; m <= res.scattering.propagating[p]; ++m)
      betas.push_back(modal::beta(res.reduced.ports[p], m));
  int n = int(betas.size());
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) B(i, i) = betas[i];
  return (res.scattering.S.adjoint() * B * res.scattering.S - B).norm() /
         B.norm();
}

json solve_log(const pipeline::Result& res) {
  json j;
  j["n_pts"] = res.n_pts;
  j["iface_modes"] = res.iface_modes;
  j["ext_modes"] = res.ext_modes;
  j["propagating"] = res.scattering.propagating;
  j["seconds"] = {{"discretize_factorize", res.t_build},
                  {"impedance_maps", res.t_maps},
                  {"interface_solve", res.t_glue},
                  {"total", res.t_total}};
  return j;
}

// boundary data of the exterior point-source field G_k(., x0) in the row
// convention of the mixed system: value on sound-soft walls, normal
// derivative on sound-hard walls, impedance trace on ports
Eigen::VectorXcd point_source_rhs(const solver::BieSystem& sys, const Vec2& x0) {
  bool dirichlet = sys.comp.ports[0].spec.bc == modal::BcKind::Dirichlet;
  Eigen::VectorXcd rhs(sys.n);
  for (size_t p = 0; p < sys.disc.panels.size(); ++p) {
    const auto& pan = sys.disc.panels[p];
    bool port = sys.comp.segments[pan.segment].kind == geometry::SegKind::Port;
    for (int j = 0; j < 16; ++j) {
      Vec2 x = pan.x.col(j);
      Complex v;
      if (port) {
        v = green_dn(sys.comp.k, x, pan.normal, x0) +
            kI * sys.eta * green(sys.comp.k, x, x0);
      } else if (dirichlet) {
        v = green(sys.comp.k, x, x0);
      } else {
        v = green_dn(sys.comp.k, x, pan.normal, x0);
      }
      rhs[sys.offset[p] + j] = v;
    }
  }
  return rhs;
}

int cmd_verify_analytic(const RunConfig& cfg) {
  auto circ = make_circuit(cfg);
  if (circ.components.size() != 1)
    throw std::invalid_argument("analytic verification needs a single component");
  if (!cfg.raw.contains("source"))
    throw std::invalid_argument("config needs a \"source\" point");
  Vec2 x0(cfg.raw.at("source")[0].get<double>(),
          cfg.raw.at("source")[1].get<double>());
  double threshold = cfg.raw.value("threshold", 1e-8);
  Grid grid = cfg.raw.contains("grid") ? parse_grid(cfg.raw.at("grid"))
                                       : bounding_grid(circ, 40);

  json report;
  report["source"] = {x0.x(), x0.y()};
  report["threshold"] = threshold;
  bool pass = true;
  for (auto bc : {modal::BcKind::Dirichlet, modal::BcKind::Neumann}) {
    const char* name = bc == modal::BcKind::Dirichlet ? "dirichlet" : "neumann";
    auto comp = geometry::build_component(circ.components[0].loops, bc, circ.k);
    if (geometry::inside(comp, x0))
      throw std::invalid_argument("source point must lie outside the domain");
    geometry::PanelizeOptions popt;
    popt.h = cfg.popt.h;
    popt.grading_levels = cfg.popt.grading_levels;
    auto disc = geometry::panelize(comp, popt);
    if (bc == modal::BcKind::Dirichlet) geometry::build_image_panels(comp, disc);
    auto sys = solver::assemble_system(comp, disc, cfg.popt.eta);
    Eigen::VectorXcd rhs = point_source_rhs(sys, x0);
    Eigen::VectorXcd dens = solver::solve(sys, rhs);

    double min_len = 1e300;
    for (const auto& pan : disc.panels) min_len = std::min(min_len, pan.len);
    std::vector<Vec2> corners;
    for (const auto& loop : circ.components[0].loops)
      for (const auto& v : loop.vertices) corners.push_back(v);

    std::ostringstream csv;
    csv << "x,y,log10err\n";
    double max_err = 0.0;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        Vec2 x(grid_x(grid, i), grid_y(grid, j));
        if (!geometry::inside(comp, x)) continue;
        bool near_corner = false;
        for (const auto& cpt : corners)
          if ((x - cpt).norm() < min_len) near_corner = true;
        if (near_corner) continue;
        double err = std::abs(solver::eval_field(sys, dens, x) -
                              green(circ.k, x, x0));
        max_err = std::max(max_err, err);
        csv << fmt(x.x()) << ',' << fmt(x.y()) << ','
            << fmt(std::log10(std::max(err, 1e-300))) << '\n';
      }
    write_file(fs::path(cfg.out) / (std::string("verify_") + name + ".csv"),
               csv.str());
    report[name] = {{"max_interior_error", max_err}, {"n_pts", sys.n}};
    std::printf("%s: max interior error %.3e (threshold %.1e)\n", name, max_err,
                threshold);
    if (!(max_err <= threshold)) pass = false;
  }
  report["pass"] = pass;
  write_file(fs::path(cfg.out) / "verify_report.json", report.dump(2));
  return pass ? 0 : 1;
}

int cmd_smatrix(const RunConfig& cfg) {
  auto circ = make_circuit(cfg);
  auto res = pipeline::run(circ, cfg.popt);
  double flux = flux_residual(res);
  double flux_threshold = cfg.raw.value("flux_threshold", 1e-9);

  write_file(fs::path(cfg.out) / "smatrix.json", res.scattering.to_json());
  write_file(fs::path(cfg.out) / "reduced_map.json", res.reduced.to_json());
  json log = solve_log(res);
  log["flux_residual"] = flux;
  log["flux_threshold"] = flux_threshold;
  write_file(fs::path(cfg.out) / "solve_log.json", log.dump(2));
  std::printf("n_pts %d, flux residual %.3e, total %.2fs\n", res.n_pts, flux,
              res.t_total);
  return flux <= flux_threshold ? 0 : 1;
}

int cmd_field(const RunConfig& cfg, std::optional<long> seed) {
  auto circ = make_circuit(cfg);
  if (!cfg.raw.contains("grid"))
    throw std::invalid_argument("config needs a \"grid\" entry");
  Grid grid = parse_grid(cfg.raw.at("grid"));

  auto popt = cfg.popt;
  popt.keep_systems = true;
  auto res = pipeline::run(circ, popt);

  int n_prop = int(res.scattering.S.rows());
  Eigen::VectorXcd cm(n_prop);
  if (cfg.raw.contains("c_minus") && cfg.raw.at("c_minus").is_array()) {
    const json& jc = cfg.raw.at("c_minus");
    if (int(jc.size()) != n_prop)
      throw std::invalid_argument("c_minus needs one entry per propagating mode");
    for (int i = 0; i < n_prop; ++i)
      cm[i] = Complex(jc[i][0].get<double>(), jc[i][1].get<double>());
  } else {
    std::mt19937_64 gen(seed ? std::uint64_t(*seed)
                             : cfg.raw.value("c_minus_seed", 0ull));
    auto urand = [&] { return double(gen() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < n_prop; ++i)
      cm[i] = Complex(2.0 * urand() - 1.0, 2.0 * urand() - 1.0);
  }
  auto sol = pipeline::solve_fields(res, cm);

  std::ostringstream csv;
  csv << "x,y,re_u,im_u\n";
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      Vec2 x(grid_x(grid, i), grid_y(grid, j));
      auto u = pipeline::eval_point(res, sol, x);
      csv << fmt(x.x()) << ',' << fmt(x.y()) << ',';
      if (u) {
        csv << fmt(u->real()) << ',' << fmt(u->imag()) << '\n';
      } else {
        csv << ",\n";
      }
    }
  write_file(fs::path(cfg.out) / "field.csv", csv.str());

  json log = solve_log(res);
  json jcm = json::array();
  for (int i = 0; i < n_prop; ++i) jcm.push_back({cm[i].real(), cm[i].imag()});
  log["c_minus"] = std::move(jcm);
  write_file(fs::path(cfg.out) / "field_log.json", log.dump(2));
  return 0;
}

// merged-vs-monolithic impedance map error of the bend-pair template, for
// every combination of channel separation L and interface mode count M
int cmd_sweep_merge_error(const RunConfig& cfg) {
  double width = cfg.raw.value("width", M_PI + 1.0);
  double arm = cfg.raw.value("arm", 3.0 * width);
  double k = cfg.raw.value("k", 1.0);
  std::vector<double> L_list = cfg.raw.at("L_list").get<std::vector<double>>();
  std::vector<int> M_list = cfg.raw.at("M_list").get<std::vector<int>>();

  std::ostringstream csv;
  csv << "bc,L,M,error\n";
  for (auto bc : {modal::BcKind::Dirichlet, modal::BcKind::Neumann}) {
    const char* name = bc == modal::BcKind::Dirichlet ? "dirichlet" : "neumann";
    for (double L : L_list) {
      auto bp = circuit::make_bend_pair(width, arm, L, bc, k);
      std::vector<geometry::ComponentGeometry> comps;
      for (int c = 0; c < 2; ++c)
        comps.push_back(
            geometry::build_component(bp.two.components[c].loops, bc, k));
      auto mono = geometry::build_component(bp.mono, bc, k);
      int Mext = modal::select_mode_count(
          comps[0].ports[bp.two.externals[0].port].spec,
          bp.two.externals[0].L, cfg.popt.eps);

      int Mmax = *std::max_element(M_list.begin(), M_list.end());
      auto assemble = [&](geometry::ComponentGeometry& comp,
                          const std::vector<int>& port_modes) {
        geometry::PanelizeOptions popt;
        popt.h = cfg.popt.h;
        popt.grading_levels = cfg.popt.grading_levels;
        for (int M : port_modes)
          popt.port_panels.push_back(std::max(4, (M + 3) / 4));
        auto disc = geometry::panelize(comp, popt);
        if (bc == modal::BcKind::Dirichlet)
          geometry::build_image_panels(comp, disc);
        return solver::assemble_system(comp, disc, cfg.popt.eta);
      };
      auto sys_a = assemble(comps[0], {Mmax, Mext});
      auto sys_b = assemble(comps[1], {Mext, Mmax});
      std::vector<int> mono_modes(2);
      mono_modes[bp.mono_port_of_ext[0]] = Mext;
      mono_modes[bp.mono_port_of_ext[1]] = Mext;
      auto sys_m = assemble(mono, mono_modes);
      auto map_m = i2i::compute_i2i(sys_m, mono_modes);

      for (int M : M_list) {
        auto map_a = i2i::compute_i2i(sys_a, {M, Mext});
        auto map_b = i2i::compute_i2i(sys_b, {Mext, M});
        auto merged = glue::merge_pair(map_a, map_b, 0, 1);
        double err = 0.0;
        for (int pe = 0; pe < 2; ++pe)
          for (int qe = 0; qe < 2; ++qe) {
            int pm = bp.mono_port_of_ext[pe], qm = bp.mono_port_of_ext[qe];
            err = std::max(
                err, (merged.T.block(merged.port_offset(pe),
                                     merged.port_offset(qe), Mext, Mext) -
                      map_m.T.block(map_m.port_offset(pm),
                                    map_m.port_offset(qm), Mext, Mext))
                         .cwiseAbs()
                         .maxCoeff());
          }
        csv << name << ',' << fmt(L) << ',' << M << ',' << fmt(err) << '\n';
        std::printf("%s L=%g M=%d error=%.3e\n", name, L, M, err);
      }
    }
  }
  write_file(fs::path(cfg.out) / "merge_error.csv", csv.str());
  return 0;
}

int cmd_bench(const RunConfig& cfg) {
  if (!cfg.lat)
    throw std::invalid_argument("bench needs a \"lattice\" config entry");
  std::vector<int> nx_list =
      cfg.raw.value("nx_list", std::vector<int>{3, 6, 12});

  std::ostringstream csv;
  csv << "n_pts,discretize_factorize,impedance_maps,interface_solve,total\n";
  std::vector<double> log_n, log_t;
  double max_share = 0.0;
  json runs = json::array();
  for (int nx : nx_list) {
    auto lo = *cfg.lat;
    lo.cols = nx;
    auto circ = circuit::from_lattice(lattice::lattice_generator(lo));
    auto res = pipeline::run(circ, cfg.popt);
    csv << res.n_pts << ',' << fmt(res.t_build) << ',' << fmt(res.t_maps)
        << ',' << fmt(res.t_glue) << ',' << fmt(res.t_total) << '\n';
    log_n.push_back(std::log(double(res.n_pts)));
    log_t.push_back(std::log(res.t_total));
    max_share = std::max(max_share, res.t_glue / res.t_total);
    json r = solve_log(res);
    r["cols"] = nx;
    runs.push_back(std::move(r));
    std::printf("cols=%d n_pts=%d total=%.2fs sparse=%.4fs\n", nx, res.n_pts,
                res.t_total, res.t_glue);
  }
  // least-squares slope of log t against log n
  double exponent = 0.0;
  if (log_n.size() >= 2) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < log_n.size(); ++i) mx += log_n[i], my += log_t[i];
    mx /= log_n.size();
    my /= log_t.size();
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < log_n.size(); ++i) {
      sxx += (log_n[i] - mx) * (log_n[i] - mx);
      sxy += (log_n[i] - mx) * (log_t[i] - my);
    }
    exponent = sxy / sxx;
  }
  write_file(fs::path(cfg.out) / "bench.csv", csv.str());
  json log;
  log["runs"] = std::move(runs);
  log["exponent"] = exponent;
  log["max_sparse_share"] = max_share;
  write_file(fs::path(cfg.out) / "bench_log.json", log.dump(2));
  std::printf("scaling exponent %.3f, max sparse share %.4f\n", exponent,
              max_share);

  bool pass = true;
  if (cfg.raw.contains("max_exponent") &&
      exponent > cfg.raw.at("max_exponent").get<double>())
    pass = false;
  if (cfg.raw.contains("max_sparse_share") &&
      max_share > cfg.raw.at("max_sparse_share").get<double>())
    pass = false;
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waveguide circuit scattering solver"};
  app.require_subcommand(1);

  std::string config_path, out = ".", eta_arg;
  std::optional<long> seed;
  std::optional<double> tol;
  int threads = 0;

  app.add_option("--config", config_path, "JSON run configuration")
      ->required();
  app.add_option("--seed", seed, "override the geometry/excitation seed");
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker thread count");
  app.add_option("--eta", eta_arg, "impedance parameter as re,im");
  app.add_option("--tol", tol, "mode retention tolerance");

  auto* verify = app.add_subcommand("verify-analytic",
                                    "point-source accuracy check");
  auto* smatrix = app.add_subcommand("smatrix", "device scattering matrix");
  auto* field = app.add_subcommand("field", "interior field on a grid");
  auto* sweep = app.add_subcommand("sweep-merge-error",
                                   "merged vs monolithic map error sweep");
  auto* bench = app.add_subcommand("bench", "pipeline scaling benchmark");
  for (auto* sub : {verify, smatrix, field, sweep, bench}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads == 0)
      if (const char* env = std::getenv("WGSCAT_THREADS")) threads = std::atoi(env);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#endif

    std::optional<Complex> eta;
    if (!eta_arg.empty()) {
      double re, im;
      if (std::sscanf(eta_arg.c_str(), "%lf,%lf", &re, &im) != 2)
        throw std::invalid_argument("--eta expects re,im");
      eta = Complex(re, im);
    }
    RunConfig cfg = load_config(config_path, seed, eta, tol, out);

    if (verify->parsed()) return cmd_verify_analytic(cfg);
    if (smatrix->parsed()) return cmd_smatrix(cfg);
    if (field->parsed()) return cmd_field(cfg, seed);
    if (sweep->parsed()) return cmd_sweep_merge_error(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
