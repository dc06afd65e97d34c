#include "wgscat/solver.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "wgscat/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wgscat::solver {
namespace {

using geometry::Panel;
using geometry::SegKind;
using kernels::KernelCoeffs;

const Complex kI(0.0, 1.0);

bool on_port(const BieSystem& sys, const Panel& p) {
  return sys.comp.segments[p.segment].kind == SegKind::Port;
}

// Kernel weights of one source panel in a row of the system or of a trace
// operator. `row_port` is the port the target lies on (-1 for wall rows or
// interior targets); `trace` selects the representation itself rather than
// its impedance/trace equation.
struct RowContext {
  double k = 0.0;
  Complex eta = 0.0;
  bool dirichlet = true;
  int row_port = -1;  // port index the target sits on, or -1
  bool impedance_row = false;  // apply (d/dn + i eta) to the representation
};

KernelCoeffs source_coeffs(const RowContext& rc, bool src_is_port) {
  KernelCoeffs c;
  const Complex ieta = kI * rc.eta;
  if (!rc.dirichlet) {
    // representation u = 2 S[mu] on the whole boundary
    if (rc.impedance_row) {
      c.Sp = 2.0;
      c.S = 2.0 * (rc.row_port >= 0 ? ieta : 0.0);
    } else {
      c.S = 2.0;
    }
    return c;
  }
  if (src_is_port) {
    // 2 S[mu] on the ports
    if (rc.impedance_row) {
      c.Sp = 2.0;
      c.S = 2.0 * ieta;
    } else {
      c.S = 2.0;
    }
  } else {
    // -2 (D + (ik/2) S)[sigma] on the walls
    if (rc.impedance_row) {
      c.Dp = -2.0;
      c.D = -2.0 * ieta;
      c.Sp = -kI * rc.k;
      c.S = -kI * rc.k * ieta;
    } else {
      c.D = -2.0;
      c.S = -kI * rc.k;
    }
  }
  return c;
}

KernelCoeffs image_coeffs(const RowContext& rc) {
  // image term -2 D[sigma tilde]; only present in the sound-soft system
  KernelCoeffs c;
  if (!rc.dirichlet) return c;
  if (rc.impedance_row) {
    c.Dp = -2.0;
    c.D = -2.0 * kI * rc.eta;
  } else {
    c.D = -2.0;
  }
  return c;
}

// One full row of layer-potential coefficients (no identity part) for a
// target at x with normal nx. out has sys.n entries.
void assemble_row(const BieSystem& sys, const RowContext& rc, const Vec2& x,
                  const Vec2& nx, int self_panel, int self_node, Complex* out) {
  for (size_t sp = 0; sp < sys.disc.panels.size(); ++sp) {
    const Panel& p = sys.disc.panels[sp];
    KernelCoeffs c = source_coeffs(rc, on_port(sys, p));
    int img_idx = sys.disc.image_index[sp];
    bool fused = false;
    if (img_idx >= 0) {
      const Panel& img = sys.disc.image_panels[img_idx];
      if (img.image_port == rc.row_port) {
        // target on the reflection line: the image doubles the double
        // layer and cancels the hypersingular part exactly
        KernelCoeffs ic = image_coeffs(rc);
        c.D += ic.D;
        c.Dp = 0.0;
        fused = true;
      }
    }
    int self = (int(sp) == self_panel) ? self_node : -1;
    kernels::panel_influence(sys.comp.k, p, x, nx, c, self, out + sys.offset[sp]);
    if (img_idx >= 0 && !fused) {
      const Panel& img = sys.disc.image_panels[img_idx];
      kernels::panel_influence(sys.comp.k, img, x, nx, image_coeffs(rc), -1,
                               out + sys.offset[sp]);
    }
  }
}

}  // namespace

bool eta_admissible(Complex eta) {
  return eta.real() < 0.0 && std::abs(eta) < 0.5 * (std::sqrt(2.0) - 1.0);
}

BieSystem assemble_system(const geometry::ComponentGeometry& comp,
                          const geometry::Discretization& disc, Complex eta) {
  if (!eta_admissible(eta)) {
    static bool warned = false;
    if (!warned) {
      warned = true;
      std::fprintf(stderr,
                   "warning: eta = (%g, %g) is outside the guaranteed "
                   "solvability range Re(eta) < 0, |eta| < %.4f\n",
                   eta.real(), eta.imag(), 0.5 * (std::sqrt(2.0) - 1.0));
    }
  }
  BieSystem sys;
  sys.comp = comp;
  sys.disc = disc;
  sys.eta = eta;
  const bool dirichlet = comp.ports.empty()
                             ? true
                             : comp.ports[0].spec.bc == modal::BcKind::Dirichlet;
  if (!dirichlet && !disc.image_panels.empty())
    throw std::invalid_argument("sound-hard systems use no image panels");

  size_t np = disc.panels.size();
  sys.offset.resize(np);
  for (size_t i = 0; i < np; ++i) sys.offset[i] = int(i) * 16;
  sys.n = int(np) * 16;
  sys.sqrtw.resize(sys.n);
  for (size_t i = 0; i < np; ++i)
    for (int j = 0; j < 16; ++j)
      sys.sqrtw[sys.offset[i] + j] = std::sqrt(disc.panels[i].w[j]);

  // port node bookkeeping
  sys.port_nodes.resize(comp.ports.size());
  sys.port_y.resize(comp.ports.size());
  sys.port_w.resize(comp.ports.size());
  for (size_t p = 0; p < comp.ports.size(); ++p) {
    const auto& spec = comp.ports[p].spec;
    for (int pidx : disc.segment_panels[comp.ports[p].segment]) {
      const Panel& pan = disc.panels[pidx];
      for (int j = 0; j < 16; ++j) {
        sys.port_nodes[p].push_back(sys.offset[pidx] + j);
        sys.port_y[p].push_back((Vec2(pan.x.col(j)) - spec.origin).dot(spec.tangent));
        sys.port_w[p].push_back(pan.w[j]);
      }
    }
  }

  sys.A.resize(sys.n, sys.n);

#pragma omp parallel for schedule(dynamic)
  for (int row = 0; row < sys.n; ++row) {
    int tp = row / 16, tj = row % 16;
    const Panel& pan = disc.panels[tp];
    RowContext rc;
    rc.k = comp.k;
    rc.eta = eta;
    rc.dirichlet = dirichlet;
    rc.row_port = comp.segments[pan.segment].port;
    rc.impedance_row = !dirichlet || rc.row_port >= 0;
    Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(sys.n);
    assemble_row(sys, rc, pan.x.col(tj), pan.normal, tp, tj, r.data());
    r[row] += 1.0;
    sys.A.row(row) = r;
  }

  // sqrt-weight conditioning: A' = W^{1/2} A W^{-1/2}
  for (int i = 0; i < sys.n; ++i) sys.A.row(i) *= sys.sqrtw[i];
  for (int j = 0; j < sys.n; ++j) sys.A.col(j) /= sys.sqrtw[j];

  sys.lu.compute(sys.A);

  // trace operators per port
  for (size_t p = 0; p < comp.ports.size(); ++p) {
    const auto& nodes = sys.port_nodes[p];
    Eigen::MatrixXcd T(nodes.size(), sys.n);
    RowContext rc;
    rc.k = comp.k;
    rc.eta = eta;
    rc.dirichlet = dirichlet;
    rc.row_port = int(p);
    rc.impedance_row = false;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < int(nodes.size()); ++i) {
      int pidx = nodes[i] / 16, j = nodes[i] % 16;
      const Panel& pan = disc.panels[pidx];
      Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(sys.n);
      assemble_row(sys, rc, pan.x.col(j), pan.normal, pidx, j, r.data());
      T.row(i) = r;
    }
    sys.port_trace.push_back(std::move(T));
  }
  return sys;
}

Eigen::VectorXcd modal_rhs(const BieSystem& sys,
                           const std::vector<Eigen::VectorXcd>& f_coeffs) {
  if (f_coeffs.size() != sys.comp.ports.size())
    throw std::invalid_argument("one coefficient vector per port required");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(sys.n);
  for (size_t p = 0; p < f_coeffs.size(); ++p) {
    const auto& spec = sys.comp.ports[p].spec;
    for (size_t i = 0; i < sys.port_nodes[p].size(); ++i) {
      Complex v = 0.0;
      for (int m = 1; m <= f_coeffs[p].size(); ++m)
        v += f_coeffs[p][m - 1] * modal::basis_eval(spec, m, sys.port_y[p][i]);
      rhs[sys.port_nodes[p][i]] = v;
    }
  }
  return rhs;
}

Eigen::VectorXcd solve(const BieSystem& sys, const Eigen::VectorXcd& rhs) {
  Eigen::VectorXcd scaled = rhs.cwiseProduct(sys.sqrtw.cast<Complex>());
  Eigen::VectorXcd y = sys.lu.solve(scaled);
  return y.cwiseQuotient(sys.sqrtw.cast<Complex>());
}

double residual(const BieSystem& sys, const Eigen::VectorXcd& density,
                const Eigen::VectorXcd& rhs) {
  Eigen::VectorXcd xs = density.cwiseProduct(sys.sqrtw.cast<Complex>());
  Eigen::VectorXcd rs = rhs.cwiseProduct(sys.sqrtw.cast<Complex>());
  double denom = rs.lpNorm<Eigen::Infinity>();
  if (denom == 0.0) denom = 1.0;
  return (sys.A * xs - rs).lpNorm<Eigen::Infinity>() / denom;
}

Complex eval_field(const BieSystem& sys, const Eigen::VectorXcd& density,
                   const Vec2& x) {
  RowContext rc;
  rc.k = sys.comp.k;
  rc.eta = sys.eta;
  rc.dirichlet = sys.comp.ports.empty()
                     ? true
                     : sys.comp.ports[0].spec.bc == modal::BcKind::Dirichlet;
  rc.row_port = -1;
  rc.impedance_row = false;
  Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(sys.n);
  assemble_row(sys, rc, x, Vec2::Zero(), -1, -1, r.data());
  return r * density;
}

Eigen::VectorXcd trace_coefficients(const BieSystem& sys,
                                    const Eigen::VectorXcd& density, int port,
                                    int mode_count) {
  const auto& spec = sys.comp.ports[port].spec;
  Eigen::VectorXcd u = sys.port_trace[port] * density;
  Eigen::VectorXcd c(mode_count);
  for (int m = 1; m <= mode_count; ++m) {
    Complex acc = 0.0;
    for (size_t i = 0; i < sys.port_nodes[port].size(); ++i)
      acc += sys.port_w[port][i] * modal::basis_eval(spec, m, sys.port_y[port][i]) *
             u[i];
    c[m - 1] = acc;
  }
  return c;
}

Eigen::VectorXcd outgoing_impedance(const BieSystem& sys,
                                    const Eigen::VectorXcd& density,
                                    const Eigen::VectorXcd& f_nodal, int port,
                                    int mode_count) {
  const auto& spec = sys.comp.ports[port].spec;
  Eigen::VectorXcd u = sys.port_trace[port] * density;
  Eigen::VectorXcd g(mode_count);
  for (int m = 1; m <= mode_count; ++m) {
    Complex acc = 0.0;
    for (size_t i = 0; i < sys.port_nodes[port].size(); ++i) {
      int node = sys.port_nodes[port][i];
      Complex gi = f_nodal[node] - 2.0 * kI * sys.eta * u[i];
      acc += sys.port_w[port][i] * modal::basis_eval(spec, m, sys.port_y[port][i]) * gi;
    }
    g[m - 1] = acc;
  }
  return g;
}

}  // namespace wgscat::solver
