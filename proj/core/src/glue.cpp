#include "wgscat/glue.hpp"

#include <json.hpp>
#include <cmath>
#include <stdexcept>

namespace wgscat::glue {
namespace {

using nlohmann::json;
using SpMat = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

const Complex kI(0.0, 1.0);

// how a given component port enters the interface system
struct PortRole {
  enum Kind { OwnerSide, OtherSide, External } kind;
  int index = -1;  // interface or external-port index
};

std::vector<std::vector<PortRole>> port_roles(const Device& dev) {
  std::vector<std::vector<PortRole>> role(dev.maps.size());
  for (size_t c = 0; c < dev.maps.size(); ++c)
    role[c].resize(dev.maps[c].ports.size());
  for (size_t i = 0; i < dev.interfaces.size(); ++i) {
    const auto& f = dev.interfaces[i];
    role[f.owner.component][f.owner.port] = {PortRole::OwnerSide, int(i)};
    role[f.other.component][f.other.port] = {PortRole::OtherSide, int(i)};
  }
  for (size_t e = 0; e < dev.external_ports.size(); ++e) {
    auto& r = role[dev.external_ports[e].component][dev.external_ports[e].port];
    if (r.index != -1)
      throw std::invalid_argument("port listed as both interface and external");
    r = {PortRole::External, int(e)};
  }
  for (const auto& comp : role)
    for (const auto& r : comp)
      if (r.index == -1)
        throw std::invalid_argument("component port neither glued nor external");
  return role;
}

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_close(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                 const char* what) {
  if ((a - b).norm() > 1e-9)
    throw std::invalid_argument(std::string("interface mismatch: ") + what);
}

Eigen::MatrixXcd block(const i2i::I2IMap& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  int nr = 0, nc = 0;
  for (int p : rows) nr += m.mode_counts[p];
  for (int p : cols) nc += m.mode_counts[p];
  Eigen::MatrixXcd out(nr, nc);
  int r = 0;
  for (int pi : rows) {
    int c = 0;
    for (int pj : cols) {
      out.block(r, c, m.mode_counts[pi], m.mode_counts[pj]) =
          m.T.block(m.port_offset(pi), m.port_offset(pj), m.mode_counts[pi],
                    m.mode_counts[pj]);
      c += m.mode_counts[pj];
    }
    r += m.mode_counts[pi];
  }
  return out;
}

}  // namespace

void validate(const Device& dev) {
  auto in_range = [&](const PortRef& p) {
    return p.component >= 0 && p.component < int(dev.maps.size()) && p.port >= 0 &&
           p.port < int(dev.maps[p.component].ports.size());
  };
  Complex eta = dev.maps.empty() ? Complex(0.0) : dev.maps[0].eta;
  for (const auto& m : dev.maps)
    if (std::abs(m.eta - eta) > 1e-12)
      throw std::invalid_argument("all component maps must share eta");

  for (const auto& f : dev.interfaces) {
    if (!in_range(f.owner) || !in_range(f.other))
      throw std::invalid_argument("interface references a missing port");
    const auto& a = dev.maps[f.owner.component].ports[f.owner.port];
    const auto& b = dev.maps[f.other.component].ports[f.other.port];
    if (a.bc != b.bc) throw std::invalid_argument("interface mismatch: boundary kind");
    if (std::abs(a.width - b.width) > 1e-9 * a.width)
      throw std::invalid_argument("interface mismatch: width");
    if (std::abs(a.k - b.k) > 1e-12 * a.k)
      throw std::invalid_argument("interface mismatch: wavenumber");
    check_close(a.origin, b.origin, "origin");
    check_close(a.tangent, -b.tangent, "tangent");
    check_close(a.axis, -b.axis, "axis");
    if (dev.maps[f.owner.component].mode_counts[f.owner.port] != f.modes ||
        dev.maps[f.other.component].mode_counts[f.other.port] != f.modes)
      throw std::invalid_argument("interface mismatch: mode count");
  }
  for (const auto& e : dev.external_ports)
    if (!in_range(e))
      throw std::invalid_argument("external port reference out of range");
  port_roles(dev);  // exactly-once port coverage
}

// Each interface-side port of a component contributes the block equation
// sum_q T[p,q] f_q - g_p = 0, with f and g on interface ports expressed
// through the shared coefficients
//   owner side: f = h+, g = h-     other side: f = -D h-, g = -D h+
// (D the mode-parity diagonal of the flipped transverse frame). External
// inputs f move to the right-hand side; external outputs g are recovered by
// substitution, giving the reduced map G0 + Gx A^{-1} R.
GlueSystem::GlueSystem(const Device& d) : dev(&d) {
  validate(d);
  auto role = port_roles(d);

  for (const auto& f : d.interfaces) {
    iface_off.push_back(n_iface);
    n_iface += 2 * f.modes;
  }
  for (const auto& e : d.external_ports) {
    ext_off.push_back(n_ext);
    n_ext += d.maps[e.component].mode_counts[e.port];
  }

  std::vector<Triplet> trip;
  R = Eigen::MatrixXcd::Zero(n_iface, n_ext);
  G0 = Eigen::MatrixXcd::Zero(n_ext, n_ext);
  Gx = Eigen::MatrixXcd::Zero(n_ext, n_iface);

  for (size_t c = 0; c < d.maps.size(); ++c) {
    const auto& map = d.maps[c];
    for (size_t p = 0; p < map.ports.size(); ++p) {
      const auto& rp = role[c][p];
      int mp = map.mode_counts[p];
      // equation rows for interface sides; output rows for external ports
      int r0;
      bool iface_row = rp.kind != PortRole::External;
      if (rp.kind == PortRole::OwnerSide) {
        r0 = iface_off[rp.index];
      } else if (rp.kind == PortRole::OtherSide) {
        r0 = iface_off[rp.index] + d.interfaces[rp.index].modes;
      } else {
        r0 = ext_off[rp.index];
      }

      if (iface_row) {
        // -g_p in terms of the interface unknowns
        for (int m = 0; m < mp; ++m) {
          if (rp.kind == PortRole::OwnerSide) {
            trip.emplace_back(r0 + m,
                              iface_off[rp.index] + d.interfaces[rp.index].modes + m,
                              Complex(-1.0));
          } else {
            trip.emplace_back(r0 + m, iface_off[rp.index] + m,
                              Complex(modal::mode_parity(map.ports[p].bc, m + 1)));
          }
        }
      }

      for (size_t q = 0; q < map.ports.size(); ++q) {
        const auto& rq = role[c][q];
        int mq = map.mode_counts[q];
        auto blk = map.T.block(map.port_offset(int(p)), map.port_offset(int(q)),
                               mp, mq);
        for (int j = 0; j < mq; ++j) {
          if (rq.kind == PortRole::External) {
            int col = ext_off[rq.index] + j;
            if (iface_row) {
              for (int m = 0; m < mp; ++m) R(r0 + m, col) -= blk(m, j);
            } else {
              for (int m = 0; m < mp; ++m) G0(r0 + m, col) += blk(m, j);
            }
          } else {
            int col;
            Complex scale;
            if (rq.kind == PortRole::OwnerSide) {
              col = iface_off[rq.index] + j;
              scale = 1.0;
            } else {
              col = iface_off[rq.index] + d.interfaces[rq.index].modes + j;
              scale = -modal::mode_parity(map.ports[q].bc, j + 1);
            }
            if (iface_row) {
              for (int m = 0; m < mp; ++m)
                trip.emplace_back(r0 + m, col, blk(m, j) * scale);
            } else {
              for (int m = 0; m < mp; ++m) Gx(r0 + m, col) += blk(m, j) * scale;
            }
          }
        }
      }
    }
  }

  SpMat A(n_iface, n_iface);
  A.setFromTriplets(trip.begin(), trip.end());
  if (n_iface > 0) {
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("interface system factorization failed");
  }
}

i2i::I2IMap schur_reduce(const GlueSystem& sys) {
  const Device& dev = *sys.dev;
  i2i::I2IMap out;
  out.eta = dev.maps.empty() ? 0.0 : dev.maps[0].eta;
  for (const auto& e : dev.external_ports) {
    out.mode_counts.push_back(dev.maps[e.component].mode_counts[e.port]);
    out.ports.push_back(dev.maps[e.component].ports[e.port]);
  }
  if (sys.n_iface > 0) {
    Eigen::MatrixXcd X = sys.lu.solve(sys.R);
    out.T = sys.G0 + sys.Gx * X;
  } else {
    out.T = sys.G0;
  }
  return out;
}

ScatteringResult scattering_matrix(const i2i::I2IMap& reduced) {
  ScatteringResult res;
  int N = reduced.total_modes();
  std::vector<Complex> betas(N);
  std::vector<int> prop;  // entries carrying incident amplitudes
  for (size_t p = 0; p < reduced.ports.size(); ++p) {
    int mp = std::min(modal::count_propagating(reduced.ports[p]),
                      reduced.mode_counts[p]);
    res.propagating.push_back(mp);
    for (int m = 1; m <= reduced.mode_counts[p]; ++m) {
      int i = reduced.port_offset(int(p)) + m - 1;
      betas[i] = modal::beta(reduced.ports[p], m);
      if (m <= mp) prop.push_back(i);
    }
  }
  int np = int(prop.size());

  // impedance data and amplitudes are linked by  f = D+ c+ - D- c-  and
  // g = T f = D- c+ - D+ c-, with D± = diag(i (beta ± eta)). All retained
  // modes take part; evanescent ones only carry outgoing (decaying) content,
  // so their incident amplitude is fixed at zero.
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(2 * N, np);
  for (int i = 0; i < N; ++i) {
    M(i, i) = kI * (betas[i] + reduced.eta);
    M(i, N + i) = -1.0;
    M(N + i, i) = kI * (betas[i] - reduced.eta);
  }
  M.bottomRightCorner(N, N) = -reduced.T;
  for (int j = 0; j < np; ++j) {
    int i = prop[j];
    rhs(i, j) = kI * (betas[i] - reduced.eta);
    rhs(N + i, j) = kI * (betas[i] + reduced.eta);
  }
  Eigen::MatrixXcd X = M.partialPivLu().solve(rhs);
  Eigen::MatrixXcd cplus = X.topRows(N);
  res.S.resize(np, np);
  for (int i = 0; i < np; ++i) res.S.row(i) = cplus.row(prop[i]);
  res.F = X.bottomRows(N);
  return res;
}

IncidentSolution solve_incident(const GlueSystem& sys, const i2i::I2IMap& reduced,
                                const Eigen::VectorXcd& c_minus) {
  const Device& dev = *sys.dev;
  auto sc = scattering_matrix(reduced);
  IncidentSolution sol;
  sol.cplus = sc.S * c_minus;
  sol.f_ext = sc.F * c_minus;

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(sys.n_iface);
  if (sys.n_iface > 0) x = sys.lu.solve((sys.R * sol.f_ext).eval());
  for (size_t i = 0; i < dev.interfaces.size(); ++i) {
    int M = dev.interfaces[i].modes;
    sol.hplus.push_back(x.segment(sys.iface_off[i], M));
    sol.hminus.push_back(x.segment(sys.iface_off[i] + M, M));
  }

  auto role = port_roles(dev);
  for (size_t c = 0; c < dev.maps.size(); ++c) {
    const auto& map = dev.maps[c];
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(map.total_modes());
    for (size_t p = 0; p < map.ports.size(); ++p) {
      int off = map.port_offset(int(p));
      const auto& r = role[c][p];
      for (int m = 0; m < map.mode_counts[p]; ++m) {
        switch (r.kind) {
          case PortRole::OwnerSide:
            f[off + m] = sol.hplus[r.index][m];
            break;
          case PortRole::OtherSide:
            f[off + m] = -modal::mode_parity(map.ports[p].bc, m + 1) *
                         sol.hminus[r.index][m];
            break;
          case PortRole::External:
            f[off + m] = sol.f_ext[sys.ext_off[r.index] + m];
            break;
        }
      }
    }
    sol.f.push_back(std::move(f));
  }
  return sol;
}

i2i::I2IMap merge_pair(const i2i::I2IMap& a, const i2i::I2IMap& b, int port_a,
                       int port_b) {
  if (std::abs(a.eta - b.eta) > 1e-12)
    throw std::invalid_argument("merged maps must share eta");
  int M = a.mode_counts[port_a];
  if (b.mode_counts[port_b] != M)
    throw std::invalid_argument("interface mode counts must match");
  const auto& spec = a.ports[port_a];

  std::vector<int> ea, eb;
  for (int p = 0; p < int(a.ports.size()); ++p)
    if (p != port_a) ea.push_back(p);
  for (int p = 0; p < int(b.ports.size()); ++p)
    if (p != port_b) eb.push_back(p);

  Eigen::MatrixXcd T1EE = block(a, ea, ea), T1EI = block(a, ea, {port_a});
  Eigen::MatrixXcd T1IE = block(a, {port_a}, ea), T1II = block(a, {port_a}, {port_a});
  Eigen::MatrixXcd T2EE = block(b, eb, eb), T2EI = block(b, eb, {port_b});
  Eigen::MatrixXcd T2IE = block(b, {port_b}, eb), T2II = block(b, {port_b}, {port_b});

  Eigen::VectorXcd D(M);
  for (int m = 1; m <= M; ++m) D[m - 1] = modal::mode_parity(spec.bc, m);

  // eliminate the shared-interface coefficients h+/h- between the two maps
  Eigen::MatrixXcd A = T2II * D.asDiagonal() * T1II;
  A -= Eigen::MatrixXcd(D.asDiagonal());
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  Eigen::MatrixXcd H1 = lu.solve(-T2II * D.asDiagonal() * T1IE);  // h+ from f_E1
  Eigen::MatrixXcd H2 = lu.solve(T2IE);                           // h+ from f_E2
  Eigen::MatrixXcd Hm1 = T1IE + T1II * H1;                        // h- from f_E1
  Eigen::MatrixXcd Hm2 = T1II * H2;                               // h- from f_E2

  i2i::I2IMap out;
  out.eta = a.eta;
  for (int p : ea) {
    out.mode_counts.push_back(a.mode_counts[p]);
    out.ports.push_back(a.ports[p]);
  }
  for (int p : eb) {
    out.mode_counts.push_back(b.mode_counts[p]);
    out.ports.push_back(b.ports[p]);
  }
  int n1 = int(T1EE.rows()), n2 = int(T2EE.rows());
  out.T.resize(n1 + n2, n1 + n2);
  out.T.topLeftCorner(n1, n1) = T1EE + T1EI * H1;
  out.T.topRightCorner(n1, n2) = T1EI * H2;
  out.T.bottomLeftCorner(n2, n1) = -T2EI * D.asDiagonal() * Hm1;
  out.T.bottomRightCorner(n2, n2) = T2EE - T2EI * D.asDiagonal() * Hm2;
  return out;
}

std::string ScatteringResult::to_json() const {
  json j;
  j["propagating"] = propagating;
  j["S"] = complex_matrix_to_json(S);
  j["F"] = complex_matrix_to_json(F);
  return j.dump(2);
}

}  // namespace wgscat::glue
