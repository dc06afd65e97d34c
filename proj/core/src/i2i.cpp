#include "wgscat/i2i.hpp"

#include <json.hpp>
#include <stdexcept>

namespace wgscat::i2i {
namespace {

using nlohmann::json;

const Complex kI(0.0, 1.0);

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

Eigen::MatrixXcd complex_matrix_from_json(const json& rows) {
  Eigen::Index nr = rows.size();
  Eigen::Index nc = nr ? rows[0].size() : 0;
  Eigen::MatrixXcd m(nr, nc);
  for (Eigen::Index i = 0; i < nr; ++i)
    for (Eigen::Index j = 0; j < nc; ++j)
      m(i, j) = Complex(rows[i][j][0].get<double>(), rows[i][j][1].get<double>());
  return m;
}

}  // namespace

int I2IMap::total_modes() const {
  int n = 0;
  for (int c : mode_counts) n += c;
  return n;
}

int I2IMap::port_offset(int port) const {
  int off = 0;
  for (int p = 0; p < port; ++p) off += mode_counts[p];
  return off;
}

std::string I2IMap::to_json() const {
  json j;
  j["eta"] = {eta.real(), eta.imag()};
  j["mode_counts"] = mode_counts;
  json jports = json::array();
  for (const auto& p : ports) {
    jports.push_back({{"width", p.width},
                      {"bc", p.bc == modal::BcKind::Dirichlet ? "dirichlet" : "neumann"},
                      {"k", p.k},
                      {"origin", {p.origin.x(), p.origin.y()}},
                      {"tangent", {p.tangent.x(), p.tangent.y()}},
                      {"axis", {p.axis.x(), p.axis.y()}}});
  }
  j["ports"] = std::move(jports);
  j["T"] = complex_matrix_to_json(T);
  return j.dump(2);
}

I2IMap I2IMap::from_json(const std::string& text) {
  json j = json::parse(text);
  I2IMap m;
  m.eta = Complex(j.at("eta")[0].get<double>(), j.at("eta")[1].get<double>());
  m.mode_counts = j.at("mode_counts").get<std::vector<int>>();
  for (const auto& jp : j.at("ports")) {
    modal::PortSpec s;
    s.width = jp.at("width").get<double>();
    std::string bc = jp.at("bc").get<std::string>();
    if (bc == "dirichlet") {
      s.bc = modal::BcKind::Dirichlet;
    } else if (bc == "neumann") {
      s.bc = modal::BcKind::Neumann;
    } else {
      throw std::invalid_argument("unknown boundary kind: " + bc);
    }
    s.k = jp.at("k").get<double>();
    s.origin = {jp.at("origin")[0].get<double>(), jp.at("origin")[1].get<double>()};
    s.tangent = {jp.at("tangent")[0].get<double>(), jp.at("tangent")[1].get<double>()};
    s.axis = {jp.at("axis")[0].get<double>(), jp.at("axis")[1].get<double>()};
    m.ports.push_back(s);
  }
  m.T = complex_matrix_from_json(j.at("T"));
  if (m.T.rows() != m.total_modes() || m.T.cols() != m.total_modes())
    throw std::invalid_argument("map size does not match mode counts");
  return m;
}

I2IMap compute_i2i(const solver::BieSystem& sys,
                   const std::vector<int>& mode_counts) {
  size_t np = sys.comp.ports.size();
  if (mode_counts.size() != np)
    throw std::invalid_argument("one mode count per port required");
  I2IMap map;
  map.eta = sys.eta;
  map.mode_counts = mode_counts;
  for (const auto& p : sys.comp.ports) map.ports.push_back(p.spec);
  int nm = map.total_modes();
  map.T.resize(nm, nm);

  // all right-hand sides at once, one column per retained mode
  Eigen::MatrixXcd rhs(sys.n, nm);
  int col = 0;
  for (size_t p = 0; p < np; ++p) {
    for (int m = 1; m <= mode_counts[p]; ++m, ++col) {
      std::vector<Eigen::VectorXcd> f(np);
      for (size_t q = 0; q < np; ++q)
        f[q] = Eigen::VectorXcd::Zero(mode_counts[q]);
      f[p][m - 1] = 1.0;
      rhs.col(col) = solver::modal_rhs(sys, f);
    }
  }
  Eigen::MatrixXcd scaled = rhs;
  for (int i = 0; i < sys.n; ++i) scaled.row(i) *= sys.sqrtw[i];
  Eigen::MatrixXcd dens = sys.lu.solve(scaled);
  for (int i = 0; i < sys.n; ++i) dens.row(i) /= sys.sqrtw[i];

  for (int c = 0; c < nm; ++c) {
    int row = 0;
    for (size_t q = 0; q < np; ++q) {
      Eigen::VectorXcd g = solver::outgoing_impedance(
          sys, dens.col(c), rhs.col(c), int(q), mode_counts[q]);
      map.T.block(row, c, mode_counts[q], 1) = g;
      row += mode_counts[q];
    }
  }
  return map;
}

I2IMap channel_i2i_analytic(const modal::PortSpec& spec, double len,
                            Complex eta, int mode_count) {
  if (!(len > 0.0)) throw std::invalid_argument("channel length must be positive");
  I2IMap map;
  map.eta = eta;
  map.mode_counts = {mode_count, mode_count};
  map.ports = {spec, spec};
  int nm = 2 * mode_count;
  map.T = Eigen::MatrixXcd::Zero(nm, nm);
  for (int m = 1; m <= mode_count; ++m) {
    Complex beta = modal::beta(spec, m);
    Complex ap = kI * (beta + eta), am = kI * (beta - eta);
    Complex E = std::exp(kI * beta * len);  // |E| <= 1 on the chosen branch
    Complex det = am * am - ap * ap * E * E;
    Complex diag = ap * am * (1.0 - E * E) / det;
    Complex off = E * (ap * ap - am * am) / det;
    // port 2's transverse coordinate is reversed; conjugate by mode parity
    double par = modal::mode_parity(spec.bc, m);
    int i1 = m - 1, i2 = mode_count + m - 1;
    map.T(i1, i1) = diag;
    map.T(i2, i2) = diag;  // parity enters twice on the diagonal
    map.T(i1, i2) = par * off;
    map.T(i2, i1) = par * off;
  }
  return map;
}

Complex semi_infinite_reflection(const modal::PortSpec& spec, Complex eta,
                                 int mode) {
  Complex beta = modal::beta(spec, mode);
  return (beta + eta) / (beta - eta);
}

}  // namespace wgscat::i2i
