#include <cmath>
#include <complex>

#include "doctest.h"
#include "wgscat/glue.hpp"
#include "wgscat/i2i.hpp"
#include "wgscat/modal.hpp"

using namespace wgscat;
using i2i::Complex;

namespace {

modal::PortSpec make_spec(modal::BcKind bc, double d, double k) {
  modal::PortSpec s;
  s.width = d;
  s.bc = bc;
  s.k = k;
  return s;
}

// analytic channel map along the x axis from x0 to x0+len, with device-frame
// port geometry filled in: block 0 = left end, block 1 = right end (reversed
// transverse frame, as for a counterclockwise boundary)
i2i::I2IMap make_channel_map(const modal::PortSpec& spec, double x0, double len,
                             double eta, int M) {
  auto map = i2i::channel_i2i_analytic(spec, len, eta, M);
  map.ports[0].origin = {x0, 0.0};
  map.ports[0].tangent = {0.0, 1.0};
  map.ports[0].axis = {-1.0, 0.0};
  map.ports[1].origin = {x0 + len, 0.0};
  map.ports[1].tangent = {0.0, -1.0};
  map.ports[1].axis = {1.0, 0.0};
  return map;
}

// pre-applies the transverse parity flip to one port block of a map; merging
// against the result is equivalent to gluing without the frame-flip diagonal
i2i::I2IMap strip_parity(const i2i::I2IMap& m, int port) {
  i2i::I2IMap out = m;
  int off = m.port_offset(port);
  for (int i = 0; i < m.mode_counts[port]; ++i) {
    double par = modal::mode_parity(m.ports[port].bc, i + 1);
    out.T.row(off + i) *= par;
    out.T.col(off + i) *= par;
  }
  return out;
}

}  // namespace

TEST_CASE("merging two channel maps reproduces the longer channel") {
  double l1 = 0.7, l2 = 1.3, eta = 1.5;
  int M = 4;
  for (auto bc : {modal::BcKind::Dirichlet, modal::BcKind::Neumann}) {
    double d = bc == modal::BcKind::Dirichlet ? M_PI + 1.0 : 2.0;
    double k = bc == modal::BcKind::Dirichlet ? 2.0 : 2.5;
    auto spec = make_spec(bc, d, k);
    auto a = make_channel_map(spec, 0.0, l1, eta, M);
    auto b = make_channel_map(spec, l1, l2, eta, M);
    auto merged = glue::merge_pair(a, b, 1, 0);
    auto want = make_channel_map(spec, 0.0, l1 + l2, eta, M);
    REQUIRE(merged.mode_counts == want.mode_counts);
    CHECK((merged.T - want.T).cwiseAbs().maxCoeff() < 1e-12);

    // swapping the merge sides only permutes the external ports
    auto swapped = glue::merge_pair(b, a, 0, 1);
    CHECK(std::abs(swapped.T(M, M) - merged.T(0, 0)) < 1e-12);
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j) {
        CHECK(std::abs(swapped.T(M + i, M + j) - merged.T(i, j)) < 1e-12);
        CHECK(std::abs(swapped.T(i, j) - merged.T(M + i, M + j)) < 1e-12);
        CHECK(std::abs(swapped.T(i, M + j) - merged.T(M + i, j)) < 1e-12);
        CHECK(std::abs(swapped.T(M + i, j) - merged.T(i, M + j)) < 1e-12);
      }
  }
}

TEST_CASE("the transverse frame flip at interfaces is essential") {
  // mode 2 is odd across the channel; without the parity diagonal the merge
  // produces a visibly different map
  auto spec = make_spec(modal::BcKind::Neumann, 2.0, 2.5);
  double l1 = 0.7, l2 = 1.3, eta = 1.5;
  int M = 3;
  auto a = make_channel_map(spec, 0.0, l1, eta, M);
  auto b = make_channel_map(spec, l1, l2, eta, M);
  auto want = make_channel_map(spec, 0.0, l1 + l2, eta, M);
  auto wrong = glue::merge_pair(a, strip_parity(b, 0), 1, 0);
  CHECK((wrong.T - want.T).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("channel device: no reflection, parity-signed modal delay") {
  auto spec = make_spec(modal::BcKind::Dirichlet, M_PI + 1.0, 2.0);
  double len = 1.8, eta = 1.0;
  int M = 4;
  glue::Device dev;
  dev.maps.push_back(make_channel_map(spec, 0.0, len, eta, M));
  dev.external_ports = {{0, 0}, {0, 1}};
  glue::GlueSystem sys(dev);
  auto reduced = glue::schur_reduce(sys);
  // no interfaces: the reduced map is the component's own map
  CHECK((reduced.T - dev.maps[0].T).cwiseAbs().maxCoeff() == 0.0);

  auto res = glue::scattering_matrix(reduced);
  REQUIRE(res.propagating == std::vector<int>{2, 2});
  for (int m = 1; m <= 2; ++m) {
    Complex trans = modal::mode_parity(spec.bc, m) *
                    std::exp(Complex(0.0, 1.0) * modal::beta(spec, m) * len);
    CHECK(std::abs(res.S(m - 1, m - 1)) < 1e-13);                  // reflection
    CHECK(std::abs(res.S(2 + m - 1, m - 1) - trans) < 1e-13);      // transmission
    CHECK(std::abs(res.S(m - 1, 2 + m - 1) - trans) < 1e-13);
  }
  Eigen::MatrixXcd gram = res.S.adjoint() * res.S;
  CHECK((gram - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("glued two-channel device matches the single long channel") {
  auto spec = make_spec(modal::BcKind::Neumann, 2.0, 2.5);
  double l1 = 0.6, l2 = 1.1, eta = 2.0;
  int M = 3;

  glue::Device dev;
  dev.maps.push_back(make_channel_map(spec, 0.0, l1, eta, M));
  dev.maps.push_back(make_channel_map(spec, l1, l2, eta, M));
  dev.interfaces = {{{0, 1}, {1, 0}, M}};
  dev.external_ports = {{0, 0}, {1, 1}};
  glue::GlueSystem sys(dev);
  auto reduced = glue::schur_reduce(sys);

  auto want = make_channel_map(spec, 0.0, l1 + l2, eta, M);
  CHECK((reduced.T - want.T).cwiseAbs().maxCoeff() < 1e-12);
  // and the graph reduction agrees with pairwise folding
  auto merged = glue::merge_pair(dev.maps[0], dev.maps[1], 1, 0);
  CHECK((reduced.T - merged.T).cwiseAbs().maxCoeff() < 1e-12);

  // incident-solve consistency: outgoing amplitudes equal the matrix column,
  // component data satisfies g = T f, and the interface coefficients carry
  // the owner-frame traces with the parity flip on the far side
  auto res = glue::scattering_matrix(reduced);
  Eigen::VectorXcd cm = Eigen::VectorXcd::Zero(4);
  cm[0] = 1.0;
  auto sol = glue::solve_incident(sys, reduced, cm);
  CHECK((sol.cplus - res.S.col(0)).cwiseAbs().maxCoeff() < 1e-13);
  Eigen::VectorXcd g1 = dev.maps[0].T * sol.f[0];
  Eigen::VectorXcd g2 = dev.maps[1].T * sol.f[1];
  int off1 = dev.maps[0].port_offset(1), off2 = dev.maps[1].port_offset(0);
  for (int m = 1; m <= M; ++m) {
    double par = modal::mode_parity(spec.bc, m);
    CHECK(std::abs(sol.hplus[0][m - 1] - sol.f[0][off1 + m - 1]) < 1e-13);
    CHECK(std::abs(sol.hminus[0][m - 1] - g1[off1 + m - 1]) < 1e-13);
    CHECK(std::abs(sol.f[1][off2 + m - 1] + par * g1[off1 + m - 1]) < 1e-13);
    CHECK(std::abs(g2[off2 + m - 1] + par * sol.f[0][off1 + m - 1]) < 1e-13);
  }
}

TEST_CASE("flux is conserved through a lossless device") {
  auto spec = make_spec(modal::BcKind::Dirichlet, M_PI + 1.0, 2.0);
  double eta = 1.0;
  int M = 4;
  glue::Device dev;
  dev.maps.push_back(make_channel_map(spec, 0.0, 0.9, eta, M));
  dev.maps.push_back(make_channel_map(spec, 0.9, 1.4, eta, M));
  dev.interfaces = {{{0, 1}, {1, 0}, M}};
  dev.external_ports = {{0, 0}, {1, 1}};
  glue::GlueSystem sys(dev);
  auto res = glue::scattering_matrix(glue::schur_reduce(sys));
  Eigen::VectorXcd beta(4);
  for (int p = 0; p < 2; ++p)
    for (int m = 1; m <= 2; ++m) beta[2 * p + m - 1] = modal::beta(spec, m);
  Eigen::MatrixXcd B = beta.asDiagonal();
  Eigen::MatrixXcd diff = res.S.adjoint() * B * res.S - B;
  CHECK(diff.cwiseAbs().maxCoeff() < 1e-12 * B.cwiseAbs().maxCoeff());
}

TEST_CASE("validation rejects inconsistent interfaces") {
  auto spec = make_spec(modal::BcKind::Dirichlet, M_PI + 1.0, 2.0);
  double eta = 1.0;
  int M = 2;
  glue::Device dev;
  dev.maps.push_back(make_channel_map(spec, 0.0, 1.0, eta, M));
  dev.maps.push_back(make_channel_map(spec, 1.0, 1.0, eta, M));
  dev.interfaces = {{{0, 1}, {1, 0}, M}};
  dev.external_ports = {{0, 0}, {1, 1}};
  CHECK_NOTHROW(glue::validate(dev));

  auto bad = dev;
  bad.maps[1].ports[0].width *= 1.0 + 1e-6;
  CHECK_THROWS_AS(glue::validate(bad), std::invalid_argument);

  bad = dev;
  bad.maps[1].ports[0].tangent = {0.0, -1.0};  // not reversed against the owner
  CHECK_THROWS_AS(glue::validate(bad), std::invalid_argument);

  bad = dev;
  bad.external_ports.pop_back();  // port 1 of component 1 left dangling
  CHECK_THROWS_AS(glue::validate(bad), std::invalid_argument);

  bad = dev;
  bad.interfaces[0].modes = M + 1;
  CHECK_THROWS_AS(glue::validate(bad), std::invalid_argument);
}
