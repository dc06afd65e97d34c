#include <cmath>
#include <complex>

#include "doctest.h"
#include "wgscat/geometry.hpp"
#include "wgscat/i2i.hpp"
#include "wgscat/solver.hpp"

using namespace wgscat;
using i2i::Complex;
using geometry::Vec2;

namespace {

// straight channel component: rectangle [0,len] x [0,d], ports on the left
// and right edges. Port 0 is the right edge, port 1 the left edge.
solver::BieSystem make_channel(modal::BcKind bc, double d, double k, double len,
                               double eta, int grading = 14) {
  geometry::LoopInput loop;
  loop.vertices = {{0.0, 0.0}, {len, 0.0}, {len, d}, {0.0, d}};
  loop.port_edges = {1, 3};
  auto comp = geometry::build_component({loop}, bc, k);
  geometry::PanelizeOptions opt;
  opt.h = 0.35;
  opt.grading_levels = grading;
  auto disc = geometry::panelize(comp, opt);
  if (bc == modal::BcKind::Dirichlet) geometry::build_image_panels(comp, disc);
  return solver::assemble_system(comp, disc, eta);
}

}  // namespace

TEST_CASE("computed channel map matches the closed form (sound-soft)") {
  double d = M_PI + 1.0, k = 1.0, len = 2.0, eta = 1.0;
  int M = 3;
  auto sys = make_channel(modal::BcKind::Dirichlet, d, k, len, eta, 20);
  auto num = i2i::compute_i2i(sys, {M, M});
  auto ana = i2i::channel_i2i_analytic(sys.comp.ports[1].spec, len, eta, M);
  // component port 1 (left edge) is the analytic port 1; port 0 the far end
  int perm[2] = {1, 0};
  for (int pi = 0; pi < 2; ++pi)
    for (int pj = 0; pj < 2; ++pj)
      for (int mi = 0; mi < M; ++mi)
        for (int mj = 0; mj < M; ++mj) {
          Complex a = num.T(num.port_offset(perm[pi]) + mi,
                            num.port_offset(perm[pj]) + mj);
          Complex b = ana.T(pi * M + mi, pj * M + mj);
          CHECK(std::abs(a - b) < 2e-8);
        }
}

TEST_CASE("computed channel map matches the closed form (sound-hard)") {
  double d = 2.0, k = 2.5, len = 1.5, eta = 2.5;
  int M = 3;
  // the sound-hard corner behaviour converges more slowly in grading depth
  auto sys = make_channel(modal::BcKind::Neumann, d, k, len, eta, 30);
  auto num = i2i::compute_i2i(sys, {M, M});
  auto ana = i2i::channel_i2i_analytic(sys.comp.ports[1].spec, len, eta, M);
  int perm[2] = {1, 0};
  for (int pi = 0; pi < 2; ++pi)
    for (int pj = 0; pj < 2; ++pj)
      for (int mi = 0; mi < M; ++mi)
        for (int mj = 0; mj < M; ++mj) {
          Complex a = num.T(num.port_offset(perm[pi]) + mi,
                            num.port_offset(perm[pj]) + mj);
          Complex b = ana.T(pi * M + mi, pj * M + mj);
          CHECK(std::abs(a - b) < 1e-8);
        }
}

TEST_CASE("long-channel diagonal approaches the semi-infinite reflection") {
  modal::PortSpec spec;
  spec.width = M_PI + 1.0;
  spec.k = 1.0;
  spec.bc = modal::BcKind::Dirichlet;
  double eta = 1.0;
  auto map = i2i::channel_i2i_analytic(spec, 50.0, eta, 4);
  for (int m = 2; m <= 4; ++m) {  // evanescent modes only
    Complex lim = i2i::semi_infinite_reflection(spec, eta, m);
    CHECK(std::abs(map.T(m - 1, m - 1) - lim) < 1e-12);
    CHECK(std::abs(map.T(4 + m - 1, 4 + m - 1) - lim) < 1e-12);
  }
}

TEST_CASE("channel map energy balance for the propagating mode") {
  // with eta = beta_1 the impedance is matched: no reflection, pure delay
  modal::PortSpec spec;
  spec.width = M_PI + 1.0;
  spec.k = 1.0;
  spec.bc = modal::BcKind::Dirichlet;
  Complex beta = modal::beta(spec, 1);
  double len = 3.0;
  auto map = i2i::channel_i2i_analytic(spec, len, beta.real(), 1);
  CHECK(std::abs(map.T(0, 0)) < 1e-13);
  // off-diagonal: -e^{-i beta len} up to the parity factor (+1 for mode 1)
  Complex want = -std::exp(-Complex(0.0, 1.0) * beta * len);
  CHECK(std::abs(map.T(0, 1) - want) < 1e-13);
}

TEST_CASE("serialization round trip") {
  modal::PortSpec spec;
  spec.width = 2.0;
  spec.k = 2.5;
  spec.bc = modal::BcKind::Neumann;
  spec.origin = {1.5, -0.25};
  spec.tangent = {0.0, 1.0};
  spec.axis = {1.0, 0.0};
  auto map = i2i::channel_i2i_analytic(spec, 1.2, 2.5, 5);
  auto back = i2i::I2IMap::from_json(map.to_json());
  CHECK(back.eta == map.eta);
  REQUIRE(back.mode_counts == map.mode_counts);
  CHECK((back.T - map.T).cwiseAbs().maxCoeff() == 0.0);
  CHECK(back.ports[0].width == spec.width);
  CHECK(back.ports[0].bc == spec.bc);
  CHECK(back.ports[1].origin == spec.origin);
}
