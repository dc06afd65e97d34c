#include <cmath>

#include "doctest.h"
#include "wgscat/circuit.hpp"

using namespace wgscat;
using geometry::Vec2;

TEST_CASE("lattice graph survives a json round trip unchanged") {
  lattice::LatticeOptions opt;
  opt.rows = 2;
  opt.cols = 3;
  opt.jitter = 1.5;
  opt.edge_keep_prob = 0.9;
  opt.n_external_ports = 2;
  opt.seed = 5;
  opt.width = 2.0;
  opt.k = 2.0;
  auto g = lattice::lattice_generator(opt);
  auto c = circuit::from_lattice(g);
  auto back = circuit::from_json(circuit::to_json(c));

  REQUIRE(back.components.size() == c.components.size());
  CHECK(back.bc == c.bc);
  CHECK(back.k == c.k);
  for (size_t i = 0; i < c.components.size(); ++i) {
    const auto& la = c.components[i].loops[0];
    const auto& lb = back.components[i].loops[0];
    REQUIRE(la.vertices.size() == lb.vertices.size());
    for (size_t v = 0; v < la.vertices.size(); ++v)
      CHECK(la.vertices[v] == lb.vertices[v]);  // bit-exact through json
    CHECK(la.port_edges == lb.port_edges);
  }
  REQUIRE(back.interfaces.size() == c.interfaces.size());
  for (size_t i = 0; i < c.interfaces.size(); ++i) {
    CHECK(back.interfaces[i].ca == c.interfaces[i].ca);
    CHECK(back.interfaces[i].pa == c.interfaces[i].pa);
    CHECK(back.interfaces[i].cb == c.interfaces[i].cb);
    CHECK(back.interfaces[i].pb == c.interfaces[i].pb);
    CHECK(back.interfaces[i].L == c.interfaces[i].L);
  }
  REQUIRE(back.externals.size() == c.externals.size());
}

TEST_CASE("bend pair components share an exactly mirrored interface") {
  auto bp = circuit::make_bend_pair(2.0, 4.0, 3.0, modal::BcKind::Dirichlet, 2.0);
  REQUIRE(bp.two.components.size() == 2);
  auto a = geometry::build_component(bp.two.components[0].loops, bp.two.bc, bp.two.k);
  auto b = geometry::build_component(bp.two.components[1].loops, bp.two.bc, bp.two.k);
  REQUIRE(a.ports.size() == 2);
  REQUIRE(b.ports.size() == 2);

  const auto& f = bp.two.interfaces[0];
  const auto& pa = (f.ca == 0 ? a : b).ports[f.pa].spec;
  const auto& pb = (f.cb == 0 ? a : b).ports[f.pb].spec;
  CHECK(pa.origin == pb.origin);
  CHECK(pa.tangent == -pb.tangent);
  CHECK(pa.axis == -pb.axis);
  CHECK(pa.width == 2.0);

  // the monolithic union exposes the same external port frames
  auto mono = geometry::build_component(bp.mono, bp.two.bc, bp.two.k);
  REQUIRE(mono.ports.size() == 2);
  for (size_t e = 0; e < bp.two.externals.size(); ++e) {
    const auto& ext = bp.two.externals[e];
    const auto& want = (ext.comp == 0 ? a : b).ports[ext.port].spec;
    const auto& got = mono.ports[bp.mono_port_of_ext[e]].spec;
    CHECK(got.origin == want.origin);
    CHECK(got.tangent == want.tangent);
    CHECK(got.axis == want.axis);
  }
}

TEST_CASE("malformed circuit descriptions are rejected") {
  auto bp = circuit::make_bend_pair(2.0, 4.0, 3.0, modal::BcKind::Dirichlet, 2.0);
  auto c = bp.two;
  c.externals[0].port = 7;
  CHECK_THROWS_AS(circuit::to_json(c), std::invalid_argument);

  c = bp.two;
  c.interfaces[0].L = 0.0;
  CHECK_THROWS_AS(circuit::to_json(c), std::invalid_argument);

  auto text = circuit::to_json(bp.two);
  auto broken = text;
  auto pos = broken.find("dirichlet");
  broken.replace(pos, 9, "dirichlit");
  CHECK_THROWS_AS(circuit::from_json(broken), std::invalid_argument);

  CHECK_THROWS(circuit::make_bend_pair(2.0, 1.0, 3.0, modal::BcKind::Dirichlet, 2.0));
}
