#include <cmath>
#include <set>

#include "doctest.h"
#include "wgscat/geometry.hpp"
#include "wgscat/lattice.hpp"

using namespace wgscat;
using geometry::Vec2;

namespace {

lattice::LatticeOptions base_options() {
  lattice::LatticeOptions opt;
  opt.rows = 2;
  opt.cols = 2;
  opt.spacing = 15.0;
  opt.jitter = 0.0;
  opt.edge_keep_prob = 1.0;
  opt.width = M_PI + 1.0;
  opt.bc = modal::BcKind::Dirichlet;
  opt.k = 1.0;
  return opt;
}

geometry::ComponentGeometry build(const lattice::CircuitGraph& g, int c) {
  return geometry::build_component({g.components[c]}, g.bc, g.k);
}

}  // namespace

TEST_CASE("unperturbed full 2x2 lattice") {
  auto opt = base_options();
  auto g = lattice::lattice_generator(opt);
  CHECK(g.components.size() == 4);
  CHECK(g.interfaces.size() == 4);
  CHECK(g.externals.empty());
  CHECK(g.nodes[0] == Vec2(0.0, 0.0));
  CHECK(g.nodes[3] == Vec2(15.0, 15.0));
  for (const auto& f : g.interfaces)
    CHECK(f.L == doctest::Approx(7.5 - opt.width / 2.0).epsilon(1e-14));

  // every node component is a valid two-port geometry whose interface
  // frames are exact mirror images of each other
  std::vector<geometry::ComponentGeometry> comps;
  for (int c = 0; c < 4; ++c) comps.push_back(build(g, c));
  for (const auto& comp : comps) CHECK(comp.ports.size() == 2);
  for (const auto& f : g.interfaces) {
    const auto& a = comps[f.ca].ports[f.pa].spec;
    const auto& b = comps[f.cb].ports[f.pb].spec;
    CHECK(a.origin == b.origin);
    CHECK(a.tangent == -b.tangent);
    CHECK(a.axis == -b.axis);
    CHECK(a.width == doctest::Approx(opt.width).epsilon(1e-14));
  }
}

TEST_CASE("identical seeds give identical graphs, different seeds differ") {
  auto opt = base_options();
  opt.rows = 3;
  opt.cols = 4;
  opt.jitter = 2.25;
  opt.edge_keep_prob = 0.8;
  opt.n_external_ports = 2;
  opt.seed = 42;
  auto g1 = lattice::lattice_generator(opt);
  auto g2 = lattice::lattice_generator(opt);
  REQUIRE(g1.components.size() == g2.components.size());
  for (size_t c = 0; c < g1.components.size(); ++c) {
    REQUIRE(g1.components[c].vertices.size() == g2.components[c].vertices.size());
    for (size_t i = 0; i < g1.components[c].vertices.size(); ++i)
      CHECK(g1.components[c].vertices[i] == g2.components[c].vertices[i]);
  }
  REQUIRE(g1.externals.size() == g2.externals.size());
  for (size_t e = 0; e < g1.externals.size(); ++e) {
    CHECK(g1.externals[e].comp == g2.externals[e].comp);
    CHECK(g1.externals[e].port == g2.externals[e].port);
  }

  opt.seed = 43;
  auto g3 = lattice::lattice_generator(opt);
  bool same = g1.nodes.size() == g3.nodes.size();
  if (same)
    for (size_t i = 0; i < g1.nodes.size(); ++i)
      if (g1.nodes[i] != g3.nodes[i]) same = false;
  CHECK(!same);
}

TEST_CASE("external stubs are straight channels of half the grid spacing") {
  auto opt = base_options();
  opt.rows = 2;
  opt.cols = 3;
  opt.n_external_ports = 3;
  opt.seed = 7;
  auto g = lattice::lattice_generator(opt);
  REQUIRE(g.externals.size() == 3);
  for (const auto& e : g.externals) {
    CHECK(e.L == doctest::Approx(7.5).epsilon(1e-14));
    auto comp = build(g, e.comp);
    const auto& spec = comp.ports[e.port].spec;
    CHECK(spec.width == doctest::Approx(opt.width).epsilon(1e-14));
    CHECK((spec.origin - g.nodes[e.comp]).norm() ==
          doctest::Approx(7.5).epsilon(1e-12));
    // outward axis points away from the node
    CHECK(spec.axis.dot(spec.origin - g.nodes[e.comp]) > 0.0);
  }
}

TEST_CASE("graph stays connected after pruning") {
  auto opt = base_options();
  opt.rows = 4;
  opt.cols = 4;
  opt.jitter = 2.0;
  opt.edge_keep_prob = 0.55;
  opt.seed = 11;
  auto g = lattice::lattice_generator(opt);
  REQUIRE(g.components.size() >= 2);
  std::vector<std::set<int>> adj(g.components.size());
  for (const auto& f : g.interfaces) {
    adj[f.ca].insert(f.cb);
    adj[f.cb].insert(f.ca);
  }
  std::set<int> seen{0};
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[u])
      if (seen.insert(v).second) stack.push_back(v);
  }
  CHECK(seen.size() == g.components.size());
  for (int c = 0; c < int(g.components.size()); ++c) CHECK_NOTHROW(build(g, c));
}

TEST_CASE("monolithic union of the 2x2 ring has a hole and the stub ports") {
  auto opt = base_options();
  opt.n_external_ports = 2;
  opt.seed = 3;
  auto g = lattice::lattice_generator(opt);
  auto mono = lattice::monolithic_union(g);
  REQUIRE(mono.loops.size() == 2);  // outer boundary plus the ring hole
  CHECK(mono.loops[0].port_edges.size() == 2);
  CHECK(mono.loops[1].port_edges.empty());

  auto comp = geometry::build_component(mono.loops, g.bc, g.k);
  REQUIRE(comp.ports.size() == 2);
  for (size_t e = 0; e < g.externals.size(); ++e) {
    auto part = build(g, g.externals[e].comp);
    const auto& want = part.ports[g.externals[e].port].spec;
    const auto& got = comp.ports[mono.port_of_ext[e]].spec;
    CHECK(got.origin == want.origin);
    CHECK(got.tangent == want.tangent);
    CHECK(got.axis == want.axis);
  }
}

TEST_CASE("degenerate inputs are rejected") {
  auto opt = base_options();
  opt.edge_keep_prob = 0.0;
  CHECK_THROWS(lattice::lattice_generator(opt));

  opt = base_options();
  opt.spacing = 2.0 * opt.width;  // no room for the channels
  CHECK_THROWS_AS(lattice::lattice_generator(opt), std::invalid_argument);

  opt = base_options();
  opt.n_external_ports = 100;
  CHECK_THROWS(lattice::lattice_generator(opt));
}

TEST_CASE("desk-scale perturbed lattice generates cleanly") {
  auto opt = base_options();
  opt.rows = 6;
  opt.cols = 19;
  opt.jitter = 2.25;
  opt.edge_keep_prob = 0.8;
  opt.n_external_ports = 3;
  opt.seed = 2026;
  auto g = lattice::lattice_generator(opt);
  CHECK(g.components.size() > 80);     // most of the 114 nodes survive pruning
  CHECK(g.interfaces.size() > 100);
  for (int c = 0; c < int(g.components.size()); ++c) CHECK_NOTHROW(build(g, c));
}
