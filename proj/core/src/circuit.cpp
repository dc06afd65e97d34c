#include "wgscat/circuit.hpp"

#include <json.hpp>
#include <stdexcept>

namespace wgscat::circuit {
namespace {

using nlohmann::json;

void check_port_ref(const Circuit& c, int comp, int port, const char* what) {
  if (comp < 0 || comp >= int(c.components.size()))
    throw std::invalid_argument(std::string(what) + ": component out of range");
  int n_ports = 0;
  for (const auto& loop : c.components[comp].loops)
    n_ports += int(loop.port_edges.size());
  if (port < 0 || port >= n_ports)
    throw std::invalid_argument(std::string(what) + ": port out of range");
}

void validate(const Circuit& c) {
  if (!(c.k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  if (c.components.empty()) throw std::invalid_argument("no components");
  for (const auto& comp : c.components) {
    if (comp.loops.empty()) throw std::invalid_argument("component without loops");
    for (const auto& loop : comp.loops) {
      if (loop.vertices.size() < 3)
        throw std::invalid_argument("loop with fewer than three vertices");
      for (int e : loop.port_edges)
        if (e < 0 || e >= int(loop.vertices.size()))
          throw std::invalid_argument("port edge index out of range");
    }
  }
  for (const auto& f : c.interfaces) {
    check_port_ref(c, f.ca, f.pa, "interface");
    check_port_ref(c, f.cb, f.pb, "interface");
    if (!(f.L > 0.0)) throw std::invalid_argument("interface length must be positive");
  }
  for (const auto& e : c.externals) {
    check_port_ref(c, e.comp, e.port, "external port");
    if (!(e.L > 0.0)) throw std::invalid_argument("external length must be positive");
  }
}

}  // namespace

std::string to_json(const Circuit& c) {
  validate(c);
  json j;
  j["bc"] = c.bc == modal::BcKind::Dirichlet ? "dirichlet" : "neumann";
  j["k"] = c.k;
  json jcomps = json::array();
  for (const auto& comp : c.components) {
    json jloops = json::array();
    for (const auto& loop : comp.loops) {
      json verts = json::array();
      for (const auto& v : loop.vertices) verts.push_back({v.x(), v.y()});
      jloops.push_back({{"vertices", std::move(verts)},
                        {"port_edges", loop.port_edges}});
    }
    jcomps.push_back({{"loops", std::move(jloops)}});
  }
  j["components"] = std::move(jcomps);
  json jifaces = json::array();
  for (const auto& f : c.interfaces)
    jifaces.push_back({{"a", {{"component", f.ca}, {"port", f.pa}}},
                       {"b", {{"component", f.cb}, {"port", f.pb}}},
                       {"length", f.L}});
  j["interfaces"] = std::move(jifaces);
  json jext = json::array();
  for (const auto& e : c.externals)
    jext.push_back({{"component", e.comp}, {"port", e.port}, {"length", e.L}});
  j["external_ports"] = std::move(jext);
  return j.dump(2);
}

Circuit from_json(const std::string& text) {
  json j = json::parse(text);
  Circuit c;
  std::string bc = j.at("bc").get<std::string>();
  if (bc == "dirichlet") {
    c.bc = modal::BcKind::Dirichlet;
  } else if (bc == "neumann") {
    c.bc = modal::BcKind::Neumann;
  } else {
    throw std::invalid_argument("unknown boundary kind: " + bc);
  }
  c.k = j.at("k").get<double>();
  for (const auto& jc : j.at("components")) {
    Circuit::Component comp;
    for (const auto& jl : jc.at("loops")) {
      geometry::LoopInput loop;
      for (const auto& jv : jl.at("vertices"))
        loop.vertices.emplace_back(jv[0].get<double>(), jv[1].get<double>());
      loop.port_edges = jl.at("port_edges").get<std::vector<int>>();
      comp.loops.push_back(std::move(loop));
    }
    c.components.push_back(std::move(comp));
  }
  for (const auto& jf : j.at("interfaces")) {
    Circuit::Interface f;
    f.ca = jf.at("a").at("component").get<int>();
    f.pa = jf.at("a").at("port").get<int>();
    f.cb = jf.at("b").at("component").get<int>();
    f.pb = jf.at("b").at("port").get<int>();
    f.L = jf.at("length").get<double>();
    c.interfaces.push_back(f);
  }
  for (const auto& je : j.at("external_ports")) {
    Circuit::External e;
    e.comp = je.at("component").get<int>();
    e.port = je.at("port").get<int>();
    e.L = je.at("length").get<double>();
    c.externals.push_back(e);
  }
  validate(c);
  return c;
}

Circuit from_lattice(const lattice::CircuitGraph& g) {
  Circuit c;
  c.bc = g.bc;
  c.k = g.k;
  for (const auto& loop : g.components) c.components.push_back({{loop}});
  for (const auto& f : g.interfaces)
    c.interfaces.push_back({f.ca, f.pa, f.cb, f.pb, f.L});
  for (const auto& e : g.externals) c.externals.push_back({e.comp, e.port, e.L});
  validate(c);
  return c;
}

BendPair make_bend_pair(double width, double arm, double sep, modal::BcKind bc,
                        double k) {
  double d = width;
  if (!(d > 0.0 && arm > d && sep > 0.0))
    throw std::invalid_argument("bend pair needs width > 0, arm > width, sep > 0");
  double xm = d + sep / 2.0;  // interface abscissa
  double H = arm;

  // left component: vertical arm [0,d]x[0,H] plus half-channel [0,xm]x[0,d]
  geometry::LoopInput a;
  a.vertices = {{0.0, 0.0}, {xm, 0.0}, {xm, d}, {d, d}, {d, H}, {0.0, H}};
  a.port_edges = {1, 4};  // interface (right), external (top)

  // right component, mirror image across x = xm
  geometry::LoopInput b;
  b.vertices = {{xm, 0.0},     {2.0 * xm, 0.0}, {2.0 * xm, H},
                {2.0 * xm - d, H}, {2.0 * xm - d, d}, {xm, d}};
  b.port_edges = {2, 5};  // external (top), interface (left)

  BendPair out;
  out.two.bc = bc;
  out.two.k = k;
  out.two.components = {{{a}}, {{b}}};
  // build_component numbers ports by ascending edge index, so the left
  // component has interface 0 / external 1 and the right one the reverse
  out.two.interfaces = {{0, 0, 1, 1, sep / 2.0}};
  out.two.externals = {{0, 1, H - d}, {1, 0, H - d}};

  geometry::LoopInput m;
  m.vertices = {{0.0, 0.0},        {2.0 * xm, 0.0},   {2.0 * xm, H},
                {2.0 * xm - d, H}, {2.0 * xm - d, d}, {d, d},
                {d, H},            {0.0, H}};
  m.port_edges = {2, 6};
  out.mono = {m};
  out.mono_port_of_ext = {1, 0};  // left external is the higher edge index
  return out;
}

}  // namespace wgscat::circuit
