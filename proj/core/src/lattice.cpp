#include "wgscat/lattice.hpp"

// C complex.h (via the LAPACK backend headers) leaks an I macro that breaks
// Boost's template parameters
#ifdef I
#undef I
#endif

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>

namespace wgscat::lattice {
namespace {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPoly = bg::model::polygon<BPoint>;  // clockwise, closed
using BMulti = bg::model::multi_polygon<BPoly>;
using geometry::Vec2;
using geometry::LoopInput;

// uniform in [0,1) with a fixed bit recipe, so streams are identical across
// standard libraries
double urand(std::mt19937_64& g) { return double(g() >> 11) * 0x1.0p-53; }

Vec2 perp(const Vec2& t) { return {-t.y(), t.x()}; }

BPoly make_rect(const Vec2& from, const Vec2& to, const Vec2& n, double h) {
  BPoly p;
  for (const Vec2& v :
       {Vec2(from - h * n), Vec2(to - h * n), Vec2(to + h * n), Vec2(from + h * n)})
    bg::append(p.outer(), BPoint(v.x(), v.y()));
  bg::correct(p);
  return p;
}

void union_into(BMulti& acc, const BPoly& p) {
  BMulti out;
  bg::union_(acc, p, out);
  acc = std::move(out);
}

std::vector<Vec2> ring_points(const BPoly::ring_type& ring) {
  std::vector<Vec2> v;
  for (const auto& p : ring) v.emplace_back(bg::get<0>(p), bg::get<1>(p));
  if (v.size() > 1 && (v.front() - v.back()).norm() < 1e-12) v.pop_back();
  return v;
}

// The polygon union is only trusted for topology: this Boost version
// rescales coordinates internally and returns vertices perturbed at the
// 1e-7 level, far above the right-angle tolerance of the port checks. True
// vertex positions are recomputed from the input shapes (corners and
// pairwise edge intersections) and the union output is snapped to them.
void gather_edges(const BPoly& p, std::vector<std::pair<Vec2, Vec2>>& out) {
  auto v = ring_points(p.outer());
  for (size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], v[(i + 1) % v.size()]);
}

std::vector<Vec2> true_vertices(const std::vector<BPoly>& parts) {
  std::vector<Vec2> cand;
  std::vector<std::vector<std::pair<Vec2, Vec2>>> edges(parts.size());
  for (size_t i = 0; i < parts.size(); ++i) {
    gather_edges(parts[i], edges[i]);
    for (const auto& e : edges[i]) cand.push_back(e.first);
  }
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t j = i + 1; j < parts.size(); ++j)
      for (const auto& ea : edges[i])
        for (const auto& eb : edges[j]) {
          Vec2 r = ea.second - ea.first, s = eb.second - eb.first;
          double den = r.x() * s.y() - r.y() * s.x();
          if (std::abs(den) < 1e-12 * r.norm() * s.norm()) continue;
          Vec2 d = eb.first - ea.first;
          double t = (d.x() * s.y() - d.y() * s.x()) / den;
          double u = (d.x() * r.y() - d.y() * r.x()) / den;
          // generous parameter window: the union output is perturbed well
          // above fp precision, so intersections marginally beyond an edge
          // endpoint must still be offered as snap targets
          if (t < -1e-6 || t > 1.0 + 1e-6 || u < -1e-6 || u > 1.0 + 1e-6) continue;
          cand.push_back(ea.first + t * r);
        }
  return cand;
}

void snap_ring(std::vector<Vec2>& ring, const std::vector<Vec2>& cand, double tol) {
  for (auto& p : ring) {
    double best = tol;
    const Vec2* hit = nullptr;
    for (const auto& c : cand) {
      double d = (p - c).norm();
      if (d < best) {
        best = d;
        hit = &c;
      }
    }
    if (hit) p = *hit;
  }
}

double signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return a / 2.0;
}

// cleans a ring (dedupe, drop collinear vertices away from port endpoints),
// orients it, and locates + snaps the expected port edges
struct PortSeg {
  Vec2 a, b;
};

std::vector<Vec2> clean_ring(std::vector<Vec2> v, const std::vector<PortSeg>& ports,
                             bool ccw) {
  if ((signed_area(v) > 0.0) != ccw) std::reverse(v.begin(), v.end());
  auto near_port_end = [&](const Vec2& p) {
    for (const auto& s : ports)
      if ((p - s.a).norm() < 1e-7 || (p - s.b).norm() < 1e-7) return true;
    return false;
  };
  // consecutive duplicates
  std::vector<Vec2> w;
  for (const auto& p : v)
    if (w.empty() || (p - w.back()).norm() > 1e-9) w.push_back(p);
  if (w.size() > 1 && (w.front() - w.back()).norm() < 1e-9) w.pop_back();
  // collinear interior vertices
  bool changed = true;
  while (changed && w.size() > 3) {
    changed = false;
    for (size_t i = 0; i < w.size(); ++i) {
      const Vec2& u = w[(i + w.size() - 1) % w.size()];
      const Vec2& m = w[i];
      const Vec2& q = w[(i + 1) % w.size()];
      Vec2 d1 = m - u, d2 = q - m;
      double cross = d1.x() * d2.y() - d1.y() * d2.x();
      if (std::abs(cross) < 1e-9 * d1.norm() * d2.norm() && d1.dot(d2) > 0.0 &&
          !near_port_end(m)) {
        w.erase(w.begin() + long(i));
        changed = true;
        break;
      }
    }
  }
  return w;
}

// finds each port segment as one ring edge, snaps its endpoints exactly, and
// returns the edge indices in the order of `ports`
std::vector<int> locate_ports(std::vector<Vec2>& v, const std::vector<PortSeg>& ports) {
  std::vector<int> edges;
  for (const auto& s : ports) {
    int found = -1;
    for (size_t i = 0; i < v.size(); ++i) {
      Vec2& p = v[i];
      Vec2& q = v[(i + 1) % v.size()];
      if (((p - s.a).norm() < 1e-9 && (q - s.b).norm() < 1e-9) ||
          ((p - s.b).norm() < 1e-9 && (q - s.a).norm() < 1e-9)) {
        if (found != -1) throw std::runtime_error("port edge matched twice");
        p = (p - s.a).norm() < (p - s.b).norm() ? s.a : s.b;
        q = (q - s.a).norm() < (q - s.b).norm() ? s.a : s.b;
        found = int(i);
      }
    }
    if (found == -1) throw std::runtime_error("port edge lost in polygon union");
    edges.push_back(found);
  }
  return edges;
}

// union output is perturbed well above fp precision. once the port endpoints
// are exact, every wall sits on a support line through a port endpoint along
// the channel axis, so corners off their lines are re-intersected onto them.
void square_walls(std::vector<Vec2>& v, const std::vector<PortSeg>& ports) {
  struct Line {
    Vec2 p, d;
  };
  std::vector<Line> lines;
  for (const auto& s : ports) {
    Vec2 n = perp((s.b - s.a).normalized());
    lines.push_back({s.a, n});
    lines.push_back({s.b, n});
  }
  auto is_port_end = [&](const Vec2& p) {
    for (const auto& s : ports)
      if ((p - s.a).norm() < 1e-12 || (p - s.b).norm() < 1e-12) return true;
    return false;
  };
  for (auto& p : v) {
    if (is_port_end(p)) continue;
    std::vector<std::pair<double, const Line*>> close;
    for (const auto& l : lines) {
      Vec2 r = p - l.p;
      double dist = std::abs(r.x() * l.d.y() - r.y() * l.d.x());
      if (dist < 1e-6) close.push_back({dist, &l});
    }
    std::sort(close.begin(), close.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const Line* l1 = close.empty() ? nullptr : close[0].second;
    const Line* l2 = nullptr;
    for (size_t i = 1; i < close.size() && !l2; ++i) {
      const Line* l = close[i].second;
      if (std::abs(l1->d.x() * l->d.y() - l1->d.y() * l->d.x()) > 1e-8) l2 = l;
    }
    if (l1 && l2) {
      // nearly collinear channels meet at a shallow angle, so a residual of
      // 1e-8 can put the exact corner 1e-4 away; cap the move at the snap
      // tolerance and fall back to projection when the pair is too unstable
      Vec2 r = l2->p - l1->p;
      double denom = l1->d.x() * l2->d.y() - l1->d.y() * l2->d.x();
      double s = (r.x() * l2->d.y() - r.y() * l2->d.x()) / denom;
      Vec2 q = l1->p + s * l1->d;
      if ((q - p).norm() < 1e-3) {
        p = q;
        continue;
      }
    }
    if (l1) p = l1->p + l1->d.dot(p - l1->p) * l1->d;
  }
}

// rank of each port among the ports sorted by boundary edge index; matches
// the port numbering assigned when the component is built
std::vector<int> port_ranks(const std::vector<int>& edges) {
  std::vector<int> order(edges.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return edges[a] < edges[b]; });
  std::vector<int> rank(edges.size());
  for (size_t r = 0; r < order.size(); ++r) rank[order[r]] = int(r);
  return rank;
}

BPoly loop_to_poly(const LoopInput& in) {
  BPoly p;
  for (const auto& v : in.vertices) bg::append(p.outer(), BPoint(v.x(), v.y()));
  bg::correct(p);
  return p;
}

}  // namespace

CircuitGraph lattice_generator(const LatticeOptions& opt) {
  if (opt.rows < 2 || opt.cols < 2)
    throw std::invalid_argument("lattice needs at least 2x2 nodes");
  if (!(opt.width > 0.0) || !(opt.k > 0.0))
    throw std::invalid_argument("channel width and wavenumber must be positive");
  if (!(opt.spacing > 2.0 * (opt.jitter + opt.width)))
    throw std::invalid_argument("spacing too small for jitter and channel width");
  if (opt.edge_keep_prob < 0.0 || opt.edge_keep_prob > 1.0)
    throw std::invalid_argument("edge keep probability must lie in [0,1]");

  std::mt19937_64 gen(opt.seed);
  int nn = opt.rows * opt.cols;
  std::vector<Vec2> pos(nn);
  for (int r = 0; r < opt.rows; ++r)
    for (int c = 0; c < opt.cols; ++c) {
      double jx = (2.0 * urand(gen) - 1.0) * opt.jitter;
      double jy = (2.0 * urand(gen) - 1.0) * opt.jitter;
      pos[r * opt.cols + c] = {c * opt.spacing + jx, r * opt.spacing + jy};
    }

  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < opt.rows; ++r)
    for (int c = 0; c < opt.cols; ++c) {
      int u = r * opt.cols + c;
      if (c + 1 < opt.cols && urand(gen) < opt.edge_keep_prob)
        edges.emplace_back(u, u + 1);
      if (r + 1 < opt.rows && urand(gen) < opt.edge_keep_prob)
        edges.emplace_back(u, u + opt.cols);
    }
  if (edges.empty()) throw std::runtime_error("no lattice edges kept");

  // largest connected piece
  std::vector<std::vector<int>> adj(nn);
  for (size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].push_back(int(e));
    adj[edges[e].second].push_back(int(e));
  }
  std::vector<int> label(nn, -1);
  int nlab = 0;
  for (int s = 0; s < nn; ++s) {
    if (label[s] != -1 || adj[s].empty()) continue;
    std::queue<int> q;
    q.push(s);
    label[s] = nlab;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int e : adj[u]) {
        int v = edges[e].first == u ? edges[e].second : edges[e].first;
        if (label[v] == -1) {
          label[v] = nlab;
          q.push(v);
        }
      }
    }
    ++nlab;
  }
  std::vector<int> count(nlab, 0);
  for (int u = 0; u < nn; ++u)
    if (label[u] != -1) ++count[label[u]];
  int best = int(std::max_element(count.begin(), count.end()) - count.begin());

  std::vector<int> node_of;  // retained node ids, ascending
  std::map<int, int> comp_of;
  for (int u = 0; u < nn; ++u)
    if (label[u] == best) {
      comp_of[u] = int(node_of.size());
      node_of.push_back(u);
    }
  std::vector<int> kept_edges;
  for (size_t e = 0; e < edges.size(); ++e)
    if (label[edges[e].first] == best) kept_edges.push_back(int(e));

  // external stub candidates: retained boundary nodes, outward grid direction
  struct Candidate {
    int node;
    Vec2 dir;
  };
  std::vector<Candidate> cand;
  for (int u : node_of) {
    int r = u / opt.cols, c = u % opt.cols;
    if (c == 0) cand.push_back({u, {-1.0, 0.0}});
    if (c == opt.cols - 1) cand.push_back({u, {1.0, 0.0}});
    if (r == 0) cand.push_back({u, {0.0, -1.0}});
    if (r == opt.rows - 1) cand.push_back({u, {0.0, 1.0}});
  }
  if (opt.n_external_ports > int(cand.size()))
    throw std::runtime_error("not enough boundary nodes for the requested ports");
  std::vector<Candidate> chosen;
  for (int i = 0; i < opt.n_external_ports; ++i) {
    size_t j = std::min(cand.size() - 1, size_t(urand(gen) * double(cand.size())));
    chosen.push_back(cand[j]);
    cand.erase(cand.begin() + long(j));
  }

  CircuitGraph g;
  g.width = opt.width;
  g.k = opt.k;
  g.spacing = opt.spacing;
  g.bc = opt.bc;
  for (int u : node_of) g.nodes.push_back(pos[u]);

  double h = opt.width / 2.0;
  struct Mouth {
    Vec2 to;       // far midpoint
    PortSeg seg;   // exact far-end endpoints
    bool external;
    int id;  // interface index or external index
  };
  std::vector<std::vector<Mouth>> mouths(node_of.size());

  for (int e : kept_edges) {
    auto [u, v] = edges[e];
    Vec2 t = (pos[v] - pos[u]).normalized();
    Vec2 n = perp(t);
    Vec2 mid = (pos[u] + pos[v]) / 2.0;
    PortSeg seg{mid - h * n, mid + h * n};
    int id = int(g.interfaces.size());
    g.interfaces.push_back({comp_of[u], -1, comp_of[v], -1,
                            (pos[v] - pos[u]).norm() / 2.0 - h});
    mouths[comp_of[u]].push_back({mid, seg, false, id});
    mouths[comp_of[v]].push_back({mid, seg, false, id});
  }
  for (const auto& c : chosen) {
    Vec2 n = perp(c.dir);
    Vec2 far = pos[c.node] + (opt.spacing / 2.0) * c.dir;
    PortSeg seg{far - h * n, far + h * n};
    int id = int(g.externals.size());
    g.externals.push_back({comp_of[c.node], -1, opt.spacing / 2.0});
    mouths[comp_of[c.node]].push_back({far, seg, true, id});
  }

  // node polygons: union of the half-channel rectangles plus the convex
  // junction patch spanned by their mouths at the node
  std::vector<BPoly> polys(node_of.size());
  std::vector<std::vector<Vec2>> verts(node_of.size());
  for (size_t ci = 0; ci < node_of.size(); ++ci) {
    const Vec2& p0 = pos[node_of[ci]];
    std::vector<BPoly> parts;
    bg::model::multi_point<BPoint> near;
    bg::append(near, BPoint(p0.x(), p0.y()));
    for (const auto& m : mouths[ci]) {
      Vec2 t = (m.to - p0).normalized();
      Vec2 n = perp(t);
      parts.push_back(make_rect(p0, m.to, n, h));
      bg::append(near, BPoint((p0 - h * n).x(), (p0 - h * n).y()));
      bg::append(near, BPoint((p0 + h * n).x(), (p0 + h * n).y()));
    }
    if (mouths[ci].size() >= 2) {
      BPoly hull;
      bg::convex_hull(near, hull);
      if (bg::area(hull) > 1e-12) parts.push_back(hull);
    }
    BMulti acc;
    for (const auto& p : parts) union_into(acc, p);
    if (acc.size() != 1 || !acc[0].inners().empty())
      throw std::runtime_error("node junction union is not a simple polygon");
    polys[ci] = acc[0];
    verts[ci] = ring_points(polys[ci].outer());
    snap_ring(verts[ci], true_vertices(parts), 1e-3);
  }

  // pairwise overlap guard (shared interface edges have zero area)
  for (size_t i = 0; i < polys.size(); ++i)
    for (size_t j = i + 1; j < polys.size(); ++j) {
      BMulti inter;
      bg::intersection(polys[i], polys[j], inter);
      if (bg::area(inter) > 1e-6)
        throw std::runtime_error("components overlap after jitter");
    }

  for (size_t ci = 0; ci < node_of.size(); ++ci) {
    std::vector<PortSeg> segs;
    for (const auto& m : mouths[ci]) segs.push_back(m.seg);
    auto ring = clean_ring(verts[ci], segs, true);
    auto port_edges = locate_ports(ring, segs);
    square_walls(ring, segs);
    auto ranks = port_ranks(port_edges);
    LoopInput loop;
    loop.vertices = ring;
    loop.port_edges = port_edges;
    g.components.push_back(std::move(loop));
    for (size_t mi = 0; mi < mouths[ci].size(); ++mi) {
      const auto& m = mouths[ci][mi];
      if (m.external) {
        g.externals[m.id].port = ranks[mi];
      } else if (g.interfaces[m.id].ca == int(ci) && g.interfaces[m.id].pa == -1) {
        g.interfaces[m.id].pa = ranks[mi];
      } else {
        g.interfaces[m.id].pb = ranks[mi];
      }
    }
  }
  return g;
}

MonolithicGeometry monolithic_union(const CircuitGraph& graph) {
  BMulti acc;
  std::vector<Vec2> cand;
  for (const auto& comp : graph.components) {
    union_into(acc, loop_to_poly(comp));
    cand.insert(cand.end(), comp.vertices.begin(), comp.vertices.end());
  }
  if (acc.size() != 1)
    throw std::runtime_error("circuit union is not a single polygon");

  // the only surviving port edges are the external stub ends
  std::vector<PortSeg> segs;
  for (const auto& e : graph.externals) {
    const LoopInput& comp = graph.components[e.comp];
    std::vector<int> sorted = comp.port_edges;
    std::sort(sorted.begin(), sorted.end());
    int edge = sorted[e.port];
    segs.push_back({comp.vertices[edge],
                    comp.vertices[(edge + 1) % comp.vertices.size()]});
  }

  MonolithicGeometry out;
  auto raw = ring_points(acc[0].outer());
  snap_ring(raw, cand, 1e-3);
  auto ring = clean_ring(raw, segs, true);
  LoopInput outer;
  outer.port_edges = locate_ports(ring, segs);
  out.port_of_ext = port_ranks(outer.port_edges);
  outer.vertices = std::move(ring);
  out.loops.push_back(std::move(outer));
  for (const auto& inner : acc[0].inners()) {
    auto hv = ring_points(inner);
    snap_ring(hv, cand, 1e-3);
    LoopInput hole;
    hole.vertices = clean_ring(hv, {}, false);
    out.loops.push_back(std::move(hole));
  }
  return out;
}

}  // namespace wgscat::lattice
