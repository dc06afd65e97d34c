#include "wgscat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wgscat/quadrature.hpp"

namespace wgscat::geometry {
namespace {

double cross2(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }

double signed_area(const std::vector<Vec2>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec2& p = v[i];
    const Vec2& q = v[(i + 1) % v.size()];
    a += cross2(p, q);
  }
  return 0.5 * a;
}

int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  double d = cross2(b - a, c - a);
  double scale = (b - a).norm() * (c - a).norm();
  if (std::abs(d) < 1e-14 * scale) return 0;
  return d > 0 ? 1 : -1;
}

bool proper_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

struct Neighbors {
  std::vector<int> prev, next;  // per segment, within its loop
};

Neighbors loop_neighbors(const ComponentGeometry& comp) {
  Neighbors nb;
  nb.prev.assign(comp.segments.size(), -1);
  nb.next.assign(comp.segments.size(), -1);
  for (const auto& loop : comp.loops) {
    for (size_t i = 0; i < loop.size(); ++i) {
      nb.next[loop[i]] = loop[(i + 1) % loop.size()];
      nb.prev[loop[i]] = loop[(i + loop.size() - 1) % loop.size()];
    }
  }
  return nb;
}

}  // namespace

ComponentGeometry build_component(const std::vector<LoopInput>& loops,
                                  modal::BcKind bc, double k) {
  if (loops.empty()) throw std::invalid_argument("component needs at least one loop");
  if (!(k > 0.0)) throw std::invalid_argument("wavenumber must be positive");
  ComponentGeometry comp;
  comp.k = k;
  for (size_t li = 0; li < loops.size(); ++li) {
    const auto& in = loops[li];
    size_t n = in.vertices.size();
    if (n < 3) throw std::invalid_argument("loop needs at least 3 vertices");
    double area = signed_area(in.vertices);
    if (li == 0 && area <= 0.0)
      throw std::invalid_argument("outer loop must be counterclockwise");
    if (li > 0 && area >= 0.0)
      throw std::invalid_argument("hole loops must be clockwise");
    std::vector<bool> is_port(n, false);
    for (int e : in.port_edges) {
      if (e < 0 || size_t(e) >= n) throw std::invalid_argument("port edge out of range");
      is_port[e] = true;
    }
    std::vector<int> loop_segs;
    for (size_t i = 0; i < n; ++i) {
      Segment s;
      s.a = in.vertices[i];
      s.b = in.vertices[(i + 1) % n];
      double len = (s.b - s.a).norm();
      if (len < 1e-14) throw std::invalid_argument("degenerate edge");
      s.loop = int(li);
      if (is_port[i]) {
        s.kind = SegKind::Port;
        s.port = int(comp.ports.size());
        PortInfo pi;
        pi.segment = int(comp.segments.size());
        pi.spec.width = len;
        pi.spec.bc = bc;
        pi.spec.k = k;
        pi.spec.origin = 0.5 * (s.a + s.b);
        pi.spec.tangent = (s.b - s.a) / len;
        pi.spec.axis = Vec2(pi.spec.tangent.y(), -pi.spec.tangent.x());
        pi.spec.validate();
        comp.ports.push_back(pi);
      }
      loop_segs.push_back(int(comp.segments.size()));
      comp.segments.push_back(s);
    }
    comp.loops.push_back(loop_segs);
  }

  // simplicity: no proper crossings anywhere
  for (size_t i = 0; i < comp.segments.size(); ++i)
    for (size_t j = i + 1; j < comp.segments.size(); ++j) {
      const Segment& s = comp.segments[i];
      const Segment& t = comp.segments[j];
      if (proper_intersect(s.a, s.b, t.a, t.b))
        throw std::invalid_argument("boundary is self-intersecting");
    }

  // ports must be flanked by walls, meeting at right angles
  Neighbors nb = loop_neighbors(comp);
  for (const auto& pi : comp.ports) {
    int seg = pi.segment;
    for (int adj : {nb.prev[seg], nb.next[seg]}) {
      const Segment& w = comp.segments[adj];
      if (w.kind != SegKind::Wall)
        throw std::invalid_argument("adjacent ports are not supported");
      Vec2 tw = (w.b - w.a).normalized();
      if (std::abs(tw.dot(pi.spec.tangent)) > 1e-9)
        throw std::invalid_argument("port must meet its walls at right angles");
    }
  }
  return comp;
}

bool inside(const ComponentGeometry& comp, const Vec2& p) {
  // even-odd ray crossing; holes are handled automatically
  bool in = false;
  for (const Segment& s : comp.segments) {
    const Vec2& a = s.a;
    const Vec2& b = s.b;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      double xi = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < xi) in = !in;
    }
  }
  return in;
}

Vec2 reflect_across_port(const modal::PortSpec& spec, const Vec2& x) {
  Vec2 d = x - spec.origin;
  double along = d.dot(spec.tangent);
  double off = d.dot(spec.axis);
  return spec.origin + along * spec.tangent - off * spec.axis;
}

namespace {

Panel make_panel(const Vec2& a, const Vec2& b, int segment, const Vec2& normal) {
  const auto& gl = quadrature::gauss_legendre(16);
  Panel p;
  p.a = a;
  p.b = b;
  p.len = (b - a).norm();
  p.tangent = (b - a) / p.len;
  p.normal = normal;
  p.segment = segment;
  for (int j = 0; j < 16; ++j) {
    double t = (gl.x[j] + 1.0) / 2.0;
    p.x.col(j) = a + t * (b - a);
    p.w[j] = gl.w[j] * p.len / 2.0;
  }
  return p;
}

// dyadic breakpoints for cell [c0, c1] refined toward `corner_at_start`
void dyadic_refine(std::vector<double>& pts, double c0, double c1, int levels,
                   bool corner_at_start) {
  double len = c1 - c0;
  for (int j = 1; j <= levels; ++j) {
    double f = std::ldexp(1.0, -j);  // 2^-j
    pts.push_back(corner_at_start ? c0 + f * len : c1 - f * len);
  }
}

}  // namespace

Discretization panelize(const ComponentGeometry& comp, const PanelizeOptions& opt) {
  if (opt.grading_levels < 0) throw std::invalid_argument("grading_levels must be >= 0");
  const double h_eff = std::min(opt.h, (2.0 * M_PI / comp.k) / 6.0);
  Neighbors nb = loop_neighbors(comp);

  // reflection radius per port, clipped so neighbouring regions cannot overlap
  std::vector<double> radius(comp.ports.size());
  for (size_t p = 0; p < comp.ports.size(); ++p) {
    const PortInfo& pi = comp.ports[p];
    double r = opt.image_radius * pi.spec.width;
    for (int adj : {nb.prev[pi.segment], nb.next[pi.segment]}) {
      const Segment& w = comp.segments[adj];
      double wl = (w.b - w.a).norm();
      bool other_end_port =
          comp.segments[nb.prev[adj]].kind == SegKind::Port &&
          comp.segments[nb.next[adj]].kind == SegKind::Port;
      r = std::min(r, other_end_port ? wl / 2.0 : wl);
    }
    radius[p] = r;
  }

  Discretization disc;
  disc.port_radius = radius;
  disc.segment_panels.resize(comp.segments.size());

  for (size_t si = 0; si < comp.segments.size(); ++si) {
    const Segment& s = comp.segments[si];
    double len = (s.b - s.a).norm();
    Vec2 t = (s.b - s.a) / len;
    Vec2 normal(t.y(), -t.x());

    auto corner_is_flat = [&](int adj_seg) {
      const Segment& o = comp.segments[adj_seg];
      if (o.kind != SegKind::Wall || s.kind != SegKind::Wall) return false;
      Vec2 to = (o.b - o.a).normalized();
      return std::abs(cross2(t, to)) < 1e-12 && t.dot(to) > 0.0;
    };
    bool grade_start = !corner_is_flat(nb.prev[si]);
    bool grade_end = !corner_is_flat(nb.next[si]);

    // special breakpoints: segment ends plus the reflection radius of any
    // port meeting this wall
    std::vector<double> specials = {0.0, len};
    if (s.kind == SegKind::Wall) {
      const Segment& pr = comp.segments[nb.prev[si]];
      const Segment& nx = comp.segments[nb.next[si]];
      if (pr.kind == SegKind::Port) {
        double r = radius[pr.port];
        if (r > 1e-12 && r < len - 1e-12) specials.push_back(r);
      }
      if (nx.kind == SegKind::Port) {
        double r = radius[nx.port];
        if (r > 1e-12 && len - r > 1e-12) specials.push_back(len - r);
      }
    }
    std::sort(specials.begin(), specials.end());

    double h_seg = h_eff;
    if (s.kind == SegKind::Port) {
      int minp = 4;
      if (!opt.port_panels.empty()) minp = std::max(minp, opt.port_panels.at(s.port));
      h_seg = std::min(h_seg, len / minp);
    }

    std::vector<double> pts;
    for (size_t i = 0; i + 1 < specials.size(); ++i) {
      double gap = specials[i + 1] - specials[i];
      int ncell = std::max(1, int(std::ceil(gap / h_seg - 1e-12)));
      for (int c = 0; c <= ncell; ++c) pts.push_back(specials[i] + gap * c / ncell);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [len](double a, double b) { return b - a < 1e-13 * len; }),
              pts.end());
    if (pts.size() < 3) pts.insert(pts.begin() + 1, len / 2.0);

    double first0 = pts[0], first1 = pts[1];
    double last0 = pts[pts.size() - 2], last1 = pts.back();
    if (grade_start) dyadic_refine(pts, first0, first1, opt.grading_levels, true);
    if (grade_end) dyadic_refine(pts, last0, last1, opt.grading_levels, false);
    std::sort(pts.begin(), pts.end());

    for (size_t c = 0; c + 1 < pts.size(); ++c) {
      Vec2 a = s.a + pts[c] * t;
      Vec2 b = s.a + pts[c + 1] * t;
      disc.segment_panels[si].push_back(int(disc.panels.size()));
      disc.panels.push_back(make_panel(a, b, int(si), normal));
    }
  }

  disc.image_index.assign(disc.panels.size(), -1);
  return disc;
}

void build_image_panels(const ComponentGeometry& comp, Discretization& disc) {
  Neighbors nb = loop_neighbors(comp);
  disc.image_panels.clear();
  disc.image_index.assign(disc.panels.size(), -1);

  for (size_t p = 0; p < comp.ports.size(); ++p) {
    const PortInfo& pi = comp.ports[p];
    double r = disc.port_radius[p];
    int seg = pi.segment;
    const Segment& pseg = comp.segments[seg];
    for (int adj : {nb.prev[seg], nb.next[seg]}) {
      const Segment& w = comp.segments[adj];
      // shared corner: the wall end that touches the port
      bool corner_at_wall_start = (w.a - pseg.a).norm() < 1e-12 ||
                                  (w.a - pseg.b).norm() < 1e-12;
      Vec2 corner = corner_at_wall_start ? w.a : w.b;
      for (int pidx : disc.segment_panels[adj]) {
        const Panel& src = disc.panels[pidx];
        double far_end = std::max((src.a - corner).norm(), (src.b - corner).norm());
        if (far_end > r * (1.0 + 1e-9)) continue;
        if (disc.image_index[pidx] != -1)
          throw std::runtime_error("panel assigned images across two ports");
        Panel img = src;
        img.a = reflect_across_port(pi.spec, src.a);
        img.b = reflect_across_port(pi.spec, src.b);
        for (int j = 0; j < 16; ++j)
          img.x.col(j) = reflect_across_port(pi.spec, Vec2(src.x.col(j)));
        Vec2 nref = src.normal - 2.0 * src.normal.dot(pi.spec.axis) * pi.spec.axis;
        img.normal = nref;
        img.tangent = (img.b - img.a) / img.len;
        img.image_of = pidx;
        img.image_port = int(p);

        // pairing checks: reflection is an involution and images stay outside
        for (int j = 0; j < 16; ++j) {
          Vec2 back = reflect_across_port(pi.spec, Vec2(img.x.col(j)));
          if ((back - Vec2(src.x.col(j))).norm() > 1e-12 * (1.0 + src.x.col(j).norm()))
            throw std::runtime_error("image reflection pairing violated");
        }
        Vec2 mid = 0.5 * (img.a + img.b);
        if (inside(comp, mid))
          throw std::runtime_error("image panel lies inside the domain");

        disc.image_index[pidx] = int(disc.image_panels.size());
        disc.image_panels.push_back(img);
      }
    }
  }
}

}  // namespace wgscat::geometry
