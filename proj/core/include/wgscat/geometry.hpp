#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "wgscat/modal.hpp"

namespace wgscat::geometry {

using Vec2 = Eigen::Vector2d;

enum class SegKind { Wall, Port };

/// One straight edge of a component boundary, traversed with the fluid
/// domain on the left.
struct Segment {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
  SegKind kind = SegKind::Wall;
  int port = -1;  // index into ComponentGeometry::ports for port edges
  int loop = 0;
};

struct PortInfo {
  int segment = -1;
  modal::PortSpec spec;
};

/// Closed polygonal component. The outer loop is counterclockwise; hole
/// loops are clockwise, so the domain is always on the left of traversal.
struct ComponentGeometry {
  double k = 0.0;
  std::vector<Segment> segments;
  std::vector<PortInfo> ports;
  std::vector<std::vector<int>> loops;  // segment indices, traversal order
};

struct LoopInput {
  std::vector<Vec2> vertices;
  std::vector<int> port_edges;  // edge i runs vertices[i] -> vertices[i+1]
};

/// Validates and assembles a component: loops must be simple and correctly
/// oriented, ports straight and meeting their neighbouring walls at right
/// angles. Port frames (origin, tangent, outward axis) are derived here.
ComponentGeometry build_component(const std::vector<LoopInput>& loops,
                                  modal::BcKind bc, double k);

/// Winding-number point location against all loops of the component.
bool inside(const ComponentGeometry& comp, const Vec2& p);

/// One flat 16-node Gauss-Legendre panel.
struct Panel {
  Eigen::Matrix<double, 2, 16> x;
  std::array<double, 16> w;  // arclength weights
  Vec2 a = Vec2::Zero(), b = Vec2::Zero();
  Vec2 tangent = Vec2::Zero(), normal = Vec2::Zero();  // normal points out of the domain
  double len = 0.0;
  int segment = -1;
  int image_of = -1;    // for image panels: index of the source panel
  int image_port = -1;  // port whose line the source was reflected across
};

struct PanelizeOptions {
  double h = 0.25;            // target panel length; min(h, lambda/6) is used
  int grading_levels = 30;    // dyadic levels per corner side
  double image_radius = 1.0;  // r = image_radius * port width, clipped to walls
  std::vector<int> port_panels;  // minimum base panels per port (default 4)
};

struct Discretization {
  std::vector<Panel> panels;
  std::vector<Panel> image_panels;
  std::vector<int> image_index;  // per panel: index into image_panels or -1
  std::vector<std::vector<int>> segment_panels;
  std::vector<double> port_radius;  // realised reflection radius r per port
};

/// Splits every segment into 16-node panels: uniform at min(h, lambda/6)
/// with dyadic grading into each corner, a breakpoint at arclength r from
/// every port-adjacent corner, and at least the requested panel count on
/// each port.
Discretization panelize(const ComponentGeometry& comp, const PanelizeOptions& opt);

/// Reflects every wall panel lying within arclength r of a port corner
/// across that port's line, filling image_panels / image_index. Checks the
/// reflection pairing and that images land outside the domain.
void build_image_panels(const ComponentGeometry& comp, Discretization& disc);

/// Reflection of a point across the infinite line carrying port `spec`.
Vec2 reflect_across_port(const modal::PortSpec& spec, const Vec2& x);

}  // namespace wgscat::geometry
