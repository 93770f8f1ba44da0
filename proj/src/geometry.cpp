#include "wiresynth/geometry.hpp"

#include <map>
#include <set>
#include <utility>

namespace wiresynth {

namespace {

using Polygon = std::vector<int>;

// Builds a closed convex solid from cyclic (unoriented) polygon faces.
// Faces are oriented away from the vertex centroid, fan-triangulated, and
// their boundary edges become the shape's edges. `smooth` lists the edges
// that only show up as silhouettes.
CanonicalShape build_convex(const std::vector<Eigen::Vector3d>& points,
                            const std::vector<Polygon>& faces,
                            const std::set<std::pair<int, int>>& smooth = {}) {
  CanonicalShape shape;
  shape.vertices.resize(static_cast<Eigen::Index>(points.size()), 3);
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < points.size(); ++i) {
    shape.vertices.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
    centroid += points[i];
  }
  centroid /= static_cast<double>(points.size());

  std::vector<std::array<int, 3>> tris;
  std::map<std::pair<int, int>, int> edge_index;
  for (Polygon face : faces) {
    const Eigen::Vector3d& p0 = points[static_cast<std::size_t>(face[0])];
    const Eigen::Vector3d normal = (points[static_cast<std::size_t>(face[1])] - p0)
                                       .cross(points[static_cast<std::size_t>(face[2])] - p0);
    if (normal.dot(p0 - centroid) < 0) std::reverse(face.begin(), face.end());
    for (std::size_t k = 1; k + 1 < face.size(); ++k) {
      tris.push_back({face[0], face[k], face[k + 1]});
    }
    for (std::size_t k = 0; k < face.size(); ++k) {
      const int a = face[k], b = face[(k + 1) % face.size()];
      const auto key = std::minmax(a, b);
      if (edge_index.emplace(key, static_cast<int>(shape.edges.size())).second) {
        const EdgeKind kind = smooth.count(key) ? EdgeKind::Smooth : EdgeKind::Sharp;
        shape.edges.push_back({key.first, key.second, kind});
      }
    }
  }

  shape.triangles.resize(static_cast<Eigen::Index>(tris.size()), 3);
  shape.edge_triangles.assign(shape.edges.size(), {-1, -1});
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto ti = static_cast<Eigen::Index>(t);
    for (int k = 0; k < 3; ++k) {
      shape.triangles(ti, k) = tris[t][static_cast<std::size_t>(k)];
      const auto key = std::minmax(tris[t][static_cast<std::size_t>(k)],
                                   tris[t][static_cast<std::size_t>((k + 1) % 3)]);
      auto it = edge_index.find(key);
      if (it == edge_index.end()) continue;  // fan diagonal
      auto& slot = shape.edge_triangles[static_cast<std::size_t>(it->second)];
      (slot[0] < 0 ? slot[0] : slot[1]) = static_cast<int>(t);
    }
  }
  return shape;
}

std::vector<Eigen::Vector3d> square_ring(double half, double z) {
  return {{-half, -half, z}, {half, -half, z}, {half, half, z}, {-half, half, z}};
}

CanonicalShape make_box_like(double top_half) {
  auto points = square_ring(0.5, -0.5);
  for (const auto& p : square_ring(top_half, 0.5)) points.push_back(p);
  return build_convex(points, {{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4},
                               {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}});
}

// Extrudes an x-z cross-section along y.
CanonicalShape make_prism(const std::vector<Eigen::Vector2d>& section) {
  const int m = static_cast<int>(section.size());
  std::vector<Eigen::Vector3d> points;
  for (double y : {-0.5, 0.5}) {
    for (const auto& p : section) points.emplace_back(p.x(), y, p.y());
  }
  std::vector<Polygon> faces(2);
  for (int k = 0; k < m; ++k) {
    faces[0].push_back(k);
    faces[1].push_back(m + k);
    const int k1 = (k + 1) % m;
    faces.push_back({k, k1, m + k1, m + k});
  }
  return build_convex(points, faces);
}

CanonicalShape make_cylinder() {
  constexpr int n = kCylinderSegments;
  std::vector<Eigen::Vector3d> points;
  for (double z : {-0.5, 0.5}) {
    for (int i = 0; i < n; ++i) {
      const double theta = 2.0 * EIGEN_PI * i / n;
      points.emplace_back(0.5 * std::cos(theta), 0.5 * std::sin(theta), z);
    }
  }
  std::vector<Polygon> faces(2);
  std::set<std::pair<int, int>> smooth;
  for (int i = 0; i < n; ++i) {
    faces[0].push_back(i);
    faces[1].push_back(n + i);
    const int i1 = (i + 1) % n;
    faces.push_back({i, i1, n + i1, n + i});
    smooth.insert({i, n + i});
  }
  return build_convex(points, faces, smooth);
}

CanonicalShape make_pyramid() {
  auto points = square_ring(0.5, -0.5);
  points.emplace_back(0.0, 0.0, 0.5);
  return build_convex(points, {{0, 1, 2, 3}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
}

CanonicalShape make_hip() {
  auto points = square_ring(0.5, -0.5);
  points.emplace_back(0.0, -0.25, 0.5);
  points.emplace_back(0.0, 0.25, 0.5);
  return build_convex(points, {{0, 1, 2, 3}, {0, 1, 4}, {2, 3, 5}, {1, 2, 5, 4}, {3, 0, 4, 5}});
}

CanonicalShape make(ShapeType shape) {
  switch (shape) {
    case ShapeType::Cube:
      return make_box_like(0.5);
    case ShapeType::Cylinder:
      return make_cylinder();
    case ShapeType::Pyramid:
      return make_pyramid();
    case ShapeType::Shed:
      return make_prism({{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.0}, {-0.5, 0.5}});
    case ShapeType::Hip:
      return make_hip();
    case ShapeType::AFrame:
      return make_prism({{-0.5, -0.5}, {0.5, -0.5}, {0.0, 0.5}});
    case ShapeType::Mansard:
      return make_box_like(0.25);
  }
  throw std::invalid_argument("unknown shape");
}

}  // namespace

const CanonicalShape& canonical(ShapeType shape) {
  static const std::array<CanonicalShape, kShapeCount> shapes = [] {
    std::array<CanonicalShape, kShapeCount> out;
    for (ShapeType s : kAllShapes) out[static_cast<std::size_t>(s)] = make(s);
    return out;
  }();
  return shapes.at(static_cast<std::size_t>(shape));
}

bool is_watertight(const TriangleMatrix& triangles) {
  std::map<std::pair<int, int>, int> directed;
  for (Eigen::Index t = 0; t < triangles.rows(); ++t) {
    for (int k = 0; k < 3; ++k) ++directed[{triangles(t, k), triangles(t, (k + 1) % 3)}];
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) return false;
    auto twin = directed.find({edge.second, edge.first});
    if (twin == directed.end() || twin->second != 1) return false;
  }
  return !directed.empty();
}

}  // namespace wiresynth
