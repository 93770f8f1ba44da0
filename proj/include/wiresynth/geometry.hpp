#pragma once

#include "wiresynth/scene.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace wiresynth {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using VertexMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor>;
using TriangleMatrix = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

enum class EdgeKind { Sharp, Smooth };

struct Edge {
  int a = 0;
  int b = 0;
  EdgeKind kind = EdgeKind::Sharp;
};

/// Primitive in the unit box [-0.5, 0.5]^3, +z up. Triangles wind
/// counter-clockwise seen from outside. `edge_triangles[e]` holds the two
/// triangles sharing edge e.
struct CanonicalShape {
  VertexMatrix<double> vertices;
  std::vector<Edge> edges;
  TriangleMatrix triangles;
  std::vector<std::array<int, 2>> edge_triangles;
};

inline constexpr int kCylinderSegments = 24;

const CanonicalShape& canonical(ShapeType shape);

template <typename Scalar>
struct PosedMeshT {
  int object_index = -1;
  ShapeType shape = ShapeType::Cube;
  VertexMatrix<Scalar> vertices;
  const CanonicalShape* topology = nullptr;  // edges and triangles, shared
  Vector3<Scalar> box_min;
  Vector3<Scalar> box_max;

  const std::vector<Edge>& edges() const { return topology->edges; }
  const TriangleMatrix& triangles() const { return topology->triangles; }
  Vector3<Scalar> vertex(int i) const { return vertices.row(i).transpose(); }
};
using PosedMesh = PosedMeshT<double>;

enum class Provenance { ShapeEdge, IntersectionCurve, Axis };

template <typename Scalar>
struct Segment3T {
  Vector3<Scalar> a;
  Vector3<Scalar> b;
  Provenance provenance = Provenance::ShapeEdge;

  Scalar length() const { return (b - a).norm(); }
  Vector3<Scalar> at(Scalar t) const { return a + t * (b - a); }
};
using Segment3 = Segment3T<double>;

/// Point-coincidence tolerance for a world of the given size.
inline double geometry_epsilon(double world_size) { return 1e-6 * world_size; }

// ---------------------------------------------------------------------------
// Placement
// ---------------------------------------------------------------------------

/// cos/sin in degrees, exact at multiples of 90.
template <typename Scalar>
Scalar cos_deg(Scalar degrees) {
  const Scalar r = std::fmod(degrees, Scalar(360));
  const Scalar q = r < 0 ? r + Scalar(360) : r;
  if (q == 0) return Scalar(1);
  if (q == 90 || q == 270) return Scalar(0);
  if (q == 180) return Scalar(-1);
  return std::cos(q * Scalar(EIGEN_PI) / Scalar(180));
}

template <typename Scalar>
Scalar sin_deg(Scalar degrees) {
  return cos_deg<Scalar>(Scalar(90) - degrees);
}

/// Rotation applied to canonical coordinates: yaw about +z first, then pitch
/// about +x.
template <typename Scalar>
Matrix3<Scalar> rotation_matrix(Scalar yaw_deg, Scalar pitch_deg) {
  const Scalar cy = cos_deg(yaw_deg), sy = sin_deg(yaw_deg);
  const Scalar cp = cos_deg(pitch_deg), sp = sin_deg(pitch_deg);
  Matrix3<Scalar> yaw;
  yaw << cy, -sy, 0, sy, cy, 0, 0, 0, 1;
  Matrix3<Scalar> pitch;
  pitch << 1, 0, 0, 0, cp, -sp, 0, sp, cp;
  return pitch * yaw;
}

/// world = position + R(yaw, pitch) * (size ⊙ canonical)
template <typename Scalar = double>
PosedMeshT<Scalar> instantiate(const ObjectSpec& obj, int object_index = -1) {
  const CanonicalShape& shape = canonical(obj.shape);
  PosedMeshT<Scalar> mesh;
  mesh.object_index = object_index;
  mesh.shape = obj.shape;
  mesh.topology = &shape;

  const Matrix3<Scalar> rotation =
      rotation_matrix<Scalar>(Scalar(obj.rotation.x()), Scalar(obj.rotation.y()));
  const Matrix3<Scalar> linear = rotation * obj.size.cast<Scalar>().asDiagonal();
  const Vector3<Scalar> offset = obj.position.cast<Scalar>();
  mesh.vertices = (shape.vertices.cast<Scalar>() * linear.transpose()).rowwise() + offset.transpose();
  mesh.box_min = mesh.vertices.colwise().minCoeff().transpose();
  mesh.box_max = mesh.vertices.colwise().maxCoeff().transpose();
  return mesh;
}

// ---------------------------------------------------------------------------
// Mesh checks
// ---------------------------------------------------------------------------

/// Every undirected triangle edge used exactly twice, once in each direction.
bool is_watertight(const TriangleMatrix& triangles);

template <typename Derived>
typename Derived::Scalar signed_volume(const Eigen::MatrixBase<Derived>& vertices,
                                       const TriangleMatrix& triangles) {
  using Scalar = typename Derived::Scalar;
  Scalar volume = 0;
  for (Eigen::Index t = 0; t < triangles.rows(); ++t) {
    const Vector3<Scalar> a = vertices.row(triangles(t, 0)).transpose();
    const Vector3<Scalar> b = vertices.row(triangles(t, 1)).transpose();
    const Vector3<Scalar> c = vertices.row(triangles(t, 2)).transpose();
    volume += a.dot(b.cross(c));
  }
  return volume / Scalar(6);
}

// ---------------------------------------------------------------------------
// Triangle queries
// ---------------------------------------------------------------------------

template <typename Scalar>
struct TriangleT {
  Vector3<Scalar> p0, p1, p2;

  Vector3<Scalar> normal() const { return (p1 - p0).cross(p2 - p0); }
  const Vector3<Scalar>& operator[](int i) const { return i == 0 ? p0 : (i == 1 ? p1 : p2); }
};

template <typename Scalar>
TriangleT<Scalar> triangle(const PosedMeshT<Scalar>& mesh, Eigen::Index t) {
  const auto& tri = mesh.triangles();
  return {mesh.vertex(tri(t, 0)), mesh.vertex(tri(t, 1)), mesh.vertex(tri(t, 2))};
}

/// Ray origin + s * direction against a triangle (Moller-Trumbore, closed
/// triangle). Returns s on hit.
template <typename Scalar>
std::optional<Scalar> ray_triangle(const Vector3<Scalar>& origin, const Vector3<Scalar>& direction,
                                   const TriangleT<Scalar>& tri) {
  const Vector3<Scalar> e1 = tri.p1 - tri.p0;
  const Vector3<Scalar> e2 = tri.p2 - tri.p0;
  const Vector3<Scalar> p = direction.cross(e2);
  const Scalar det = e1.dot(p);
  const Scalar scale = e1.norm() * e2.norm() * direction.norm();
  if (std::abs(det) <= Scalar(1e-12) * scale) return std::nullopt;
  const Scalar inv = Scalar(1) / det;
  const Vector3<Scalar> s = origin - tri.p0;
  const Scalar u = s.dot(p) * inv;
  constexpr Scalar slack = Scalar(1e-12);
  if (u < -slack || u > 1 + slack) return std::nullopt;
  const Vector3<Scalar> q = s.cross(e1);
  const Scalar v = direction.dot(q) * inv;
  if (v < -slack || u + v > 1 + slack) return std::nullopt;
  return e2.dot(q) * inv;
}

/// Slab test of the segment origin + s * direction, s in [s_min, s_max],
/// against an axis-aligned box grown by `pad`.
template <typename Scalar>
bool segment_hits_box(const Vector3<Scalar>& origin, const Vector3<Scalar>& direction, Scalar s_min,
                      Scalar s_max, const Vector3<Scalar>& box_min, const Vector3<Scalar>& box_max,
                      Scalar pad) {
  for (int k = 0; k < 3; ++k) {
    const Scalar lo = box_min[k] - pad, hi = box_max[k] + pad;
    if (std::abs(direction[k]) < std::numeric_limits<Scalar>::min()) {
      if (origin[k] < lo || origin[k] > hi) return false;
      continue;
    }
    Scalar t0 = (lo - origin[k]) / direction[k];
    Scalar t1 = (hi - origin[k]) / direction[k];
    if (t0 > t1) std::swap(t0, t1);
    s_min = std::max(s_min, t0);
    s_max = std::min(s_max, t1);
    if (s_min > s_max) return false;
  }
  return true;
}

namespace detail {

// Points where triangle `tri` meets the plane with signed vertex distances
// `d` (already snapped to zero within tolerance).
template <typename Scalar>
int plane_crossings(const TriangleT<Scalar>& tri, const std::array<Scalar, 3>& d,
                    std::array<Vector3<Scalar>, 6>& out) {
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (d[i] == 0) out[n++] = tri[i];
    if ((d[i] < 0 && d[j] > 0) || (d[i] > 0 && d[j] < 0)) {
      out[n++] = tri[i] + (tri[j] - tri[i]) * (d[i] / (d[i] - d[j]));
    }
  }
  return n;
}

template <typename Scalar>
std::array<Scalar, 3> plane_distances(const TriangleT<Scalar>& tri, const Vector3<Scalar>& unit_normal,
                                      const Vector3<Scalar>& on_plane, Scalar eps) {
  std::array<Scalar, 3> d;
  for (int i = 0; i < 3; ++i) {
    d[i] = unit_normal.dot(tri[i] - on_plane);
    if (std::abs(d[i]) <= eps) d[i] = 0;
  }
  return d;
}

template <typename Scalar>
bool one_side(const std::array<Scalar, 3>& d) {
  return (d[0] > 0 && d[1] > 0 && d[2] > 0) || (d[0] < 0 && d[1] < 0 && d[2] < 0);
}

}  // namespace detail

/// Intersection segment of two triangles. Coplanar pairs yield nothing: their
/// shared region's boundary lies on the triangles' own edges.
template <typename Scalar>
std::optional<Segment3T<Scalar>> triangle_intersection(const TriangleT<Scalar>& t1,
                                                       const TriangleT<Scalar>& t2, Scalar eps) {
  const Vector3<Scalar> n1 = t1.normal().normalized();
  const Vector3<Scalar> n2 = t2.normal().normalized();
  const auto d1 = detail::plane_distances(t1, n2, t2.p0, eps);
  if (detail::one_side(d1)) return std::nullopt;
  const auto d2 = detail::plane_distances(t2, n1, t1.p0, eps);
  if (detail::one_side(d2)) return std::nullopt;
  if (d1[0] == 0 && d1[1] == 0 && d1[2] == 0) return std::nullopt;
  if (d2[0] == 0 && d2[1] == 0 && d2[2] == 0) return std::nullopt;

  const Vector3<Scalar> line = n1.cross(n2);
  if (line.norm() < Scalar(1e-12)) return std::nullopt;
  const Vector3<Scalar> dir = line.normalized();

  std::array<Vector3<Scalar>, 6> pts1, pts2;
  const int c1 = detail::plane_crossings(t1, d1, pts1);
  const int c2 = detail::plane_crossings(t2, d2, pts2);
  if (c1 == 0 || c2 == 0) return std::nullopt;

  auto extent = [&](const std::array<Vector3<Scalar>, 6>& pts, int n) {
    int lo = 0, hi = 0;
    for (int i = 1; i < n; ++i) {
      if (dir.dot(pts[i]) < dir.dot(pts[lo])) lo = i;
      if (dir.dot(pts[i]) > dir.dot(pts[hi])) hi = i;
    }
    return std::pair{lo, hi};
  };
  const auto [lo1, hi1] = extent(pts1, c1);
  const auto [lo2, hi2] = extent(pts2, c2);
  const Vector3<Scalar>& start =
      dir.dot(pts1[lo1]) >= dir.dot(pts2[lo2]) ? pts1[lo1] : pts2[lo2];
  const Vector3<Scalar>& end = dir.dot(pts1[hi1]) <= dir.dot(pts2[hi2]) ? pts1[hi1] : pts2[hi2];
  if (dir.dot(end) - dir.dot(start) <= eps) return std::nullopt;
  return Segment3T<Scalar>{start, end, Provenance::IntersectionCurve};
}

/// Removes near-zero and duplicate segments and joins collinear segments
/// that meet end to end.
template <typename Scalar>
std::vector<Segment3T<Scalar>> merge_segments(std::vector<Segment3T<Scalar>> segments, Scalar eps) {
  auto close = [eps](const Vector3<Scalar>& p, const Vector3<Scalar>& q) {
    return (p - q).norm() <= eps;
  };
  std::vector<Segment3T<Scalar>> out;
  for (const auto& s : segments) {
    if (s.length() <= eps) continue;
    bool duplicate = false;
    for (const auto& o : out) {
      if ((close(s.a, o.a) && close(s.b, o.b)) || (close(s.a, o.b) && close(s.b, o.a))) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.push_back(s);
  }

  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < out.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < out.size() && !merged; ++j) {
        Segment3T<Scalar> a = out[i], b = out[j];
        // Orient so that a.b touches b.a.
        if (close(a.a, b.a)) std::swap(a.a, a.b);
        else if (close(a.a, b.b)) { std::swap(a.a, a.b); std::swap(b.a, b.b); }
        else if (close(a.b, b.b)) std::swap(b.a, b.b);
        else if (!close(a.b, b.a)) continue;
        const Vector3<Scalar> u = a.b - a.a;
        const Vector3<Scalar> v = b.b - b.a;
        if (u.dot(v) <= 0) continue;
        if (u.cross(v).norm() > eps * (u.norm() + v.norm())) continue;
        const Vector3<Scalar> w = b.b - a.a;
        if (u.cross(w).norm() > eps * (u.norm() + w.norm())) continue;
        out[i] = {a.a, b.b, a.provenance};
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
        merged = true;
      }
    }
  }
  return out;
}

/// Triangle-triangle intersection segments between two meshes, merged.
/// Empty when the meshes do not touch.
template <typename Scalar>
std::vector<Segment3T<Scalar>> intersection_curves(const PosedMeshT<Scalar>& a,
                                                   const PosedMeshT<Scalar>& b, Scalar eps) {
  std::vector<Segment3T<Scalar>> raw;
  if ((a.box_min.array() > b.box_max.array() + eps).any() ||
      (b.box_min.array() > a.box_max.array() + eps).any()) {
    return raw;
  }
  const Eigen::Index na = a.triangles().rows(), nb = b.triangles().rows();
  std::vector<TriangleT<Scalar>> tb;
  std::vector<std::pair<Vector3<Scalar>, Vector3<Scalar>>> boxes_b;
  tb.reserve(static_cast<std::size_t>(nb));
  for (Eigen::Index j = 0; j < nb; ++j) {
    tb.push_back(triangle(b, j));
    const auto& t = tb.back();
    boxes_b.emplace_back(t.p0.cwiseMin(t.p1).cwiseMin(t.p2), t.p0.cwiseMax(t.p1).cwiseMax(t.p2));
  }
  for (Eigen::Index i = 0; i < na; ++i) {
    const TriangleT<Scalar> ta = triangle(a, i);
    const Vector3<Scalar> lo = ta.p0.cwiseMin(ta.p1).cwiseMin(ta.p2);
    const Vector3<Scalar> hi = ta.p0.cwiseMax(ta.p1).cwiseMax(ta.p2);
    for (std::size_t j = 0; j < tb.size(); ++j) {
      if ((lo.array() > boxes_b[j].second.array() + eps).any() ||
          (boxes_b[j].first.array() > hi.array() + eps).any()) {
        continue;
      }
      if (auto seg = triangle_intersection(ta, tb[j], eps)) raw.push_back(*seg);
    }
  }
  return merge_segments(std::move(raw), eps);
}

}  // namespace wiresynth
