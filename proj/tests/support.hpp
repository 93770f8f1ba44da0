#pragma once

// Test fixtures and independent oracles. Nothing here calls into the code
// paths the oracles are used to check.

#include "wiresynth/geometry.hpp"
#include "wiresynth/scene.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace wiresynth::test {

/// n axis-aligned 2x2x2 cubes along x at y = z = 10 in a simple scene.
inline SceneDescriptor cube_scene(int n) {
  SceneDescriptor scene;
  scene.world_size = 20.0;
  scene.profile = Profile::Simple;
  for (int i = 0; i < n; ++i) {
    ObjectSpec o;
    o.shape = ShapeType::Cube;
    o.position = {10.0 + 3.0 * i - 3.0 * (n / 2), 10.0, 10.0};
    if (n == 1) o.position = {10, 10, 10};
    o.size = {2, 2, 2};
    scene.objects.push_back(o);
  }
  return scene;
}

// ---------------------------------------------------------------------------
// Triangle-triangle intersection oracle: clip every edge of each triangle
// against the other triangle and take the farthest pair of resulting points.
// ---------------------------------------------------------------------------

using V3 = Eigen::Vector3d;

struct Tri {
  V3 a, b, c;
};

// Parameter interval of segment p + t (q - p), t in [0,1], lying inside the
// closed triangle, for a segment in the triangle's plane.
inline std::optional<std::pair<double, double>> clip_coplanar(const V3& p, const V3& q, const Tri& tri,
                                                              const V3& normal) {
  double t0 = 0.0, t1 = 1.0;
  const V3 verts[3] = {tri.a, tri.b, tri.c};
  for (int i = 0; i < 3; ++i) {
    const V3& u = verts[i];
    const V3& w = verts[(i + 1) % 3];
    const V3 inward = normal.cross(w - u);  // points into the triangle for CCW about normal
    const double f0 = inward.dot(p - u);
    const double f1 = inward.dot(q - u);
    const double tol = 1e-12 * inward.norm() * (1.0 + (q - p).norm());
    if (f0 < -tol && f1 < -tol) return std::nullopt;
    if (f0 < -tol || f1 < -tol) {
      const double t = f0 / (f0 - f1);
      if (f0 < f1) t0 = std::max(t0, t);
      else t1 = std::min(t1, t);
    }
  }
  if (t0 > t1) return std::nullopt;
  return std::pair{t0, t1};
}

inline void edge_against_triangle(const V3& p, const V3& q, const Tri& tri, double eps,
                                  std::vector<V3>& out) {
  const V3 n = (tri.b - tri.a).cross(tri.c - tri.a).normalized();
  double dp = n.dot(p - tri.a), dq = n.dot(q - tri.a);
  if (std::abs(dp) <= eps) dp = 0;
  if (std::abs(dq) <= eps) dq = 0;
  if (dp == 0 && dq == 0) {
    if (auto range = clip_coplanar(p, q, tri, n)) {
      out.push_back(p + range->first * (q - p));
      out.push_back(p + range->second * (q - p));
    }
    return;
  }
  if ((dp > 0 && dq > 0) || (dp < 0 && dq < 0)) return;
  const V3 x = dp == 0 ? p : (dq == 0 ? q : V3(p + (q - p) * (dp / (dp - dq))));
  // Inside test by barycentric areas.
  const double area = n.dot((tri.b - tri.a).cross(tri.c - tri.a));
  const double l0 = n.dot((tri.b - x).cross(tri.c - x)) / area;
  const double l1 = n.dot((tri.c - x).cross(tri.a - x)) / area;
  const double l2 = 1.0 - l0 - l1;
  const double slack = 1e-9;
  if (l0 >= -slack && l1 >= -slack && l2 >= -slack) out.push_back(x);
}

/// Exact-in-intent intersection segment of two triangles; nullopt for
/// disjoint, point-contact or coplanar pairs.
inline std::optional<std::pair<V3, V3>> oracle_tri_tri(const Tri& t1, const Tri& t2, double eps) {
  const V3 n1 = (t1.b - t1.a).cross(t1.c - t1.a).normalized();
  const V3 n2 = (t2.b - t2.a).cross(t2.c - t2.a).normalized();
  bool coplanar = true;
  for (const V3& v : {t2.a, t2.b, t2.c}) coplanar = coplanar && std::abs(n1.dot(v - t1.a)) <= eps;
  if (coplanar) return std::nullopt;
  (void)n2;
  std::vector<V3> pts;
  const V3 e1[3] = {t1.a, t1.b, t1.c};
  const V3 e2[3] = {t2.a, t2.b, t2.c};
  for (int i = 0; i < 3; ++i) edge_against_triangle(e1[i], e1[(i + 1) % 3], t2, eps, pts);
  for (int i = 0; i < 3; ++i) edge_against_triangle(e2[i], e2[(i + 1) % 3], t1, eps, pts);
  double best = 0;
  std::pair<V3, V3> seg;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = (pts[i] - pts[j]).norm();
      if (d > best) {
        best = d;
        seg = {pts[i], pts[j]};
      }
    }
  }
  if (best <= eps) return std::nullopt;
  return seg;
}

inline Tri mesh_triangle(const PosedMesh& m, Eigen::Index t) {
  const auto& f = m.triangles();
  return {m.vertices.row(f(t, 0)).transpose(), m.vertices.row(f(t, 1)).transpose(),
          m.vertices.row(f(t, 2)).transpose()};
}

inline std::vector<std::pair<V3, V3>> oracle_mesh_intersections(const PosedMesh& a, const PosedMesh& b,
                                                                double eps) {
  std::vector<std::pair<V3, V3>> out;
  for (Eigen::Index i = 0; i < a.triangles().rows(); ++i) {
    for (Eigen::Index j = 0; j < b.triangles().rows(); ++j) {
      if (auto s = oracle_tri_tri(mesh_triangle(a, i), mesh_triangle(b, j), eps)) out.push_back(*s);
    }
  }
  return out;
}

inline double point_segment_distance(const V3& p, const V3& a, const V3& b) {
  const V3 d = b - a;
  const double len2 = d.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * d)).norm();
}

/// Every point sampled along `xs` lies within `tol` of some segment in `ys`.
template <typename SegA, typename SegB>
bool covered_by(const std::vector<SegA>& xs, const std::vector<SegB>& ys, double tol,
                int samples = 16) {
  auto ends = [](const auto& s) -> std::pair<V3, V3> {
    if constexpr (requires { s.first; }) return {s.first, s.second};
    else return {s.a, s.b};
  };
  for (const auto& x : xs) {
    const auto [p, q] = ends(x);
    for (int k = 0; k <= samples; ++k) {
      const V3 pt = p + (q - p) * (static_cast<double>(k) / samples);
      bool hit = false;
      for (const auto& y : ys) {
        const auto [a, b] = ends(y);
        if (point_segment_distance(pt, a, b) <= tol) {
          hit = true;
          break;
        }
      }
      if (!hit) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Visibility oracle: plane hit + same-side inside test, no acceleration.
// ---------------------------------------------------------------------------

inline bool oracle_hidden(const V3& point, const std::vector<PosedMesh>& meshes, const V3& eye, double eps) {
  const V3 dir = eye - point;
  const double len = dir.norm();
  for (const PosedMesh& m : meshes) {
    for (Eigen::Index t = 0; t < m.triangles().rows(); ++t) {
      const Tri tri = mesh_triangle(m, t);
      const V3 n = (tri.b - tri.a).cross(tri.c - tri.a);
      const double denom = n.dot(dir);
      if (std::abs(denom) <= 1e-12 * n.norm() * len) continue;
      const double s = n.dot(tri.a - point) / denom;
      if (s * len <= eps || s >= 1.0) continue;
      const V3 x = point + s * dir;
      const double c0 = n.dot((tri.b - tri.a).cross(x - tri.a));
      const double c1 = n.dot((tri.c - tri.b).cross(x - tri.b));
      const double c2 = n.dot((tri.a - tri.c).cross(x - tri.c));
      const double slack = -1e-12 * n.squaredNorm() * (1.0 + len);
      if (c0 >= slack && c1 >= slack && c2 >= slack) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Assignment oracle: enumerate every injective map of the smaller side.
// ---------------------------------------------------------------------------

inline double brute_force_assignment(const Eigen::MatrixXd& cost) {
  const bool transpose = cost.rows() > cost.cols();
  const Eigen::MatrixXd c = transpose ? Eigen::MatrixXd(cost.transpose()) : cost;
  const int n = static_cast<int>(c.rows()), m = static_cast<int>(c.cols());
  if (n == 0) return 0.0;
  std::vector<int> cols(static_cast<std::size_t>(m));
  std::iota(cols.begin(), cols.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  // Permutations of all columns; the first n entries give the assignment.
  do {
    double total = 0;
    for (int i = 0; i < n; ++i) total += c(i, cols[static_cast<std::size_t>(i)]);
    best = std::min(best, total);
  } while (std::next_permutation(cols.begin(), cols.end()));
  return best;
}

}  // namespace wiresynth::test
