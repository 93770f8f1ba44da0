#include "wiresynth/render.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace wiresynth {

std::string_view mode_name(RenderMode mode) {
  return mode == RenderMode::Informative ? "informative" : "normal";
}

std::optional<RenderMode> mode_from_name(std::string_view name) {
  if (name == "informative") return RenderMode::Informative;
  if (name == "normal") return RenderMode::Normal;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Camera
// ---------------------------------------------------------------------------

Camera place_camera(const CameraPose& pose, double world_size, const RenderConfig& config) {
  Camera cam;
  cam.width = config.width;
  cam.height = config.height;
  cam.target = Eigen::Vector3d::Constant(world_size / 2.0);
  cam.up = Eigen::Vector3d::UnitZ();
  const double radius = config.radius_multiplier * world_size;
  const double ce = cos_deg(pose.elevation), se = sin_deg(pose.elevation);
  const double ca = cos_deg(pose.azimuth), sa = sin_deg(pose.azimuth);
  cam.eye = cam.target + radius * Eigen::Vector3d(ce * ca, ce * sa, se);

  const Eigen::Vector3d f = (cam.target - cam.eye).normalized();
  const Eigen::Vector3d s = f.cross(cam.up).normalized();
  const Eigen::Vector3d u = s.cross(f);
  cam.view.setIdentity();
  cam.view.block<1, 3>(0, 0) = s.transpose();
  cam.view.block<1, 3>(1, 0) = u.transpose();
  cam.view.block<1, 3>(2, 0) = -f.transpose();
  cam.view(0, 3) = -s.dot(cam.eye);
  cam.view(1, 3) = -u.dot(cam.eye);
  cam.view(2, 3) = f.dot(cam.eye);

  cam.near_plane = 0.01 * radius;
  const double far_plane = 10.0 * radius;
  const double aspect = static_cast<double>(config.width) / config.height;
  const double focal = 1.0 / std::tan(config.fov_deg * EIGEN_PI / 360.0);
  cam.projection.setZero();
  cam.projection(0, 0) = focal / aspect;
  cam.projection(1, 1) = focal;
  cam.projection(2, 2) = (far_plane + cam.near_plane) / (cam.near_plane - far_plane);
  cam.projection(2, 3) = 2.0 * far_plane * cam.near_plane / (cam.near_plane - far_plane);
  cam.projection(3, 2) = -1.0;
  return cam;
}

Eigen::Vector2d Camera::project(const Eigen::Vector3d& world) const {
  const Eigen::Vector4d clip = projection * view * world.homogeneous();
  const double x = clip.x() / clip.w();
  const double y = clip.y() / clip.w();
  return {(x + 1.0) * 0.5 * width, (1.0 - y) * 0.5 * height};
}

double Camera::view_depth(const Eigen::Vector3d& world) const {
  return -(view * world.homogeneous()).z();
}

// ---------------------------------------------------------------------------
// Hidden-line removal
// ---------------------------------------------------------------------------

bool point_hidden(const Eigen::Vector3d& point, std::span<const PosedMesh> occluders,
                  const Eigen::Vector3d& eye, double eps) {
  const Eigen::Vector3d dir = eye - point;
  const double length = dir.norm();
  if (length <= eps) return false;
  const double s_min = eps / length;
  for (const PosedMesh& mesh : occluders) {
    if (!segment_hits_box(point, dir, s_min, 1.0, mesh.box_min, mesh.box_max, eps)) continue;
    const Eigen::Index n = mesh.triangles().rows();
    for (Eigen::Index t = 0; t < n; ++t) {
      const auto hit = ray_triangle(point, dir, triangle(mesh, t));
      if (hit && *hit > s_min && *hit < 1.0) return true;
    }
  }
  return false;
}

std::vector<VisibilitySpan> hidden_line_split(std::span<const Segment3> segments,
                                              std::span<const PosedMesh> occluders,
                                              const Camera& camera, double step, double eps) {
  std::vector<VisibilitySpan> out;
  auto classify = [&](const Segment3& seg, double t) {
    return point_hidden(seg.at(t), occluders, camera.eye, eps) ? Visibility::Hidden
                                                               : Visibility::Visible;
  };
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment3& seg = segments[i];
    const double length = seg.length();
    const int n = std::max(1, static_cast<int>(std::ceil(length / step)));
    std::vector<std::pair<double, Visibility>> runs;  // start parameter, state
    runs.emplace_back(0.0, classify(seg, 0.0));
    for (int k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / n;
      const Visibility v = classify(seg, t);
      if (v == runs.back().second) continue;
      double lo = static_cast<double>(k - 1) / n, hi = t;
      while ((hi - lo) * length > step * 1e-3 && hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        (classify(seg, mid) == runs.back().second ? lo : hi) = mid;
      }
      runs.emplace_back(0.5 * (lo + hi), v);
    }
    // Runs shorter than the sampling step are not resolved; fold them into
    // their neighbours.
    std::vector<std::pair<double, Visibility>> kept;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const double end = r + 1 < runs.size() ? runs[r + 1].first : 1.0;
      if ((end - runs[r].first) * length < step && runs.size() > 1) {
        if (kept.empty() && r + 1 < runs.size()) runs[r + 1].first = runs[r].first;
        continue;
      }
      if (!kept.empty() && kept.back().second == runs[r].second) continue;
      kept.push_back(runs[r]);
    }
    if (kept.empty()) kept.push_back(runs.front());
    kept.front().first = 0.0;
    for (std::size_t r = 0; r < kept.size(); ++r) {
      const double t0 = kept[r].first;
      const double t1 = r + 1 < kept.size() ? kept[r + 1].first : 1.0;
      const Eigen::Vector3d a = r == 0 ? seg.a : seg.at(t0);
      const Eigen::Vector3d b = r + 1 == kept.size() ? seg.b : seg.at(t1);
      out.push_back({{a, b, seg.provenance}, kept[r].second, i, t0, t1});
    }
  }
  return out;
}

namespace {

bool is_silhouette(const PosedMesh& mesh, std::size_t e, const Camera& camera) {
  const Edge& edge = mesh.edges()[e];
  if (edge.kind != EdgeKind::Smooth) return false;
  const Eigen::Vector3d to_eye = camera.eye - 0.5 * (mesh.vertex(edge.a) + mesh.vertex(edge.b));
  const auto& tris = mesh.topology->edge_triangles[e];
  const double s0 = triangle(mesh, tris[0]).normal().dot(to_eye);
  const double s1 = triangle(mesh, tris[1]).normal().dot(to_eye);
  return s0 * s1 < 0;
}

}  // namespace

std::vector<Segment3> silhouette_edges(const PosedMesh& mesh, const Camera& camera) {
  std::vector<Segment3> out;
  for (std::size_t e = 0; e < mesh.edges().size(); ++e) {
    if (!is_silhouette(mesh, e, camera)) continue;
    const Edge& edge = mesh.edges()[e];
    out.push_back({mesh.vertex(edge.a), mesh.vertex(edge.b), Provenance::ShapeEdge});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Strokes
// ---------------------------------------------------------------------------

std::string_view style_class(StrokeStyle style) {
  switch (style) {
    case StrokeStyle::VisibleSolid: return "visible";
    case StrokeStyle::HiddenDotted: return "hidden";
    case StrokeStyle::AxisX: return "axis-x";
    case StrokeStyle::AxisY: return "axis-y";
    case StrokeStyle::AxisZ: return "axis-z";
  }
  return "visible";
}

std::string_view style_color(StrokeStyle style) {
  switch (style) {
    case StrokeStyle::AxisX: return "#ff0000";
    case StrokeStyle::AxisY: return "#00ff00";
    case StrokeStyle::AxisZ: return "#0000ff";
    default: return "#000000";
  }
}

namespace {

// Liang-Barsky against [0, w] x [0, h].
bool clip_to_viewport(Eigen::Vector2d& p, Eigen::Vector2d& q, double w, double h) {
  const Eigen::Vector2d d = q - p;
  double t0 = 0.0, t1 = 1.0;
  const double pk[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double qk[4] = {p.x(), w - p.x(), p.y(), h - p.y()};
  for (int k = 0; k < 4; ++k) {
    if (pk[k] == 0.0) {
      if (qk[k] < 0.0) return false;
      continue;
    }
    const double r = qk[k] / pk[k];
    if (pk[k] < 0.0) t0 = std::max(t0, r);
    else t1 = std::min(t1, r);
    if (t0 > t1) return false;
  }
  const Eigen::Vector2d start = p + t0 * d;
  q = p + t1 * d;
  p = start;
  return true;
}

// Clips against the near plane in world space, then projects and clips to
// the image. Returns false when nothing remains.
bool project_segment(const Camera& cam, Eigen::Vector3d a, Eigen::Vector3d b, Stroke2& stroke) {
  const double da = cam.view_depth(a) - cam.near_plane;
  const double db = cam.view_depth(b) - cam.near_plane;
  if (da <= 0 && db <= 0) return false;
  if (da < 0) a = a + (b - a) * (da / (da - db));
  if (db < 0) b = b + (a - b) * (db / (db - da));
  Eigen::Vector2d p = cam.project(a), q = cam.project(b);
  if (!clip_to_viewport(p, q, cam.width, cam.height)) return false;
  stroke.points = {p, q};
  return true;
}

}  // namespace

std::vector<Stroke2> scene_strokes(const SceneDescriptor& scene, const CameraPose& pose,
                                   const RenderConfig& config) {
  const Camera cam = place_camera(pose, scene.world_size, config);
  const double eps = geometry_epsilon(scene.world_size);

  std::vector<PosedMesh> meshes;
  meshes.reserve(scene.objects.size());
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    meshes.push_back(instantiate(scene.objects[i], static_cast<int>(i)));
  }

  std::vector<Segment3> segments;
  for (const PosedMesh& mesh : meshes) {
    const auto& edges = mesh.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].kind == EdgeKind::Sharp || is_silhouette(mesh, e, cam)) {
        segments.push_back({mesh.vertex(edges[e].a), mesh.vertex(edges[e].b), Provenance::ShapeEdge});
      }
    }
  }
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    for (std::size_t j = i + 1; j < meshes.size(); ++j) {
      for (const Segment3& s : intersection_curves(meshes[i], meshes[j], eps)) segments.push_back(s);
    }
  }

  const auto spans = hidden_line_split(segments, meshes, cam, config.step_for(scene.world_size), eps);
  std::vector<Stroke2> strokes;
  strokes.reserve(spans.size() + 3);
  for (const VisibilitySpan& span : spans) {
    if (span.segment.length() <= eps) continue;
    Stroke2 stroke;
    stroke.style = span.visibility == Visibility::Visible ? StrokeStyle::VisibleSolid
                                                          : StrokeStyle::HiddenDotted;
    if (project_segment(cam, span.segment.a, span.segment.b, stroke)) strokes.push_back(std::move(stroke));
  }

  const StrokeStyle axis_styles[3] = {StrokeStyle::AxisX, StrokeStyle::AxisY, StrokeStyle::AxisZ};
  for (int k = 0; k < 3; ++k) {
    Stroke2 stroke;
    stroke.style = axis_styles[k];
    const Eigen::Vector3d end = scene.world_size * Eigen::Vector3d::Unit(k);
    if (project_segment(cam, Eigen::Vector3d::Zero(), end, stroke)) strokes.push_back(std::move(stroke));
  }
  return strokes;
}

std::vector<Stroke2> strokes_for_mode(const std::vector<Stroke2>& strokes, RenderMode mode) {
  if (mode == RenderMode::Informative) return strokes;
  std::vector<Stroke2> out;
  for (const Stroke2& s : strokes) {
    if (s.style == StrokeStyle::VisibleSolid) out.push_back(s);
  }
  return out;
}

namespace {

void append_number(std::string& out, double v) {
  if (std::abs(v) < 5e-4) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  out += buf;
}

std::string format_width(double w) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", w);
  return buf;
}

}  // namespace

std::string write_svg(const std::vector<Stroke2>& strokes, const RenderConfig& config) {
  const std::string w = std::to_string(config.width), h = std::to_string(config.height);
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h +
         "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"#ffffff\"/>\n";
  const std::string edge_width = format_width(config.edge_stroke_width);
  const std::string axis_width = format_width(config.axis_stroke_width);
  const std::string dash = format_width(config.dash_length) + " " + format_width(config.dash_gap);
  for (const Stroke2& s : strokes) {
    out += "<polyline class=\"";
    out += style_class(s.style);
    out += "\" points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      if (i) out += ' ';
      append_number(out, s.points[i].x());
      out += ',';
      append_number(out, s.points[i].y());
    }
    out += "\" fill=\"none\" stroke=\"";
    out += style_color(s.style);
    out += "\" stroke-width=\"";
    const bool axis = s.style != StrokeStyle::VisibleSolid && s.style != StrokeStyle::HiddenDotted;
    out += axis ? axis_width : edge_width;
    out += '"';
    if (s.style == StrokeStyle::HiddenDotted) out += " stroke-dasharray=\"" + dash + "\"";
    out += "/>\n";
  }
  out += "</svg>\n";
  return out;
}

RenderOutput render_scene(const SceneDescriptor& scene, const CameraPose& pose,
                          const RenderConfig& config) {
  const auto strokes = strokes_for_mode(scene_strokes(scene, pose, config), config.mode);
  return {write_svg(strokes, config), rasterize_png(strokes, config)};
}

}  // namespace wiresynth
