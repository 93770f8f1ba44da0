#pragma once

#include "wiresynth/geometry.hpp"
#include "wiresynth/scene.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wiresynth {

enum class RenderMode { Informative, Normal };

std::string_view mode_name(RenderMode mode);
std::optional<RenderMode> mode_from_name(std::string_view name);

struct RenderConfig {
  int width = 224;
  int height = 224;
  double fov_deg = 45.0;             // vertical
  double radius_multiplier = 2.5;    // eye distance = multiplier * world_size
  RenderMode mode = RenderMode::Normal;
  double edge_stroke_width = 1.0;
  double axis_stroke_width = 1.0;
  double dash_length = 4.0;          // px
  double dash_gap = 4.0;             // px
  std::optional<double> hlr_step;    // defaults to world_size / 500

  double step_for(double world_size) const { return hlr_step.value_or(world_size / 500.0); }
};

/// Perspective look-at camera. The target is the world center, up is +z.
struct Camera {
  Eigen::Vector3d eye;
  Eigen::Vector3d target;
  Eigen::Vector3d up;
  Eigen::Matrix4d view;
  Eigen::Matrix4d projection;
  double near_plane = 0.0;
  int width = 0;
  int height = 0;

  /// Pixel coordinates (x right, y down) of a world point.
  Eigen::Vector2d project(const Eigen::Vector3d& world) const;
  /// Distance in front of the eye along the viewing axis.
  double view_depth(const Eigen::Vector3d& world) const;
};

/// eye = target + R (cos el cos az, cos el sin az, sin el), R = multiplier * world_size.
Camera place_camera(const CameraPose& pose, double world_size, const RenderConfig& config);

// ---------------------------------------------------------------------------
// Hidden-line removal
// ---------------------------------------------------------------------------

enum class Visibility { Visible, Hidden };

struct VisibilitySpan {
  Segment3 segment;
  Visibility visibility = Visibility::Visible;
  std::size_t source = 0;  // index of the input segment
  double t0 = 0.0;         // parameter range on the source segment
  double t1 = 1.0;
};

/// True iff the open segment from `point` to `eye` crosses an occluder
/// triangle farther than `eps` from `point`.
bool point_hidden(const Eigen::Vector3d& point, std::span<const PosedMesh> occluders,
                  const Eigen::Vector3d& eye, double eps);

/// Splits each segment into maximal runs of uniform visibility. Runs are
/// found by sampling every `step` world units and refined by bisection; runs
/// shorter than `step` are merged into their neighbours.
std::vector<VisibilitySpan> hidden_line_split(std::span<const Segment3> segments,
                                              std::span<const PosedMesh> occluders,
                                              const Camera& camera, double step, double eps);

/// Smooth edges whose adjacent faces point opposite ways relative to the eye.
std::vector<Segment3> silhouette_edges(const PosedMesh& mesh, const Camera& camera);

// ---------------------------------------------------------------------------
// Strokes and output
// ---------------------------------------------------------------------------

enum class StrokeStyle { VisibleSolid, HiddenDotted, AxisX, AxisY, AxisZ };

std::string_view style_class(StrokeStyle style);
std::string_view style_color(StrokeStyle style);

struct Stroke2 {
  std::vector<Eigen::Vector2d> points;  // pixels, inside the image
  StrokeStyle style = StrokeStyle::VisibleSolid;
};

/// Full informative stroke list in output order: per object its edges in
/// edge order (sharp edges and current silhouettes), then intersection curves
/// per object pair, then the three world axes.
std::vector<Stroke2> scene_strokes(const SceneDescriptor& scene, const CameraPose& pose,
                                   const RenderConfig& config);

/// Informative keeps everything; normal keeps visible solid strokes only.
std::vector<Stroke2> strokes_for_mode(const std::vector<Stroke2>& strokes, RenderMode mode);

std::string write_svg(const std::vector<Stroke2>& strokes, const RenderConfig& config);
std::string rasterize_png(const std::vector<Stroke2>& strokes, const RenderConfig& config);

struct RenderOutput {
  std::string svg;
  std::string png;
};

RenderOutput render_scene(const SceneDescriptor& scene, const CameraPose& pose,
                          const RenderConfig& config);

}  // namespace wiresynth
