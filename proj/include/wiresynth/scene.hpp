#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wiresynth {

// Ordinals are part of the token layout; do not reorder.
enum class ShapeType : int { Cube = 0, Cylinder, Pyramid, Shed, Hip, AFrame, Mansard };

inline constexpr int kShapeCount = 7;
inline constexpr std::array<ShapeType, kShapeCount> kAllShapes = {
    ShapeType::Cube, ShapeType::Cylinder, ShapeType::Pyramid, ShapeType::Shed,
    ShapeType::Hip,  ShapeType::AFrame,   ShapeType::Mansard};

std::string_view shape_name(ShapeType shape);
std::optional<ShapeType> shape_from_name(std::string_view name);

enum class Profile { Simple, Complex };

std::string_view profile_name(Profile profile);
std::optional<Profile> profile_from_name(std::string_view name);

/// Object placement in world units. `position` is the object center, `size`
/// the full extents along the canonical axes, `rotation` is (yaw, pitch) in
/// degrees.
struct ObjectSpec {
  ShapeType shape = ShapeType::Cube;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector2d rotation = Eigen::Vector2d::Zero();
  Eigen::Vector3d size = Eigen::Vector3d::Ones();

  bool operator==(const ObjectSpec& other) const {
    return shape == other.shape && position == other.position &&
           rotation == other.rotation && size == other.size;
  }
};

struct SceneDescriptor {
  double world_size = 20.0;
  Profile profile = Profile::Simple;
  std::vector<ObjectSpec> objects;

  bool operator==(const SceneDescriptor& other) const = default;
};

/// Generation and validation rules of a dataset profile.
struct ProfileParams {
  Profile name = Profile::Simple;
  double world_size = 20.0;
  int min_objects = 1;
  int max_objects = 5;
  std::vector<ShapeType> allowed_shapes;
  std::vector<int> rotation_set;  // degrees, applied to yaw and pitch independently
  double size_min = 2.0;
  double size_max = 20.0;

  bool allows(ShapeType shape) const;
};

ProfileParams profile_params(Profile profile);

// ---------------------------------------------------------------------------
// Camera pose table
// ---------------------------------------------------------------------------

inline constexpr int kAzimuthCount = 12;
inline constexpr int kElevationCount = 5;
inline constexpr int kPoseCount = kAzimuthCount * kElevationCount;

struct CameraPose {
  int pose_id = 0;
  double azimuth = -180.0;   // degrees
  double elevation = -15.0;  // degrees

  bool operator==(const CameraPose& other) const = default;
};

/// The 60 fixed poses, sorted by id. id = elevation_index * 12 + azimuth_index.
const std::vector<CameraPose>& pose_table();

/// Throws std::out_of_range for ids outside [0, 60).
CameraPose pose_from_id(int pose_id);

/// Returns the table entry with exactly these angles, if any.
std::optional<CameraPose> pose_from_angles(double azimuth, double elevation);

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Violation {
  int object_index = -1;  // -1 for scene-level violations
  std::string field;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

ValidationResult validate_scene(const SceneDescriptor& scene, const ProfileParams& rules);
ValidationResult validate_scene(const SceneDescriptor& scene);

// ---------------------------------------------------------------------------
// Canonical JSON
// ---------------------------------------------------------------------------

/// Malformed scene JSON. Syntax errors carry the byte offset reported by the
/// parser; schema errors carry the JSON path of the offending field.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::optional<std::size_t> byte_offset,
             std::string path);

  const std::optional<std::size_t>& byte_offset() const { return byte_offset_; }
  const std::string& path() const { return path_; }

 private:
  std::optional<std::size_t> byte_offset_;
  std::string path_;
};

/// Canonical form: 2-space indent, fixed key order, lowercase shape names,
/// trailing newline. Does not validate; call validate_scene first where the
/// profile rules must hold.
std::string write_scene_json(const SceneDescriptor& scene);

/// Parses and checks the schema (known shape and profile names, field
/// presence, array arity, finite numbers). Profile rules are not enforced.
SceneDescriptor read_scene_json(std::string_view bytes);

}  // namespace wiresynth
