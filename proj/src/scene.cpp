#include "wiresynth/scene.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wiresynth {

namespace {

constexpr std::array<std::string_view, kShapeCount> kShapeNames = {
    "cube", "cylinder", "pyramid", "shed", "hip", "aframe", "mansard"};

}  // namespace

std::string_view shape_name(ShapeType shape) {
  return kShapeNames.at(static_cast<std::size_t>(shape));
}

std::optional<ShapeType> shape_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kShapeNames.size(); ++i) {
    if (kShapeNames[i] == name) return static_cast<ShapeType>(i);
  }
  return std::nullopt;
}

std::string_view profile_name(Profile profile) {
  return profile == Profile::Simple ? "simple" : "complex";
}

std::optional<Profile> profile_from_name(std::string_view name) {
  if (name == "simple") return Profile::Simple;
  if (name == "complex") return Profile::Complex;
  return std::nullopt;
}

bool ProfileParams::allows(ShapeType shape) const {
  return std::find(allowed_shapes.begin(), allowed_shapes.end(), shape) != allowed_shapes.end();
}

ProfileParams profile_params(Profile profile) {
  ProfileParams p;
  p.name = profile;
  if (profile == Profile::Simple) {
    p.world_size = 20.0;
    p.max_objects = 5;
    p.allowed_shapes = {ShapeType::Cube, ShapeType::Cylinder};
    p.rotation_set = {0};
    p.size_max = 20.0;
  } else {
    p.world_size = 200.0;
    p.max_objects = 10;
    p.allowed_shapes.assign(kAllShapes.begin(), kAllShapes.end());
    p.rotation_set = {0, 90, 180, 270};
    p.size_max = 60.0;
  }
  return p;
}

// ---------------------------------------------------------------------------

const std::vector<CameraPose>& pose_table() {
  static const std::vector<CameraPose> table = [] {
    std::vector<CameraPose> poses;
    poses.reserve(kPoseCount);
    for (int e = 0; e < kElevationCount; ++e) {
      for (int a = 0; a < kAzimuthCount; ++a) {
        poses.push_back({e * kAzimuthCount + a, -180.0 + 30.0 * a, -15.0 + 15.0 * e});
      }
    }
    return poses;
  }();
  return table;
}

CameraPose pose_from_id(int pose_id) {
  if (pose_id < 0 || pose_id >= kPoseCount) {
    throw std::out_of_range("pose id " + std::to_string(pose_id) + " outside [0, 60)");
  }
  return pose_table()[static_cast<std::size_t>(pose_id)];
}

std::optional<CameraPose> pose_from_angles(double azimuth, double elevation) {
  for (const auto& pose : pose_table()) {
    if (pose.azimuth == azimuth && pose.elevation == elevation) return pose;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string ValidationResult::to_string() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    if (v.object_index >= 0) out << "objects[" << v.object_index << "].";
    out << v.field << ": " << v.message << "\n";
  }
  return out.str();
}

ValidationResult validate_scene(const SceneDescriptor& scene, const ProfileParams& rules) {
  ValidationResult result;
  auto add = [&](int index, std::string field, std::string message) {
    result.violations.push_back({index, std::move(field), std::move(message)});
  };

  if (scene.profile != rules.name) add(-1, "profile", "profile does not match rules");
  if (scene.world_size != rules.world_size) {
    add(-1, "world_size", "world size does not match profile");
  }
  const int count = static_cast<int>(scene.objects.size());
  if (count < rules.min_objects || count > rules.max_objects) {
    add(-1, "objects", "object count " + std::to_string(count) + " outside [" +
                           std::to_string(rules.min_objects) + ", " +
                           std::to_string(rules.max_objects) + "]");
  }

  const bool rotations_allowed = rules.rotation_set.size() > 1;
  for (int i = 0; i < count; ++i) {
    const ObjectSpec& obj = scene.objects[static_cast<std::size_t>(i)];
    if (!rules.allows(obj.shape)) {
      add(i, "shape", "shape not allowed in " + std::string(profile_name(rules.name)) + " profile");
    }
    for (int k = 0; k < 3; ++k) {
      const double p = obj.position[k];
      if (!std::isfinite(p) || p < 0.0 || p > scene.world_size) {
        add(i, "position", "position outside [0, world_size]");
        break;
      }
    }
    for (int k = 0; k < 2; ++k) {
      const double r = obj.rotation[k];
      const char* field = k == 0 ? "rotation.yaw" : "rotation.pitch";
      if (!std::isfinite(r) || std::fmod(r, 90.0) != 0.0 || r < 0.0 || r > 270.0) {
        add(i, field, "rotation not a multiple of 90 in [0, 270]");
      } else if (!rotations_allowed && r != 0.0) {
        add(i, field, "rotation not allowed in " + std::string(profile_name(rules.name)) + " profile");
      }
    }
    for (int k = 0; k < 3; ++k) {
      const double s = obj.size[k];
      if (!std::isfinite(s) || s <= 0.0 || s > rules.size_max) {
        add(i, "size", "size outside (0, size_max]");
        break;
      }
    }
  }
  return result;
}

ValidationResult validate_scene(const SceneDescriptor& scene) {
  return validate_scene(scene, profile_params(scene.profile));
}

// ---------------------------------------------------------------------------

ParseError::ParseError(const std::string& message, std::optional<std::size_t> byte_offset,
                       std::string path)
    : std::runtime_error(message), byte_offset_(byte_offset), path_(std::move(path)) {}

std::string write_scene_json(const SceneDescriptor& scene) {
  using nlohmann::ordered_json;
  ordered_json root;
  root["world_size"] = scene.world_size;
  root["profile"] = profile_name(scene.profile);
  ordered_json objects = ordered_json::array();
  for (const auto& obj : scene.objects) {
    ordered_json o;
    o["shape"] = shape_name(obj.shape);
    o["position"] = {obj.position.x(), obj.position.y(), obj.position.z()};
    o["rotation"] = {obj.rotation.x(), obj.rotation.y()};
    o["size"] = {obj.size.x(), obj.size.y(), obj.size.z()};
    objects.push_back(std::move(o));
  }
  root["objects"] = std::move(objects);
  return root.dump(2) + "\n";
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what, std::nullopt, path);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path + "." + key, "missing field");
  return *it;
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) schema_error(path, "expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) schema_error(path, "non-finite number");
  return v;
}

template <int N>
Eigen::Matrix<double, N, 1> vector_field(const json& obj, const char* key, const std::string& path) {
  const std::string here = path + "." + key;
  const json& arr = field(obj, key, path);
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(N)) {
    schema_error(here, "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int k = 0; k < N; ++k) out[k] = number(arr[static_cast<std::size_t>(k)], here + "[" + std::to_string(k) + "]");
  return out;
}

}  // namespace

SceneDescriptor read_scene_json(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte, "$");
  }
  if (!root.is_object()) schema_error("$", "expected an object");

  SceneDescriptor scene;
  scene.world_size = number(field(root, "world_size", "$"), "$.world_size");

  const json& profile = field(root, "profile", "$");
  if (!profile.is_string()) schema_error("$.profile", "expected a string");
  auto parsed_profile = profile_from_name(profile.get<std::string>());
  if (!parsed_profile) schema_error("$.profile", "unknown profile \"" + profile.get<std::string>() + "\"");
  scene.profile = *parsed_profile;

  const json& objects = field(root, "objects", "$");
  if (!objects.is_array()) schema_error("$.objects", "expected an array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string path = "$.objects[" + std::to_string(i) + "]";
    const json& o = objects[i];
    if (!o.is_object()) schema_error(path, "expected an object");
    ObjectSpec spec;
    const json& shape = field(o, "shape", path);
    if (!shape.is_string()) schema_error(path + ".shape", "expected a string");
    auto parsed_shape = shape_from_name(shape.get<std::string>());
    if (!parsed_shape) schema_error(path + ".shape", "unknown shape \"" + shape.get<std::string>() + "\"");
    spec.shape = *parsed_shape;
    spec.position = vector_field<3>(o, "position", path);
    spec.rotation = vector_field<2>(o, "rotation", path);
    spec.size = vector_field<3>(o, "size", path);
    scene.objects.push_back(spec);
  }
  return scene;
}

}  // namespace wiresynth
