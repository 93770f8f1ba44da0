#pragma once

#include "wiresynth/scene.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wiresynth {

/// Draws one scene. Object count, shape, each position axis, yaw, pitch and
/// each size axis are independent uniform draws over the profile's ranges.
SceneDescriptor synth_scene(const ProfileParams& profile, std::uint64_t seed);

std::uint64_t scene_seed(std::uint64_t master_seed, std::uint64_t scene_id);

struct DatasetManifest {
  Profile profile = Profile::Simple;
  std::uint64_t master_seed = 0;
  std::vector<std::string> scenes;        // relative paths, index = scene id
  std::vector<std::string> render_modes;  // sorted, filled in by rendering

  std::size_t count() const { return scenes.size(); }
};

std::string write_manifest_json(const DatasetManifest& manifest);
DatasetManifest read_manifest_json(std::string_view bytes);
DatasetManifest load_manifest(const std::filesystem::path& dataset_dir);

/// Writes scenes/{id}.json and manifest.json under `output_dir`. `threads`
/// only affects speed; the output tree is identical for any value.
DatasetManifest synth_dataset(const ProfileParams& profile, std::size_t n_scenes,
                              std::uint64_t master_seed,
                              const std::filesystem::path& output_dir, int threads = 1);

}  // namespace wiresynth
