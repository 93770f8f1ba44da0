#include "wiresynth/synth.hpp"

#include "wiresynth/io.hpp"
#include "wiresynth/parallel.hpp"
#include "wiresynth/random.hpp"

#include <json.hpp>

namespace wiresynth {

namespace fs = std::filesystem;

SceneDescriptor synth_scene(const ProfileParams& profile, std::uint64_t seed) {
  Engine engine(seed);
  SceneDescriptor scene;
  scene.world_size = profile.world_size;
  scene.profile = profile.name;

  const auto span = static_cast<std::uint64_t>(profile.max_objects - profile.min_objects + 1);
  const int count = profile.min_objects + static_cast<int>(uniform_index(engine, span));
  scene.objects.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    ObjectSpec obj;
    obj.shape = profile.allowed_shapes[uniform_index(engine, profile.allowed_shapes.size())];
    for (int k = 0; k < 3; ++k) obj.position[k] = uniform_range(engine, 0.0, profile.world_size);
    for (int k = 0; k < 2; ++k) {
      obj.rotation[k] = profile.rotation_set[uniform_index(engine, profile.rotation_set.size())];
    }
    for (int k = 0; k < 3; ++k) obj.size[k] = uniform_range(engine, profile.size_min, profile.size_max);
    scene.objects.push_back(obj);
  }
  return scene;
}

std::uint64_t scene_seed(std::uint64_t master_seed, std::uint64_t scene_id) {
  return derive_seed(master_seed, scene_id);
}

std::string write_manifest_json(const DatasetManifest& manifest) {
  nlohmann::ordered_json root;
  root["profile"] = profile_name(manifest.profile);
  root["count"] = manifest.scenes.size();
  root["master_seed"] = manifest.master_seed;
  root["scenes"] = manifest.scenes;
  root["render_modes"] = manifest.render_modes;
  return root.dump(2) + "\n";
}

DatasetManifest read_manifest_json(std::string_view bytes) {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), e.byte, "$");
  }
  DatasetManifest m;
  try {
    auto profile = profile_from_name(root.at("profile").get<std::string>());
    if (!profile) throw ParseError("unknown profile", std::nullopt, "$.profile");
    m.profile = *profile;
    m.master_seed = root.at("master_seed").get<std::uint64_t>();
    m.scenes = root.at("scenes").get<std::vector<std::string>>();
    if (root.contains("render_modes")) {
      m.render_modes = root.at("render_modes").get<std::vector<std::string>>();
    }
    if (root.at("count").get<std::size_t>() != m.scenes.size()) {
      throw ParseError("count does not match scene list", std::nullopt, "$.count");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what(), std::nullopt, "$");
  }
  return m;
}

DatasetManifest load_manifest(const fs::path& dataset_dir) {
  return read_manifest_json(read_file(dataset_dir / "manifest.json"));
}

DatasetManifest synth_dataset(const ProfileParams& profile, std::size_t n_scenes,
                              std::uint64_t master_seed, const fs::path& output_dir,
                              int threads) {
  DatasetManifest manifest;
  manifest.profile = profile.name;
  manifest.master_seed = master_seed;
  manifest.scenes.reserve(n_scenes);
  for (std::size_t id = 0; id < n_scenes; ++id) {
    manifest.scenes.push_back("scenes/" + std::to_string(id) + ".json");
  }

  parallel_for(n_scenes, threads, [&](std::size_t id) {
    const SceneDescriptor scene = synth_scene(profile, scene_seed(master_seed, id));
    write_file_atomic(output_dir / manifest.scenes[id], write_scene_json(scene));
  });
  write_file_atomic(output_dir / "manifest.json", write_manifest_json(manifest));
  return manifest;
}

}  // namespace wiresynth
