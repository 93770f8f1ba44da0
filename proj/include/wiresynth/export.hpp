#pragma once

#include "wiresynth/scene.hpp"

#include <string>

namespace wiresynth {

/// ASCII OBJ with one group "{index}_{shape}" per object, vertices in world
/// units and triangles only. Face indices are global and 1-based.
std::string export_obj(const SceneDescriptor& scene);

/// Scene interchange JSON for downstream CAD scripts; the canonical scene
/// descriptor bytes.
std::string export_cad_json(const SceneDescriptor& scene);

}  // namespace wiresynth
