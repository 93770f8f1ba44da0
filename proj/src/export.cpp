#include "wiresynth/export.hpp"

#include "wiresynth/geometry.hpp"

#include <cstdio>

namespace wiresynth {

std::string export_obj(const SceneDescriptor& scene) {
  std::string out = "# wiresynth scene export\n";
  out += "# objects " + std::to_string(scene.objects.size()) + "\n";
  char buf[128];
  Eigen::Index base = 1;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const PosedMesh mesh = instantiate(scene.objects[i], static_cast<int>(i));
    out += "g " + std::to_string(i) + "_" + std::string(shape_name(mesh.shape)) + "\n";
    for (Eigen::Index v = 0; v < mesh.vertices.rows(); ++v) {
      std::snprintf(buf, sizeof(buf), "v %.9f %.9f %.9f\n", mesh.vertices(v, 0), mesh.vertices(v, 1),
                    mesh.vertices(v, 2));
      out += buf;
    }
    const TriangleMatrix& tris = mesh.triangles();
    for (Eigen::Index t = 0; t < tris.rows(); ++t) {
      std::snprintf(buf, sizeof(buf), "f %ld %ld %ld\n", static_cast<long>(base + tris(t, 0)),
                    static_cast<long>(base + tris(t, 1)), static_cast<long>(base + tris(t, 2)));
      out += buf;
    }
    base += mesh.vertices.rows();
  }
  return out;
}

std::string export_cad_json(const SceneDescriptor& scene) { return write_scene_json(scene); }

}  // namespace wiresynth
