#include <doctest.h>

#include "support.hpp"
#include "wiresynth/export.hpp"
#include "wiresynth/geometry.hpp"
#include "wiresynth/synth.hpp"

#include <sstream>

using namespace wiresynth;

namespace {

struct ObjCounts {
  int v = 0, f = 0, g = 0;
  std::vector<std::string> groups;
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
};

ObjCounts parse_obj(const std::string& text) {
  ObjCounts c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Eigen::Vector3d p;
      ls >> p.x() >> p.y() >> p.z();
      c.vertices.push_back(p);
      ++c.v;
    } else if (tag == "f") {
      std::array<int, 3> f{};
      ls >> f[0] >> f[1] >> f[2];
      c.faces.push_back(f);
      ++c.f;
    } else if (tag == "g") {
      std::string name;
      ls >> name;
      c.groups.push_back(name);
      ++c.g;
    }
  }
  return c;
}

}  // namespace

TEST_CASE("a single cube") {
  const std::string obj = export_obj(test::cube_scene(1));
  const ObjCounts c = parse_obj(obj);
  CHECK(c.v == 8);
  CHECK(c.f == 12);
  CHECK(c.g == 1);
  CHECK(c.groups.at(0) == "0_cube");
  CHECK(obj.rfind("# wiresynth scene export\n", 0) == 0);
  for (const auto& p : c.vertices) CHECK((p.array() - 10).abs().maxCoeff() == doctest::Approx(1));
}

TEST_CASE("empty scene writes only the header") {
  const ObjCounts c = parse_obj(export_obj(SceneDescriptor{}));
  CHECK(c.v == 0);
  CHECK(c.f == 0);
  CHECK(c.g == 0);
}

TEST_CASE("groups, global indices and re-import") {
  SceneDescriptor scene = test::cube_scene(1);
  ObjectSpec cyl;
  cyl.shape = ShapeType::Cylinder;
  cyl.position = {4, 5, 6};
  cyl.size = {2, 3, 4};
  scene.objects.push_back(cyl);

  const ObjCounts c = parse_obj(export_obj(scene));
  CHECK(c.groups == std::vector<std::string>{"0_cube", "1_cylinder"});
  CHECK(c.v == 8 + 48);
  CHECK(c.f == 12 + 92);
  for (const auto& f : c.faces) {
    for (int i : f) {
      CHECK(i >= 1);
      CHECK(i <= c.v);
    }
  }

  // Vertices and faces reproduce the posed meshes.
  int offset = 0, face = 0;
  for (std::size_t o = 0; o < scene.objects.size(); ++o) {
    const PosedMesh mesh = instantiate(scene.objects[o]);
    for (Eigen::Index i = 0; i < mesh.vertices.rows(); ++i) {
      CHECK((c.vertices[static_cast<std::size_t>(offset + i)] - mesh.vertex(static_cast<int>(i))).norm() < 1e-6);
    }
    for (Eigen::Index t = 0; t < mesh.triangles().rows(); ++t, ++face) {
      for (int k = 0; k < 3; ++k) CHECK(c.faces[static_cast<std::size_t>(face)][static_cast<std::size_t>(k)] == offset + mesh.triangles()(t, k) + 1);
    }
    offset += static_cast<int>(mesh.vertices.rows());
  }
}

TEST_CASE("all shapes and rotations export closed meshes") {
  const SceneDescriptor scene = synth_scene(profile_params(Profile::Complex), 11);
  const ObjCounts c = parse_obj(export_obj(scene));
  CHECK(c.g == static_cast<int>(scene.objects.size()));
  TriangleMatrix tris(c.f, 3);
  for (int i = 0; i < c.f; ++i) {
    for (int k = 0; k < 3; ++k) tris(i, k) = c.faces[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] - 1;
  }
  CHECK(is_watertight(tris));
}

TEST_CASE("CAD interchange JSON") {
  const SceneDescriptor scene = synth_scene(profile_params(Profile::Complex), 4);
  const std::string cad = export_cad_json(scene);
  CHECK(cad == write_scene_json(scene));
  CHECK(read_scene_json(cad) == scene);
  CHECK(cad.find("\"world_size\": 200.0") != std::string::npos);
  CHECK(export_cad_json(SceneDescriptor{}).find("\"objects\": []") != std::string::npos);
}
