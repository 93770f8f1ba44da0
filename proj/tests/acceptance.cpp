// Property-based acceptance run. One PASS/FAIL line per criterion.

#include "support.hpp"
#include "wiresynth/codec.hpp"
#include "wiresynth/eval.hpp"
#include "wiresynth/io.hpp"
#include "wiresynth/random.hpp"
#include "wiresynth/render.hpp"
#include "wiresynth/synth.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <sys/wait.h>

using namespace wiresynth;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  char timing[96];
  std::snprintf(timing, sizeof(timing), "%.2f s (limit %.0f s)", secs, budget_s);
  if (secs > budget_s) {
    o.ok = false;
    o.detail += (o.detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  if (!o.ok) ++failures;
  std::printf("%s  %-32s %s  %s\n", o.ok ? "PASS" : "FAIL", name, timing, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome codec_round_trip() {
  Outcome o;
  double worst_excess = -1e9;
  for (Profile profile : {Profile::Simple, Profile::Complex}) {
    const ProfileParams params = profile_params(profile);
    const QuantizationSpec q = default_quantization(profile);
    const double half_pos = 0.5 * q.world_size / (q.n_bins_pos - 1);
    const double half_size = 0.5 * q.size_max / (q.n_bins_size - 1);
    for (std::uint64_t s = 0; s < 10000; ++s) {
      const SceneDescriptor scene = synth_scene(params, scene_seed(1000 + static_cast<int>(profile), s));
      const CameraPose pose = pose_from_id(static_cast<int>(s % 60));
      const auto seq = encode_scene(scene, pose, q, s);
      const DecodeResult r = decode_sequence(seq.tokens, q, CodecMode::Strict);
      if (!(r.pose == pose) || r.scene.objects.size() != scene.objects.size()) {
        return {false, "pose or object count mismatch at seed " + std::to_string(s)};
      }
      // Pair each decoded object with an unused source object within tolerance.
      std::vector<bool> used(scene.objects.size(), false);
      for (const ObjectSpec& d : r.scene.objects) {
        bool found = false;
        for (std::size_t i = 0; i < scene.objects.size() && !found; ++i) {
          const ObjectSpec& g = scene.objects[i];
          if (used[i] || g.shape != d.shape || g.rotation != d.rotation) continue;
          const double ep = (g.position - d.position).cwiseAbs().maxCoeff();
          const double es = (g.size - d.size).cwiseAbs().maxCoeff();
          if (ep <= half_pos + 1e-9 && es <= half_size + 1e-9) {
            used[i] = true;
            found = true;
            worst_excess = std::max({worst_excess, ep - half_pos, es - half_size});
          }
        }
        if (!found) return {false, "object not recovered at seed " + std::to_string(s)};
      }
    }
  }
  o.detail = fmt("2 x 10^4 scenes, worst margin to half-step %.2e", worst_excess);
  return o;
}

// --- 2, 3 ------------------------------------------------------------------

Outcome vocab_sizes() {
  const int c = vocab_size(default_quantization(Profile::Complex));
  const int s = vocab_size(default_quantization(Profile::Simple));
  return {c == 334 && s == 114, fmt("complex %.0f, simple %.0f", c, s)};
}

Outcome camera_table() {
  const auto& table = pose_table();
  std::set<std::pair<int, int>> grid, seen;
  for (int el = -15; el <= 45; el += 15) {
    for (int az = -180; az < 180; az += 30) grid.insert({az, el});
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].pose_id != static_cast<int>(i)) return {false, "pose ids not dense"};
    seen.insert({static_cast<int>(table[i].azimuth), static_cast<int>(table[i].elevation)});
  }
  const bool ok = table.size() == 60 && seen.size() == 60 && seen == grid;
  return {ok, fmt("%.0f poses, %.0f distinct, grid match %.0f", static_cast<double>(table.size()),
                  static_cast<double>(seen.size()), seen == grid)};
}

// --- 4 ---------------------------------------------------------------------

Outcome profile_conformance() {
  {
    const ProfileParams p = profile_params(Profile::Simple);
    for (std::uint64_t s = 0; s < 10000; ++s) {
      const SceneDescriptor scene = synth_scene(p, scene_seed(11, s));
      const std::size_t n = scene.objects.size();
      if (n < 1 || n > 5) return {false, "simple object count out of range"};
      for (const ObjectSpec& o : scene.objects) {
        if (o.shape != ShapeType::Cube && o.shape != ShapeType::Cylinder) return {false, "simple shape"};
        if (o.rotation != Eigen::Vector2d::Zero()) return {false, "simple rotation"};
      }
      if (!validate_scene(scene, p).ok()) return {false, "simple validation: " + validate_scene(scene, p).to_string()};
    }
  }
  const ProfileParams p = profile_params(Profile::Complex);
  std::set<ShapeType> shapes;
  std::set<std::pair<int, int>> rotations;
  std::size_t lo = 100, hi = 0;
  for (std::uint64_t s = 0; s < 10000; ++s) {
    const SceneDescriptor scene = synth_scene(p, scene_seed(12, s));
    lo = std::min(lo, scene.objects.size());
    hi = std::max(hi, scene.objects.size());
    for (const ObjectSpec& o : scene.objects) {
      shapes.insert(o.shape);
      rotations.insert({static_cast<int>(o.rotation.x()), static_cast<int>(o.rotation.y())});
    }
    if (!validate_scene(scene, p).ok()) return {false, "complex validation: " + validate_scene(scene, p).to_string()};
  }
  const bool ok = lo >= 1 && hi <= 10 && shapes.size() == 7 && rotations.size() == 16;
  return {ok, fmt("complex counts [%.0f, %.0f], %.0f shapes", static_cast<double>(lo), static_cast<double>(hi),
                  static_cast<double>(shapes.size())) +
                  ", " + std::to_string(rotations.size()) + " rotation combos"};
}

// --- 5 ---------------------------------------------------------------------

Outcome hlr_oracle() {
  const RenderConfig config;
  Engine engine(2024);
  int agree = 0, total = 0, near_transition = 0, far_disagreements = 0;
  for (int k = 0; k < 50; ++k) {
    const Profile profile = k % 2 == 0 ? Profile::Simple : Profile::Complex;
    SceneDescriptor scene = synth_scene(profile_params(profile), scene_seed(77, static_cast<std::uint64_t>(k)));
    if (scene.objects.size() > 3) scene.objects.resize(3);
    std::vector<PosedMesh> meshes;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) meshes.push_back(instantiate(scene.objects[i], static_cast<int>(i)));
    const double eps = geometry_epsilon(scene.world_size);
    const double step = config.step_for(scene.world_size);
    const Camera cam = place_camera(pose_from_id(static_cast<int>(uniform_index(engine, 60))), scene.world_size, config);

    std::vector<Segment3> segments;
    for (const PosedMesh& m : meshes) {
      for (const Segment3& s : silhouette_edges(m, cam)) segments.push_back(s);
      for (const Edge& e : m.edges()) {
        if (e.kind == EdgeKind::Sharp) segments.push_back({m.vertex(e.a), m.vertex(e.b)});
      }
    }
    for (std::size_t i = 0; i < meshes.size(); ++i) {
      for (std::size_t j = i + 1; j < meshes.size(); ++j) {
        for (const Segment3& s : intersection_curves(meshes[i], meshes[j], eps)) segments.push_back(s);
      }
    }
    const auto spans = hidden_line_split(segments, meshes, cam, step, eps);

    for (int n = 0; n < 200; ++n) {
      const std::size_t si = uniform_index(engine, segments.size());
      const Segment3& seg = segments[si];
      const double t = uniform_closed(engine);
      const Eigen::Vector3d point = seg.at(t);
      Visibility mine = Visibility::Visible;
      for (const VisibilitySpan& sp : spans) {
        if (sp.source == si && t >= sp.t0 && t <= sp.t1) {
          mine = sp.visibility;
          break;
        }
      }
      const bool truth = test::oracle_hidden(point, meshes, cam.eye, eps);
      ++total;
      if (truth == (mine == Visibility::Hidden)) {
        ++agree;
        continue;
      }
      // The oracle must change state within step of this point.
      const double len = seg.length();
      bool transition = false;
      for (int q = -20; q <= 20 && !transition; ++q) {
        const double u = t + (len > 0 ? step * q / 20.0 / len : 0.0);
        if (u < 0 || u > 1) continue;
        transition = test::oracle_hidden(seg.at(u), meshes, cam.eye, eps) != truth;
      }
      (transition ? near_transition : far_disagreements)++;
    }
  }
  const double rate = static_cast<double>(agree) / total;
  return {rate >= 0.99 && far_disagreements == 0,
          fmt("agreement %.4f over %.0f points", rate, total) +
              ", disagreements near transitions " + std::to_string(near_transition) +
              ", elsewhere " + std::to_string(far_disagreements)};
}

// --- 6 ---------------------------------------------------------------------

std::multiset<std::string> polylines(const std::string& svg, const std::string& cls) {
  std::multiset<std::string> out;
  const std::string key = "<polyline class=\"" + cls + "\" points=\"";
  for (std::size_t at = svg.find(key); at != std::string::npos; at = svg.find(key, at + 1)) {
    const std::size_t b = at + key.size();
    out.insert(svg.substr(b, svg.find('"', b) - b));
  }
  return out;
}

Outcome render_modes() {
  Engine engine(31);
  for (int k = 0; k < 100; ++k) {
    const Profile profile = k % 4 == 3 ? Profile::Complex : Profile::Simple;
    SceneDescriptor scene = synth_scene(profile_params(profile), scene_seed(55, static_cast<std::uint64_t>(k)));
    if (scene.objects.size() > 5) scene.objects.resize(5);
    const CameraPose pose = pose_from_id(static_cast<int>(uniform_index(engine, 60)));
    RenderConfig informative;
    informative.mode = RenderMode::Informative;
    RenderConfig normal;
    normal.mode = RenderMode::Normal;
    const RenderOutput a = render_scene(scene, pose, informative);
    const RenderOutput b = render_scene(scene, pose, informative);
    const RenderOutput n1 = render_scene(scene, pose, normal);
    const RenderOutput n2 = render_scene(scene, pose, normal);
    if (a.svg != b.svg || n1.svg != n2.svg || a.png != b.png || n1.png != n2.png) {
      return {false, "non-deterministic output for pair " + std::to_string(k)};
    }
    if (polylines(n1.svg, "visible") != polylines(a.svg, "visible")) {
      return {false, "normal strokes differ from informative visible strokes for pair " + std::to_string(k)};
    }
    if (!polylines(n1.svg, "hidden").empty() || n1.svg.find("axis-") != std::string::npos) {
      return {false, "normal mode contains non-visible strokes"};
    }
  }
  return {true, "100 scene/pose pairs"};
}

// --- 7 ---------------------------------------------------------------------

Outcome matching_oracle() {
  const ProfileParams p = profile_params(Profile::Complex);
  Engine engine(7);
  for (int k = 0; k < 1000; ++k) {
    SceneDescriptor pred = synth_scene(p, engine()), gt = synth_scene(p, engine());
    pred.objects.resize(std::min<std::size_t>(pred.objects.size(), 1 + uniform_index(engine, 4)));
    gt.objects.resize(std::min<std::size_t>(gt.objects.size(), 1 + uniform_index(engine, 4)));
    Eigen::MatrixXd cost(pred.objects.size(), gt.objects.size());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        cost(i, j) = (pred.objects[static_cast<std::size_t>(i)].position -
                      gt.objects[static_cast<std::size_t>(j)].position).norm();
      }
    }
    const Matching m = match_objects(pred, gt);
    const double brute = test::brute_force_assignment(cost);
    if (std::abs(m.total_cost - brute) > 1e-9 * (1.0 + brute)) {
      return {false, fmt("pair %.0f: hungarian %.9f vs brute force %.9f", k, m.total_cost, brute)};
    }
  }
  return {true, "10^3 pairs"};
}

// --- 8 ---------------------------------------------------------------------

Outcome metrics_identity() {
  for (Profile profile : {Profile::Simple, Profile::Complex}) {
    const ProfileParams params = profile_params(profile);
    const QuantizationSpec q = default_quantization(profile);
    std::vector<SceneDescriptor> gt;
    std::vector<PredictionRecord> preds, permuted;
    for (std::uint64_t s = 0; s < 500; ++s) {
      gt.push_back(synth_scene(params, scene_seed(88, s)));
      const int pose = static_cast<int>(s % 60);
      preds.push_back({s, pose, encode_scene(gt.back(), pose_from_id(pose), q, s).tokens});
      permuted.push_back({s, pose, encode_scene(gt.back(), pose_from_id(pose), q, s + 1000003).tokens});
    }
    const EvalReport r = evaluate(preds, gt, q);
    const EvalReport p = evaluate(permuted, gt, q);
    const double half_pos = 0.5 * q.world_size / (q.n_bins_pos - 1);
    const double half_size = 0.5 * q.size_max / (q.n_bins_size - 1);
    const std::string name(profile_name(profile));
    if (r.pose_accuracy != 1.0 || r.f1 != 1.0) return {false, name + ": accuracy or F1 below 1"};
    if (r.position_error.maxCoeff() > half_pos || r.size_error.maxCoeff() > half_size ||
        r.rotation_error.maxCoeff() != 0.0) {
      return {false, name + ": errors exceed half a step"};
    }
    const bool same = p.pose_accuracy == r.pose_accuracy && p.f1 == r.f1 &&
                      (p.position_error - r.position_error).cwiseAbs().maxCoeff() < 1e-12 &&
                      (p.size_error - r.size_error).cwiseAbs().maxCoeff() < 1e-12 &&
                      (p.rotation_error - r.rotation_error).cwiseAbs().maxCoeff() < 1e-12 &&
                      p.counts.true_positives == r.counts.true_positives;
    if (!same) return {false, name + ": permuting object order changed a metric"};
  }
  return {true, "500 scenes per profile, permutation invariant"};
}

// --- 9 ---------------------------------------------------------------------

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_file(e.path());
  }
  return out;
}

Outcome cli_determinism() {
  const std::string bin = WIRESYNTH_CLI_PATH;
  const fs::path base = fs::temp_directory_path() / "wiresynth_acceptance_cli";
  fs::remove_all(base);
  std::vector<std::map<std::string, std::string>> trees;
  for (int threads : {1, 4}) {
    const fs::path dir = base / std::to_string(threads);
    const std::string t = " --threads " + std::to_string(threads);
    const std::string d = dir.string();
    for (const std::string& cmd :
         {bin + " gen --profile simple --count 10 --seed 42 --out " + d + t,
          bin + " render --in " + d + " --mode informative --mode normal" + t,
          bin + " tokenize --in " + d + t}) {
      const int status = std::system((cmd + " >/dev/null").c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "command failed: " + cmd};
    }
    trees.push_back(tree(dir));
  }
  fs::remove_all(base);
  if (trees[0] != trees[1]) return {false, "trees differ between 1 and 4 threads"};
  return {true, std::to_string(trees[0].size()) + " files identical at 1 and 4 threads"};
}

}  // namespace

int main() {
  criterion("codec round trip", 10, codec_round_trip);
  criterion("vocabulary sizing", 1, vocab_sizes);
  criterion("camera table", 1, camera_table);
  criterion("profile conformance", 30, profile_conformance);
  criterion("HLR oracle equivalence", 300, hlr_oracle);
  criterion("render determinism + mode subset", 120, render_modes);
  criterion("matching oracle", 10, matching_oracle);
  criterion("metrics identity", 10, metrics_identity);
  criterion("end-to-end CLI determinism", 300, cli_determinism);
  std::printf("%s: %d failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
