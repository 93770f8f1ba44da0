#include "wiresynth/cli.hpp"

#include "wiresynth/codec.hpp"
#include "wiresynth/eval.hpp"
#include "wiresynth/export.hpp"
#include "wiresynth/io.hpp"
#include "wiresynth/parallel.hpp"
#include "wiresynth/random.hpp"
#include "wiresynth/render.hpp"
#include "wiresynth/synth.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <ostream>
#include <set>

namespace wiresynth {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string profile;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string in;
  std::string out;
  std::string pred;
  std::string seq;
  std::string scene;
  std::string predictions_out;
  std::vector<std::string> modes;
  std::vector<int> poses;
  int threads = 1;
  int n_bins_pos = 0;
  int n_bins_rot = 0;
  int n_bins_size = 0;
  int image_size = 224;
  double fov = 45.0;
  bool strict = false;
};

int thread_count(const Options& opt) {
  if (const char* env = std::getenv("WIRESYNTH_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1, opt.threads);
}

QuantizationSpec quantization(Profile profile, const Options& opt) {
  QuantizationSpec q = default_quantization(profile);
  if (opt.n_bins_pos) q.n_bins_pos = opt.n_bins_pos;
  if (opt.n_bins_rot) q.n_bins_rot = opt.n_bins_rot;
  if (opt.n_bins_size) q.n_bins_size = opt.n_bins_size;
  check_quantization(q);
  return q;
}

void add_quant_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--n-bins-pos", opt.n_bins_pos, "Position bins (default: 20 simple, 200 complex)")
      ->check(CLI::Range(2, 100000));
  cmd->add_option("--n-bins-rot", opt.n_bins_rot, "Rotation bins (default: 4)")->check(CLI::Range(2, 100000));
  cmd->add_option("--n-bins-size", opt.n_bins_size, "Size bins (default: 20 simple, 60 complex)")
      ->check(CLI::Range(2, 100000));
}

void add_threads_option(CLI::App* cmd, Options& opt) {
  cmd->add_option("--threads", opt.threads, "Worker threads; WIRESYNTH_THREADS overrides")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

std::vector<SceneDescriptor> load_scenes(const fs::path& dir, const DatasetManifest& manifest) {
  std::vector<SceneDescriptor> scenes;
  scenes.reserve(manifest.count());
  for (const auto& path : manifest.scenes) scenes.push_back(read_scene_json(read_file(dir / path)));
  return scenes;
}

// ---------------------------------------------------------------------------

int cmd_gen(const Options& opt, std::ostream& out) {
  const ProfileParams profile = profile_params(*profile_from_name(opt.profile));
  const DatasetManifest manifest =
      synth_dataset(profile, opt.count, opt.seed, opt.out, thread_count(opt));
  out << "gen: wrote " << manifest.count() << " scenes to " << opt.out << "\n";
  return kExitOk;
}

int cmd_render(const Options& opt, std::ostream& out) {
  const fs::path dir = opt.in;
  DatasetManifest manifest = load_manifest(dir);
  const std::vector<SceneDescriptor> scenes = load_scenes(dir, manifest);

  std::vector<RenderMode> modes;
  for (const auto& m : opt.modes) modes.push_back(*mode_from_name(m));
  std::sort(modes.begin(), modes.end());
  modes.erase(std::unique(modes.begin(), modes.end()), modes.end());

  std::vector<int> poses = opt.poses;
  if (poses.empty()) {
    for (int p = 0; p < kPoseCount; ++p) poses.push_back(p);
  }

  RenderConfig config;
  config.width = config.height = opt.image_size;
  config.fov_deg = opt.fov;

  parallel_for(scenes.size() * poses.size(), thread_count(opt), [&](std::size_t task) {
    const std::size_t scene_id = task / poses.size();
    const CameraPose pose = pose_from_id(poses[task % poses.size()]);
    const auto strokes = scene_strokes(scenes[scene_id], pose, config);
    for (RenderMode mode : modes) {
      const auto selected = strokes_for_mode(strokes, mode);
      const fs::path base = dir / "renders" / std::to_string(scene_id) /
                            (std::to_string(pose.pose_id) + "_" + std::string(mode_name(mode)));
      write_file_atomic(fs::path(base).concat(".svg"), write_svg(selected, config));
      write_file_atomic(fs::path(base).concat(".png"), rasterize_png(selected, config));
    }
  });

  std::set<std::string> present(manifest.render_modes.begin(), manifest.render_modes.end());
  for (RenderMode m : modes) present.insert(std::string(mode_name(m)));
  manifest.render_modes.assign(present.begin(), present.end());
  write_file_atomic(dir / "manifest.json", write_manifest_json(manifest));
  out << "render: " << scenes.size() << " scenes x " << poses.size() << " poses x " << modes.size()
      << " modes\n";
  return kExitOk;
}

int cmd_tokenize(const Options& opt, std::ostream& out) {
  const fs::path dir = opt.in;
  const DatasetManifest manifest = load_manifest(dir);
  const std::vector<SceneDescriptor> scenes = load_scenes(dir, manifest);
  const QuantizationSpec quant = quantization(manifest.profile, opt);
  const std::uint64_t seed = opt.seed_set ? opt.seed : manifest.master_seed;

  std::vector<std::string> lines(scenes.size() * kPoseCount);
  parallel_for(scenes.size(), thread_count(opt), [&](std::size_t scene_id) {
    for (const CameraPose& pose : pose_table()) {
      const std::size_t item = scene_id * kPoseCount + static_cast<std::size_t>(pose.pose_id);
      SequenceFile file;
      file.quant = quant;
      file.order_seed = derive_seed(seed, item);
      file.sequence = encode_scene(scenes[scene_id], pose, quant, file.order_seed);
      write_file_atomic(dir / "sequences" / std::to_string(scene_id) / (std::to_string(pose.pose_id) + ".json"),
                        write_sequence_json(file));
      lines[item] = write_prediction_line({scene_id, pose.pose_id, file.sequence.tokens});
    }
  });
  if (!opt.predictions_out.empty()) {
    std::string all;
    for (const auto& l : lines) all += l;
    write_file_atomic(opt.predictions_out, all);
  }
  out << "tokenize: " << lines.size() << " sequences, vocab size " << vocab_size(quant) << "\n";
  return kExitOk;
}

int cmd_detokenize(const Options& opt, std::ostream& out, std::ostream& err) {
  const CodecMode mode = opt.strict ? CodecMode::Strict : CodecMode::Lenient;
  auto report = [&](const DecodeResult& r, const std::string& what) {
    for (const auto& d : r.diagnostics) err << "detokenize: " << what << ": " << d << "\n";
  };
  if (!opt.seq.empty()) {
    const SequenceFile file = read_sequence_json(read_file(opt.seq));
    const DecodeResult r = decode_sequence(file.sequence.tokens, file.quant, mode);
    report(r, opt.seq);
    write_file_atomic(opt.out, write_scene_json(r.scene));
    out << "detokenize: " << r.scene.objects.size() << " objects";
    if (r.pose) out << ", pose " << r.pose->pose_id;
    out << "\n";
    return kExitOk;
  }
  const Profile profile = *profile_from_name(opt.profile.empty() ? "simple" : opt.profile);
  const QuantizationSpec quant = quantization(profile, opt);
  const auto records = read_predictions_jsonl(read_file(opt.pred));
  for (const auto& rec : records) {
    const DecodeResult r = decode_sequence(rec.tokens, quant, mode);
    const std::string name = std::to_string(rec.scene_id) + "_" + std::to_string(rec.pose_id) + ".json";
    report(r, name);
    write_file_atomic(fs::path(opt.out) / name, write_scene_json(r.scene));
  }
  out << "detokenize: " << records.size() << " records\n";
  return kExitOk;
}

int cmd_export(const Options& opt, std::ostream& out) {
  auto export_one = [](const SceneDescriptor& scene, const fs::path& prefix) {
    write_file_atomic(fs::path(prefix).concat(".obj"), export_obj(scene));
    write_file_atomic(fs::path(prefix).concat(".cad.json"), export_cad_json(scene));
  };
  if (!opt.scene.empty()) {
    export_one(read_scene_json(read_file(opt.scene)), opt.out);
    out << "export: wrote " << opt.out << ".obj\n";
    return kExitOk;
  }
  const fs::path dir = opt.in;
  const DatasetManifest manifest = load_manifest(dir);
  const auto scenes = load_scenes(dir, manifest);
  const fs::path target = opt.out.empty() ? dir / "export" : fs::path(opt.out);
  for (std::size_t i = 0; i < scenes.size(); ++i) export_one(scenes[i], target / std::to_string(i));
  out << "export: " << scenes.size() << " scenes to " << target.string() << "\n";
  return kExitOk;
}

int cmd_eval(const Options& opt, std::ostream& out) {
  const fs::path dir = opt.in;
  const DatasetManifest manifest = load_manifest(dir);
  const QuantizationSpec quant = quantization(manifest.profile, opt);
  const auto records = read_predictions_jsonl(read_file(opt.pred));
  const EvalReport report = evaluate_dataset(records, dir, quant);
  if (!opt.out.empty()) write_file_atomic(opt.out, write_report_json(report));
  out << format_report_table(report);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthetic CAD primitive scenes: generation, wireframe rendering, token codec, export and evaluation",
               "wiresynth"};
  app.require_subcommand(1);
  Options opt;
  const std::vector<std::string> profiles = {"simple", "complex"};
  const std::vector<std::string> modes = {"informative", "normal"};

  auto* gen = app.add_subcommand("gen", "Generate scenes and manifest.json");
  gen->add_option("--profile", opt.profile, "Dataset profile")->required()->check(CLI::IsMember(profiles));
  gen->add_option("--count", opt.count, "Number of scenes")->required();
  gen->add_option("--seed", opt.seed, "Master seed")->capture_default_str();
  gen->add_option("--out", opt.out, "Output dataset directory")->required();
  add_threads_option(gen, opt);

  auto* render = app.add_subcommand("render", "Render wireframes for every scene and pose");
  render->add_option("--in", opt.in, "Dataset directory")->required();
  render->add_option("--mode", opt.modes, "informative and/or normal (repeatable)")
      ->required()
      ->check(CLI::IsMember(modes));
  render->add_option("--pose", opt.poses, "Restrict to these pose ids (repeatable; default all 60)")
      ->check(CLI::Range(0, kPoseCount - 1));
  render->add_option("--image-size", opt.image_size, "Square image size in pixels")
      ->check(CLI::Range(16, 4096))
      ->capture_default_str();
  render->add_option("--fov", opt.fov, "Vertical field of view, degrees")
      ->check(CLI::Range(10.0, 120.0))
      ->capture_default_str();
  add_threads_option(render, opt);

  auto* tokenize = app.add_subcommand("tokenize", "Encode every scene/pose as a token sequence");
  tokenize->add_option("--in", opt.in, "Dataset directory")->required();
  tokenize->add_option("--seed", opt.seed, "Object-order seed (default: manifest master seed)");
  tokenize->add_option("--predictions-out", opt.predictions_out,
                       "Also write all sequences as a predictions JSON-lines file");
  add_quant_options(tokenize, opt);
  add_threads_option(tokenize, opt);

  auto* detokenize = app.add_subcommand("detokenize", "Decode token sequences back to scene JSON");
  auto* seq = detokenize->add_option("--seq", opt.seq, "Sequence file (writes one scene to --out)");
  auto* pred = detokenize->add_option("--pred", opt.pred, "Predictions JSON-lines (writes --out/{scene}_{pose}.json)");
  seq->excludes(pred);
  detokenize->add_option("--out", opt.out, "Output file or directory")->required();
  detokenize->add_option("--profile", opt.profile, "Quantization profile for --pred")
      ->check(CLI::IsMember(profiles));
  detokenize->add_flag("--strict", opt.strict, "Fail on malformed sequences instead of repairing");
  add_quant_options(detokenize, opt);

  auto* exp = app.add_subcommand("export", "Write OBJ solids and CAD interchange JSON");
  auto* scene_opt = exp->add_option("--scene", opt.scene, "Single scene JSON (writes --out.obj, --out.cad.json)");
  auto* in_opt = exp->add_option("--in", opt.in, "Dataset directory (writes {out or in/export}/{id}.*)");
  scene_opt->excludes(in_opt);
  exp->add_option("--out", opt.out, "Output prefix or directory");

  auto* eval = app.add_subcommand("eval", "Score predictions against a dataset");
  eval->add_option("--pred", opt.pred, "Predictions JSON-lines")->required();
  eval->add_option("--in", opt.in, "Dataset directory")->required();
  eval->add_option("--out", opt.out, "Write the JSON report here");
  add_quant_options(eval, opt);

  std::string name = "wiresynth";
  try {
    app.parse(argc, argv);
    if (tokenize->parsed()) opt.seed_set = tokenize->count("--seed") > 0;
    if (detokenize->parsed() && opt.seq.empty() && opt.pred.empty()) {
      throw CLI::RequiredError("--seq or --pred");
    }
    if (exp->parsed()) {
      if (opt.scene.empty() && opt.in.empty()) throw CLI::RequiredError("--scene or --in");
      if (!opt.scene.empty() && opt.out.empty()) throw CLI::RequiredError("--out");
    }
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    for (auto* sub : app.get_subcommands()) name = sub->get_name();
    err << name << ": " << e.what() << "\n";
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  name = sub->get_name();
  try {
    if (sub == gen) return cmd_gen(opt, out);
    if (sub == render) return cmd_render(opt, out);
    if (sub == tokenize) return cmd_tokenize(opt, out);
    if (sub == detokenize) return cmd_detokenize(opt, out, err);
    if (sub == exp) return cmd_export(opt, out);
    if (sub == eval) return cmd_eval(opt, out);
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace wiresynth
