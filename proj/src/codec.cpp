#include "wiresynth/codec.hpp"

#include "wiresynth/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wiresynth {

int quantize(double x, ValueRange range, int n_bins, CodecMode mode) {
  if (n_bins < 2) throw std::invalid_argument("quantize: n_bins must be >= 2");
  if (!(range.hi > range.lo)) throw std::invalid_argument("quantize: empty range");
  if (!std::isfinite(x)) throw RangeError("quantize: non-finite value");
  if (mode == CodecMode::Strict && (x < range.lo || x > range.hi)) {
    throw RangeError("quantize: " + std::to_string(x) + " outside [" + std::to_string(range.lo) +
                     ", " + std::to_string(range.hi) + "]");
  }
  const double q = (x - range.lo) / (range.hi - range.lo) * (n_bins - 1);
  return static_cast<int>(std::clamp(std::round(q), 0.0, static_cast<double>(n_bins - 1)));
}

double dequantize(int q, ValueRange range, int n_bins) {
  if (n_bins < 2) throw std::invalid_argument("dequantize: n_bins must be >= 2");
  if (q < 0 || q >= n_bins) {
    throw RangeError("dequantize: bin " + std::to_string(q) + " outside [0, " +
                     std::to_string(n_bins) + ")");
  }
  return range.lo + (range.hi - range.lo) * q / (n_bins - 1);
}

QuantizationSpec default_quantization(Profile profile) {
  const ProfileParams params = profile_params(profile);
  QuantizationSpec q;
  q.profile = profile;
  q.world_size = params.world_size;
  q.size_max = params.size_max;
  if (profile == Profile::Simple) {
    q.n_bins_pos = 20;
    q.n_bins_size = 20;
  } else {
    q.n_bins_pos = 200;
    q.n_bins_size = 60;
  }
  q.n_bins_rot = 4;
  return q;
}

void check_quantization(const QuantizationSpec& quant) {
  if (quant.n_bins_pos < 2 || quant.n_bins_rot < 2 || quant.n_bins_size < 2) {
    throw std::invalid_argument("quantization: every bin count must be >= 2");
  }
  if (!(quant.world_size > 0) || !(quant.size_max > 0)) {
    throw std::invalid_argument("quantization: world_size and size_max must be positive");
  }
}

std::string_view family_name(TokenFamily family) {
  switch (family) {
    case TokenFamily::Special: return "special";
    case TokenFamily::Pose: return "pose";
    case TokenFamily::Shape: return "shape";
    case TokenFamily::Position: return "position";
    case TokenFamily::Rotation: return "rotation";
    case TokenFamily::Size: return "size";
    case TokenFamily::Invalid: break;
  }
  return "invalid";
}

Vocabulary::Vocabulary(const QuantizationSpec& quant) {
  check_quantization(quant);
  pose_offset_ = kSpecialTokenCount;
  shape_offset_ = pose_offset_ + kPoseCount;
  position_offset_ = shape_offset_ + kShapeCount;
  rotation_offset_ = position_offset_ + quant.n_bins_pos;
  size_offset_ = rotation_offset_ + quant.n_bins_rot;
  size_ = size_offset_ + quant.n_bins_size;
}

TokenFamily Vocabulary::family(Token t) const {
  if (t < 0 || t >= size_) return TokenFamily::Invalid;
  if (t < pose_offset_) return TokenFamily::Special;
  if (t < shape_offset_) return TokenFamily::Pose;
  if (t < position_offset_) return TokenFamily::Shape;
  if (t < rotation_offset_) return TokenFamily::Position;
  if (t < size_offset_) return TokenFamily::Rotation;
  return TokenFamily::Size;
}

int Vocabulary::local(Token t) const {
  switch (family(t)) {
    case TokenFamily::Special: return t;
    case TokenFamily::Pose: return t - pose_offset_;
    case TokenFamily::Shape: return t - shape_offset_;
    case TokenFamily::Position: return t - position_offset_;
    case TokenFamily::Rotation: return t - rotation_offset_;
    case TokenFamily::Size: return t - size_offset_;
    case TokenFamily::Invalid: break;
  }
  return -1;
}

int vocab_size(const QuantizationSpec& quant) { return Vocabulary(quant).size(); }

// ---------------------------------------------------------------------------

TokenSequence encode_scene(const SceneDescriptor& scene, const CameraPose& pose,
                           const QuantizationSpec& quant, std::uint64_t order_seed,
                           CodecMode mode) {
  const Vocabulary vocab(quant);
  std::vector<std::size_t> order(scene.objects.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Engine engine(order_seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(engine, i)]);
  }

  TokenSequence seq;
  seq.tokens.reserve(3 + kTokensPerObject * order.size());
  seq.tokens.push_back(kBosToken);
  seq.tokens.push_back(vocab.pose(pose_from_id(pose.pose_id).pose_id));
  for (std::size_t index : order) {
    const ObjectSpec& obj = scene.objects[index];
    seq.tokens.push_back(vocab.shape(obj.shape));
    for (int k = 0; k < 3; ++k) {
      seq.tokens.push_back(vocab.position(quantize(obj.position[k], quant.position_range(), quant.n_bins_pos, mode)));
    }
    for (int k = 0; k < 2; ++k) {
      seq.tokens.push_back(vocab.rotation(quantize(obj.rotation[k], quant.rotation_range(), quant.n_bins_rot, mode)));
    }
    for (int k = 0; k < 3; ++k) {
      seq.tokens.push_back(vocab.size_bin(quantize(obj.size[k], quant.size_range(), quant.n_bins_size, mode)));
    }
  }
  seq.tokens.push_back(kEosToken);
  return seq;
}

namespace {

constexpr std::array<TokenFamily, kTokensPerObject> kBlockLayout = {
    TokenFamily::Shape,    TokenFamily::Position, TokenFamily::Position,
    TokenFamily::Position, TokenFamily::Rotation, TokenFamily::Rotation,
    TokenFamily::Size,     TokenFamily::Size,     TokenFamily::Size};

ObjectSpec object_from_block(std::span<const Token> block, const Vocabulary& vocab,
                             const QuantizationSpec& quant) {
  ObjectSpec obj;
  obj.shape = static_cast<ShapeType>(vocab.local(block[0]));
  for (int k = 0; k < 3; ++k) {
    obj.position[k] = dequantize(vocab.local(block[1 + k]), quant.position_range(), quant.n_bins_pos);
  }
  for (int k = 0; k < 2; ++k) {
    obj.rotation[k] = dequantize(vocab.local(block[4 + k]), quant.rotation_range(), quant.n_bins_rot);
  }
  for (int k = 0; k < 3; ++k) {
    obj.size[k] = dequantize(vocab.local(block[6 + k]), quant.size_range(), quant.n_bins_size);
  }
  return obj;
}

std::string describe(Token t, const Vocabulary& vocab) {
  return std::to_string(t) + " (" + std::string(family_name(vocab.family(t))) + ")";
}

DecodeResult decode_strict(std::span<const Token> tokens, const Vocabulary& vocab,
                           const QuantizationSpec& quant, DecodeResult result) {
  const std::size_t n = tokens.size();
  if (n == 0 || tokens[0] != kBosToken) {
    throw DecodeError(0, n == 0 ? "expected BOS, sequence is empty" : "expected BOS, got " + describe(tokens[0], vocab));
  }
  if (n < 2 || vocab.family(tokens[1]) != TokenFamily::Pose) {
    throw DecodeError(1, n < 2 ? "expected pose token, sequence ended" : "expected pose token, got " + describe(tokens[1], vocab));
  }
  result.pose = pose_from_id(vocab.local(tokens[1]));

  std::size_t pos = 2;
  for (;;) {
    if (pos >= n) throw DecodeError(pos, "missing EOS");
    if (tokens[pos] == kEosToken) break;
    for (std::size_t k = 0; k < kBlockLayout.size(); ++k) {
      const std::size_t at = pos + k;
      const std::string expected = std::string(family_name(kBlockLayout[k])) + " token";
      if (at >= n) throw DecodeError(at, "expected " + expected + ", sequence ended in a partial object block");
      if (vocab.family(tokens[at]) != kBlockLayout[k]) {
        throw DecodeError(at, "expected " + expected + ", got " + describe(tokens[at], vocab));
      }
    }
    result.scene.objects.push_back(object_from_block(tokens.subspan(pos, kTokensPerObject), vocab, quant));
    pos += kTokensPerObject;
  }
  for (std::size_t at = pos + 1; at < n; ++at) {
    if (tokens[at] != kPadToken) throw DecodeError(at, "expected PAD after EOS, got " + describe(tokens[at], vocab));
  }
  return result;
}

bool valid_block(std::span<const Token> tokens, std::size_t pos, const Vocabulary& vocab) {
  if (pos + kTokensPerObject > tokens.size()) return false;
  for (std::size_t k = 0; k < kBlockLayout.size(); ++k) {
    if (vocab.family(tokens[pos + k]) != kBlockLayout[k]) return false;
  }
  return true;
}

DecodeResult decode_lenient(std::span<const Token> tokens, const Vocabulary& vocab,
                            const QuantizationSpec& quant, DecodeResult result) {
  const std::size_t n = tokens.size();
  std::size_t pos = 0;
  if (pos < n && tokens[pos] == kBosToken) {
    ++pos;
  } else {
    result.diagnostics.push_back("token 0: missing BOS");
  }
  if (pos < n && vocab.family(tokens[pos]) == TokenFamily::Pose) {
    result.pose = pose_from_id(vocab.local(tokens[pos]));
    ++pos;
  } else {
    result.diagnostics.push_back("token " + std::to_string(pos) + ": missing pose token");
  }

  bool saw_eos = false;
  while (pos < n) {
    if (tokens[pos] == kEosToken) {
      saw_eos = true;
      break;
    }
    if (valid_block(tokens, pos, vocab)) {
      result.scene.objects.push_back(object_from_block(tokens.subspan(pos, kTokensPerObject), vocab, quant));
      pos += kTokensPerObject;
      continue;
    }
    // Resynchronize on the next shape token or EOS.
    std::size_t next = pos + 1;
    while (next < n && tokens[next] != kEosToken && vocab.family(tokens[next]) != TokenFamily::Shape) ++next;
    result.diagnostics.push_back("tokens " + std::to_string(pos) + "-" + std::to_string(next - 1) +
                                 ": malformed object block skipped (starts with " +
                                 describe(tokens[pos], vocab) + ")");
    ++result.skipped_blocks;
    pos = next;
  }
  if (!saw_eos) result.diagnostics.push_back("token " + std::to_string(n) + ": missing EOS");
  return result;
}

}  // namespace

DecodeResult decode_sequence(std::span<const Token> tokens, const QuantizationSpec& quant,
                             CodecMode mode) {
  const Vocabulary vocab(quant);
  DecodeResult result;
  result.scene.world_size = quant.world_size;
  result.scene.profile = quant.profile;
  if (mode == CodecMode::Strict) return decode_strict(tokens, vocab, quant, std::move(result));
  return decode_lenient(tokens, vocab, quant, std::move(result));
}

// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json quant_to_json(const QuantizationSpec& q) {
  ordered_json j;
  j["profile"] = profile_name(q.profile);
  j["world_size"] = q.world_size;
  j["size_max"] = q.size_max;
  j["n_bins_pos"] = q.n_bins_pos;
  j["n_bins_rot"] = q.n_bins_rot;
  j["n_bins_size"] = q.n_bins_size;
  return j;
}

QuantizationSpec quant_from_json(const json& j) {
  QuantizationSpec q;
  auto profile = profile_from_name(j.at("profile").get<std::string>());
  if (!profile) throw ParseError("unknown profile", std::nullopt, "$.quant.profile");
  q.profile = *profile;
  q.world_size = j.at("world_size").get<double>();
  q.size_max = j.at("size_max").get<double>();
  q.n_bins_pos = j.at("n_bins_pos").get<int>();
  q.n_bins_rot = j.at("n_bins_rot").get<int>();
  q.n_bins_size = j.at("n_bins_size").get<int>();
  return q;
}

json parse_json(std::string_view bytes, const std::string& where) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ParseError(where + ": " + e.what(), e.byte, where);
  }
}

}  // namespace

std::string write_sequence_json(const SequenceFile& file) {
  ordered_json j;
  j["tokens"] = file.sequence.tokens;
  j["quant"] = quant_to_json(file.quant);
  j["order_seed"] = file.order_seed;
  return j.dump() + "\n";
}

SequenceFile read_sequence_json(std::string_view bytes) {
  const json j = parse_json(bytes, "$");
  SequenceFile file;
  try {
    file.sequence.tokens = j.at("tokens").get<std::vector<Token>>();
    file.quant = quant_from_json(j.at("quant"));
    file.order_seed = j.at("order_seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("sequence file: ") + e.what(), std::nullopt, "$");
  }
  return file;
}

std::string write_prediction_line(const PredictionRecord& record) {
  ordered_json j;
  j["scene_id"] = record.scene_id;
  j["pose_id"] = record.pose_id;
  j["tokens"] = record.tokens;
  return j.dump() + "\n";
}

std::vector<PredictionRecord> read_predictions_jsonl(std::string_view bytes) {
  std::vector<PredictionRecord> records;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < bytes.size()) {
    std::size_t end = bytes.find('\n', start);
    if (end == std::string_view::npos) end = bytes.size();
    const std::string_view line = bytes.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    const json j = parse_json(line, where);
    PredictionRecord r;
    try {
      r.scene_id = j.at("scene_id").get<std::size_t>();
      r.pose_id = j.at("pose_id").get<int>();
      r.tokens = j.at("tokens").get<std::vector<Token>>();
    } catch (const json::exception& e) {
      throw ParseError(where + ": " + e.what(), std::nullopt, where);
    }
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace wiresynth
