#pragma once

#include "wiresynth/scene.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wiresynth {

using Token = std::int32_t;

inline constexpr Token kPadToken = 0;
inline constexpr Token kBosToken = 1;
inline constexpr Token kEosToken = 2;
inline constexpr int kSpecialTokenCount = 3;
inline constexpr int kTokensPerObject = 9;

enum class CodecMode { Strict, Lenient };

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
};

class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// round((x - lo) / (hi - lo) * (n_bins - 1)), halves away from zero,
/// clamped to [0, n_bins - 1]. Strict mode throws RangeError for x outside
/// [lo, hi]; lenient mode clamps.
int quantize(double x, ValueRange range, int n_bins, CodecMode mode = CodecMode::Strict);

/// lo + q * (hi - lo) / (n_bins - 1). Throws RangeError for q outside [0, n_bins).
double dequantize(int q, ValueRange range, int n_bins);

/// Bin counts and value ranges per parameter family. Axes of one family share
/// bins.
struct QuantizationSpec {
  Profile profile = Profile::Simple;
  double world_size = 20.0;
  double size_max = 20.0;
  int n_bins_pos = 20;
  int n_bins_rot = 4;
  int n_bins_size = 20;

  ValueRange position_range() const { return {0.0, world_size}; }
  ValueRange rotation_range() const { return {0.0, 270.0}; }
  ValueRange size_range() const { return {0.0, size_max}; }

  bool operator==(const QuantizationSpec& other) const = default;
};

/// simple: (20, 4, 20) over world 20; complex: (200, 4, 60) over world 200.
QuantizationSpec default_quantization(Profile profile);

/// Throws std::invalid_argument when a bin count is below 2 or a range is
/// empty. Rotation is exact only with 4 bins, the default for both profiles.
void check_quantization(const QuantizationSpec& quant);

enum class TokenFamily { Special, Pose, Shape, Position, Rotation, Size, Invalid };

std::string_view family_name(TokenFamily family);

/// [PAD, BOS, EOS | 60 poses | 7 shapes | position bins | rotation bins | size bins]
class Vocabulary {
 public:
  explicit Vocabulary(const QuantizationSpec& quant);

  int size() const { return size_; }
  Token pose(int pose_id) const { return pose_offset_ + pose_id; }
  Token shape(ShapeType s) const { return shape_offset_ + static_cast<int>(s); }
  Token position(int bin) const { return position_offset_ + bin; }
  Token rotation(int bin) const { return rotation_offset_ + bin; }
  Token size_bin(int bin) const { return size_offset_ + bin; }

  TokenFamily family(Token t) const;
  /// Index of t within its family range.
  int local(Token t) const;

 private:
  int pose_offset_, shape_offset_, position_offset_, rotation_offset_, size_offset_, size_;
};

int vocab_size(const QuantizationSpec& quant);

struct TokenSequence {
  std::vector<Token> tokens;

  bool operator==(const TokenSequence& other) const = default;
};

/// [BOS, pose, 9 tokens per object in a random order drawn from order_seed, EOS]
TokenSequence encode_scene(const SceneDescriptor& scene, const CameraPose& pose,
                           const QuantizationSpec& quant, std::uint64_t order_seed,
                           CodecMode mode = CodecMode::Strict);

class DecodeError : public std::runtime_error {
 public:
  DecodeError(std::size_t position, const std::string& message)
      : std::runtime_error("token " + std::to_string(position) + ": " + message),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct DecodeResult {
  std::optional<CameraPose> pose;
  SceneDescriptor scene;
  std::vector<std::string> diagnostics;  // one entry per repair, lenient mode only
  int skipped_blocks = 0;
};

/// Strict mode throws DecodeError on any slot violation, missing EOS, or a
/// partial object block. Lenient mode never throws: it drops malformed object
/// blocks, stops at the first EOS, and records each repair.
DecodeResult decode_sequence(std::span<const Token> tokens, const QuantizationSpec& quant,
                             CodecMode mode);

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

struct SequenceFile {
  TokenSequence sequence;
  QuantizationSpec quant;
  std::uint64_t order_seed = 0;
};

std::string write_sequence_json(const SequenceFile& file);
SequenceFile read_sequence_json(std::string_view bytes);

struct PredictionRecord {
  std::size_t scene_id = 0;
  int pose_id = 0;
  std::vector<Token> tokens;
};

std::string write_prediction_line(const PredictionRecord& record);
/// One record per non-empty line. Throws ParseError naming the line.
std::vector<PredictionRecord> read_predictions_jsonl(std::string_view bytes);

}  // namespace wiresynth
