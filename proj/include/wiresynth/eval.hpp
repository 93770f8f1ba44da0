#pragma once

#include "wiresynth/codec.hpp"
#include "wiresynth/scene.hpp"
#include "wiresynth/synth.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wiresynth {

/// Minimum-cost assignment of every row to a distinct column (rows <= cols).
/// Returns the total cost; `row_to_col[r]` receives the chosen column.
double hungarian(const Eigen::MatrixXd& cost, std::vector<int>& row_to_col);

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // (pred index, gt index), ascending pred
  std::vector<int> unmatched_pred;
  std::vector<int> unmatched_gt;
  double total_cost = 0.0;
};

/// Shape-agnostic minimum total Euclidean center distance matching of
/// min(#pred, #gt) pairs. Ties between optimal assignments are broken
/// lexicographically over objects sorted by their parameters, so the chosen
/// pairing does not depend on list order.
Matching match_objects(const SceneDescriptor& pred, const SceneDescriptor& gt);

/// Per-scene metric contributions. Error sums are over matched pairs.
struct SceneScore {
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
  int matched = 0;
  Eigen::Vector3d position_error_sum = Eigen::Vector3d::Zero();
  Eigen::Vector2d rotation_error_sum = Eigen::Vector2d::Zero();
  Eigen::Vector3d size_error_sum = Eigen::Vector3d::Zero();

  double f1() const;
  Eigen::Vector3d position_error() const;
  Eigen::Vector2d rotation_error() const;
  Eigen::Vector3d size_error() const;

  SceneScore& operator+=(const SceneScore& other);
};

/// Smallest absolute difference between two angles, modulo 360.
double angular_difference(double a_deg, double b_deg);

SceneScore score_pair(const SceneDescriptor& pred, const SceneDescriptor& gt, const Matching& matching);

struct EvalCounts {
  std::size_t records = 0;
  std::size_t scenes = 0;
  std::size_t gt_objects = 0;
  std::size_t pred_objects = 0;
  std::size_t matched = 0;
  std::size_t skipped_malformed = 0;
  int true_positives = 0;
  int false_positives = 0;
  int false_negatives = 0;
};

struct EvalReport {
  double pose_accuracy = 0.0;
  double f1 = 0.0;
  Eigen::Vector3d position_error = Eigen::Vector3d::Zero();
  Eigen::Vector2d rotation_error = Eigen::Vector2d::Zero();
  Eigen::Vector3d size_error = Eigen::Vector3d::Zero();
  EvalCounts counts;
  double world_size = 20.0;
  double size_max = 20.0;
};

/// Scores prediction records against ground-truth scenes (indexed by scene
/// id). Records are decoded leniently; TP/FP/FN are pooled across records and
/// errors averaged over all matched pairs.
EvalReport evaluate(std::span<const PredictionRecord> predictions,
                    std::span<const SceneDescriptor> ground_truth, const QuantizationSpec& quant);

/// Loads ground truth named by the dataset manifest, then `evaluate`.
/// Throws ParseError naming the record when it references a missing scene or pose.
EvalReport evaluate_dataset(std::span<const PredictionRecord> predictions,
                            const std::filesystem::path& dataset_dir, const QuantizationSpec& quant);

std::string write_report_json(const EvalReport& report);

/// Fixed-width table with the metric rows of the evaluation tables.
std::string format_report_table(const EvalReport& report);

}  // namespace wiresynth
