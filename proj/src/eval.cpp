#include "wiresynth/eval.hpp"

#include "wiresynth/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace wiresynth {

double hungarian(const Eigen::MatrixXd& cost, std::vector<int>& row_to_col) {
  const auto n = static_cast<int>(cost.rows());
  const auto m = static_cast<int>(cost.cols());
  if (n > m) throw std::invalid_argument("hungarian: more rows than columns");
  row_to_col.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return 0.0;

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[ju];
        if (cur < minv[ju]) {
          minv[ju] = cur;
          way[ju] = j0;
        }
        if (minv[ju] < delta) {
          delta = minv[ju];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) {
          u[static_cast<std::size_t>(p[ju])] += delta;
          v[ju] -= delta;
        } else {
          minv[ju] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  double total = 0.0;
  for (int j = 1; j <= m; ++j) {
    const int i = p[static_cast<std::size_t>(j)];
    if (i == 0) continue;
    row_to_col[static_cast<std::size_t>(i - 1)] = j - 1;
    total += cost(i - 1, j - 1);
  }
  return total;
}

namespace {

// Optimal cost of matching min(|rows|, |cols|) pairs within the sub-matrix.
double optimal_cost(const Eigen::MatrixXd& cost, const std::vector<int>& rows,
                    const std::vector<int>& cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  const bool transpose = rows.size() > cols.size();
  const auto& r = transpose ? cols : rows;
  const auto& c = transpose ? rows : cols;
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          transpose ? cost(c[j], r[i]) : cost(r[i], c[j]);
    }
  }
  std::vector<int> assignment;
  return hungarian(sub, assignment);
}

}  // namespace

namespace {

// Object indices sorted by (shape, position, rotation, size), then index.
// Ties broken in this order do not depend on how either list is arranged.
std::vector<int> canonical_order(const SceneDescriptor& scene) {
  auto key = [&](int i) {
    const ObjectSpec& o = scene.objects[static_cast<std::size_t>(i)];
    return std::tuple(static_cast<int>(o.shape), o.position.x(), o.position.y(), o.position.z(),
                      o.rotation.x(), o.rotation.y(), o.size.x(), o.size.y(), o.size.z(), i);
  };
  std::vector<int> order(scene.objects.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  return order;
}

}  // namespace

Matching match_objects(const SceneDescriptor& pred, const SceneDescriptor& gt) {
  const auto n = static_cast<int>(pred.objects.size());
  const auto m = static_cast<int>(gt.objects.size());
  Eigen::MatrixXd cost(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      cost(i, j) = (pred.objects[static_cast<std::size_t>(i)].position -
                    gt.objects[static_cast<std::size_t>(j)].position).norm();
    }
  }

  const std::vector<int> rows = canonical_order(pred), cols = canonical_order(gt);
  const double best = optimal_cost(cost, rows, cols);
  const double tol = 1e-9 * (1.0 + best);

  // Fix pred rows in canonical order, each to the first gt column (or
  // "unmatched", tried last) that still admits an optimal completion.
  Matching out;
  double fixed = 0.0;
  std::vector<int> free_cols = cols;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int i = rows[r];
    const std::vector<int> rest(rows.begin() + static_cast<std::ptrdiff_t>(r) + 1, rows.end());
    bool assigned = false;
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
      std::vector<int> others = free_cols;
      others.erase(others.begin() + static_cast<std::ptrdiff_t>(k));
      const double c = cost(i, free_cols[k]);
      if (fixed + c + optimal_cost(cost, rest, others) <= best + tol) {
        out.pairs.emplace_back(i, free_cols[k]);
        fixed += c;
        free_cols = std::move(others);
        assigned = true;
        break;
      }
    }
    if (!assigned) out.unmatched_pred.push_back(i);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  std::sort(out.unmatched_pred.begin(), out.unmatched_pred.end());
  std::sort(free_cols.begin(), free_cols.end());
  out.unmatched_gt = free_cols;
  out.total_cost = fixed;
  return out;
}

// ---------------------------------------------------------------------------

double angular_difference(double a_deg, double b_deg) {
  double d = std::fmod(std::abs(a_deg - b_deg), 360.0);
  return d > 180.0 ? 360.0 - d : d;
}

double SceneScore::f1() const {
  const int denom = 2 * true_positives + false_positives + false_negatives;
  return denom == 0 ? 1.0 : 2.0 * true_positives / denom;
}

Eigen::Vector3d SceneScore::position_error() const {
  return matched ? Eigen::Vector3d(position_error_sum / matched) : Eigen::Vector3d::Zero();
}

Eigen::Vector2d SceneScore::rotation_error() const {
  return matched ? Eigen::Vector2d(rotation_error_sum / matched) : Eigen::Vector2d::Zero();
}

Eigen::Vector3d SceneScore::size_error() const {
  return matched ? Eigen::Vector3d(size_error_sum / matched) : Eigen::Vector3d::Zero();
}

SceneScore& SceneScore::operator+=(const SceneScore& other) {
  true_positives += other.true_positives;
  false_positives += other.false_positives;
  false_negatives += other.false_negatives;
  matched += other.matched;
  position_error_sum += other.position_error_sum;
  rotation_error_sum += other.rotation_error_sum;
  size_error_sum += other.size_error_sum;
  return *this;
}

SceneScore score_pair(const SceneDescriptor& pred, const SceneDescriptor& gt, const Matching& matching) {
  SceneScore s;
  s.false_positives = static_cast<int>(matching.unmatched_pred.size());
  s.false_negatives = static_cast<int>(matching.unmatched_gt.size());
  for (const auto& [pi, gi] : matching.pairs) {
    const ObjectSpec& p = pred.objects[static_cast<std::size_t>(pi)];
    const ObjectSpec& g = gt.objects[static_cast<std::size_t>(gi)];
    if (p.shape == g.shape) {
      ++s.true_positives;
    } else {
      ++s.false_positives;
      ++s.false_negatives;
    }
    ++s.matched;
    s.position_error_sum += (p.position - g.position).cwiseAbs();
    s.size_error_sum += (p.size - g.size).cwiseAbs();
    for (int k = 0; k < 2; ++k) s.rotation_error_sum[k] += angular_difference(p.rotation[k], g.rotation[k]);
  }
  return s;
}

// ---------------------------------------------------------------------------

EvalReport evaluate(std::span<const PredictionRecord> predictions,
                    std::span<const SceneDescriptor> ground_truth, const QuantizationSpec& quant) {
  EvalReport report;
  report.world_size = quant.world_size;
  report.size_max = quant.size_max;
  SceneScore total;
  std::size_t pose_hits = 0;
  std::set<std::size_t> scenes;
  for (std::size_t r = 0; r < predictions.size(); ++r) {
    const PredictionRecord& rec = predictions[r];
    if (rec.scene_id >= ground_truth.size() || rec.pose_id < 0 || rec.pose_id >= kPoseCount) {
      const std::string where = "record " + std::to_string(r);
      throw ParseError(where + ": no ground truth for scene_id " + std::to_string(rec.scene_id) +
                           ", pose_id " + std::to_string(rec.pose_id),
                       std::nullopt, where);
    }
    const SceneDescriptor& gt = ground_truth[rec.scene_id];
    const DecodeResult decoded = decode_sequence(rec.tokens, quant, CodecMode::Lenient);
    if (decoded.pose && decoded.pose->pose_id == rec.pose_id) ++pose_hits;
    total += score_pair(decoded.scene, gt, match_objects(decoded.scene, gt));
    scenes.insert(rec.scene_id);
    report.counts.gt_objects += gt.objects.size();
    report.counts.pred_objects += decoded.scene.objects.size();
    report.counts.skipped_malformed += static_cast<std::size_t>(decoded.skipped_blocks);
  }
  report.counts.records = predictions.size();
  report.counts.scenes = scenes.size();
  report.counts.matched = static_cast<std::size_t>(total.matched);
  report.counts.true_positives = total.true_positives;
  report.counts.false_positives = total.false_positives;
  report.counts.false_negatives = total.false_negatives;
  report.pose_accuracy = predictions.empty() ? 0.0 : static_cast<double>(pose_hits) / predictions.size();
  report.f1 = total.f1();
  report.position_error = total.position_error();
  report.rotation_error = total.rotation_error();
  report.size_error = total.size_error();
  return report;
}

EvalReport evaluate_dataset(std::span<const PredictionRecord> predictions,
                            const std::filesystem::path& dataset_dir, const QuantizationSpec& quant) {
  const DatasetManifest manifest = load_manifest(dataset_dir);
  std::vector<SceneDescriptor> scenes;
  scenes.reserve(manifest.count());
  for (const std::string& path : manifest.scenes) {
    scenes.push_back(read_scene_json(read_file(dataset_dir / path)));
  }
  return evaluate(predictions, scenes, quant);
}

std::string write_report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["pose_accuracy"] = report.pose_accuracy;
  j["f1"] = report.f1;
  j["position_error"] = {report.position_error.x(), report.position_error.y(), report.position_error.z()};
  j["rotation_error"] = {report.rotation_error.x(), report.rotation_error.y()};
  j["size_error"] = {report.size_error.x(), report.size_error.y(), report.size_error.z()};
  const EvalCounts& c = report.counts;
  j["counts"] = {{"records", c.records},
                 {"scenes", c.scenes},
                 {"gt_objects", c.gt_objects},
                 {"pred_objects", c.pred_objects},
                 {"matched", c.matched},
                 {"skipped_malformed", c.skipped_malformed},
                 {"true_positives", c.true_positives},
                 {"false_positives", c.false_positives},
                 {"false_negatives", c.false_negatives}};
  return j.dump(2) + "\n";
}

namespace {

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

template <typename Vec>
std::string tuple(const Vec& v) {
  std::string out = "(";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) out += ", ";
    out += fmt2(v[k]);
  }
  return out + ")";
}

}  // namespace

std::string format_report_table(const EvalReport& report) {
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"Camera Pose Estimation (Acc)", fmt2(report.pose_accuracy)},
      {"Object Classification (F1-score)", fmt2(report.f1)},
      {"Position error (world size = " + fmt_g(report.world_size) + ")", tuple(report.position_error)},
      {"Rotation error (360 deg)", tuple(report.rotation_error)},
      {"Size error (max = " + fmt_g(report.size_max) + ")", tuple(report.size_error)},
  };
  std::size_t width = 0;
  for (const auto& [name, value] : rows) width = std::max(width, name.size());
  std::string out;
  const std::string rule = "+" + std::string(width + 2, '-') + "+" + std::string(24, '-') + "+\n";
  out += rule;
  for (const auto& [name, value] : rows) {
    out += "| " + name + std::string(width - name.size(), ' ') + " | " + value +
           std::string(value.size() < 22 ? 22 - value.size() : 0, ' ') + " |\n";
  }
  out += rule;
  return out;
}

}  // namespace wiresynth
