#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dartscore/board.hpp"
#include "dartscore/geometry.hpp"
#include "dartscore/scoring.hpp"

namespace dartscore {

inline constexpr double kDefaultMatchThreshold = 0.05;  // normalized board units

enum class ErrorClass {
  kNone,
  kCalMissing,
  kFalseNegativeDart,
  kFalsePositiveDart,
  kSectorMisclassified,
  kMixed,
};
inline constexpr int kErrorClassCount = 6;

std::string to_string(ErrorClass e);

struct TotalPair {
  int predicted = 0;
  int label = 0;
};

// Percent Correct Score: share of samples whose predicted total equals the
// labeled total, in percent. Throws EmptyDataset for an empty input.
double compute_pcs(std::span<const TotalPair> samples);

struct DartMatching {
  std::vector<std::pair<int, int>> pairs;  // (pred index, label index)
  std::vector<int> unmatched_pred;         // false positives
  std::vector<int> unmatched_label;        // false negatives
};

// Greedy closest-pair-first matching; pairs farther than `threshold` stay
// unmatched. Ties are broken by (pred index, label index).
DartMatching match_darts(std::span<const Point> pred, std::span<const Point> label,
                         double threshold = kDefaultMatchThreshold);

// One image ready for error analysis.
struct MatchedSample {
  int predicted_total = 0;
  int label_total = 0;
  bool calibration_failed = false;
  std::array<bool, 4> cal_recovered{};
  DartMatching matching;
  std::vector<ScoreToken> pred_tokens;
  std::vector<ScoreToken> label_tokens;
};

// NONE for correct samples; otherwise CAL_MISSING, then one-sided count
// mismatches, then token mismatches, then MIXED.
ErrorClass classify_errors(const MatchedSample& s);

struct SampleEval {
  std::string image_id;
  int predicted_total = 0;
  int label_total = 0;
  bool correct = false;
  ErrorClass error_class = ErrorClass::kNone;
  int n_pred = 0;
  int n_label = 0;
  int n_matched = 0;
  std::vector<double> localization_errors_px;
};

struct EvalReport {
  int n_samples = 0;
  double pcs = 0.0;
  std::array<int, kErrorClassCount> error_histogram{};  // NONE slot stays 0
  int n_matched_darts = 0;
  double mean_localization_error_px = 0.0;
  double median_localization_error_px = 0.0;
  std::vector<SampleEval> samples;
};

// Ground truth for one image, expressed in the same pixel frame as the
// detections.
struct LabelSample {
  std::string image_id;
  std::array<std::optional<Point>, 4> cal{};
  std::vector<Point> darts;
  std::optional<std::vector<ScoreToken>> tokens;  // overrides geometric scoring
};

struct EvalParams {
  double match_threshold = kDefaultMatchThreshold;
};

// Scores the label geometry (unless tokens are given), matches predicted
// darts to labeled darts in the board plane of the label calibration (the
// prediction's calibration when the label's is unusable) and classifies.
SampleEval evaluate_sample(const LabelSample& label, const KeypointSet& pred_keypoints,
                           const ScoreResult& pred, const BoardSpec& spec,
                           const EvalParams& params = {});

// Deterministic reduction over per-sample results, in input order.
EvalReport summarize(std::vector<SampleEval> samples);

}  // namespace dartscore
