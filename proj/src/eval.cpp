#include "dartscore/eval.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "dartscore/errors.hpp"

namespace dartscore {

std::string to_string(ErrorClass e) {
  switch (e) {
    case ErrorClass::kNone: return "NONE";
    case ErrorClass::kCalMissing: return "CAL_MISSING";
    case ErrorClass::kFalseNegativeDart: return "FALSE_NEGATIVE_DART";
    case ErrorClass::kFalsePositiveDart: return "FALSE_POSITIVE_DART";
    case ErrorClass::kSectorMisclassified: return "SECTOR_MISCLASSIFIED";
    case ErrorClass::kMixed: return "MIXED";
  }
  return "MIXED";
}

double compute_pcs(std::span<const TotalPair> samples) {
  if (samples.empty()) throw EmptyDataset("PCS needs at least one sample");
  const auto correct = std::count_if(samples.begin(), samples.end(),
                                     [](const TotalPair& s) { return s.predicted == s.label; });
  return 100.0 * static_cast<double>(correct) / static_cast<double>(samples.size());
}

DartMatching match_darts(std::span<const Point> pred, std::span<const Point> label,
                         double threshold) {
  if (!(threshold > 0)) throw std::invalid_argument("match threshold must be positive");
  std::vector<std::tuple<double, int, int>> candidates;
  for (int i = 0; i < static_cast<int>(pred.size()); ++i) {
    for (int j = 0; j < static_cast<int>(label.size()); ++j) {
      const double d = distance(pred[i], label[j]);
      if (d <= threshold) candidates.emplace_back(d, i, j);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<bool> pred_used(pred.size()), label_used(label.size());
  DartMatching m;
  for (const auto& [d, i, j] : candidates) {
    if (pred_used[i] || label_used[j]) continue;
    pred_used[i] = label_used[j] = true;
    m.pairs.emplace_back(i, j);
  }
  for (int i = 0; i < static_cast<int>(pred.size()); ++i) {
    if (!pred_used[i]) m.unmatched_pred.push_back(i);
  }
  for (int j = 0; j < static_cast<int>(label.size()); ++j) {
    if (!label_used[j]) m.unmatched_label.push_back(j);
  }
  return m;
}

ErrorClass classify_errors(const MatchedSample& s) {
  if (s.predicted_total == s.label_total) return ErrorClass::kNone;
  const int recovered = static_cast<int>(
      std::count(s.cal_recovered.begin(), s.cal_recovered.end(), true));
  if (s.calibration_failed || recovered > 1) return ErrorClass::kCalMissing;

  bool tokens_agree = true;
  for (const auto& [i, j] : s.matching.pairs) {
    if (s.pred_tokens.at(i) != s.label_tokens.at(j)) tokens_agree = false;
  }
  const bool fp = !s.matching.unmatched_pred.empty();
  const bool fn = !s.matching.unmatched_label.empty();
  if (tokens_agree && fn && !fp) return ErrorClass::kFalseNegativeDart;
  if (tokens_agree && fp && !fn) return ErrorClass::kFalsePositiveDart;
  if (!tokens_agree && !fp && !fn) return ErrorClass::kSectorMisclassified;
  return ErrorClass::kMixed;
}

SampleEval evaluate_sample(const LabelSample& label, const KeypointSet& pred_keypoints,
                           const ScoreResult& pred, const BoardSpec& spec,
                           const EvalParams& params) {
  KeypointSet label_kp;
  label_kp.cal = label.cal;
  label_kp.darts = label.darts;
  const ScoreResult label_score = score_darts(label_kp, spec);

  MatchedSample ms;
  ms.predicted_total = pred.total;
  ms.calibration_failed = pred.calibration_failed;
  ms.cal_recovered = pred.cal_recovered;
  ms.pred_tokens = pred.tokens;
  if (label.tokens) {
    ms.label_tokens = *label.tokens;
    ms.label_total = 0;
    for (const auto& t : *label.tokens) ms.label_total += t.value;
  } else {
    ms.label_tokens = label_score.tokens;
    ms.label_total = label_score.total;
  }
  // Pad so every label dart has a token even when the label calibration failed.
  ms.label_tokens.resize(label.darts.size(), ScoreToken::miss());
  ms.pred_tokens.resize(pred_keypoints.darts.size(), ScoreToken::miss());

  const std::optional<BoardCalibration>& frame =
      label_score.calibration ? label_score.calibration : pred.calibration;

  // Board-plane positions, remembering original indices.
  std::vector<Point> pred_board, label_board;
  std::vector<int> pred_index, label_index;
  if (frame) {
    auto project = [&](const std::vector<Point>& pts, std::vector<Point>& out,
                       std::vector<int>& idx) {
      for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
        try {
          out.push_back(frame->to_board(pts[i]));
          idx.push_back(i);
        } catch (const PointAtInfinity&) {
        }
      }
    };
    project(pred_keypoints.darts, pred_board, pred_index);
    project(label.darts, label_board, label_index);
  }
  const DartMatching local = match_darts(pred_board, label_board, params.match_threshold);
  std::vector<bool> pred_matched(pred_keypoints.darts.size()), label_matched(label.darts.size());
  for (const auto& [i, j] : local.pairs) {
    ms.matching.pairs.emplace_back(pred_index[i], label_index[j]);
    pred_matched[pred_index[i]] = label_matched[label_index[j]] = true;
  }
  for (int i = 0; i < static_cast<int>(pred_matched.size()); ++i) {
    if (!pred_matched[i]) ms.matching.unmatched_pred.push_back(i);
  }
  for (int j = 0; j < static_cast<int>(label_matched.size()); ++j) {
    if (!label_matched[j]) ms.matching.unmatched_label.push_back(j);
  }

  SampleEval out;
  out.image_id = label.image_id;
  out.predicted_total = ms.predicted_total;
  out.label_total = ms.label_total;
  out.correct = ms.predicted_total == ms.label_total;
  out.error_class = classify_errors(ms);
  out.n_pred = static_cast<int>(pred_keypoints.darts.size());
  out.n_label = static_cast<int>(label.darts.size());
  out.n_matched = static_cast<int>(ms.matching.pairs.size());
  for (const auto& [i, j] : ms.matching.pairs) {
    out.localization_errors_px.push_back(distance(pred_keypoints.darts[i], label.darts[j]));
  }
  return out;
}

EvalReport summarize(std::vector<SampleEval> samples) {
  EvalReport r;
  r.n_samples = static_cast<int>(samples.size());
  std::vector<TotalPair> totals;
  std::vector<double> errors;
  for (const auto& s : samples) {
    totals.push_back({s.predicted_total, s.label_total});
    if (!s.correct) ++r.error_histogram[static_cast<int>(s.error_class)];
    errors.insert(errors.end(), s.localization_errors_px.begin(), s.localization_errors_px.end());
  }
  r.pcs = compute_pcs(totals);
  r.n_matched_darts = static_cast<int>(errors.size());
  if (!errors.empty()) {
    r.mean_localization_error_px =
        std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
    std::sort(errors.begin(), errors.end());
    const std::size_t n = errors.size();
    r.median_localization_error_px =
        n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  }
  r.samples = std::move(samples);
  return r;
}

}  // namespace dartscore
