#include "dartscore/scoring.hpp"

#include <cmath>

#include "dartscore/errors.hpp"

namespace dartscore {

BoardCalibration calibrate(std::span<const Point, 4> cal, const BoardSpec& spec) {
  BoardCalibration c;
  c.h = estimate_homography(cal, std::span<const Point, 4>(spec.cal_point_targets));
  std::array<Point, 4> mapped;
  Point sum{};
  for (int i = 0; i < 4; ++i) {
    mapped[i] = c.h.apply(cal[i]);
    sum = sum + mapped[i];
  }
  c.center = 0.25 * sum;
  double r = 0.0;
  for (const Point& p : mapped) r += distance(p, c.center);
  c.radius = r / 4.0;
  if (!(c.radius > 0)) throw DegenerateConfiguration("zero calibration radius");
  return c;
}

ScoreToken classify(Point board_point, const BoardCalibration& calib, const BoardSpec& spec) {
  const Point d = board_point - calib.center;
  return classify_polar(std::hypot(d.x, d.y) / calib.radius, clockwise_angle_deg(d), spec);
}

ScoreResult score_darts(const KeypointSet& k, const BoardSpec& spec) {
  ScoreResult out;
  const auto completed = complete_calibration(k);
  if (!completed) {
    out.calibration_failed = true;
    return out;
  }
  std::array<Point, 4> cal;
  for (int i = 0; i < 4; ++i) cal[i] = *completed->cal[i];
  try {
    out.calibration = calibrate(cal, spec);
  } catch (const DegenerateConfiguration&) {
    out.calibration_failed = true;
    return out;
  }
  out.cal_recovered = completed->cal_recovered;
  for (const Point& dart : completed->darts) {
    ScoreToken token = ScoreToken::miss();
    std::optional<Point> pos;
    try {
      pos = out.calibration->to_board(dart);
      token = classify(*pos, *out.calibration, spec);
    } catch (const PointAtInfinity&) {
    }
    out.tokens.push_back(token);
    out.board_positions.push_back(pos);
    out.total += token.value;
  }
  return out;
}

KeypointSet postprocess(const DetectionSet& d, const PostprocessParams& params) {
  DetectionSet filtered{d.image_id, d.input_size,
                        nms(d.boxes, params.iou_threshold, params.conf_threshold)};
  return resolve_keypoints(filtered, params.max_darts);
}

ScoreResult score_detections(const DetectionSet& d, const BoardSpec& spec,
                             const PostprocessParams& params) {
  return score_darts(postprocess(d, params), spec);
}

std::vector<ScoreResult> score_batch(std::span<const DetectionSet> sets, const BoardSpec& spec,
                                     const PostprocessParams& params) {
  std::vector<ScoreResult> out(sets.size());
  const auto n = static_cast<std::ptrdiff_t>(sets.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = score_detections(sets[i], spec, params);
  return out;
}

std::vector<ScoreResult> score_batch_serial(std::span<const DetectionSet> sets,
                                            const BoardSpec& spec,
                                            const PostprocessParams& params) {
  std::vector<ScoreResult> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(score_detections(s, spec, params));
  return out;
}

}  // namespace dartscore
