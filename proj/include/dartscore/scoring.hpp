#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "dartscore/board.hpp"
#include "dartscore/detection.hpp"
#include "dartscore/geometry.hpp"

namespace dartscore {

struct BoardCalibration {
  Homography h;  // image -> board plane
  Point center;
  double radius = 1.0;

  // Board-plane position of an image point. Throws PointAtInfinity.
  Point to_board(Point image_point) const { return h.apply(image_point); }
};

struct ScoreResult {
  std::vector<ScoreToken> tokens;
  int total = 0;
  bool calibration_failed = false;

  // Board-plane dart positions; nullopt for a dart mapped past the horizon.
  std::vector<std::optional<Point>> board_positions;
  std::optional<BoardCalibration> calibration;
  std::array<bool, kCalibrationClasses> cal_recovered{};
};

// Throws DegenerateConfiguration for a degenerate calibration quadrilateral.
BoardCalibration calibrate(std::span<const Point, 4> cal, const BoardSpec& spec);

// Classifies a board-plane point relative to a fitted calibration.
ScoreToken classify(Point board_point, const BoardCalibration& calib, const BoardSpec& spec);

// Recovers at most one missing calibration point; with two or more missing
// (or a degenerate quadrilateral) the result is calibration_failed, total 0.
ScoreResult score_darts(const KeypointSet& k, const BoardSpec& spec);

struct PostprocessParams {
  double iou_threshold = kDefaultIouThreshold;
  double conf_threshold = kDefaultConfThreshold;
  int max_darts = kDefaultMaxDarts;
};

// nms -> resolve_keypoints, returning the keypoints fed to score_darts.
KeypointSet postprocess(const DetectionSet& d, const PostprocessParams& params);

ScoreResult score_detections(const DetectionSet& d, const BoardSpec& spec,
                             const PostprocessParams& params = {});

// Batch scoring over independent images: OpenMP kernel and serial reference.
std::vector<ScoreResult> score_batch(std::span<const DetectionSet> sets, const BoardSpec& spec,
                                     const PostprocessParams& params = {});
std::vector<ScoreResult> score_batch_serial(std::span<const DetectionSet> sets,
                                            const BoardSpec& spec,
                                            const PostprocessParams& params = {});

}  // namespace dartscore
