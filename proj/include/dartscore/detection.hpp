#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dartscore/geometry.hpp"

namespace dartscore {

inline constexpr int kCalibrationClasses = 4;
inline constexpr int kDartClass = 4;

// Detector defaults used at inference.
inline constexpr double kDefaultIouThreshold = 0.3;
inline constexpr double kDefaultConfThreshold = 0.25;
inline constexpr int kDefaultMaxDarts = 3;
inline constexpr double kDefaultBoxFraction = 0.025;

// A small square box whose center encodes a keypoint.
struct KeypointBox {
  int class_id = kDartClass;  // 0..3 calibration, 4 dart
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  double confidence = 1.0;

  Point center() const { return {cx, cy}; }
  friend bool operator==(const KeypointBox&, const KeypointBox&) = default;
};

struct DetectionSet {
  std::string image_id;
  int input_size = 800;
  std::vector<KeypointBox> boxes;
};

struct KeypointSet {
  std::array<std::optional<Point>, kCalibrationClasses> cal{};
  std::array<bool, kCalibrationClasses> cal_recovered{};
  std::vector<Point> darts;
  std::vector<double> dart_confidences;

  int present_calibration_count() const;
};

// Throws std::invalid_argument for boxes violating the KeypointBox or
// DetectionSet invariants.
void validate(const KeypointBox& box);
void validate(const DetectionSet& set);

double iou(const KeypointBox& a, const KeypointBox& b);

// Confidence filter followed by greedy per-class suppression. Output is in
// descending confidence, ties broken by input order.
std::vector<KeypointBox> nms(const std::vector<KeypointBox>& boxes,
                             double iou_threshold = kDefaultIouThreshold,
                             double conf_threshold = kDefaultConfThreshold);

// Highest-confidence box per calibration class and the top `max_darts`
// dart boxes, all reduced to their centers.
KeypointSet resolve_keypoints(const DetectionSet& detections,
                              int max_darts = kDefaultMaxDarts);

// Fills a single missing calibration point by parallelogram completion over
// the cyclic order 0-1-2-3. Returns nullopt when two or more are missing.
std::optional<KeypointSet> complete_calibration(const KeypointSet& k);

struct ClassedPoint {
  Point p;
  int class_id = kDartClass;
};

std::vector<KeypointBox> keypoints_to_boxes(const std::vector<ClassedPoint>& points,
                                            double box_fraction, int input_size);
std::vector<ClassedPoint> boxes_to_keypoints(const std::vector<KeypointBox>& boxes);

}  // namespace dartscore
