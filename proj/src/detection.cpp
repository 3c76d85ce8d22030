#include "dartscore/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dartscore {

int KeypointSet::present_calibration_count() const {
  return static_cast<int>(std::count_if(cal.begin(), cal.end(),
                                        [](const auto& p) { return p.has_value(); }));
}

void validate(const KeypointBox& b) {
  if (b.class_id < 0 || b.class_id > kDartClass) {
    throw std::invalid_argument("class_id must be in 0..4");
  }
  if (!(b.w > 0 && b.h > 0)) throw std::invalid_argument("box size must be positive");
  if (!(b.confidence >= 0.0 && b.confidence <= 1.0)) {
    throw std::invalid_argument("confidence must be in [0, 1]");
  }
  if (!std::isfinite(b.cx) || !std::isfinite(b.cy)) {
    throw std::invalid_argument("box center must be finite");
  }
}

void validate(const DetectionSet& d) {
  if (d.input_size <= 0) throw std::invalid_argument("input_size must be positive");
  for (const auto& b : d.boxes) {
    validate(b);
    if (b.cx < 0 || b.cy < 0 || b.cx > d.input_size || b.cy > d.input_size) {
      throw std::invalid_argument("box center outside [0, input_size]");
    }
  }
}

double iou(const KeypointBox& a, const KeypointBox& b) {
  const double ix = std::min(a.cx + a.w / 2, b.cx + b.w / 2) -
                    std::max(a.cx - a.w / 2, b.cx - b.w / 2);
  const double iy = std::min(a.cy + a.h / 2, b.cy + b.h / 2) -
                    std::max(a.cy - a.h / 2, b.cy - b.h / 2);
  if (ix <= 0 || iy <= 0) return 0.0;
  const double inter = ix * iy;
  return inter / (a.w * a.h + b.w * b.h - inter);
}

namespace {

// Indices sorted by descending confidence; stable so ties keep input order.
std::vector<std::size_t> by_confidence(const std::vector<KeypointBox>& boxes) {
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return boxes[a].confidence > boxes[b].confidence;
  });
  return order;
}

}  // namespace

std::vector<KeypointBox> nms(const std::vector<KeypointBox>& boxes,
                             double iou_threshold, double conf_threshold) {
  std::vector<KeypointBox> kept;
  std::array<std::vector<std::size_t>, kDartClass + 1> kept_by_class;
  for (std::size_t i : by_confidence(boxes)) {
    const KeypointBox& b = boxes[i];
    if (b.confidence < conf_threshold) continue;
    auto& same = kept_by_class.at(b.class_id);
    const bool overlaps = std::any_of(same.begin(), same.end(), [&](std::size_t k) {
      return iou(kept[k], b) > iou_threshold;
    });
    if (overlaps) continue;
    same.push_back(kept.size());
    kept.push_back(b);
  }
  return kept;
}

KeypointSet resolve_keypoints(const DetectionSet& d, int max_darts) {
  KeypointSet out;
  std::array<double, kCalibrationClasses> best{};
  for (std::size_t i : by_confidence(d.boxes)) {
    const KeypointBox& b = d.boxes[i];
    if (b.class_id < kCalibrationClasses) {
      if (!out.cal[b.class_id] || b.confidence > best[b.class_id]) {
        out.cal[b.class_id] = b.center();
        best[b.class_id] = b.confidence;
      }
    } else if (b.class_id == kDartClass &&
               static_cast<int>(out.darts.size()) < max_darts) {
      out.darts.push_back(b.center());
      out.dart_confidences.push_back(b.confidence);
    }
  }
  return out;
}

std::optional<KeypointSet> complete_calibration(const KeypointSet& k) {
  const int present = k.present_calibration_count();
  if (present == kCalibrationClasses) return k;
  if (present < kCalibrationClasses - 1) return std::nullopt;
  int missing = 0;
  while (k.cal[missing]) ++missing;
  const Point prev = *k.cal[(missing + 3) % 4];
  const Point next = *k.cal[(missing + 1) % 4];
  const Point opposite = *k.cal[(missing + 2) % 4];
  KeypointSet out = k;
  out.cal[missing] = prev + next - opposite;
  out.cal_recovered[missing] = true;
  return out;
}

std::vector<KeypointBox> keypoints_to_boxes(const std::vector<ClassedPoint>& points,
                                            double box_fraction, int input_size) {
  if (!(box_fraction > 0 && box_fraction <= 1)) {
    throw std::invalid_argument("box_fraction must be in (0, 1]");
  }
  const double side = box_fraction * input_size;
  std::vector<KeypointBox> out;
  out.reserve(points.size());
  for (const auto& cp : points) out.push_back({cp.class_id, cp.p.x, cp.p.y, side, side, 1.0});
  return out;
}

std::vector<ClassedPoint> boxes_to_keypoints(const std::vector<KeypointBox>& boxes) {
  std::vector<ClassedPoint> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) out.push_back({b.center(), b.class_id});
  return out;
}

}  // namespace dartscore
