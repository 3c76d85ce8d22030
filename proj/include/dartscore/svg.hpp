#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dartscore/board.hpp"
#include "dartscore/scoring.hpp"
#include "dartscore/sim.hpp"

namespace dartscore::svg {

struct OverlayPoint {
  Point p;
  std::string label;
  bool recovered = false;  // drawn as a hollow diamond
};

struct Overlay {
  std::string title;
  int width = 800;
  int height = 800;
  std::optional<BoardCalibration> calibration;  // board rings drawn when set
  std::vector<OverlayPoint> cal_points;
  std::vector<OverlayPoint> darts;
  int outline_samples = 360;
};

// Standalone SVG document. The outer-double ring polyline carries
// id="outline".
std::string render_overlay(const Overlay& overlay, const BoardSpec& spec);

// PCS line chart, one polyline per varying parameter, error bars at +-1.96 SE.
std::string sweep_chart(const std::vector<SweepRow>& rows);

std::string escape_xml(const std::string& text);

}  // namespace dartscore::svg
