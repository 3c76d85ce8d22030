#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "dartscore/geometry.hpp"

namespace dartscore {

inline constexpr int kSectors = 20;
inline constexpr double kSectorWidthDeg = 360.0 / kSectors;

// Physical dimensions in millimeters; the input to make_board_spec().
struct BoardDimensions {
  double r_double_bull_mm = 6.35;
  double r_bull_mm = 15.9;
  double r_treble_inner_mm = 99.4;
  double r_treble_outer_mm = 107.4;
  double r_double_inner_mm = 162.0;
  double r_double_outer_mm = 170.0;
  std::array<int, kSectors> sector_sequence{20, 1,  18, 4, 13, 6,  10, 15, 2,  17,
                                            3,  19, 7,  16, 8, 11, 14, 9,  12, 5};
  // Clockwise-from-up angles of the four calibration points, class order.
  std::array<double, 4> cal_angles_deg{-9.0, 81.0, 171.0, 261.0};
};

// Canonical board in the normalized board plane: origin at the center,
// outer-double radius 1, y pointing down ("up" is -y).
struct BoardSpec {
  double r_double_bull = 0.0;
  double r_bull = 0.0;
  double r_treble_inner = 0.0;
  double r_treble_outer = 0.0;
  double r_double_inner = 0.0;
  double r_double_outer = 1.0;
  std::array<int, kSectors> sector_sequence{};
  std::array<Point, 4> cal_point_targets{};
  std::array<double, 4> cal_angles_deg{};  // kept for serialization
  double outer_radius_mm = 170.0;          // normalization constant
};

// Normalizes radii by r_double_outer_mm. Throws std::invalid_argument when the
// result violates the BoardSpec invariants.
BoardSpec make_board_spec(const BoardDimensions& dims);

BoardSpec default_board_spec();

// Throws std::invalid_argument describing the first violated invariant.
void validate(const BoardSpec& spec);

// Unit vector at `theta_cw` degrees clockwise from up (y-down coordinates).
Point direction_cw(double theta_cw_deg);

// atan2(dx, -dy) in degrees, range (-180, 180].
double clockwise_angle_deg(Point offset);

// Boundaries are half-open: a boundary angle belongs to the clockwise-next
// sector.
int sector_at_angle(double theta_cw_deg, const BoardSpec& spec);

enum class Ring { kMiss, kSingle, kDouble, kTreble, kBull, kDoubleBull };

struct ScoreToken {
  Ring ring = Ring::kMiss;
  int sector = 0;  // 1..20 for single/double/treble, 0 otherwise
  int value = 0;

  static ScoreToken miss() { return {}; }
  static ScoreToken bull() { return {Ring::kBull, 0, 25}; }
  static ScoreToken double_bull() { return {Ring::kDoubleBull, 0, 50}; }
  static ScoreToken sector_hit(Ring ring, int sector);

  friend bool operator==(const ScoreToken&, const ScoreToken&) = default;
};

// "0", "B", "DB", "S1".."S20", "D1".."D20", "T1".."T20".
std::string to_string(const ScoreToken& token);
std::optional<ScoreToken> parse_token(std::string_view text);

// Polar classification against the board rings. `r` is in normalized units.
// Radii are half-open toward the outer region, except r == 1.0 scores double.
ScoreToken classify_polar(double r, double theta_cw_deg, const BoardSpec& spec);

// Classification of a point already in the normalized board plane.
ScoreToken classify_board_point(Point p, const BoardSpec& spec);

}  // namespace dartscore
