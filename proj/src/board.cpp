#include "dartscore/board.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dartscore {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double wrap_360(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0) w += 360.0;
  // fmod of a tiny negative value can round up to exactly 360
  if (w >= 360.0) w -= 360.0;
  return w;
}

}  // namespace

BoardSpec make_board_spec(const BoardDimensions& d) {
  if (!(d.r_double_outer_mm > 0)) {
    throw std::invalid_argument("r_double_outer_mm must be positive");
  }
  BoardSpec s;
  const double k = d.r_double_outer_mm;
  s.r_double_bull = d.r_double_bull_mm / k;
  s.r_bull = d.r_bull_mm / k;
  s.r_treble_inner = d.r_treble_inner_mm / k;
  s.r_treble_outer = d.r_treble_outer_mm / k;
  s.r_double_inner = d.r_double_inner_mm / k;
  s.r_double_outer = 1.0;
  s.sector_sequence = d.sector_sequence;
  s.cal_angles_deg = d.cal_angles_deg;
  s.outer_radius_mm = k;
  for (int i = 0; i < 4; ++i) s.cal_point_targets[i] = direction_cw(d.cal_angles_deg[i]);
  validate(s);
  return s;
}

BoardSpec default_board_spec() { return make_board_spec(BoardDimensions{}); }

void validate(const BoardSpec& s) {
  if (!(0 < s.r_double_bull && s.r_double_bull < s.r_bull && s.r_bull < s.r_treble_inner &&
        s.r_treble_inner < s.r_treble_outer && s.r_treble_outer < s.r_double_inner &&
        s.r_double_inner < s.r_double_outer && s.r_double_outer == 1.0)) {
    throw std::invalid_argument("board radii must be strictly increasing up to 1.0");
  }
  std::array<int, kSectors> sorted = s.sector_sequence;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < kSectors; ++i) {
    if (sorted[i] != i + 1) {
      throw std::invalid_argument("sector_sequence must be a permutation of 1..20");
    }
  }
  for (int i = 0; i < 4; ++i) {
    const Point p = s.cal_point_targets[i];
    if (std::abs(std::hypot(p.x, p.y) - 1.0) > 1e-12) {
      throw std::invalid_argument("calibration targets must lie on the unit circle");
    }
    const Point q = s.cal_point_targets[(i + 1) % 4];
    const double sep = std::abs(std::atan2(cross(p, q), p.x * q.x + p.y * q.y)) / kDegToRad;
    if (std::abs(sep - 90.0) > 1e-9) {
      throw std::invalid_argument("calibration targets must form a square");
    }
  }
}

Point direction_cw(double theta_cw_deg) {
  const double t = theta_cw_deg * kDegToRad;
  return {std::sin(t), -std::cos(t)};
}

double clockwise_angle_deg(Point offset) {
  return std::atan2(offset.x, -offset.y) / kDegToRad;
}

int sector_at_angle(double theta_cw_deg, const BoardSpec& spec) {
  const double shifted = wrap_360(theta_cw_deg) + kSectorWidthDeg / 2.0;
  const int idx = static_cast<int>(std::floor(shifted / kSectorWidthDeg)) % kSectors;
  return spec.sector_sequence[idx];
}

ScoreToken ScoreToken::sector_hit(Ring ring, int sector) {
  int mult = 1;
  if (ring == Ring::kDouble) mult = 2;
  if (ring == Ring::kTreble) mult = 3;
  return {ring, sector, mult * sector};
}

std::string to_string(const ScoreToken& t) {
  switch (t.ring) {
    case Ring::kMiss: return "0";
    case Ring::kBull: return "B";
    case Ring::kDoubleBull: return "DB";
    case Ring::kSingle: return "S" + std::to_string(t.sector);
    case Ring::kDouble: return "D" + std::to_string(t.sector);
    case Ring::kTreble: return "T" + std::to_string(t.sector);
  }
  return "0";
}

std::optional<ScoreToken> parse_token(std::string_view text) {
  if (text == "0") return ScoreToken::miss();
  if (text == "B") return ScoreToken::bull();
  if (text == "DB") return ScoreToken::double_bull();
  if (text.size() < 2) return std::nullopt;
  Ring ring;
  switch (text.front()) {
    case 'S': ring = Ring::kSingle; break;
    case 'D': ring = Ring::kDouble; break;
    case 'T': ring = Ring::kTreble; break;
    default: return std::nullopt;
  }
  int sector = 0;
  const auto digits = text.substr(1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), sector);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  if (sector < 1 || sector > kSectors || digits.front() == '0') return std::nullopt;
  return ScoreToken::sector_hit(ring, sector);
}

ScoreToken classify_polar(double r, double theta_cw_deg, const BoardSpec& spec) {
  if (r < spec.r_double_bull) return ScoreToken::double_bull();
  if (r < spec.r_bull) return ScoreToken::bull();
  if (r > spec.r_double_outer) return ScoreToken::miss();
  const int sector = sector_at_angle(theta_cw_deg, spec);
  if (r >= spec.r_treble_inner && r < spec.r_treble_outer) {
    return ScoreToken::sector_hit(Ring::kTreble, sector);
  }
  if (r >= spec.r_double_inner) return ScoreToken::sector_hit(Ring::kDouble, sector);
  return ScoreToken::sector_hit(Ring::kSingle, sector);
}

ScoreToken classify_board_point(Point p, const BoardSpec& spec) {
  return classify_polar(std::hypot(p.x, p.y), clockwise_angle_deg(p), spec);
}

}  // namespace dartscore
