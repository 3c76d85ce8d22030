#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dartscore/board.hpp"
#include "dartscore/geometry.hpp"
#include "dartscore/raster.hpp"
#include "dartscore/rng.hpp"

namespace dartscore {

inline constexpr double kMaxSmallRotationDeg = 2.0;
inline constexpr double kDefaultJitterFrac = 0.02;
inline constexpr double kMaxJitterFrac = 0.05;
inline constexpr double kDefaultRho = 1.0;
inline constexpr int kWarpRetries = 16;

// Unset fields are drawn from the generator when the op fires.
struct FlipOp {
  std::optional<bool> horizontal;
  std::optional<bool> vertical;
};

struct BoardRotateOp {
  double step_deg = 36.0;  // 18 or 36
  std::optional<int> k;    // drawn uniformly with |k * step| <= 180
};

struct SmallRotateOp {
  std::optional<double> angle_deg;  // drawn from [-2, 2]
};

struct WarpOp {
  double rho = kDefaultRho;
  // Forces all six off-diagonal factors to one value instead of sampling.
  std::optional<double> fixed_factor;
};

struct JitterOp {
  std::optional<double> dx_frac;
  std::optional<double> dy_frac;
  double max_frac = kDefaultJitterFrac;
};

using AugmentOp = std::variant<FlipOp, BoardRotateOp, SmallRotateOp, WarpOp, JitterOp>;

struct AugmentSpec {
  std::vector<AugmentOp> ops;
  std::uint64_t seed = 0;
  double probability = 0.5;          // per op
  double overall_probability = 1.0;  // gate for the whole pipeline
};

struct AugmentResult {
  Homography warp_total;  // image -> augmented image (darts and raster)
  std::array<Point, 4> cal_out{};
  std::vector<Point> darts_out;
  std::vector<std::string> applied;  // names of ops that fired, in order
};

// Rectified-frame ops: conjugate a board-plane map by the calibration
// homography. Calibration points are not moved by these.
Homography board_flip(const Homography& h_cal, bool flip_h, bool flip_v);
Homography board_rotate(const Homography& h_cal, double step_deg, int k);

// Image-frame ops moving every keypoint.
Homography small_rotate(double angle_deg, Point image_center);
Homography jitter(double dx_frac, double dy_frac, double image_size);

// Off-diagonal entries of h_cal^-1 scaled by the given factors (row-major
// order of the six off-diagonal positions), composed with h_cal.
Homography perspective_warp_with_factors(const Homography& h_cal,
                                         const std::array<double, 6>& factors);

// Factors ~ Uniform[0, rho]; singular draws are resampled up to
// kWarpRetries times before DegenerateWarp is thrown.
Homography perspective_warp(const Homography& h_cal, double rho, Rng& rng);

// Keypoint-only augmentation. `image_width/height` fix the pivot of small
// rotations, the jitter scale and the frame used for perspective warping.
AugmentResult apply_augment(const AugmentSpec& spec, const std::array<Point, 4>& cal,
                            const std::vector<Point>& darts, int image_width, int image_height,
                            const BoardSpec& board = default_board_spec());

struct AugmentedImage {
  AugmentResult result;
  RasterImage image;
};

AugmentedImage apply_augment(const AugmentSpec& spec, const RasterImage& image,
                             const std::array<Point, 4>& cal, const std::vector<Point>& darts,
                             const BoardSpec& board = default_board_spec());

std::string op_name(const AugmentOp& op);

}  // namespace dartscore
