#include "dartscore/augment.hpp"

#include <cmath>
#include <stdexcept>

#include "dartscore/errors.hpp"
#include "dartscore/scoring.hpp"

namespace dartscore {

namespace {

constexpr std::array<int, 6> kOffDiagonal{1, 2, 3, 5, 6, 7};

Homography conjugate(const Homography& h_cal, const Homography& board_map) {
  return invert(h_cal) * board_map * h_cal;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

Homography board_flip(const Homography& h_cal, bool flip_h, bool flip_v) {
  return conjugate(h_cal, similarity({.flip_x = flip_h, .flip_y = flip_v}));
}

Homography board_rotate(const Homography& h_cal, double step_deg, int k) {
  if (step_deg != 18.0 && step_deg != 36.0) {
    throw std::invalid_argument("board rotation step must be 18 or 36 degrees");
  }
  const double angle = step_deg * k;
  if (std::abs(angle) > 180.0) {
    throw std::invalid_argument("board rotation must stay within [-180, 180] degrees");
  }
  return conjugate(h_cal, similarity({.rotation_deg = angle}));
}

Homography small_rotate(double angle_deg, Point image_center) {
  if (!(std::abs(angle_deg) <= kMaxSmallRotationDeg)) {
    throw std::invalid_argument("small rotation must be within [-2, 2] degrees");
  }
  return similarity({.rotation_deg = angle_deg, .center = image_center});
}

Homography jitter(double dx_frac, double dy_frac, double image_size) {
  if (!(std::abs(dx_frac) <= kMaxJitterFrac && std::abs(dy_frac) <= kMaxJitterFrac)) {
    throw std::invalid_argument("jitter must be within 5% of the image size");
  }
  return Homography::translation(dx_frac * image_size, dy_frac * image_size);
}

Homography perspective_warp_with_factors(const Homography& h_cal,
                                         const std::array<double, 6>& factors) {
  Homography::Matrix g = invert(h_cal).matrix();
  for (int i = 0; i < 6; ++i) g[kOffDiagonal[i]] *= factors[i];
  const Homography scaled(g);
  if (is_singular(scaled)) {
    throw DegenerateWarp("scaled inverse homography is singular");
  }
  return scaled * h_cal;
}

Homography perspective_warp(const Homography& h_cal, double rho, Rng& rng) {
  if (!(rho >= 0)) throw std::invalid_argument("rho must be non-negative");
  for (int attempt = 0; attempt <= kWarpRetries; ++attempt) {
    std::array<double, 6> f;
    for (double& v : f) v = uniform(rng, 0.0, rho);
    try {
      return perspective_warp_with_factors(h_cal, f);
    } catch (const DegenerateWarp&) {
    }
  }
  throw DegenerateWarp("no invertible perspective warp after retries");
}

std::string op_name(const AugmentOp& op) {
  return std::visit(overloaded{
                        [](const FlipOp&) -> std::string { return "flip"; },
                        [](const BoardRotateOp& r) -> std::string {
                          return r.step_deg == 18.0 ? "rot18" : "rot36";
                        },
                        [](const SmallRotateOp&) -> std::string { return "smallrot"; },
                        [](const WarpOp&) -> std::string { return "warp"; },
                        [](const JitterOp&) -> std::string { return "jitter"; },
                    },
                    op);
}

AugmentResult apply_augment(const AugmentSpec& spec, const std::array<Point, 4>& cal,
                            const std::vector<Point>& darts, int image_width, int image_height,
                            const BoardSpec& board) {
  if (!(spec.probability >= 0 && spec.probability <= 1 && spec.overall_probability >= 0 &&
        spec.overall_probability <= 1)) {
    throw std::invalid_argument("augment probabilities must be in [0, 1]");
  }
  AugmentResult res;
  res.cal_out = cal;
  res.darts_out = darts;
  Rng rng(spec.seed);
  if (spec.ops.empty() || !bernoulli(rng, spec.overall_probability)) return res;

  const Point image_center{image_width / 2.0, image_height / 2.0};
  const double image_size = std::max(image_width, image_height);

  for (const AugmentOp& op : spec.ops) {
    if (!bernoulli(rng, spec.probability)) continue;
    // Calibration for the current (already augmented) keypoints.
    const Homography h_cal =
        calibrate(std::span<const Point, 4>(res.cal_out), board).h;

    bool moves_cal = true;
    const Homography step = std::visit(
        overloaded{
            [&](const FlipOp& f) {
              moves_cal = false;
              const bool fh = f.horizontal ? *f.horizontal : bernoulli(rng, 0.5);
              const bool fv = f.vertical ? *f.vertical : bernoulli(rng, 0.5);
              return board_flip(h_cal, fh, fv);
            },
            [&](const BoardRotateOp& r) {
              moves_cal = false;
              int k = 0;
              if (r.k) {
                k = *r.k;
              } else {
                const int kmax = static_cast<int>(std::floor(180.0 / r.step_deg));
                k = std::uniform_int_distribution<int>(-kmax, kmax)(rng);
              }
              return board_rotate(h_cal, r.step_deg, k);
            },
            [&](const SmallRotateOp& s) {
              const double a = s.angle_deg ? *s.angle_deg
                                           : uniform(rng, -kMaxSmallRotationDeg,
                                                     kMaxSmallRotationDeg);
              return small_rotate(a, image_center);
            },
            [&](const WarpOp& w) {
              // Warp in an image frame centered on the image so that removing
              // the off-diagonal terms keeps the board near the middle.
              const Homography to_centered =
                  Homography::translation(-image_center.x, -image_center.y);
              const Homography from_centered =
                  Homography::translation(image_center.x, image_center.y);
              const Homography h_centered = h_cal * from_centered;
              Homography warp;
              if (w.fixed_factor) {
                std::array<double, 6> f;
                f.fill(*w.fixed_factor);
                warp = perspective_warp_with_factors(h_centered, f);
              } else {
                warp = perspective_warp(h_centered, w.rho, rng);
              }
              return from_centered * warp * to_centered;
            },
            [&](const JitterOp& j) {
              const double dx = j.dx_frac ? *j.dx_frac : uniform(rng, -j.max_frac, j.max_frac);
              const double dy = j.dy_frac ? *j.dy_frac : uniform(rng, -j.max_frac, j.max_frac);
              return jitter(dx, dy, image_size);
            },
        },
        op);

    if (moves_cal) {
      for (Point& c : res.cal_out) c = step.apply(c);
    }
    res.warp_total = step * res.warp_total;
    res.applied.push_back(op_name(op));
  }
  for (std::size_t i = 0; i < darts.size(); ++i) res.darts_out[i] = res.warp_total.apply(darts[i]);
  return res;
}

AugmentedImage apply_augment(const AugmentSpec& spec, const RasterImage& image,
                             const std::array<Point, 4>& cal, const std::vector<Point>& darts,
                             const BoardSpec& board) {
  AugmentedImage out;
  out.result = apply_augment(spec, cal, darts, image.width, image.height, board);
  out.image = out.result.applied.empty()
                  ? image
                  : warp_raster(image, out.result.warp_total, image.width, image.height);
  return out;
}

}  // namespace dartscore
