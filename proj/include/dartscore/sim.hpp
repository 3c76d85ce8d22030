#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dartscore/board.hpp"
#include "dartscore/detection.hpp"
#include "dartscore/eval.hpp"
#include "dartscore/geometry.hpp"
#include "dartscore/rng.hpp"
#include "dartscore/scoring.hpp"

namespace dartscore {

// Synthetic ground truth for one image.
struct Scene {
  std::uint64_t scene_id = 0;
  Homography pose;  // board plane -> image
  int image_size = 800;
  std::vector<Point> dart_positions_board;
  std::vector<ScoreToken> true_tokens;
  std::array<Point, 4> cal_image{};
  std::vector<Point> darts_image;

  int true_total() const;
};

struct SceneConfig {
  int image_size = 800;
  // Outer-double radius in pixels, as a fraction of the image size.
  double min_radius_frac = 0.30;
  double max_radius_frac = 0.40;
  double max_rotation_deg = 2.0;
  double max_translation_frac = 0.05;
  // Perspective strength: the off-diagonal terms of a base tilt are scaled by
  // independent Uniform[0, rho] factors.
  double rho = 1.0;
  double max_shear = 0.2;        // base |a01|, |a10|
  double max_perspective = 0.3;  // base |a20|, |a21|
  bool affine_only = false;      // zero the perspective row
  std::array<double, 4> dart_count_weights{0.05, 0.30, 0.30, 0.35};
  // Dart position mixture: uniform over the scoring disc, then clusters on
  // the treble-20 and treble-19 beds.
  double uniform_weight = 0.50;
  double t20_weight = 0.25;
  double t19_weight = 0.25;
  double uniform_radius = 1.0;
  double cluster_sigma = 0.04;
  double min_dart_separation_px = 20.0;  // Chebyshev distance in the image
  double edge_margin_px = 16.0;
  int max_retries = 200;
};

// Throws RetryExhausted when the constraints cannot be met.
Scene sample_scene(Rng& rng, const SceneConfig& config, const BoardSpec& spec);

struct NoiseModel {
  double sigma_px = 0.0;
  double p_miss = 0.0;
  double fp_rate = 0.0;
  bool cal_false_positives = false;
  std::uint8_t forced_cal_drop_mask = 0;  // bit i drops calibration class i
  double kept_conf_min = 0.6;
  double kept_conf_max = 1.0;
  double spurious_conf_min = 0.25;
  double spurious_conf_max = 0.6;
};

// Detector-like output for a scene. Draw order is fixed, so two noise models
// that differ only in magnitudes consume identical random streams.
DetectionSet corrupt(const Scene& scene, const NoiseModel& noise, double box_fraction,
                     Rng& rng);

struct SweepConfig {
  std::vector<double> sigma_px{0.0};
  std::vector<double> p_miss{0.0};
  std::vector<double> fp_rate{0.0};
  int n_scenes = 1000;
  std::uint64_t seed = 0;
  SceneConfig scene;
  NoiseModel noise;  // magnitudes overwritten per grid point
  double box_fraction = kDefaultBoxFraction;
  PostprocessParams postprocess;
  double match_threshold = kDefaultMatchThreshold;
};

struct SweepRow {
  double sigma_px = 0.0;
  double p_miss = 0.0;
  double fp_rate = 0.0;
  int n_scenes = 0;
  double pcs = 0.0;
  double pcs_stderr = 0.0;  // binomial standard error, percent
  double mean_loc_err_px = 0.0;
  std::array<int, kErrorClassCount> error_histogram{};

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

// Grid rows in sigma-major, then p_miss, then fp_rate order.
std::vector<SweepRow> run_sweep(const SweepConfig& config, const BoardSpec& spec);
std::vector<SweepRow> run_sweep_serial(const SweepConfig& config, const BoardSpec& spec);

// The scene and detections that run_sweep evaluates for (grid point noise,
// scene index). Exposed for fixtures and tests.
Scene sweep_scene(const SweepConfig& config, const BoardSpec& spec, int scene_index);
DetectionSet sweep_detections(const SweepConfig& config, const NoiseModel& noise,
                              const Scene& scene, int scene_index);

// Runs the full pipeline on one scene and compares against its ground truth.
SampleEval evaluate_scene(const Scene& scene, const DetectionSet& detections,
                          const SweepConfig& config, const BoardSpec& spec);

}  // namespace dartscore
