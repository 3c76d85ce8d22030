#include "dartscore/sim.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dartscore/errors.hpp"

namespace dartscore {

namespace {

constexpr std::uint64_t kSceneStream = 0x5ce7e;
constexpr std::uint64_t kNoiseStream = 0x7015e;

bool inside(Point p, double size, double margin) {
  return p.x >= margin && p.y >= margin && p.x <= size - margin && p.y <= size - margin;
}

double chebyshev(Point a, Point b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

int sector_index(int value, const BoardSpec& spec) {
  for (int i = 0; i < kSectors; ++i) {
    if (spec.sector_sequence[i] == value) return i;
  }
  throw std::invalid_argument("sector value not on board");
}

Point treble_center(int sector_value, const BoardSpec& spec) {
  const double r = 0.5 * (spec.r_treble_inner + spec.r_treble_outer);
  return r * direction_cw(sector_index(sector_value, spec) * kSectorWidthDeg);
}

Point sample_dart_position(Rng& rng, const SceneConfig& c, const BoardSpec& spec) {
  const double total = c.uniform_weight + c.t20_weight + c.t19_weight;
  const double u = uniform(rng, 0.0, total);
  if (u < c.uniform_weight) {
    const double r = c.uniform_radius * std::sqrt(uniform(rng, 0.0, 1.0));
    return r * direction_cw(uniform(rng, 0.0, 360.0));
  }
  const Point center = treble_center(u < c.uniform_weight + c.t20_weight ? 20 : 19, spec);
  std::normal_distribution<double> n(0.0, c.cluster_sigma);
  const double dx = n(rng);
  const double dy = n(rng);
  return center + Point{dx, dy};
}

// Minimum homogeneous coordinate of `pose` over a square covering the board.
double min_lambda(const Homography& pose, double half_extent) {
  double lo = std::numeric_limits<double>::infinity();
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      lo = std::min(lo, pose(2, 0) * sx * half_extent + pose(2, 1) * sy * half_extent + pose(2, 2));
    }
  }
  return lo;
}

template <class Fn>
void parallel_for(int n, bool parallel, Fn&& fn) {
  if (!parallel) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 32)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (...) {
#pragma omp critical(dartscore_sweep_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<SweepRow> sweep_impl(const SweepConfig& config, const BoardSpec& spec,
                                 bool parallel) {
  if (config.n_scenes < 1) throw std::invalid_argument("n_scenes must be at least 1");
  const int n = config.n_scenes;
  std::vector<Scene> scenes(n);
  parallel_for(n, parallel, [&](int i) { scenes[i] = sweep_scene(config, spec, i); });

  std::vector<SweepRow> rows;
  for (double sigma : config.sigma_px) {
    for (double p_miss : config.p_miss) {
      for (double fp : config.fp_rate) {
        NoiseModel noise = config.noise;
        noise.sigma_px = sigma;
        noise.p_miss = p_miss;
        noise.fp_rate = fp;
        std::vector<SampleEval> samples(n);
        parallel_for(n, parallel, [&](int i) {
          const DetectionSet d = sweep_detections(config, noise, scenes[i], i);
          samples[i] = evaluate_scene(scenes[i], d, config, spec);
        });
        const EvalReport report = summarize(std::move(samples));
        SweepRow row;
        row.sigma_px = sigma;
        row.p_miss = p_miss;
        row.fp_rate = fp;
        row.n_scenes = n;
        row.pcs = report.pcs;
        const double p = report.pcs / 100.0;
        row.pcs_stderr = 100.0 * std::sqrt(p * (1.0 - p) / n);
        row.mean_loc_err_px = report.mean_localization_error_px;
        row.error_histogram = report.error_histogram;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace

int Scene::true_total() const {
  int t = 0;
  for (const auto& tok : true_tokens) t += tok.value;
  return t;
}

Scene sample_scene(Rng& rng, const SceneConfig& c, const BoardSpec& spec) {
  if (c.image_size <= 0 || !(c.min_radius_frac > 0) || c.max_radius_frac < c.min_radius_frac ||
      !(c.rho >= 0)) {
    throw std::invalid_argument("invalid scene configuration");
  }
  const double size = c.image_size;
  std::discrete_distribution<int> dart_count(c.dart_count_weights.begin(),
                                             c.dart_count_weights.end());
  for (int attempt = 0; attempt < c.max_retries; ++attempt) {
    const double radius = uniform(rng, c.min_radius_frac, c.max_radius_frac) * size;
    const double rotation = uniform(rng, -c.max_rotation_deg, c.max_rotation_deg);
    const double tx = uniform(rng, -c.max_translation_frac, c.max_translation_frac) * size;
    const double ty = uniform(rng, -c.max_translation_frac, c.max_translation_frac) * size;
    std::array<double, 4> base{uniform(rng, -c.max_shear, c.max_shear),
                               uniform(rng, -c.max_shear, c.max_shear),
                               uniform(rng, -c.max_perspective, c.max_perspective),
                               uniform(rng, -c.max_perspective, c.max_perspective)};
    for (double& b : base) b *= uniform(rng, 0.0, c.rho);
    if (c.affine_only) base[2] = base[3] = 0.0;
    const Homography tilt({1, base[0], 0, base[1], 1, 0, base[2], base[3], 1});
    const Homography placement = similarity(
        {.rotation_deg = rotation, .translate = {size / 2 + tx, size / 2 + ty}, .scale = radius});

    Scene s;
    s.pose = placement * tilt;
    s.image_size = c.image_size;
    if (min_lambda(s.pose, 1.5) <= 0.2) continue;

    bool ok = true;
    for (int i = 0; i < 4 && ok; ++i) {
      s.cal_image[i] = s.pose.apply(spec.cal_point_targets[i]);
      ok = inside(s.cal_image[i], size, c.edge_margin_px);
    }
    if (!ok) continue;

    const int n_darts = dart_count(rng);
    for (int d = 0; d < n_darts && ok; ++d) {
      bool placed = false;
      for (int tries = 0; tries < c.max_retries && !placed; ++tries) {
        const Point board = sample_dart_position(rng, c, spec);
        const Point image = s.pose.apply(board);
        if (!inside(image, size, c.edge_margin_px)) continue;
        bool separated = true;
        for (const Point& other : s.darts_image) {
          if (chebyshev(other, image) < c.min_dart_separation_px) separated = false;
        }
        if (!separated) continue;
        s.dart_positions_board.push_back(board);
        s.darts_image.push_back(image);
        s.true_tokens.push_back(classify_board_point(board, spec));
        placed = true;
      }
      ok = placed;
    }
    if (ok) return s;
  }
  throw RetryExhausted("could not sample a scene satisfying the constraints");
}

DetectionSet corrupt(const Scene& scene, const NoiseModel& noise, double box_fraction,
                     Rng& rng) {
  if (!(noise.sigma_px >= 0 && noise.p_miss >= 0 && noise.p_miss <= 1 && noise.fp_rate >= 0)) {
    throw std::invalid_argument("invalid noise model");
  }
  const double size = scene.image_size;
  const double side = box_fraction * size;
  DetectionSet out;
  out.image_id = "scene_" + std::to_string(scene.scene_id);
  out.input_size = scene.image_size;

  std::normal_distribution<double> gauss(0.0, 1.0);
  auto emit = [&](Point truth, int class_id, bool forced_drop) {
    const double u = uniform(rng, 0.0, 1.0);
    const double nx = gauss(rng);
    const double ny = gauss(rng);
    const double conf = uniform(rng, noise.kept_conf_min, noise.kept_conf_max);
    if (forced_drop || u < noise.p_miss) return;
    const Point p{truth.x + noise.sigma_px * nx, truth.y + noise.sigma_px * ny};
    if (!inside(p, size, 0.0)) return;
    out.boxes.push_back({class_id, p.x, p.y, side, side, conf});
  };
  for (int c = 0; c < kCalibrationClasses; ++c) {
    emit(scene.cal_image[c], c, (noise.forced_cal_drop_mask >> c) & 1u);
  }
  for (const Point& d : scene.darts_image) emit(d, kDartClass, false);

  if (noise.fp_rate > 0) {
    const int n_fp = std::poisson_distribution<int>(noise.fp_rate)(rng);
    for (int k = 0; k < n_fp; ++k) {
      const int class_id = noise.cal_false_positives
                               ? std::uniform_int_distribution<int>(0, kDartClass)(rng)
                               : kDartClass;
      const double r = std::sqrt(uniform(rng, 0.0, 1.0));
      const Point p = scene.pose.apply(r * direction_cw(uniform(rng, 0.0, 360.0)));
      const double conf = uniform(rng, noise.spurious_conf_min, noise.spurious_conf_max);
      if (inside(p, size, 0.0)) out.boxes.push_back({class_id, p.x, p.y, side, side, conf});
    }
  }
  return out;
}

Scene sweep_scene(const SweepConfig& config, const BoardSpec& spec, int scene_index) {
  Rng rng = substream(config.seed, {kSceneStream, static_cast<std::uint64_t>(scene_index)});
  Scene s = sample_scene(rng, config.scene, spec);
  s.scene_id = static_cast<std::uint64_t>(scene_index);
  return s;
}

DetectionSet sweep_detections(const SweepConfig& config, const NoiseModel& noise,
                              const Scene& scene, int scene_index) {
  Rng rng = substream(config.seed, {kNoiseStream, static_cast<std::uint64_t>(scene_index)});
  return corrupt(scene, noise, config.box_fraction, rng);
}

SampleEval evaluate_scene(const Scene& scene, const DetectionSet& detections,
                          const SweepConfig& config, const BoardSpec& spec) {
  const KeypointSet kp = postprocess(detections, config.postprocess);
  const ScoreResult pred = score_darts(kp, spec);
  LabelSample label;
  label.image_id = detections.image_id;
  for (int i = 0; i < 4; ++i) label.cal[i] = scene.cal_image[i];
  label.darts = scene.darts_image;
  label.tokens = scene.true_tokens;
  return evaluate_sample(label, kp, pred, spec, {config.match_threshold});
}

std::vector<SweepRow> run_sweep(const SweepConfig& config, const BoardSpec& spec) {
  return sweep_impl(config, spec, true);
}

std::vector<SweepRow> run_sweep_serial(const SweepConfig& config, const BoardSpec& spec) {
  return sweep_impl(config, spec, false);
}

}  // namespace dartscore
